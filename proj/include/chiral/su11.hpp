/**
 * @file su11.hpp
 * @brief SU(1,1) coherent states of the two chiral modes and the analytic
 *        eigenstates built from them.
 *
 * K0 = (n_r + n_l + 1)/2, K+ = a_r^dag a_l^dag, K- = a_r a_l.
 * |z, n> = U(z)^dag |pedestal n, 0>,  U(z) = exp(z (K+ - K-)),
 * with coefficients c_m = sqrt(C(m+n, m)) (-tanh z)^m / cosh^{n+1} z.
 *
 * Mode ordering of |z, n>: left regime puts the pedestal on the left mode
 * (n_l = m + n, n_r = m); right regime on the right mode (n_r = m + n, n_l = m).
 */
#pragma once

#include <optional>
#include <vector>

#include "chiral/fock.hpp"
#include "chiral/model.hpp"

namespace chiral {

struct Su11Generators {
    OperatorMatrix k0, k_plus, k_minus;
};

Su11Generators su11_generators(const FockBasis& basis);

/// exp(tanh z K+) exp(log(cosh^-2 z) K0) exp(-tanh z K-) v, each factor
/// applied exactly (K+- are nilpotent on the truncated space, K0 diagonal).
Vector apply_disentangled(const Su11Generators& generators, double z, const Vector& v);

struct Su11CoherentState {
    double z = 0.0;
    int pedestal = 0;
    /// LeftHanded: pedestal on n_l. RightHanded: pedestal on n_r.
    Regime regime = Regime::LeftHanded;
    std::vector<double> coefficients;  // c_0 .. c_{m_max}
    double tail_mass = 0.0;            // 1 - sum c_m^2

    int m_max() const { return static_cast<int>(coefficients.size()) - 1; }
    /// (n_r, n_l) carrying c_m.
    std::pair<int, int> occupations(int m) const;
};

inline constexpr double kCoherentTailTolerance = 1e-12;

/// Series up to the smallest m_max with tail mass below 1e-12, or up to the
/// given m_max (TailTooHeavy if that leaves a heavier tail).
Su11CoherentState coherent_coefficients(double z, int n,
                                        std::optional<int> m_max = std::nullopt,
                                        Regime regime = Regime::LeftHanded);

struct CoherentMoments {
    double n_r = 0.0, n_l = 0.0;
    double n_r_sq = 0.0, n_l_sq = 0.0;

    double var_r() const { return n_r_sq - n_r * n_r; }
    double var_l() const { return n_l_sq - n_l * n_l; }
};

/// Closed-form moments of |z, n> (pedestal mode chosen by the regime).
CoherentMoments coherent_moments(double z, int n, Regime regime);

/// Which analytic state.
enum class StateKind {
    Doublet,   // |+-E_n> (or |+-E~_n>)
    Ground,    // lowest positive level: unpaired state (left) or |+E~_0> (right)
    Unpaired,  // the state outside the doublets: E = +1 (left), -1 (right)
};

struct StateLabel {
    StateKind kind = StateKind::Doublet;
    Branch branch = Branch::Positive;
    int n = 0;

    static StateLabel doublet(Branch b, int n) { return {StateKind::Doublet, b, n}; }
    static StateLabel ground() { return {StateKind::Ground, Branch::Positive, 0}; }
    static StateLabel unpaired() { return {StateKind::Unpaired, Branch::Positive, 0}; }
};

/// Ground resolved to the concrete doublet/unpaired state of the regime.
StateLabel canonical_label(const ModelParams& params, StateLabel label);

struct EigenstateDescriptor {
    Regime regime = Regime::LeftHanded;
    StateLabel label;
    double energy = 0.0;
    /// (E + 1)/2E and (E - 1)/2E square roots; (1, 0) for the unpaired state.
    double c_plus = 1.0, c_minus = 0.0;
    /// Spin components: psi = up_amp |up_state> |up> + down_amp |down_state> |down>.
    Complex up_amp{1.0, 0.0}, down_amp{0.0, 0.0};
    int up_pedestal = 0, down_pedestal = 0;
    double z = 0.0;  // squeeze of the regime's native family
};

EigenstateDescriptor describe_eigenstate(const ModelParams& params, StateLabel label);

struct BuiltState {
    Vector vector;
    EigenstateDescriptor descriptor;
    double leakage = 0.0;  // series weight beyond the cutoff, removed before normalizing
};

struct BuildOptions {
    double leakage_threshold = 1e-8;
};

/// Analytic eigenstate as a vector on the Fock basis of `family`. The left
/// regime lives natively in the omega family and the right regime in the
/// omega-tilde family; the other family is reached by shifting the squeeze
/// by the Bogoliubov rapidity. Throws TruncationLeakage.
BuiltState build_eigenstate(const ModelParams& params, StateLabel label, const FockBasis& basis,
                            Family family, BuildOptions options = {});

/// Family in which a regime's closed forms are written.
Family native_family(Regime regime);

}  // namespace chiral
