/**
 * @file model.hpp
 * @brief Parameters, regime classification and closed-form spectrum of the
 *        planar Dirac oscillator in a constant magnetic field.
 *
 * Natural units throughout: mc^2 = hbar = 1, lengths in the oscillator width
 * Delta = sqrt(hbar / m omega). The two couplings are
 *
 *   xi       = hbar omega / mc^2          (Dirac oscillator)
 *   xi_tilde = hbar omega_c / (2 mc^2)    (magnetic field)
 *
 * and the physics depends on the ratio xi_tilde / xi: left-handed below 1,
 * right-handed above 1, free massive Dirac fermion at exactly 1.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

namespace chiral {

inline constexpr double kDefaultCriticalWindow = 1e-12;

struct ModelParams {
    double xi = 0.0;
    double xi_tilde = 0.0;

    /// Validating constructor; throws InvalidParams.
    static ModelParams make(double xi, double xi_tilde);
    /// Parameters at a given ratio xi_tilde / xi.
    static ModelParams from_ratio(double xi, double ratio);

    double ratio() const { return xi_tilde / xi; }
};

void validate(const ModelParams& params);

enum class Regime { LeftHanded, Critical, RightHanded };
enum class Branch { Positive, Negative };

const char* to_string(Regime regime) noexcept;
inline int sign(Branch b) { return b == Branch::Positive ? 1 : -1; }

Regime classify(const ModelParams& params, double critical_window = kDefaultCriticalWindow);

/// Relation between the omega and omega-tilde ladder families:
///   a~_r = mu_tilde a_r + mu a_l^dag,   a~_l = mu_tilde a_l + mu a_r^dag.
/// Only defined for xi_tilde > 0 (the omega-tilde width is infinite at 0).
struct Bogoliubov {
    double width_ratio = 1.0;  // Delta / Delta~ = sqrt(xi_tilde / xi)
    double mu = 0.0;
    double mu_tilde = 1.0;

    /// Rapidity s with cosh s = mu_tilde, sinh s = mu. The omega-tilde Fock
    /// states are U(-s) applied to the omega Fock states, U(z) = exp(z(K+ - K-)).
    double rapidity() const;
};

Bogoliubov bogoliubov(const ModelParams& params);

/// All secondary symbols of the exact solution, computed once.
class DerivedCouplings {
public:
    double width_ratio = 0.0;  // Delta / Delta~
    double mu = 0.0;           // -inf at xi_tilde = 0
    double lambda = 0.0;       // sqrt(mu^2 + 1), identical to mu_tilde
    double mu_tilde = 0.0;
    double zeta = 0.0;         // effective coupling of the regime, 2|xi - xi_tilde|
    /// zeta evaluated from its defining expression with mu; absent where mu diverges.
    std::optional<double> zeta_definitional;
    double g_l = 0.0;          // |g_l| = sqrt(2 xi)
    double g_r = 0.0;          // |g_r| = sqrt(2 xi_tilde)
    double g_prime = 0.0;      // |g'| = sqrt(2 zeta)
    double delta = 1.0;        // detuning mc^2
    Regime regime = Regime::Critical;

    /// Transformation angle alpha (left) or alpha~ (right). Throws at criticality.
    double alpha() const;
    /// Two-mode squeeze parameter z = -lambda * alpha (z~ in the right regime).
    /// Negative away from criticality. Throws at criticality.
    double squeeze_z() const;
    /// tanh|z|, evaluated without cancellation. Throws at criticality.
    double squeeze_tanh() const;

private:
    friend DerivedCouplings derive_couplings(const ModelParams&, double);
    std::optional<double> alpha_;
    std::optional<double> tanh_z_;
};

DerivedCouplings derive_couplings(const ModelParams& params,
                                  double critical_window = kDefaultCriticalWindow);

/// +-sqrt(1 + 2 zeta (n + 1)) for the n-th doublet. Throws at criticality.
double analytic_energy(const ModelParams& params, int n, Branch branch);

/// Lowest positive-energy level: mc^2 (left) or sqrt(1 + 2 zeta_r) (right).
double ground_energy(const ModelParams& params);

/// Level of the single state outside the doublets: +mc^2 in the left regime
/// (the spin-up squeezed vacuum), -mc^2 in the right regime.
double unpaired_energy(const ModelParams& params);

/// Distinct analytic levels sorted by |E| (ties: positive first), `count` of them.
std::vector<double> analytic_levels(const ModelParams& params, int count);

/// Free-fermion dispersion +-sqrt(1 + p^2) at the critical point.
double critical_dispersion(double px, double py, Branch branch = Branch::Positive);

/// Lowest positive excitation above the ground level of the regime.
double energy_gap(const ModelParams& params);

enum class Side { Left, Right };

struct GapFitPoint {
    double ratio = 0.0;
    double log_distance = 0.0;  // log|g_r/g_l - 1|
    double log_gap = 0.0;
    double residual = 0.0;
};

struct GapFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double exponent_stderr = 0.0;
    double ci95_halfwidth = 0.0;
    double residual_rms = 0.0;
    std::vector<GapFitPoint> points;
};

/// Least-squares slope of log(gap) against log|g_r/g_l - 1| on one side of
/// the critical point. Throws InsufficientGrid (< 4 points) or MixedSides.
GapFit fit_gap_exponent(double xi, std::span<const double> ratios, Side side);

/// Geometric grid with |ratio - 1| spanning [lo, hi], `count` points on one side.
std::vector<double> near_critical_grid(Side side, double lo, double hi, int count);

}  // namespace chiral
