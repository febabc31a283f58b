/**
 * @file entanglement.hpp
 * @brief Reduced states of the ground state over the (left mode, right mode,
 *        spin) partition, their von Neumann entropies and the effective
 *        temperature of the thermal chiral reductions.
 *
 * Entropies are in nats unless `bits` is requested.
 */
#pragma once

#include <optional>
#include <vector>

#include "chiral/fock.hpp"
#include "chiral/model.hpp"

namespace chiral {

enum class Subsystem { LeftMode, RightMode, Spin };
const char* to_string(Subsystem s) noexcept;

struct ReducedState {
    Subsystem subsystem = Subsystem::Spin;
    /// Diagonal weights (analytic) or eigenvalues of `matrix` (oracle).
    std::vector<double> weights;
    std::optional<DenseMatrix> matrix;
    double tail_bound = 0.0;
};

inline constexpr double kEntropyTailTolerance = 1e-14;

/// Analytic reduction of the regime's ground state. Throws CriticalPointSingularity.
ReducedState reduced_density(const ModelParams& params, Subsystem subsystem);

/// Spin weights (gamma+, gamma-) of the right-regime ground state.
std::pair<double, double> spin_weights(const ModelParams& params);

/// -sum w log w, 0 log 0 = 0. Throws InvalidWeights.
double von_neumann_entropy(const ReducedState& state, bool bits = false);

/// sinh^2|z| log(1 + cosech^2|z|) + log cosh^2|z|.
double thermal_entropy_hyperbolic(double abs_z);
/// (nbar + 1) log(nbar + 1) - nbar log nbar.
double thermal_entropy_occupation(double nbar);

/// Binary entropy of the right-regime spin weights (0 in the left regime).
double spin_entropy_closed(const ModelParams& params);

/// -1/2 [log(zeta / (2 denominator)) + (1/E) log((E+1)/(E-1))] with E =
/// sqrt(1 + 2 zeta) and the given denominator; 1 + 2 zeta reproduces the
/// binary entropy, 1 + zeta is the alternative printed reading.
double spin_entropy_expression(const ModelParams& params, double denominator_zeta_factor);

/// 1 / (2 log coth|z|) in units of hbar omega / k_B; exactly 0 for z = 0.
/// Left regime only (InvalidParams otherwise).
double effective_temperature(const ModelParams& params);
double effective_temperature(double abs_z);

/// Exact partial trace of a normalized basis vector onto one subsystem.
/// Throws UnnormalizedState.
ReducedState oracle_partial_trace(const Vector& state, const FockBasis& basis, Subsystem subsystem);

}  // namespace chiral
