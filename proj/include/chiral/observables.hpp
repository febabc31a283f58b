/**
 * @file observables.hpp
 * @brief Chirality order parameter, canonical fluctuations and chiral Mandel
 *        parameters, in closed form and from oracle eigenvectors.
 *
 * Every doublet state is a spin-resolved mixture of two SU(1,1) coherent
 * states with pedestals k and k+1, so all closed forms reduce to
 *
 *   eta   = mean of (k + 1) over the two spin components
 *   kappa = C+^2 C-^2 = (1 - 1/E^2) / 4
 *
 * and the squeeze |z| of the regime. Right-regime quantities refer to the
 * omega-tilde modes and are normalized by the omega-tilde vacuum.
 */
#pragma once

#include <optional>
#include <string>

#include "chiral/model.hpp"
#include "chiral/oracle.hpp"
#include "chiral/su11.hpp"

namespace chiral {

struct StateShape {
    Regime regime = Regime::LeftHanded;
    double abs_z = 0.0;
    double eta = 1.0;
    double kappa = 0.0;
};

StateShape state_shape(const ModelParams& params, StateLabel label);

/// <L_z> in units of hbar.
double order_parameter(const ModelParams& params, StateLabel label);

/// Delta x / Delta x|vac = sqrt(eta) e^{+|z|}.
double position_fluctuation(const ModelParams& params, StateLabel label);
/// Delta p / Delta p|vac = sqrt(eta) e^{-|z|}.
double momentum_fluctuation(const ModelParams& params, StateLabel label);

struct PhononStatistics {
    double n_r = 0.0, n_l = 0.0;
    double var_r = 0.0, var_l = 0.0;
    /// Absent when the mode is empty (Q undefined).
    std::optional<double> q_r, q_l;
};

/// Occupations and variances of the two chiral modes from (regime, |z|, eta, kappa).
PhononStatistics phonon_statistics(const StateShape& shape);
PhononStatistics phonon_statistics(const ModelParams& params, StateLabel label);

/// Q = var / mean - 1, absent for an empty mode.
std::optional<double> mandel(double mean, double variance);

enum class Source { Analytic, Oracle };
const char* to_string(Source source) noexcept;

struct ObservableRecord {
    double ratio = 0.0;
    StateLabel label;
    Regime regime = Regime::LeftHanded;
    double energy = 0.0;
    double lz_mean = 0.0;
    double dx = 0.0, dp = 0.0;
    std::optional<double> q_r, q_l;
    Source source = Source::Analytic;
    int cutoff = 0;  // 0 for analytic records
};

ObservableRecord analytic_record(const ModelParams& params, StateLabel label);

/// Same quantities as expectation values on an oracle eigenvector, using the
/// ladders of the family the vector was computed in.
ObservableRecord oracle_record(const ModelParams& params, StateLabel label, const MatchedState& state);

std::string describe(StateLabel label);

}  // namespace chiral
