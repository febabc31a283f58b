/**
 * @file oracle.hpp
 * @brief Brute-force ground truth: the bichromatic Hamiltonian on the
 *        truncated Fock basis, dense diagonalization, cutoff escalation and
 *        numeric expectation values.
 *
 * H = sigma_z + [ i sqrt(2 xi) a_l^dag - i sqrt(2 xi~) a~_r ] sigma+ + h.c.
 *
 * J_z = L_z + sigma_z / 2 commutes with H exactly, also after truncation, so
 * every diagonalization here runs block by block over J_z sectors.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "chiral/error.hpp"
#include "chiral/fock.hpp"
#include "chiral/model.hpp"
#include "chiral/su11.hpp"

namespace chiral {

/// H assembled from the ladders of `family`. In the omega-tilde family the
/// basis is the omega-tilde Fock basis and a_l^dag = mu~ a~_l^dag - mu a~_r.
OperatorMatrix assemble_hamiltonian(const ModelParams& params, const FockBasis& basis,
                                    Family family = Family::Omega);

/// The planar Dirac equation with minimal coupling written directly in the
/// omega ladders. Isospectral with assemble_hamiltonian, different eigenvectors.
OperatorMatrix assemble_minimal_coupling_hamiltonian(const ModelParams& params,
                                                     const FockBasis& basis);

/// L_z + sigma_z / 2.
OperatorMatrix total_jz(const FockBasis& basis);

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    DenseMatrix eigenvectors;         // columns over the full basis (may be empty)
    std::vector<double> residuals;    // ||H v - E v||
    std::vector<int> twice_jz;        // sector of each eigenpair (0 for unsectored)
    int cutoff = 0;

    double max_residual() const;
};

/// Dense Hermitian eigendecomposition of the whole matrix.
/// Throws NonHermitianInput (defect > 1e-12) or SolverFailure.
SpectrumResult diagonalize(const OperatorMatrix& hamiltonian, int cutoff = 0);

struct SectorOptions {
    std::optional<std::vector<int>> twice_jz;  // default: every sector
    bool with_vectors = true;
};

/// Same decomposition assembled from dense solves of each J_z block.
SpectrumResult diagonalize_sectors(const OperatorMatrix& hamiltonian, const FockBasis& basis,
                                   SectorOptions options = {});

/// Weight of a vector on basis states with n_r = N or n_l = N.
double boundary_weight(const Vector& v, const FockBasis& basis);

struct ConvergenceOptions {
    int first_cutoff = 10;
    int cutoff_step = 10;
    int max_cutoff = 60;
    /// Eigenvectors with more boundary weight are truncation artifacts.
    double boundary_threshold = 1e-6;
    /// Eigenvalues closer than this count as one level.
    double merge_tolerance = 1e-7;
    std::optional<Family> family;  // default: native family of the regime
};

struct ConvergenceReport {
    std::vector<int> cutoffs;
    std::vector<std::vector<double>> levels;  // per cutoff, k tracked levels by |E|
    bool converged = false;
    /// Largest level change between the last two cutoffs.
    double achieved_tol = 0.0;
    double requested_tol = 0.0;
    int final_cutoff = 0;

    const std::vector<double>& final_levels() const { return levels.back(); }
};

/// The k lowest-|E| distinct levels from the J_z = +-1/2 sectors, escalating the
/// cutoff until successive cutoffs agree to tol. Never throws on non-convergence.
ConvergenceReport track_convergence(const ModelParams& params, int k, double tol,
                                    ConvergenceOptions options = {});

class CutoffCeilingError : public Error {
public:
    explicit CutoffCeilingError(ConvergenceReport report);
    const ConvergenceReport& report() const noexcept { return report_; }

private:
    ConvergenceReport report_;
};

/// track_convergence that throws CutoffCeilingError when max_cutoff is reached.
ConvergenceReport converged_spectrum(const ModelParams& params, int k, double tol,
                                     ConvergenceOptions options = {});

/// Low-lying levels at a fixed cutoff (the building block of the escalation).
std::vector<double> tracked_levels(const ModelParams& params, int k, int cutoff,
                                   const ConvergenceOptions& options = {});

inline constexpr double kNormTolerance = 1e-8;

/// <psi|M|psi>. Throws UnnormalizedState.
Complex numeric_expectation(const Vector& state, const OperatorMatrix& op);
/// <psi|M^2|psi> - <psi|M|psi>^2 for Hermitian M.
double numeric_variance(const Vector& state, const OperatorMatrix& op);

/// Oracle eigenpair identified with an analytic state.
struct MatchedState {
    double energy = 0.0;
    Vector vector;          // phase aligned to the analytic state
    double overlap = 0.0;   // |<analytic|v>|^2
    double residual = 0.0;
    int cutoff = 0;
    Family family = Family::Omega;
    BuiltState analytic;
};

inline constexpr double kMatchOverlap = 0.99;

/// Diagonalize the analytic state's J_z sector at `cutoff` and return the
/// eigenvector of maximal overlap. Throws SolverFailure below kMatchOverlap.
MatchedState match_state(const ModelParams& params, StateLabel label, int cutoff,
                         std::optional<Family> family = std::nullopt);

struct StateConvergence {
    MatchedState state;
    bool converged = false;
    double achieved_tol = 0.0;
    std::vector<int> cutoffs;
};

/// match_state escalated over cutoffs until the energy moves less than tol.
StateConvergence converged_state(const ModelParams& params, StateLabel label, double tol,
                                 ConvergenceOptions options = {});

/// Rows "ratio,level_index,energy,residual,cutoff".
void write_spectrum_csv(std::ostream& out, double ratio, const SpectrumResult& spectrum,
                        bool header = true);

}  // namespace chiral
