#include "chiral/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

namespace chiral {

namespace {

const Complex kI{0.0, 1.0};

// sigma_z + i (A c_l^dag - B c_r) sigma+ + h.c. for a chiral ladder pair c.
OperatorMatrix spin_boson(const FockBasis& basis, const OperatorMatrix& c_l_dag,
                          const OperatorMatrix& c_r, double a, double b) {
    const OperatorMatrix h12 = (kI * a) * c_l_dag - (kI * b) * c_r;
    const OperatorMatrix off = h12 * sigma_plus(basis);
    OperatorMatrix h = sigma_z(basis) + off + off.adjoint();
    h.declare_hermitian();
    return h;
}

// By |E|; a +-E pair that differs only by round-off keeps the positive level first.
std::vector<double> sorted_by_magnitude(std::vector<double> values, double tie) {
    std::sort(values.begin(), values.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] < 0.0 && values[i + 1] > 0.0 &&
            std::abs(values[i + 1]) - std::abs(values[i]) < tie)
            std::swap(values[i], values[i + 1]);
    return values;
}

}  // namespace

OperatorMatrix assemble_hamiltonian(const ModelParams& params, const FockBasis& basis, Family family) {
    validate(params);
    const double xi = params.xi, xt = params.xi_tilde;
    const auto raise_l = ladder(basis, Mode::Left, Direction::Raise);
    const auto lower_r = ladder(basis, Mode::Right, Direction::Lower);
    if (family == Family::Omega) {
        // sqrt(2 xi~) a~_r = sqrt(2 xi~)(mu~ a_r + mu a_l^dag), mu and mu~ folded in.
        const double g = std::sqrt(2.0 * xi);
        return spin_boson(basis, raise_l, lower_r, (3.0 * xi - xt) / g, (xi + xt) / g);
    }
    if (xt <= 0.0)
        throw Error(ErrorCode::InvalidParams, "omega-tilde basis needs xi_tilde > 0");
    const double g = std::sqrt(2.0 * xt);
    return spin_boson(basis, raise_l, lower_r, (xi + xt) / g, (3.0 * xt - xi) / g);
}

OperatorMatrix assemble_minimal_coupling_hamiltonian(const ModelParams& params, const FockBasis& basis) {
    validate(params);
    const double xi = params.xi, xt = params.xi_tilde;
    const double g = std::sqrt(xi);
    return spin_boson(basis, ladder(basis, Mode::Left, Direction::Raise),
                      ladder(basis, Mode::Right, Direction::Lower), (2.0 * xi - xt) / g, xt / g);
}

OperatorMatrix total_jz(const FockBasis& basis) {
    OperatorMatrix j = angular_momentum_lz(basis) + Complex(0.5) * sigma_z(basis);
    j.declare_hermitian();
    return j;
}

double SpectrumResult::max_residual() const {
    return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

SpectrumResult diagonalize(const OperatorMatrix& hamiltonian, int cutoff) {
    const double defect = hamiltonian.hermiticity_defect();
    if (defect > 1e-12)
        throw Error(ErrorCode::NonHermitianInput, "Hermiticity defect " + std::to_string(defect));
    const DenseMatrix h = hamiltonian.dense();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SolverFailure, "dense eigensolver did not converge");

    SpectrumResult r;
    r.cutoff = cutoff;
    r.eigenvectors = solver.eigenvectors();
    const auto& ev = solver.eigenvalues();
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.twice_jz.assign(r.eigenvalues.size(), 0);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        r.residuals.push_back((h * r.eigenvectors.col(i) - ev(i) * r.eigenvectors.col(i)).norm());
    return r;
}

SpectrumResult diagonalize_sectors(const OperatorMatrix& hamiltonian, const FockBasis& basis,
                                   SectorOptions options) {
    const double defect = hamiltonian.hermiticity_defect();
    if (defect > 1e-12)
        throw Error(ErrorCode::NonHermitianInput, "Hermiticity defect " + std::to_string(defect));
    if (hamiltonian.dim() != static_cast<Eigen::Index>(basis.dim()))
        throw Error(ErrorCode::InvalidParams, "Hamiltonian does not match the basis");

    std::map<int, std::vector<std::size_t>> sectors;
    for (std::size_t i = 0; i < basis.dim(); ++i) sectors[basis.twice_jz(i)].push_back(i);
    if (options.twice_jz) {
        std::map<int, std::vector<std::size_t>> chosen;
        for (int j : *options.twice_jz) {
            auto it = sectors.find(j);
            if (it != sectors.end()) chosen.insert(*it);
        }
        sectors = std::move(chosen);
    }

    struct Pair {
        double energy;
        int jz;
        double residual;
        Vector vec;
    };
    std::vector<Pair> pairs;
    std::vector<Eigen::Index> local(basis.dim(), -1);
    const SparseMatrix& hs = hamiltonian.matrix();

    for (const auto& [jz, idx] : sectors) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        for (Eigen::Index k = 0; k < n; ++k) local[idx[static_cast<std::size_t>(k)]] = k;
        DenseMatrix block = DenseMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            for (SparseMatrix::InnerIterator it(hs, static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)])); it; ++it) {
                const Eigen::Index row = local[static_cast<std::size_t>(it.row())];
                if (row < 0)
                    throw Error(ErrorCode::InvalidParams, "operator does not conserve J_z");
                block(row, k) = it.value();
            }
        }
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(block);
        if (solver.info() != Eigen::Success)
            throw Error(ErrorCode::SolverFailure, "sector eigensolver failed at 2J_z = " + std::to_string(jz));
        for (Eigen::Index c = 0; c < n; ++c) {
            Pair p;
            p.energy = solver.eigenvalues()(c);
            p.jz = jz;
            const Vector v = solver.eigenvectors().col(c);
            p.residual = (block * v - p.energy * v).norm();
            if (options.with_vectors) {
                p.vec = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
                for (Eigen::Index k = 0; k < n; ++k)
                    p.vec(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)])) = v(k);
            }
            pairs.push_back(std::move(p));
        }
        for (std::size_t i : idx) local[i] = -1;
    }

    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.energy < b.energy; });
    SpectrumResult r;
    r.cutoff = basis.cutoff();
    if (options.with_vectors)
        r.eigenvectors.resize(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t c = 0; c < pairs.size(); ++c) {
        r.eigenvalues.push_back(pairs[c].energy);
        r.residuals.push_back(pairs[c].residual);
        r.twice_jz.push_back(pairs[c].jz);
        if (options.with_vectors) r.eigenvectors.col(static_cast<Eigen::Index>(c)) = pairs[c].vec;
    }
    return r;
}

double boundary_weight(const Vector& v, const FockBasis& basis) {
    double w = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto st = basis.state(i);
        if (st.n_r == basis.cutoff() || st.n_l == basis.cutoff())
            w += std::norm(v(static_cast<Eigen::Index>(i)));
    }
    return w;
}

std::vector<double> tracked_levels(const ModelParams& params, int k, int cutoff,
                                   const ConvergenceOptions& options) {
    const FockBasis basis(cutoff);
    const Family family = options.family.value_or(native_family(classify(params)));
    const auto h = assemble_hamiltonian(params, basis, family);
    SectorOptions so;
    so.twice_jz = std::vector<int>{-1, 1};
    const auto spec = diagonalize_sectors(h, basis, so);

    std::vector<double> kept;
    for (std::size_t c = 0; c < spec.eigenvalues.size(); ++c)
        if (boundary_weight(spec.eigenvectors.col(static_cast<Eigen::Index>(c)), basis) <=
            options.boundary_threshold)
            kept.push_back(spec.eigenvalues[c]);

    std::sort(kept.begin(), kept.end());
    std::vector<double> distinct;
    for (double e : kept)
        if (distinct.empty() || e - distinct.back() > options.merge_tolerance) distinct.push_back(e);

    auto levels = sorted_by_magnitude(std::move(distinct), options.merge_tolerance);
    if (static_cast<int>(levels.size()) > k) levels.resize(static_cast<std::size_t>(k));
    return levels;
}

ConvergenceReport track_convergence(const ModelParams& params, int k, double tol,
                                    ConvergenceOptions options) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "need at least one tracked level");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "convergence tolerance must be positive");
    if (options.first_cutoff < 1 || options.cutoff_step < 1 || options.max_cutoff < options.first_cutoff)
        throw Error(ErrorCode::InvalidParams, "invalid cutoff sequence");

    ConvergenceReport report;
    report.requested_tol = tol;
    report.achieved_tol = std::numeric_limits<double>::infinity();
    for (int n = options.first_cutoff; n <= options.max_cutoff; n += options.cutoff_step) {
        report.cutoffs.push_back(n);
        report.levels.push_back(tracked_levels(params, k, n, options));
        report.final_cutoff = n;
        if (report.levels.size() < 2) continue;
        const auto& prev = report.levels[report.levels.size() - 2];
        const auto& cur = report.levels.back();
        if (static_cast<int>(prev.size()) != k || static_cast<int>(cur.size()) != k) {
            report.achieved_tol = std::numeric_limits<double>::infinity();
            continue;
        }
        double diff = 0.0;
        for (int i = 0; i < k; ++i) diff = std::max(diff, std::abs(prev[static_cast<std::size_t>(i)] - cur[static_cast<std::size_t>(i)]));
        report.achieved_tol = diff;
        if (diff < tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

CutoffCeilingError::CutoffCeilingError(ConvergenceReport report)
    : Error(ErrorCode::CutoffCeiling,
            "no convergence up to N = " + std::to_string(report.final_cutoff) +
                ", best successive difference " + std::to_string(report.achieved_tol)),
      report_(std::move(report)) {}

ConvergenceReport converged_spectrum(const ModelParams& params, int k, double tol,
                                     ConvergenceOptions options) {
    auto report = track_convergence(params, k, tol, options);
    if (!report.converged) throw CutoffCeilingError(std::move(report));
    return report;
}

Complex numeric_expectation(const Vector& state, const OperatorMatrix& op) {
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > kNormTolerance)
        throw Error(ErrorCode::UnnormalizedState, "state norm " + std::to_string(norm));
    return state.dot(op * state);
}

double numeric_variance(const Vector& state, const OperatorMatrix& op) {
    const Complex mean = numeric_expectation(state, op);
    const Vector mv = op * state;
    return mv.squaredNorm() - std::norm(mean);
}

MatchedState match_state(const ModelParams& params, StateLabel label, int cutoff,
                         std::optional<Family> family) {
    const FockBasis basis(cutoff);
    MatchedState m;
    m.cutoff = cutoff;
    m.family = family.value_or(native_family(classify(params)));
    m.analytic = build_eigenstate(params, label, basis, m.family);

    Eigen::Index peak = 0;
    m.analytic.vector.cwiseAbs().maxCoeff(&peak);
    const int jz = basis.twice_jz(static_cast<std::size_t>(peak));

    const auto h = assemble_hamiltonian(params, basis, m.family);
    SectorOptions so;
    so.twice_jz = std::vector<int>{jz};
    const auto spec = diagonalize_sectors(h, basis, so);

    Eigen::Index best = -1;
    Complex best_amp{0.0};
    for (Eigen::Index c = 0; c < spec.eigenvectors.cols(); ++c) {
        const Complex amp = spec.eigenvectors.col(c).dot(m.analytic.vector);
        if (best < 0 || std::norm(amp) > std::norm(best_amp)) {
            best = c;
            best_amp = amp;
        }
    }
    m.overlap = std::norm(best_amp);
    if (best < 0 || m.overlap < kMatchOverlap)
        throw Error(ErrorCode::SolverFailure,
                    "no eigenvector overlaps the analytic state above 0.99 (best " +
                        std::to_string(m.overlap) + ") at N = " + std::to_string(cutoff));
    m.energy = spec.eigenvalues[static_cast<std::size_t>(best)];
    m.residual = spec.residuals[static_cast<std::size_t>(best)];
    m.vector = spec.eigenvectors.col(best) * (best_amp / std::abs(best_amp));
    return m;
}

StateConvergence converged_state(const ModelParams& params, StateLabel label, double tol,
                                 ConvergenceOptions options) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "convergence tolerance must be positive");
    StateConvergence out;
    out.achieved_tol = std::numeric_limits<double>::infinity();
    std::optional<double> previous;
    bool any = false;
    for (int n = options.first_cutoff; n <= options.max_cutoff; n += options.cutoff_step) {
        out.cutoffs.push_back(n);
        try {
            out.state = match_state(params, label, n, options.family);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::TruncationLeakage || e.code() == ErrorCode::SolverFailure) {
                previous.reset();
                continue;
            }
            throw;
        }
        any = true;
        if (previous) {
            out.achieved_tol = std::abs(out.state.energy - *previous);
            if (out.achieved_tol < tol) {
                out.converged = true;
                break;
            }
        }
        previous = out.state.energy;
    }
    if (!any)
        throw Error(ErrorCode::CutoffCeiling,
                    "analytic state does not fit any cutoff up to " + std::to_string(options.max_cutoff));
    return out;
}

void write_spectrum_csv(std::ostream& out, double ratio, const SpectrumResult& spectrum, bool header) {
    if (header) out << "ratio,level_index,energy,residual,cutoff\n";
    out.precision(15);
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
        out << ratio << ',' << i << ',' << spectrum.eigenvalues[i] << ',' << spectrum.residuals[i] << ','
            << spectrum.cutoff << '\n';
}

}  // namespace chiral
