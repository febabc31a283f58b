#include "chiral/entanglement.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "chiral/error.hpp"

namespace chiral {

namespace {

constexpr long kMaxTerms = 50'000'000;

double regime_energy(const ModelParams& params) {
    const auto d = derive_couplings(params);
    return std::sqrt(1.0 + 2.0 * d.zeta);
}

// Diagonal weights w_k = term(k) until the closed-form tail drops below tolerance.
template <class Term, class Tail>
ReducedState geometric_series(Subsystem subsystem, Term term, Tail tail) {
    ReducedState r;
    r.subsystem = subsystem;
    long k = 0;
    double rest = tail(0);
    while (rest >= kEntropyTailTolerance) {
        if (k >= kMaxTerms) throw Error(ErrorCode::TailTooHeavy, "reduced-state series does not converge");
        r.weights.push_back(term(k));
        rest = tail(++k);
    }
    r.tail_bound = rest;
    return r;
}

}  // namespace

const char* to_string(Subsystem s) noexcept {
    switch (s) {
        case Subsystem::LeftMode: return "l";
        case Subsystem::RightMode: return "r";
        case Subsystem::Spin: return "s";
    }
    return "?";
}

std::pair<double, double> spin_weights(const ModelParams& params) {
    if (classify(params) != Regime::RightHanded) return {1.0, 0.0};
    const double e = regime_energy(params);
    return {(e + 1.0) / (2.0 * e), (e - 1.0) / (2.0 * e)};
}

ReducedState reduced_density(const ModelParams& params, Subsystem subsystem) {
    const auto d = derive_couplings(params);
    if (d.regime == Regime::Critical)
        throw Error(ErrorCode::CriticalPointSingularity, "no ground state at the critical point");
    const double x = std::pow(d.squeeze_tanh(), 2);  // tanh^2|z|

    if (subsystem == Subsystem::Spin) {
        const auto [gp, gm] = spin_weights(params);
        ReducedState r;
        r.subsystem = subsystem;
        r.weights = {gp, gm};
        return r;
    }

    if (d.regime == Regime::LeftHanded) {
        // Both modes of the two-mode squeezed vacuum are thermal.
        return geometric_series(
            subsystem, [&](long k) { return std::pow(x, static_cast<double>(k)) * (1.0 - x); },
            [&](long k) { return std::pow(x, static_cast<double>(k)); });
    }

    // C+|z,0>|up> + i C-|z,1>|down>, pedestal on the right mode.
    const auto [gp, gm] = spin_weights(params);
    if (subsystem == Subsystem::LeftMode) {
        return geometric_series(
            subsystem,
            [&](long k) {
                const double xk = std::pow(x, static_cast<double>(k));
                return xk * (1.0 - x) * (gp + gm * (k + 1) * (1.0 - x));
            },
            [&](long k) {
                const double xk = std::pow(x, static_cast<double>(k));
                return xk * (gp + gm * ((k + 1) * (1.0 - x) + x));
            });
    }
    return geometric_series(
        subsystem,
        [&](long k) {
            const double xk = std::pow(x, static_cast<double>(k));
            const double pedestal = k == 0 ? 0.0 : k * std::pow(x, static_cast<double>(k - 1)) * (1.0 - x) * (1.0 - x);
            return gp * xk * (1.0 - x) + gm * pedestal;
        },
        [&](long k) {
            const double xk = std::pow(x, static_cast<double>(k));
            const double pedestal = k == 0 ? 1.0 : std::pow(x, static_cast<double>(k - 1)) * (k * (1.0 - x) + x);
            return gp * xk + gm * pedestal;
        });
}

double von_neumann_entropy(const ReducedState& state, bool bits) {
    if (state.weights.empty()) throw Error(ErrorCode::InvalidWeights, "no weights");
    double sum = 0.0, s = 0.0;
    for (double w : state.weights) {
        if (!(w >= -1e-12)) throw Error(ErrorCode::InvalidWeights, "negative weight " + std::to_string(w));
        sum += w;
        if (w > 0.0) s -= w * std::log(w);
    }
    if (std::abs(sum - 1.0) > state.tail_bound + 1e-9)
        throw Error(ErrorCode::InvalidWeights, "weights sum to " + std::to_string(sum));
    return bits ? s / std::log(2.0) : s;
}

double thermal_entropy_hyperbolic(double abs_z) {
    if (abs_z == 0.0) return 0.0;
    const double sh2 = std::pow(std::sinh(abs_z), 2);
    return sh2 * std::log1p(1.0 / sh2) + std::log(std::pow(std::cosh(abs_z), 2));
}

double thermal_entropy_occupation(double nbar) {
    if (nbar == 0.0) return 0.0;
    return (nbar + 1.0) * std::log1p(nbar) - nbar * std::log(nbar);
}

double spin_entropy_closed(const ModelParams& params) {
    ReducedState r;
    const auto [gp, gm] = spin_weights(params);
    r.weights = {gp, gm};
    return von_neumann_entropy(r);
}

double spin_entropy_expression(const ModelParams& params, double denominator_zeta_factor) {
    if (classify(params) != Regime::RightHanded)
        throw Error(ErrorCode::InvalidParams, "spin entropy expression is a right-regime formula");
    const double zeta = derive_couplings(params).zeta;
    const double e = std::sqrt(1.0 + 2.0 * zeta);
    return -0.5 * (std::log(zeta / (2.0 * (1.0 + denominator_zeta_factor * zeta))) +
                   std::log((e + 1.0) / (e - 1.0)) / e);
}

double effective_temperature(double abs_z) {
    if (abs_z == 0.0) return 0.0;
    // log coth|z| = -log tanh|z|
    return -1.0 / (2.0 * std::log(std::tanh(abs_z)));
}

double effective_temperature(const ModelParams& params) {
    const auto d = derive_couplings(params);
    if (d.regime != Regime::LeftHanded)
        throw Error(ErrorCode::InvalidParams, "effective temperature is defined in the left regime");
    const double t = d.squeeze_tanh();
    if (t == 0.0) return 0.0;
    return -1.0 / (2.0 * std::log(t));
}

ReducedState oracle_partial_trace(const Vector& state, const FockBasis& basis, Subsystem subsystem) {
    if (state.size() != static_cast<Eigen::Index>(basis.dim()))
        throw Error(ErrorCode::InvalidParams, "vector does not match the basis");
    if (std::abs(state.squaredNorm() - 1.0) > 1e-8)
        throw Error(ErrorCode::UnnormalizedState, "norm^2 = " + std::to_string(state.squaredNorm()));

    const int n = basis.cutoff();
    const Eigen::Index m = subsystem == Subsystem::Spin ? 2 : n + 1;
    DenseMatrix rho = DenseMatrix::Zero(m, m);
    auto amp = [&](Spin s, int nr, int nl) { return state(static_cast<Eigen::Index>(basis.index(s, nr, nl))); };

    for (Spin s : {Spin::Up, Spin::Down}) {
        for (int nr = 0; nr <= n; ++nr) {
            for (int nl = 0; nl <= n; ++nl) {
                const Complex a = amp(s, nr, nl);
                if (a == Complex(0.0)) continue;
                switch (subsystem) {
                    case Subsystem::LeftMode:
                        for (int k = 0; k <= n; ++k) rho(nl, k) += a * std::conj(amp(s, nr, k));
                        break;
                    case Subsystem::RightMode:
                        for (int k = 0; k <= n; ++k) rho(nr, k) += a * std::conj(amp(s, k, nl));
                        break;
                    case Subsystem::Spin:
                        for (Spin t : {Spin::Up, Spin::Down})
                            rho(static_cast<int>(s), static_cast<int>(t)) += a * std::conj(amp(t, nr, nl));
                        break;
                }
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(rho, Eigen::EigenvaluesOnly);
    ReducedState r;
    r.subsystem = subsystem;
    for (Eigen::Index k = solver.eigenvalues().size() - 1; k >= 0; --k)
        r.weights.push_back(solver.eigenvalues()(k));
    r.matrix = std::move(rho);
    return r;
}

}  // namespace chiral
