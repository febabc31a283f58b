#include "chiral/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "chiral/error.hpp"

namespace chiral {

namespace {

bool finite(double v) { return std::isfinite(v); }

// tanh|z| of the squeezing that maps the bichromatic Hamiltonian onto a single
// chiral mode. Written as a ratio of positive terms so it stays exact at
// xi_tilde = 0 where mu diverges.
double squeeze_tanh_of(const ModelParams& p, Regime regime) {
    const double sum = p.xi + p.xi_tilde;
    return regime == Regime::LeftHanded ? sum / (3.0 * p.xi - p.xi_tilde)
                                        : sum / (3.0 * p.xi_tilde - p.xi);
}

}  // namespace

ModelParams ModelParams::make(double xi, double xi_tilde) {
    ModelParams p{xi, xi_tilde};
    validate(p);
    return p;
}

ModelParams ModelParams::from_ratio(double xi, double ratio) {
    return make(xi, xi * ratio);
}

void validate(const ModelParams& p) {
    if (!finite(p.xi) || !finite(p.xi_tilde))
        throw Error(ErrorCode::InvalidParams, "couplings must be finite");
    if (p.xi <= 0.0)
        throw Error(ErrorCode::InvalidParams, "xi must be positive, got " + std::to_string(p.xi));
    if (p.xi_tilde < 0.0)
        throw Error(ErrorCode::InvalidParams,
                    "xi_tilde must be non-negative, got " + std::to_string(p.xi_tilde));
}

const char* to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::LeftHanded: return "left";
        case Regime::Critical: return "critical";
        case Regime::RightHanded: return "right";
    }
    return "?";
}

Regime classify(const ModelParams& p, double critical_window) {
    validate(p);
    const double offset = p.ratio() - 1.0;
    if (std::abs(offset) < critical_window) return Regime::Critical;
    return offset < 0.0 ? Regime::LeftHanded : Regime::RightHanded;
}

double Bogoliubov::rapidity() const { return std::asinh(mu); }

Bogoliubov bogoliubov(const ModelParams& p) {
    validate(p);
    if (p.xi_tilde <= 0.0)
        throw Error(ErrorCode::InvalidParams, "omega-tilde family needs xi_tilde > 0");
    Bogoliubov b;
    b.width_ratio = std::sqrt(p.xi_tilde / p.xi);
    b.mu = 0.5 * (b.width_ratio - 1.0 / b.width_ratio);
    b.mu_tilde = 0.5 * (b.width_ratio + 1.0 / b.width_ratio);
    return b;
}

double DerivedCouplings::alpha() const {
    if (!alpha_)
        throw Error(ErrorCode::CriticalPointSingularity, "alpha is undefined at xi_tilde = xi");
    return *alpha_;
}

double DerivedCouplings::squeeze_tanh() const {
    if (!tanh_z_)
        throw Error(ErrorCode::CriticalPointSingularity, "squeezing diverges at xi_tilde = xi");
    return *tanh_z_;
}

double DerivedCouplings::squeeze_z() const { return -std::atanh(squeeze_tanh()); }

DerivedCouplings derive_couplings(const ModelParams& p, double critical_window) {
    validate(p);
    DerivedCouplings d;
    d.regime = classify(p, critical_window);
    d.width_ratio = std::sqrt(p.xi_tilde / p.xi);
    if (p.xi_tilde > 0.0) {
        d.mu = 0.5 * (d.width_ratio - 1.0 / d.width_ratio);
        d.mu_tilde = 0.5 * (d.width_ratio + 1.0 / d.width_ratio);
        d.lambda = std::sqrt(d.mu * d.mu + 1.0);
    } else {
        d.mu = -std::numeric_limits<double>::infinity();
        d.mu_tilde = std::numeric_limits<double>::infinity();
        d.lambda = std::numeric_limits<double>::infinity();
    }
    d.g_l = std::sqrt(2.0 * p.xi);
    d.g_r = std::sqrt(2.0 * p.xi_tilde);
    d.delta = 1.0;

    // Simplified form; mu (xi xi~)^{1/2} = (xi~ - xi) / 2 identically.
    d.zeta = d.regime == Regime::Critical ? 0.0 : 2.0 * std::abs(p.xi - p.xi_tilde);
    if (p.xi_tilde > 0.0) {
        const double cross = 2.0 * d.mu * std::sqrt(p.xi_tilde * p.xi);
        d.zeta_definitional = d.regime == Regime::RightHanded ? p.xi_tilde - p.xi + cross
                                                              : p.xi - p.xi_tilde - cross;
    }
    d.g_prime = std::sqrt(2.0 * d.zeta);

    if (d.regime == Regime::Critical) return d;

    const double t = squeeze_tanh_of(p, d.regime);
    if (!(t > 0.0 && t < 1.0))
        throw Error(ErrorCode::CriticalPointSingularity,
                    "arctanh argument left (0,1): " + std::to_string(t));
    d.tanh_z_ = t;
    // lambda * alpha = artanh(t); alpha -> 0 as lambda -> inf at xi_tilde = 0.
    d.alpha_ = std::isfinite(d.lambda) ? std::atanh(t) / d.lambda : 0.0;
    return d;
}

double analytic_energy(const ModelParams& p, int n, Branch branch) {
    if (n < 0) throw Error(ErrorCode::InvalidParams, "quantum number must be >= 0");
    const auto d = derive_couplings(p);
    if (d.regime == Regime::Critical)
        throw Error(ErrorCode::CriticalPointSingularity,
                    "discrete spectrum collapses at xi_tilde = xi; use critical_dispersion");
    return sign(branch) * std::sqrt(1.0 + 2.0 * d.zeta * (n + 1));
}

double ground_energy(const ModelParams& p) {
    const auto d = derive_couplings(p);
    switch (d.regime) {
        case Regime::LeftHanded: return 1.0;
        case Regime::RightHanded: return std::sqrt(1.0 + 2.0 * d.zeta);
        case Regime::Critical: break;
    }
    throw Error(ErrorCode::CriticalPointSingularity, "no discrete ground level at xi_tilde = xi");
}

double unpaired_energy(const ModelParams& p) {
    switch (classify(p)) {
        case Regime::LeftHanded: return 1.0;
        case Regime::RightHanded: return -1.0;
        case Regime::Critical: break;
    }
    throw Error(ErrorCode::CriticalPointSingularity, "no discrete levels at xi_tilde = xi");
}

std::vector<double> analytic_levels(const ModelParams& p, int count) {
    std::vector<double> levels;
    levels.push_back(unpaired_energy(p));
    for (int n = 0; static_cast<int>(levels.size()) < count + 2; ++n) {
        levels.push_back(analytic_energy(p, n, Branch::Positive));
        levels.push_back(analytic_energy(p, n, Branch::Negative));
    }
    std::stable_sort(levels.begin(), levels.end(), [](double a, double b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return a > b;
    });
    levels.resize(static_cast<std::size_t>(count));
    return levels;
}

double critical_dispersion(double px, double py, Branch branch) {
    return sign(branch) * std::sqrt(1.0 + px * px + py * py);
}

double energy_gap(const ModelParams& p) {
    const auto d = derive_couplings(p);
    switch (d.regime) {
        case Regime::LeftHanded: return std::sqrt(1.0 + 2.0 * d.zeta) - 1.0;
        case Regime::RightHanded:
            return std::sqrt(1.0 + 4.0 * d.zeta) - std::sqrt(1.0 + 2.0 * d.zeta);
        case Regime::Critical: break;
    }
    throw Error(ErrorCode::CriticalPointSingularity, "gap closes at xi_tilde = xi");
}

GapFit fit_gap_exponent(double xi, std::span<const double> ratios, Side side) {
    if (ratios.size() < 4)
        throw Error(ErrorCode::InsufficientGrid,
                    "need at least 4 grid points, got " + std::to_string(ratios.size()));
    GapFit fit;
    for (double r : ratios) {
        const auto p = ModelParams::from_ratio(xi, r);
        const Regime regime = classify(p);
        const Regime expected = side == Side::Left ? Regime::LeftHanded : Regime::RightHanded;
        if (regime != expected)
            throw Error(ErrorCode::MixedSides,
                        "ratio " + std::to_string(r) + " is not on the requested side");
        GapFitPoint pt;
        pt.ratio = r;
        pt.log_distance = std::log(std::abs(std::sqrt(r) - 1.0));
        pt.log_gap = std::log(energy_gap(p));
        fit.points.push_back(pt);
    }

    const double n = static_cast<double>(fit.points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& pt : fit.points) {
        mx += pt.log_distance;
        my += pt.log_gap;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& pt : fit.points) {
        sxx += (pt.log_distance - mx) * (pt.log_distance - mx);
        sxy += (pt.log_distance - mx) * (pt.log_gap - my);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::InsufficientGrid, "grid points are not distinct");
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;

    double ssr = 0.0;
    for (auto& pt : fit.points) {
        pt.residual = pt.log_gap - (fit.intercept + fit.exponent * pt.log_distance);
        ssr += pt.residual * pt.residual;
    }
    fit.residual_rms = std::sqrt(ssr / n);
    const double dof = n - 2.0;
    fit.exponent_stderr = std::sqrt(ssr / dof / sxx);
    boost::math::students_t dist(dof);
    fit.ci95_halfwidth = boost::math::quantile(boost::math::complement(dist, 0.025)) *
                         fit.exponent_stderr;
    return fit;
}

std::vector<double> near_critical_grid(Side side, double lo, double hi, int count) {
    if (count < 2 || !(lo > 0.0) || !(hi > lo) || hi >= 1.0)
        throw Error(ErrorCode::InsufficientGrid, "invalid near-critical grid specification");
    std::vector<double> grid;
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        const double dist = lo * std::exp(step * i);
        grid.push_back(side == Side::Left ? 1.0 - dist : 1.0 + dist);
    }
    return grid;
}

}  // namespace chiral
