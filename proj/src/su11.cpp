#include "chiral/su11.hpp"

#include <cmath>
#include <string>

#include "chiral/error.hpp"

namespace chiral {

Su11Generators su11_generators(const FockBasis& basis) {
    Su11Generators g;
    const auto nr = number(basis, Mode::Right);
    const auto nl = number(basis, Mode::Left);
    g.k0 = Complex(0.5) * (nr + nl + identity(basis));
    g.k0.declare_hermitian();
    g.k_plus = ladder(basis, Mode::Right, Direction::Raise) * ladder(basis, Mode::Left, Direction::Raise);
    g.k_minus = ladder(basis, Mode::Right, Direction::Lower) * ladder(basis, Mode::Left, Direction::Lower);
    return g;
}

namespace {

Vector apply_exp_nilpotent(const OperatorMatrix& m, double scale, const Vector& v) {
    Vector sum = v;
    Vector term = v;
    for (int k = 1; term.squaredNorm() > 0.0; ++k) {
        term = (m * term) * (scale / k);
        sum += term;
        if (k > 4 * m.dim()) throw Error(ErrorCode::SolverFailure, "generator is not nilpotent");
    }
    return sum;
}

}  // namespace

Vector apply_disentangled(const Su11Generators& g, double z, const Vector& v) {
    const double t = std::tanh(z);
    const double log_c = -2.0 * std::log(std::cosh(z));
    Vector w = apply_exp_nilpotent(g.k_minus, -t, v);
    const SparseMatrix& k0 = g.k0.matrix();
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(log_c * k0.coeff(i, i).real());
    return apply_exp_nilpotent(g.k_plus, t, w);
}

std::pair<int, int> Su11CoherentState::occupations(int m) const {
    return regime == Regime::RightHanded ? std::pair{m + pedestal, m} : std::pair{m, m + pedestal};
}

namespace {

constexpr int kSeriesHardCap = 200000;

// c_m = sqrt(C(m+n, m)) (-tanh z)^m / cosh^{n+1} z, in log space.
double coefficient(double z, int n, int m) {
    const double t = std::tanh(std::abs(z));
    if (m > 0 && t == 0.0) return 0.0;
    const double log_c = 0.5 * (std::lgamma(m + n + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                         (m > 0 ? m * std::log(t) : 0.0) - (n + 1) * std::log(std::cosh(z));
    const double sgn = (m % 2 && z > 0.0) ? -1.0 : 1.0;
    return sgn * std::exp(log_c);
}

std::vector<double> coefficient_series(double z, int n, int m_max) {
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) c.push_back(coefficient(z, n, m));
    return c;
}

void require_side(Regime regime) {
    if (regime == Regime::Critical)
        throw Error(ErrorCode::CriticalPointSingularity, "coherent states need a chiral regime");
}

}  // namespace

Su11CoherentState coherent_coefficients(double z, int n, std::optional<int> m_max, Regime regime) {
    require_side(regime);
    if (n < 0) throw Error(ErrorCode::InvalidParams, "pedestal must be >= 0");
    if (!std::isfinite(z)) throw Error(ErrorCode::InvalidParams, "squeeze must be finite");
    if (m_max && *m_max < 0) throw Error(ErrorCode::InvalidParams, "m_max must be >= 0");

    Su11CoherentState st;
    st.z = z;
    st.pedestal = n;
    st.regime = regime;

    const int cap = m_max ? *m_max : kSeriesHardCap;
    double mass = 0.0;
    const double t = std::tanh(std::abs(z));
    for (int m = 0; m <= cap; ++m) {
        const double c = coefficient(z, n, m);
        st.coefficients.push_back(c);
        mass += c * c;
        if (!m_max && (1.0 - mass < kCoherentTailTolerance || t == 0.0)) break;
    }
    st.tail_mass = std::max(0.0, 1.0 - mass);
    if (st.tail_mass >= kCoherentTailTolerance)
        throw Error(ErrorCode::TailTooHeavy, "series tail " + std::to_string(st.tail_mass) +
                                                 " at m_max " + std::to_string(st.m_max()));
    return st;
}

CoherentMoments coherent_moments(double z, int n, Regime regime) {
    require_side(regime);
    // m follows a negative binomial law with n+1 trials and success tanh^2|z|.
    const double sh2 = std::pow(std::sinh(z), 2);
    const double ch2 = 1.0 + sh2;
    const double mean = (n + 1) * sh2;
    const double var = (n + 1) * sh2 * ch2;
    const double partner = mean;
    const double pedestal = n + mean;

    CoherentMoments mo;
    const double partner_sq = var + partner * partner;
    const double pedestal_sq = var + pedestal * pedestal;
    if (regime == Regime::LeftHanded) {
        mo.n_r = partner;
        mo.n_r_sq = partner_sq;
        mo.n_l = pedestal;
        mo.n_l_sq = pedestal_sq;
    } else {
        mo.n_l = partner;
        mo.n_l_sq = partner_sq;
        mo.n_r = pedestal;
        mo.n_r_sq = pedestal_sq;
    }
    return mo;
}

Family native_family(Regime regime) {
    return regime == Regime::RightHanded ? Family::OmegaTilde : Family::Omega;
}

StateLabel canonical_label(const ModelParams& params, StateLabel label) {
    if (label.kind != StateKind::Ground) return label;
    switch (classify(params)) {
        case Regime::LeftHanded: return StateLabel::unpaired();
        case Regime::RightHanded: return StateLabel::doublet(Branch::Positive, 0);
        case Regime::Critical: break;
    }
    throw Error(ErrorCode::CriticalPointSingularity, "no ground state at xi_tilde = xi");
}

EigenstateDescriptor describe_eigenstate(const ModelParams& params, StateLabel label) {
    const auto d = derive_couplings(params);
    if (d.regime == Regime::Critical)
        throw Error(ErrorCode::CriticalPointSingularity, "no normalizable eigenstates at xi_tilde = xi");
    label = canonical_label(params, label);

    EigenstateDescriptor e;
    e.regime = d.regime;
    e.label = label;
    e.z = d.squeeze_z();
    const bool left = d.regime == Regime::LeftHanded;
    const Complex i{0.0, 1.0};

    if (label.kind == StateKind::Unpaired) {
        e.energy = unpaired_energy(params);
        if (left) {
            e.up_amp = 1.0;
            e.down_amp = 0.0;
        } else {
            e.up_amp = 0.0;
            e.down_amp = 1.0;
        }
        return e;
    }

    const int n = label.n;
    const double energy = analytic_energy(params, n, Branch::Positive);
    e.energy = sign(label.branch) * energy;
    e.c_plus = std::sqrt((energy + 1.0) / (2.0 * energy));
    e.c_minus = std::sqrt((energy - 1.0) / (2.0 * energy));
    const bool pos = label.branch == Branch::Positive;
    const double c_same = pos ? e.c_plus : e.c_minus;
    const double c_other = pos ? e.c_minus : e.c_plus;
    if (left) {
        // C_+- |z, n+1> up  -+ i C_-+ |z, n> down
        e.up_pedestal = n + 1;
        e.down_pedestal = n;
        e.up_amp = c_same;
        e.down_amp = (pos ? -i : i) * c_other;
    } else {
        // C~_+- |z~, n> up  +- i C~_-+ |z~, n+1> down
        e.up_pedestal = n;
        e.down_pedestal = n + 1;
        e.up_amp = c_same;
        e.down_amp = (pos ? i : -i) * c_other;
    }
    return e;
}

BuiltState build_eigenstate(const ModelParams& params, StateLabel label, const FockBasis& basis,
                            Family family, BuildOptions options) {
    BuiltState out;
    out.descriptor = describe_eigenstate(params, label);
    const auto& e = out.descriptor;

    double z = e.z;
    if (family != native_family(e.regime)) {
        const double s = bogoliubov(params).rapidity();
        z += family == Family::Omega ? s : -s;
    }

    out.vector = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    const int cutoff = basis.cutoff();
    double kept = 0.0;
    auto place = [&](Spin spin, int pedestal, Complex amp) {
        if (amp == Complex(0.0)) return;
        // Full range of the basis: a series cut at the 1e-12 tail would leave
        // amplitudes of order 1e-6 out.
        Su11CoherentState st;
        st.z = z;
        st.pedestal = pedestal;
        st.regime = e.regime;
        st.coefficients = coefficient_series(z, pedestal, std::max(0, cutoff - pedestal));
        for (int m = 0; m <= st.m_max(); ++m) {
            const auto [nr, nl] = st.occupations(m);
            const Complex v = amp * st.coefficients[static_cast<std::size_t>(m)];
            out.vector(static_cast<Eigen::Index>(basis.index(spin, nr, nl))) = v;
            kept += std::norm(v);
        }
    };
    place(Spin::Up, e.up_pedestal, e.up_amp);
    place(Spin::Down, e.down_pedestal, e.down_amp);

    out.leakage = std::max(0.0, 1.0 - kept);
    if (out.leakage > options.leakage_threshold)
        throw Error(ErrorCode::TruncationLeakage,
                    "analytic state loses " + std::to_string(out.leakage) + " beyond cutoff " +
                        std::to_string(cutoff));
    out.vector /= out.vector.norm();
    return out;
}

}  // namespace chiral
