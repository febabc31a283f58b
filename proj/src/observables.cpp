#include "chiral/observables.hpp"

#include <cmath>

#include "chiral/error.hpp"

namespace chiral {

StateShape state_shape(const ModelParams& params, StateLabel label) {
    const auto e = describe_eigenstate(params, label);
    StateShape s;
    s.regime = e.regime;
    s.abs_z = std::abs(e.z);
    const double w_up = std::norm(e.up_amp);
    const double w_down = std::norm(e.down_amp);
    s.eta = w_up * (e.up_pedestal + 1) + w_down * (e.down_pedestal + 1);
    s.kappa = w_up * w_down;
    return s;
}

double order_parameter(const ModelParams& params, StateLabel label) {
    const auto e = describe_eigenstate(params, label);
    // L_z is n_r - n_l in either family; each coherent component carries +-pedestal.
    const double pedestal = std::norm(e.up_amp) * e.up_pedestal + std::norm(e.down_amp) * e.down_pedestal;
    if (pedestal == 0.0) return 0.0;
    return e.regime == Regime::LeftHanded ? -pedestal : pedestal;
}

double position_fluctuation(const ModelParams& params, StateLabel label) {
    const auto s = state_shape(params, label);
    return std::sqrt(s.eta) * std::exp(s.abs_z);
}

double momentum_fluctuation(const ModelParams& params, StateLabel label) {
    const auto s = state_shape(params, label);
    return std::sqrt(s.eta) * std::exp(-s.abs_z);
}

std::optional<double> mandel(double mean, double variance) {
    if (!(mean > 0.0)) return std::nullopt;
    return variance / mean - 1.0;
}

PhononStatistics phonon_statistics(const StateShape& s) {
    const double sh2 = std::pow(std::sinh(s.abs_z), 2);
    const double ch2 = 1.0 + sh2;
    // pedestal mode: eta ch^2 - 1, partner mode: eta sh^2
    const double partner = s.eta * sh2;
    const double pedestal = s.eta * ch2 - 1.0;
    const double common = s.eta * sh2 * ch2;
    const double partner_var = common + s.kappa * sh2 * sh2;
    const double pedestal_var = common + s.kappa * ch2 * ch2;

    PhononStatistics st;
    if (s.regime == Regime::LeftHanded) {
        st.n_r = partner;
        st.var_r = partner_var;
        st.n_l = pedestal;
        st.var_l = pedestal_var;
    } else {
        st.n_l = partner;
        st.var_l = partner_var;
        st.n_r = pedestal;
        st.var_r = pedestal_var;
    }
    st.q_r = mandel(st.n_r, st.var_r);
    st.q_l = mandel(st.n_l, st.var_l);
    return st;
}

PhononStatistics phonon_statistics(const ModelParams& params, StateLabel label) {
    return phonon_statistics(state_shape(params, label));
}

const char* to_string(Source source) noexcept {
    return source == Source::Analytic ? "analytic" : "oracle";
}

ObservableRecord analytic_record(const ModelParams& params, StateLabel label) {
    ObservableRecord r;
    r.ratio = params.ratio();
    r.label = canonical_label(params, label);
    r.regime = classify(params);
    r.energy = describe_eigenstate(params, label).energy;
    r.lz_mean = order_parameter(params, label);
    r.dx = position_fluctuation(params, label);
    r.dp = momentum_fluctuation(params, label);
    const auto st = phonon_statistics(params, label);
    r.q_r = st.q_r;
    r.q_l = st.q_l;
    r.source = Source::Analytic;
    return r;
}

ObservableRecord oracle_record(const ModelParams& params, StateLabel label, const MatchedState& state) {
    const FockBasis basis(state.cutoff);
    const Vector& v = state.vector;
    if (v.size() != static_cast<Eigen::Index>(basis.dim()))
        throw Error(ErrorCode::InvalidParams, "state does not match its recorded cutoff");
    if (state.family != native_family(classify(params)))
        throw Error(ErrorCode::InvalidParams, "oracle observables need the regime's native family");

    ObservableRecord r;
    r.ratio = params.ratio();
    r.label = canonical_label(params, label);
    r.regime = classify(params);
    r.energy = state.energy;
    r.cutoff = state.cutoff;
    r.source = Source::Oracle;
    r.lz_mean = numeric_expectation(v, angular_momentum_lz(basis)).real();

    // Unit-width quadratures of the family's own ladders: vacuum variance 1/2.
    const auto q = quadratures(basis, 1.0);
    r.dx = std::sqrt(2.0 * numeric_variance(v, q.x));
    r.dp = std::sqrt(2.0 * numeric_variance(v, q.px));

    const auto nr = number(basis, Mode::Right);
    const auto nl = number(basis, Mode::Left);
    r.q_r = mandel(numeric_expectation(v, nr).real(), numeric_variance(v, nr));
    r.q_l = mandel(numeric_expectation(v, nl).real(), numeric_variance(v, nl));
    return r;
}

std::string describe(StateLabel label) {
    switch (label.kind) {
        case StateKind::Ground: return "ground";
        case StateKind::Unpaired: return "unpaired";
        case StateKind::Doublet: break;
    }
    return std::string(label.branch == Branch::Positive ? "+" : "-") + "E" + std::to_string(label.n);
}

}  // namespace chiral
