#include "chiral/sweep.hpp"

#include <cmath>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "chiral/entanglement.hpp"
#include "chiral/error.hpp"
#include "chiral/observables.hpp"
#include "chiral/oracle.hpp"

namespace chiral {

namespace {

struct PointResult {
    std::vector<Row> rows;
    bool failed = false;
    std::vector<std::string> summary;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw Error(ErrorCode::ConfigError, "not a number: '" + s + "'");
    return v;
}

std::string error_text(const std::exception& e) {
    if (const auto* ce = dynamic_cast<const Error*>(&e)) return to_string(ce->code());
    return e.what();
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Row analytic(double ratio, std::string quantity, double value) {
    return {ratio, std::move(quantity), value, "analytic", 0, std::nullopt, {}};
}

Row failure(double ratio, std::string quantity, const char* source, const std::exception& e) {
    return {ratio, std::move(quantity), std::nullopt, source, 0, std::nullopt, error_text(e)};
}

ConvergenceOptions oracle_options(const SweepConfig& c) {
    ConvergenceOptions o;
    o.max_cutoff = c.max_cutoff;
    if (c.cutoff) o.first_cutoff = o.max_cutoff = *c.cutoff;
    return o;
}

std::string level_name(std::size_t k) { return "E[" + std::to_string(k) + "]"; }

// Oracle state under the configured cutoff policy; `error` is set when escalation did not converge.
struct OracleState {
    std::optional<MatchedState> state;
    std::optional<double> tolerance;
    std::string error;
};

OracleState oracle_state(const SweepConfig& c, const ModelParams& p, StateLabel label) {
    OracleState out;
    if (c.cutoff) {
        out.state = match_state(p, label, *c.cutoff);
        return out;
    }
    auto sc = converged_state(p, label, c.tol, oracle_options(c));
    out.tolerance = c.tol;
    if (!sc.converged) out.error = to_string(ErrorCode::CutoffCeiling);
    out.state = std::move(sc.state);
    return out;
}

PointResult spectrum_point(const SweepConfig& c, double ratio) {
    PointResult r;
    const auto p = ModelParams::from_ratio(c.xi, ratio);
    std::vector<double> exact;
    try {
        exact = analytic_levels(p, c.levels);
        for (std::size_t k = 0; k < exact.size(); ++k) r.rows.push_back(analytic(ratio, level_name(k), exact[k]));
    } catch (const std::exception& e) {
        r.rows.push_back(failure(ratio, "E", "analytic", e));
        r.failed = true;
    }
    if (!c.oracle) return r;

    auto emit = [&](const std::vector<double>& levels, int cutoff, std::optional<double> tol, const std::string& err) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(c.levels); ++k) {
            if (k < levels.size())
                r.rows.push_back({ratio, level_name(k), levels[k], "oracle", cutoff, tol, err});
            else
                r.rows.push_back({ratio, level_name(k), std::nullopt, "oracle", cutoff, tol,
                                  err.empty() ? "SolverFailure" : err});
        }
    };
    try {
        if (c.cutoff) {
            emit(tracked_levels(p, c.levels, *c.cutoff), *c.cutoff, std::nullopt, {});
        } else {
            const auto rep = converged_spectrum(p, c.levels, c.tol, oracle_options(c));
            emit(rep.final_levels(), rep.final_cutoff, c.tol, {});
        }
    } catch (const CutoffCeilingError& e) {
        emit(e.report().final_levels(), e.report().final_cutoff, c.tol, to_string(e.code()));
        r.failed = true;
    } catch (const std::exception& e) {
        r.rows.push_back(failure(ratio, "E", "oracle", e));
        r.failed = true;
    }
    return r;
}

void push_record(std::vector<Row>& rows, const ObservableRecord& rec, const std::string& state,
                 std::optional<double> tol, const std::string& err) {
    const char* src = to_string(rec.source);
    auto add = [&](const std::string& q, std::optional<double> v) {
        std::string e = err;
        if (!v && e.empty()) e = "ZeroMeanOccupation";
        rows.push_back({rec.ratio, q + ":" + state, v, src, rec.cutoff, tol, e});
    };
    add("energy", rec.energy);
    add("Lz", rec.lz_mean);
    add("dx", rec.dx);
    add("dp", rec.dp);
    add("Q_r", rec.q_r);
    add("Q_l", rec.q_l);
}

PointResult observables_point(const SweepConfig& c, double ratio) {
    PointResult r;
    const auto p = ModelParams::from_ratio(c.xi, ratio);
    for (const auto& label : c.states) {
        const std::string name = describe(label);
        try {
            push_record(r.rows, analytic_record(p, label), name, std::nullopt, {});
        } catch (const std::exception& e) {
            r.rows.push_back(failure(ratio, "observables:" + name, "analytic", e));
            r.failed = true;
            continue;
        }
        if (!c.oracle) continue;
        try {
            const auto os = oracle_state(c, p, label);
            push_record(r.rows, oracle_record(p, label, *os.state), name, os.tolerance, os.error);
            if (!os.error.empty()) r.failed = true;
        } catch (const std::exception& e) {
            r.rows.push_back(failure(ratio, "observables:" + name, "oracle", e));
            r.failed = true;
        }
    }
    return r;
}

PointResult entanglement_point(const SweepConfig& c, double ratio) {
    PointResult r;
    const auto p = ModelParams::from_ratio(c.xi, ratio);
    const double unit = c.bits ? 1.0 / std::log(2.0) : 1.0;
    const std::string suffix = c.bits ? "[bits]" : "";
    try {
        for (auto s : {Subsystem::LeftMode, Subsystem::RightMode, Subsystem::Spin})
            r.rows.push_back(analytic(ratio, std::string("S_") + to_string(s) + suffix,
                                      von_neumann_entropy(reduced_density(p, s), c.bits)));
        if (classify(p) == Regime::LeftHanded) r.rows.push_back(analytic(ratio, "T_eff", effective_temperature(p)));
    } catch (const std::exception& e) {
        r.rows.push_back(failure(ratio, "S", "analytic", e));
        r.failed = true;
        return r;
    }
    if (!c.oracle) return r;
    try {
        const auto os = oracle_state(c, p, StateLabel::ground());
        const FockBasis basis(os.state->cutoff);
        for (auto s : {Subsystem::LeftMode, Subsystem::RightMode, Subsystem::Spin}) {
            const double v = von_neumann_entropy(oracle_partial_trace(os.state->vector, basis, s)) * unit;
            r.rows.push_back({ratio, std::string("S_") + to_string(s) + suffix, v, "oracle", os.state->cutoff,
                              os.tolerance, os.error});
        }
        if (!os.error.empty()) r.failed = true;
    } catch (const std::exception& e) {
        r.rows.push_back(failure(ratio, "S", "oracle", e));
        r.failed = true;
    }
    return r;
}

PointResult oracle_check_point(const SweepConfig& c, double ratio) {
    PointResult r;
    const auto p = ModelParams::from_ratio(c.xi, ratio);
    try {
        const auto exact = analytic_levels(p, c.levels);
        ConvergenceReport rep;
        std::string err;
        try {
            rep = converged_spectrum(p, c.levels, c.tol, oracle_options(c));
        } catch (const CutoffCeilingError& e) {
            rep = e.report();
            err = to_string(e.code());
        }
        const auto& numeric = rep.final_levels();
        for (std::size_t k = 0; k < exact.size(); ++k) {
            r.rows.push_back(analytic(ratio, level_name(k), exact[k]));
            if (k >= numeric.size()) {
                r.rows.push_back({ratio, level_name(k), std::nullopt, "oracle", rep.final_cutoff, c.tol,
                                  err.empty() ? "SolverFailure" : err});
                r.summary.push_back("ratio " + fmt(ratio) + " " + level_name(k) + " missing from the oracle spectrum");
                r.failed = true;
                continue;
            }
            const double diff = std::abs(numeric[k] - exact[k]);
            std::string row_err = err;
            if (row_err.empty() && !(diff <= c.tol)) row_err = "exceeds tolerance";
            if (!row_err.empty()) r.failed = true;
            r.rows.push_back({ratio, level_name(k), numeric[k], "oracle", rep.final_cutoff, c.tol, row_err});
            r.summary.push_back("ratio " + fmt(ratio) + " " + level_name(k) + " |analytic - oracle| = " + fmt(diff) +
                                " at N=" + std::to_string(rep.final_cutoff) + (row_err.empty() ? "  ok" : "  " + row_err));
        }
    } catch (const std::exception& e) {
        r.rows.push_back(failure(ratio, "E", "oracle", e));
        r.failed = true;
    }
    return r;
}

SweepResult gap_fit(const SweepConfig& c) {
    SweepResult out;
    std::vector<double> left, right;
    for (double x : c.ratios) (x < 1.0 ? left : right).push_back(x);
    if (!left.empty() && !right.empty())
        throw Error(ErrorCode::MixedSides, "gap fit grid straddles the critical point");
    const Side side = left.empty() ? Side::Right : Side::Left;
    const auto fit = fit_gap_exponent(c.xi, c.ratios, side);
    for (const auto& pt : fit.points) {
        out.rows.push_back(analytic(pt.ratio, "log_gap", pt.log_gap));
        out.rows.push_back(analytic(pt.ratio, "log_distance", pt.log_distance));
        out.rows.push_back(analytic(pt.ratio, "residual", pt.residual));
    }
    const double anchor = c.ratios.front();
    out.rows.push_back(analytic(anchor, "exponent", fit.exponent));
    out.rows.push_back(analytic(anchor, "exponent_ci95_halfwidth", fit.ci95_halfwidth));
    out.rows.push_back(analytic(anchor, "residual_rms", fit.residual_rms));
    std::ostringstream s;
    s << (side == Side::Left ? "left" : "right") << " side: exponent " << fmt(fit.exponent) << " +- "
      << fmt(fit.ci95_halfwidth) << " (95%), residual rms " << fmt(fit.residual_rms);
    out.summary.push_back(s.str());
    return out;
}

}  // namespace

const char* to_string(Output o) noexcept {
    switch (o) {
        case Output::Spectrum: return "spectrum";
        case Output::Observables: return "observables";
        case Output::Entanglement: return "entanglement";
        case Output::GapFit: return "gapfit";
        case Output::OracleCheck: return "oracle-check";
    }
    return "?";
}

Output parse_output(std::string_view name) {
    for (Output o : {Output::Spectrum, Output::Observables, Output::Entanglement, Output::GapFit, Output::OracleCheck})
        if (name == to_string(o)) return o;
    throw Error(ErrorCode::ConfigError, "unknown output '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw Error(ErrorCode::ConfigError, "unknown format '" + std::string(name) + "'");
}

std::vector<double> parse_grid(std::string_view spec) {
    const std::string s = trim(spec);
    if (s.empty()) throw Error(ErrorCode::ConfigError, "empty ratio grid");
    std::vector<double> grid;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw Error(ErrorCode::ConfigError, "grid must be start:stop:count");
        const double a = parse_number(parts[0]), b = parse_number(parts[1]);
        const double n = parse_number(parts[2]);
        if (n < 1 || n != std::floor(n)) throw Error(ErrorCode::ConfigError, "grid count must be a positive integer");
        if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::ConfigError, "grid ratios must be positive");
        const int count = static_cast<int>(n);
        for (int i = 0; i < count; ++i)
            grid.push_back(count == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (count - 1)));
    } else {
        for (const auto& item : split(s, ',')) grid.push_back(parse_number(item));
    }
    for (double x : grid)
        if (!(x > 0.0)) throw Error(ErrorCode::ConfigError, "grid ratios must be positive");
    return grid;
}

std::vector<StateLabel> parse_states(std::string_view spec) {
    std::vector<StateLabel> out;
    for (const auto& item : split(spec, ',')) {
        if (item == "ground") {
            out.push_back(StateLabel::ground());
        } else if (item == "unpaired") {
            out.push_back(StateLabel::unpaired());
        } else if (item.size() >= 2 && (item[0] == '+' || item[0] == '-')) {
            const double n = parse_number(item.substr(1));
            if (n < 0 || n != std::floor(n)) throw Error(ErrorCode::ConfigError, "bad state '" + item + "'");
            out.push_back(StateLabel::doublet(item[0] == '+' ? Branch::Positive : Branch::Negative, static_cast<int>(n)));
        } else {
            throw Error(ErrorCode::ConfigError, "bad state '" + item + "'");
        }
    }
    return out;
}

void validate(const SweepConfig& c) {
    if (!(c.xi > 0.0)) throw Error(ErrorCode::ConfigError, "xi must be positive");
    if (c.ratios.empty()) throw Error(ErrorCode::ConfigError, "empty ratio grid");
    for (double x : c.ratios)
        if (!(x > 0.0)) throw Error(ErrorCode::ConfigError, "grid ratios must be positive");
    if (c.levels < 1) throw Error(ErrorCode::ConfigError, "levels must be at least 1");
    if (!(c.tol > 0.0)) throw Error(ErrorCode::ConfigError, "tol must be positive");
    if (c.cutoff && *c.cutoff < 1) throw Error(ErrorCode::ConfigError, "cutoff must be at least 1");
    if (c.max_cutoff < 10) throw Error(ErrorCode::ConfigError, "max cutoff must be at least 10");
    if (c.output == Output::Observables && c.states.empty())
        throw Error(ErrorCode::ConfigError, "no states selected");
}

SweepResult run_sweep(const SweepConfig& config) {
    validate(config);
    if (config.output == Output::GapFit) return gap_fit(config);

    auto evaluate = [&config](double ratio) -> PointResult {
        try {
            switch (config.output) {
                case Output::Spectrum: return spectrum_point(config, ratio);
                case Output::Observables: return observables_point(config, ratio);
                case Output::Entanglement: return entanglement_point(config, ratio);
                case Output::OracleCheck: return oracle_check_point(config, ratio);
                case Output::GapFit: break;
            }
        } catch (const std::exception& e) {
            return {{failure(ratio, "point", "analytic", e)}, true, {}};
        }
        return {};
    };
    const auto points = ordered_parallel_map(config.ratios, evaluate, config.threads);

    SweepResult out;
    for (const auto& p : points) {
        out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
        out.summary.insert(out.summary.end(), p.summary.begin(), p.summary.end());
        if (p.failed) ++out.failed_points;
    }
    return out;
}

void write_rows(std::ostream& out, const std::vector<Row>& rows, Format format) {
    if (format == Format::Json) {
        nlohmann::ordered_json doc;
        doc["tool"] = "chiral-qpt";
        doc["version"] = kToolVersion;
        doc["schema"] = kSchemaVersion;
        auto& arr = doc["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j;
            j["ratio"] = r.ratio;
            j["quantity"] = r.quantity;
            j["value"] = r.value ? nlohmann::ordered_json(*r.value) : nullptr;
            j["source"] = r.source;
            j["cutoff"] = r.cutoff;
            j["tolerance"] = r.tolerance ? nlohmann::ordered_json(*r.tolerance) : nullptr;
            j["error"] = r.error;
            arr.push_back(std::move(j));
        }
        out << doc.dump(1) << '\n';
        return;
    }
    out << "# chiral-qpt v" << kToolVersion << " schema=" << kSchemaVersion << '\n';
    out << "ratio,quantity,value,source,cutoff,tolerance,error\n";
    for (const auto& r : rows) {
        out << fmt(r.ratio) << ',' << r.quantity << ',' << (r.value ? fmt(*r.value) : "") << ',' << r.source << ','
            << r.cutoff << ',' << (r.tolerance ? fmt(*r.tolerance) : "") << ',' << r.error << '\n';
    }
}

}  // namespace chiral
