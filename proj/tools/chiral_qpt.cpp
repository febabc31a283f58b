// chiral-qpt: ratio sweeps of the planar Dirac oscillator in a magnetic field.
//
//   chiral-qpt spectrum --xi 0.4 --ratios 0.1:4.0:40 --levels 4
//   chiral-qpt oracle-check --xi 0.4 --ratio 0.25 --tol 1e-6
//   chiral-qpt gapfit --side right
//
// Exit status: 0 success, 1 configuration error, 2 runtime error,
// 3 some grid points failed (recorded in the error column).

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "chiral/error.hpp"
#include "chiral/sweep.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kPartial = 3 };

bool is_config_error(chiral::ErrorCode code) {
    using chiral::ErrorCode;
    return code == ErrorCode::ConfigError || code == ErrorCode::InvalidParams || code == ErrorCode::MixedSides ||
           code == ErrorCode::InsufficientGrid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact chiral quantum phase transition of the planar Dirac oscillator, with an "
                 "exact-diagonalization cross-check"};
    app.set_version_flag("--version", std::string("chiral-qpt ") + chiral::kToolVersion);
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.fallthrough();
    app.require_subcommand(1);

    double xi = 0.4;
    std::string ratios;
    int cutoff = 0;
    double tol = 1e-6;
    std::string format = "csv";
    std::string out;
    int levels = 6;
    std::string states = "ground,+0,-0";
    int max_cutoff = 60;
    unsigned threads = 0;
    bool no_oracle = false;
    bool bits = false;
    std::string side = "left";

    app.add_option("--xi", xi, "Dirac oscillator coupling hbar omega / mc^2")->capture_default_str();
    app.add_option("--ratios,--ratio", ratios, "start:stop:count (geometric) or a comma list of xi~/xi");
    app.add_option("--cutoff", cutoff, "fixed Fock cutoff N per mode (default: escalate until --tol)");
    app.add_option("--tol", tol, "oracle convergence tolerance")->capture_default_str();
    app.add_option("--format", format, "csv or json")->capture_default_str();
    app.add_option("--out", out, "output file (default: stdout)");
    app.add_option("--levels", levels, "number of lowest-|E| levels")->capture_default_str();
    app.add_option("--states", states, "states for observables: ground, unpaired, +n, -n")->capture_default_str();
    app.add_option("--max-cutoff", max_cutoff, "escalation ceiling")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0: all cores)");
    app.add_flag("--no-oracle", no_oracle, "analytic rows only");
    app.add_flag("--bits", bits, "entropies in bits instead of nats");
    app.add_option("--side", side, "gapfit default grid side: left or right")->capture_default_str();

    chiral::Output output = chiral::Output::Spectrum;
    for (auto o : {chiral::Output::Spectrum, chiral::Output::Observables, chiral::Output::Entanglement,
                   chiral::Output::GapFit, chiral::Output::OracleCheck}) {
        app.add_subcommand(chiral::to_string(o))->callback([&output, o] { output = o; });
    }
    app.get_subcommand("spectrum")->description("analytic and oracle energy levels");
    app.get_subcommand("observables")->description("<L_z>, Delta x, Delta p and Mandel Q per state");
    app.get_subcommand("entanglement")->description("ground-state entropies of l, r, spin and T_eff");
    app.get_subcommand("gapfit")->description("critical exponent of the gap on one side of ratio 1");
    app.get_subcommand("oracle-check")->description("per-level |analytic - oracle| against --tol");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        chiral::SweepConfig config;
        config.output = output;
        config.xi = xi;
        if (app.count("--ratios")) {
            config.ratios = chiral::parse_grid(ratios);
        } else if (output == chiral::Output::GapFit) {
            if (side != "left" && side != "right")
                throw chiral::Error(chiral::ErrorCode::ConfigError, "--side must be left or right");
            config.ratios = chiral::near_critical_grid(side == "left" ? chiral::Side::Left : chiral::Side::Right,
                                                       1e-3, 1e-1, 25);
        } else {
            config.ratios = chiral::parse_grid("0.25,0.5,2,4");
        }
        if (app.count("--cutoff")) config.cutoff = cutoff;
        config.tol = tol;
        config.format = chiral::parse_format(format);
        config.out = out;
        config.levels = levels;
        config.states = chiral::parse_states(states);
        config.max_cutoff = max_cutoff;
        config.threads = threads;
        config.oracle = !no_oracle;
        config.bits = bits;

        const auto result = chiral::run_sweep(config);

        if (config.out.empty()) {
            chiral::write_rows(std::cout, result.rows, config.format);
        } else {
            std::ofstream file(config.out);
            if (!file) throw chiral::Error(chiral::ErrorCode::IoError, "cannot open " + config.out);
            chiral::write_rows(file, result.rows, config.format);
            if (!file) throw chiral::Error(chiral::ErrorCode::IoError, "write failed: " + config.out);
        }
        for (const auto& line : result.summary) std::cerr << line << '\n';
        if (result.failed_points > 0) {
            std::cerr << result.failed_points << " of " << config.ratios.size()
                      << " grid points failed; see the error column\n";
            return kPartial;
        }
        return kOk;
    } catch (const chiral::Error& e) {
        std::cerr << "chiral-qpt: " << e.what() << '\n';
        return is_config_error(e.code()) ? kConfig : kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "chiral-qpt: " << e.what() << '\n';
        return kRuntime;
    }
}
