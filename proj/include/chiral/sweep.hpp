/**
 * @file sweep.hpp
 * @brief Ratio sweeps behind the chiral-qpt command line: grid parsing,
 *        per-point evaluation (analytic and oracle), and deterministic
 *        CSV / JSON emission.
 *
 * Every emitted row is single-source (analytic or oracle). Points that fail
 * are kept as rows with an empty value and the failure in the error column.
 */
#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "chiral/model.hpp"
#include "chiral/su11.hpp"

namespace chiral {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Output { Spectrum, Observables, Entanglement, GapFit, OracleCheck };
enum class Format { Csv, Json };

const char* to_string(Output o) noexcept;
Output parse_output(std::string_view name);
Format parse_format(std::string_view name);

/// "start:stop:count" (geometric, endpoints included) or a comma list.
/// Throws ConfigError on an empty or non-positive grid.
std::vector<double> parse_grid(std::string_view spec);

/// "+0,-0,+1" style doublet selection; "ground" and "unpaired" are accepted.
std::vector<StateLabel> parse_states(std::string_view spec);

struct SweepConfig {
    double xi = 0.4;
    std::vector<double> ratios;
    int levels = 6;
    std::vector<StateLabel> states{StateLabel::ground(), StateLabel::doublet(Branch::Positive, 0),
                                   StateLabel::doublet(Branch::Negative, 0)};
    /// Fixed basis cutoff; adaptive escalation to `tol` when absent.
    std::optional<int> cutoff;
    double tol = 1e-6;
    int max_cutoff = 60;
    bool oracle = true;
    bool bits = false;
    Output output = Output::Spectrum;
    Format format = Format::Csv;
    std::string out;  // empty: stdout
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Throws ConfigError.
void validate(const SweepConfig& config);

struct Row {
    double ratio = 0.0;
    std::string quantity;
    std::optional<double> value;
    std::string source;  // "analytic" | "oracle"
    int cutoff = 0;
    std::optional<double> tolerance;
    std::string error;
};

struct SweepResult {
    std::vector<Row> rows;
    std::vector<std::string> summary;  // human-readable lines for stderr
    int failed_points = 0;
};

SweepResult run_sweep(const SweepConfig& config);

void write_rows(std::ostream& out, const std::vector<Row>& rows, Format format);

/// Applies `fn` to every item on up to `threads` workers; results keep input order.
template <class T, class Fn>
auto ordered_parallel_map(const std::vector<T>& items, Fn fn, unsigned threads = 0)
    -> std::vector<decltype(fn(items.front()))> {
    using R = decltype(fn(items.front()));
    std::vector<std::optional<R>> slots(items.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, items.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) slots[i].emplace(fn(items[i]));
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace chiral
