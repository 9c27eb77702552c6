#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glp/process.hpp"

namespace glp {

inline constexpr const char* kReportSchema = "glp-report/1";
inline constexpr const char* kVersion = "glp 1.0.0";

struct EnsembleConfig {
    std::string experiment = "ensemble";
    std::vector<double> p_grid{0.5};
    Time steps = 100000;
    std::size_t replicas = 10;
    std::uint64_t base_seed = 0;
    std::size_t threads = 1;
    std::vector<Time> snapshot_times;  // empty: decades 10, 100, ... up to steps, plus steps

    bool triangles = false;
    bool clique = false;
    std::size_t clique_k = 64;
    bool power_law = false;
    Degree x_min = 10;
    bool upper_bound = false;
    double c1 = 4.0;

    double min_success_fraction = 1.0;
    // Dispatch replicas in a permuted order; results must not change.
    bool permute_execution = false;

    void validate() const;
    std::vector<Time> effective_snapshots() const;

    friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

struct MetricRow {
    double p = 0;
    std::uint64_t seed = 0;
    std::size_t replica = 0;
    Time t = 0;
    std::string metric;
    double value = 0;

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct AggregateRow {
    double p = 0;
    Time t = 0;
    std::string metric;
    double mean = 0;
    double std_error = 0;
    std::size_t count = 0;

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct ReplicaFailure {
    double p = 0;
    std::uint64_t seed = 0;
    std::size_t replica = 0;
    std::string error;

    friend bool operator==(const ReplicaFailure&, const ReplicaFailure&) = default;
};

struct EnsembleReport {
    std::string schema = kReportSchema;
    std::string version = kVersion;
    std::optional<std::string> timestamp;  // the only non-reproducible field; unset by default
    EnsembleConfig config;
    std::vector<MetricRow> rows;
    std::vector<AggregateRow> aggregates;
    std::vector<ReplicaFailure> failures;
    std::size_t attempted = 0;
    bool gate_passed = true;

    friend bool operator==(const EnsembleReport&, const EnsembleReport&) = default;
};

/// Mergeable mean/variance accumulator.
struct Accumulator {
    std::size_t count = 0;
    double sum = 0;
    double sum_sq = 0;

    void add(double x) noexcept
    {
        ++count;
        sum += x;
        sum_sq += x * x;
    }
    Accumulator& merge(const Accumulator& o) noexcept
    {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
        return *this;
    }
    double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
    double std_error() const noexcept;
};

/// Metrics of one replica (p, seed = base_seed + replica). Throws on failure.
std::vector<MetricRow> replica_metrics(const EnsembleConfig& config, double p, std::size_t replica);

/// Per-(p, t, metric) aggregates, derived from rows in (p, metric, t, seed) order.
std::vector<AggregateRow> aggregate(std::span<const MetricRow> rows);

/// Runs every (p, replica) pair on up to config.threads workers. Failed
/// replicas are recorded and excluded. Throws StatisticsError if none
/// succeed.
EnsembleReport run_ensemble(const EnsembleConfig& config);

void write_report(const EnsembleReport& report, std::ostream& out);
void write_report(const EnsembleReport& report, const std::string& path);
/// Throws ParseError naming the line (syntax) or field (schema) at fault.
EnsembleReport read_report(std::istream& in);
EnsembleReport read_report(const std::string& path);

/// Columns: p,seed,replica,t,metric,value.
void write_rows_csv(std::span<const MetricRow> rows, std::ostream& out);

/// `<experiment>_<p>_<steps>` for the given grid point.
std::string output_stem(const std::string& experiment, double p, Time steps);

/// Writes `<dir>/<stem>.json` and `.csv` for every p in the grid; returns
/// the stems written.
std::vector<std::string> write_outputs(const EnsembleReport& report, const std::string& dir);

}  // namespace glp
