#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glp/process.hpp"
#include "glp/run.hpp"

namespace glp {

struct DerivedConstants {
    double p = 0;
    double c_p = 0;                 // 1 - p/2
    double clique_exponent = 0;     // (1 - eps)(1 - p)/(2 - p)
    double triangle_exponent = 0;   // 3(1 - p)/(2 - p)
    double powerlaw_exponent_hint = 0;  // 1 + 2/(2 - p), heuristic only
};

DerivedConstants derived_constants(double p, double eps = 0.1);

inline double c_p(double p) noexcept { return 1.0 - p / 2.0; }

/// prod_{s=1}^{t-1} (1 + c_p/s) = Gamma(t + c_p) / (Gamma(1 + c_p) Gamma(t)).
/// Direct product up to t = 1000, log-Gamma differences above.
double phi(Time t, double p);

/// Martingale normalizer for the exact process, whose total degree at time
/// s is 2(s + 1): prod_{s=0}^{t-1} (1 + c_p/(s + 1)) = phi(t + 1).
/// E[d_t(1)] = 2 phi_exact(t).
double phi_exact(Time t, double p);

struct DriftEstimate {
    VertexId vertex = 0;
    double expected = 0;  // (2 - p) d / D
    double mean = 0;
    double std_error = 0;
    double z = 0;
};

/// Monte Carlo estimate of E[d_{t+1}(v) - d_t(v)] over `trials` independent
/// single steps drawn on the frozen graph.
std::vector<DriftEstimate> drift_check(const GlpGraph& graph,
                                       std::span<const VertexId> vertices,
                                       std::size_t trials,
                                       Rng& rng);

struct MartingalePoint {
    Time t = 0;
    double mean_ratio = 0;  // mean of d_t(1) / phi_exact(t)
    double std_error = 0;
    double ci_low = 0;
    double ci_high = 0;
    double relative_drift = 0;  // (mean_ratio - 2) / 2
};

struct MartingaleReport {
    double p = 0;
    std::size_t replicas = 0;
    std::vector<MartingalePoint> points;  // first entry is t = 0
    double max_relative_drift = 0;
};

/// Tracks d_t(1)/phi_exact(t) over `replicas` runs seeded base_seed + r.
/// Needs at least 30 replicas for the normal-approximation interval.
MartingaleReport martingale_check(double p,
                                  std::span<const Time> checkpoints,
                                  std::size_t replicas,
                                  std::uint64_t base_seed,
                                  double ci_z = 1.96);

/// C1 t^{c_p} sqrt(log t / j^{1-p}).
double upper_bound_threshold(Time t, double p, double c1, VertexId j);

/// Vertices whose degree reaches the upper-bound envelope at constant C1.
/// Requires t >= 2.
std::vector<VertexId> upper_bound_check(const GlpGraph& graph, double c1);

struct SeriesPoint {
    Time t = 0;
    double mean = 0;
    double std_error = 0;
    std::size_t count = 0;
};

/// Mean max degree per snapshot time across replicas. Every replica must
/// carry the same snapshot times; at least 3 of them spanning two decades.
std::vector<SeriesPoint> max_degree_series(std::span<const std::vector<Snapshot>> replicas);

struct ExponentFit {
    double estimate = 0;
    double std_error = 0;
    std::size_t sample_count = 0;
    std::vector<std::pair<double, double>> points;  // (log t, log statistic)
};

/// Least-squares slope of log(mean) against log(t).
ExponentFit fit_exponent(std::span<const SeriesPoint> series);
ExponentFit fit_loglog(std::span<const std::pair<double, double>> points);

struct DegreeHistogram {
    std::map<Degree, std::size_t> counts;

    std::size_t vertex_count() const noexcept;
    Degree degree_sum() const noexcept;
};

DegreeHistogram degree_histogram(const GlpGraph& graph);
DegreeHistogram degree_histogram(std::span<const Degree> degrees);

/// Hurwitz zeta sum_{k>=0} (q + k)^{-s} for s > 1, q >= 1.
double hurwitz_zeta(double s, double q);

/// Discrete power-law MLE for the tail exponent over degrees >= x_min.
/// Throws StatisticsError with fewer than 100 tail samples or when every
/// tail sample is identical.
ExponentFit fit_power_law(const DegreeHistogram& hist, Degree x_min = 10);

struct FitRow {
    double p = 0;
    std::uint64_t seed = 0;
    Time t = 0;
    std::string statistic;
    double estimate = 0;
    double std_error = 0;
};

void write_fit_csv(std::span<const FitRow> rows, std::ostream& out);

}  // namespace glp
