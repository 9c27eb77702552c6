#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "glp/process.hpp"
#include "glp/rng.hpp"

namespace glp {

/// First-passage times of one block: hit_times[i] is the first t with block
/// degree >= block.thresholds[i], or nullopt if not reached by run end.
struct HittingRecord {
    BlockSpec block;
    std::vector<std::optional<Time>> hit_times;
    Time run_end = 0;
};

/// Maintains block degrees inline with the generator.
///
/// Each appended endpoint costs one bounds check plus one increment per
/// watched block containing it. Threshold semantics are "block degree >= k",
/// so a loop that jumps the degree by 2 cannot skip a threshold.
class BlockTracker {
public:
    /// Throws ConfigError on duplicate (j, m) pairs.
    explicit BlockTracker(std::vector<BlockSpec> blocks);

    /// Seeds block degrees from the graph's current state (normally G0).
    void attach(const GlpGraph& graph);

    void on_step(const GlpGraph& graph, const StepOutcome& outcome) noexcept
    {
        add_endpoint(outcome.u, graph.t());
        add_endpoint(outcome.v, graph.t());
    }
    void operator()(const GlpGraph& graph, const StepOutcome& outcome) noexcept { on_step(graph, outcome); }

    std::size_t size() const noexcept { return blocks_.size(); }
    Degree block_degree(std::size_t b) const { return degree_.at(b); }
    bool all_reached() const noexcept { return pending_ == 0; }

    std::vector<HittingRecord> records(Time run_end) const;

private:
    void add_endpoint(VertexId v, Time t) noexcept
    {
        if (v > limit_) {
            return;
        }
        for (std::uint32_t i = member_offset_[v]; i < member_offset_[v + 1]; ++i) {
            const std::uint32_t b = members_[i];
            const Degree d = ++degree_[b];
            record(b, d, t);
        }
    }

    void record(std::uint32_t b, Degree d, Time t) noexcept
    {
        auto& next = next_[b];
        const auto& thr = blocks_[b].thresholds;
        while (next < thr.size() && d >= thr[next]) {
            hits_[b][next] = t;
            ++next;
            --pending_;
        }
    }

    std::vector<BlockSpec> blocks_;
    VertexId limit_ = 0;
    std::vector<std::uint32_t> member_offset_;
    std::vector<std::uint32_t> members_;
    std::vector<Degree> degree_;
    std::vector<std::size_t> next_;
    std::vector<std::vector<std::optional<Time>>> hits_;
    std::size_t pending_ = 0;
};

/// Sum of the member degrees of a block at the graph's current time.
Degree block_degree(const GlpGraph& graph, const BlockSpec& block);

/// Runs one replica of the process to `until`, stopping early once every
/// threshold has been hit.
std::vector<HittingRecord> track_blocks(double p, std::uint64_t seed, Time until, std::span<const BlockSpec> blocks);

/// Parameters of the exponential-product law that dominates block hitting
/// times. `gamma` must lie in (0, 1/c_p - 1).
struct DominatingLawParams {
    double p = 0.5;
    std::uint32_t m = 1;
    std::uint32_t j = 1;
    Degree k = 1;
    double gamma = 0.5;

    static double default_gamma(double p) noexcept;

    void validate() const;
    double c_p() const noexcept { return 1.0 - p / 2.0; }
    double delta(Degree i) const noexcept;
    /// Rate of eta_i: c_p (1 - delta_i) i.
    double rate(Degree i) const noexcept;
};

/// 1 + (jm - 1) i.i.d. geometric(p) inter-arrival times; stochastically
/// dominates the time at which block j of width m first has degree m.
/// Throws ParameterError for p = 0.
Time sample_arrival(std::uint32_t j, std::uint32_t m, double p, Rng& rng);

/// sample_arrival(j, m, p) * exp(eta_m + ... + eta_{k-1}), eta_i independent
/// exponentials with rate c_p (1 - delta_i) i.
///
/// The factor for index i carries the block from degree i to i + 1, so the
/// product targets degree k. The standard statement sums i = m..k to reach
/// k + 1; this is the same law shifted by one.
double sample_dominating(const DominatingLawParams& params, Rng& rng);

/// Closed-form moments of sample_arrival.
double arrival_mean(std::uint32_t j, std::uint32_t m, double p);
double arrival_second_moment(std::uint32_t j, std::uint32_t m, double p);

struct SurvivalPoint {
    Time t = 0;
    double survival = 0;
    double std_error = 0;
    std::size_t samples = 0;
};

/// P(X > t) on the grid with binomial standard errors. Censored (nullopt)
/// samples count as exceeding every grid point, so the grid must not
/// extend past the censoring time.
std::vector<SurvivalPoint> survival_curve(std::span<const std::optional<Time>> samples, std::span<const Time> grid);
std::vector<SurvivalPoint> survival_curve(std::span<const double> samples, std::span<const Time> grid);

struct DominationPoint {
    Time t = 0;
    double empirical = 0;
    double dominating = 0;
    double joint_stderr = 0;
    bool holds = false;
};

struct DominationReport {
    DominatingLawParams law;
    std::vector<DominationPoint> points;
    double sigmas = 3.0;
    bool holds = false;
};

/// Smallest block index the domination bound is stated for: m^{2/(1-p)} + 1.
double min_block_index(std::uint32_t m, double p) noexcept;

/// Throws PreconditionError if j < m^{2/(1-p)} + 1 or k < m.
void check_domination_hypothesis(const DominatingLawParams& law);

/// Checks S_emp(t) <= S_dom(t) + sigmas * joint SE at every grid point.
/// The astronomically small additive error term of the bound is ignored.
DominationReport domination_test(const DominatingLawParams& law,
                                 std::span<const std::optional<Time>> empirical,
                                 std::span<const double> dominating,
                                 std::span<const Time> grid,
                                 double sigmas = 3.0);

struct LowerTailPoint {
    Time t = 0;
    Degree threshold = 0;  // ceil(t^beta)
    double probability = 0;
    double std_error = 0;
};

/// Estimates P(d_{t,m}(j) < t^beta) at each time over `replicas` seeded runs.
std::vector<LowerTailPoint> lower_tail_curve(double p,
                                             std::uint32_t j,
                                             std::uint32_t m,
                                             double beta,
                                             std::span<const Time> times,
                                             std::size_t replicas,
                                             std::uint64_t base_seed);

}  // namespace glp
