#include "glp/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace glp {

BlockTracker::BlockTracker(std::vector<BlockSpec> blocks) : blocks_(std::move(blocks))
{
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const BlockSpec& b : blocks_) {
        if (b.j == 0 || b.m == 0) {
            throw ParameterError("block index and width must be at least 1");
        }
        if (!seen.emplace(b.j, b.m).second) {
            throw ConfigError("duplicate block spec j=" + std::to_string(b.j) + " m=" + std::to_string(b.m));
        }
        if (!std::is_sorted(b.thresholds.begin(), b.thresholds.end())) {
            throw ParameterError("block thresholds must be sorted");
        }
        limit_ = std::max(limit_, b.last());
    }

    // CSR map vertex -> watched blocks containing it.
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(limit_) + 2, 0);
    for (const BlockSpec& b : blocks_) {
        for (VertexId v = b.first(); v <= b.last(); ++v) {
            ++counts[v + 1];
        }
    }
    member_offset_.assign(counts.size(), 0);
    for (std::size_t v = 1; v < counts.size(); ++v) {
        member_offset_[v] = member_offset_[v - 1] + counts[v];
    }
    members_.resize(member_offset_.back());
    auto fill = member_offset_;
    for (std::uint32_t bi = 0; bi < blocks_.size(); ++bi) {
        for (VertexId v = blocks_[bi].first(); v <= blocks_[bi].last(); ++v) {
            members_[fill[v]++] = bi;
        }
    }

    degree_.assign(blocks_.size(), 0);
    next_.assign(blocks_.size(), 0);
    hits_.resize(blocks_.size());
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        hits_[bi].assign(blocks_[bi].thresholds.size(), std::nullopt);
        pending_ += blocks_[bi].thresholds.size();
    }
}

void BlockTracker::attach(const GlpGraph& graph)
{
    for (std::uint32_t bi = 0; bi < blocks_.size(); ++bi) {
        degree_[bi] = glp::block_degree(graph, blocks_[bi]);
        record(bi, degree_[bi], graph.t());
    }
}

std::vector<HittingRecord> BlockTracker::records(Time run_end) const
{
    std::vector<HittingRecord> out;
    out.reserve(blocks_.size());
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        out.push_back({blocks_[bi], hits_[bi], run_end});
    }
    return out;
}

Degree block_degree(const GlpGraph& graph, const BlockSpec& block)
{
    Degree sum = 0;
    for (VertexId v = block.first(); v <= block.last() && graph.contains(v); ++v) {
        sum += graph.degree(v);
    }
    return sum;
}

std::vector<HittingRecord> track_blocks(double p, std::uint64_t seed, Time until, std::span<const BlockSpec> blocks)
{
    GlpGraph graph(p, seed);
    Rng rng(seed);
    BlockTracker tracker({blocks.begin(), blocks.end()});
    tracker.attach(graph);
    graph.reserve(until);
    while (graph.t() < until && !tracker.all_reached()) {
        const StepOutcome outcome = step(graph, rng);
        tracker.on_step(graph, outcome);
    }
    return tracker.records(until);
}

double DominatingLawParams::default_gamma(double p) noexcept
{
    const double c = 1.0 - p / 2.0;
    return std::min(0.5, 0.9 * (1.0 / c - 1.0));
}

void DominatingLawParams::validate() const
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw ParameterError("dominating law needs p in (0, 1]");
    }
    if (m == 0 || j == 0) {
        throw ParameterError("block index and width must be at least 1");
    }
    if (k < m) {
        throw ParameterError("threshold k must be at least the block width m");
    }
    const double upper = 1.0 / c_p() - 1.0;
    if (!(gamma > 0.0 && gamma < upper)) {
        throw ParameterError("gamma must lie in (0, " + std::to_string(upper) + "), got " + std::to_string(gamma));
    }
}

double DominatingLawParams::delta(Degree i) const noexcept
{
    return (1.0 - p) / (2.0 * (2.0 - p) * std::pow(static_cast<double>(i), gamma));
}

double DominatingLawParams::rate(Degree i) const noexcept
{
    return c_p() * (1.0 - delta(i)) * static_cast<double>(i);
}

Time sample_arrival(std::uint32_t j, std::uint32_t m, double p, Rng& rng)
{
    if (!(p > 0.0 && p <= 1.0)) {
        throw ParameterError("arrival times diverge for p = 0");
    }
    const std::uint64_t n = static_cast<std::uint64_t>(j) * m;
    if (n == 0) {
        throw ParameterError("j * m must be at least 1");
    }
    Time t = 1;
    for (std::uint64_t i = 1; i < n; ++i) {
        t += rng.geometric(p);
    }
    return t;
}

double sample_dominating(const DominatingLawParams& params, Rng& rng)
{
    params.validate();
    const auto arrival = static_cast<double>(sample_arrival(params.j, params.m, params.p, rng));
    double eta_sum = 0.0;
    for (Degree i = params.m; i < params.k; ++i) {
        eta_sum += rng.exponential(params.rate(i));
    }
    return arrival * std::exp(eta_sum);
}

double arrival_mean(std::uint32_t j, std::uint32_t m, double p)
{
    const double n = static_cast<double>(j) * m - 1.0;
    return 1.0 + n / p;
}

double arrival_second_moment(std::uint32_t j, std::uint32_t m, double p)
{
    // T = 1 + NB with NB a sum of n geometrics on {1, 2, ...}.
    const double n = static_cast<double>(j) * m - 1.0;
    const double mean = 1.0 + n / p;
    const double var = n * (1.0 - p) / (p * p);
    return var + mean * mean;
}

namespace {

template <class Exceeds>
std::vector<SurvivalPoint> survival_impl(std::size_t n, std::span<const Time> grid, Exceeds exceeds)
{
    if (n == 0) {
        throw StatisticsError("survival curve needs at least one sample");
    }
    std::vector<SurvivalPoint> out;
    out.reserve(grid.size());
    for (Time t : grid) {
        std::size_t above = 0;
        for (std::size_t i = 0; i < n; ++i) {
            above += exceeds(i, t) ? 1 : 0;
        }
        const double s = static_cast<double>(above) / static_cast<double>(n);
        out.push_back({t, s, std::sqrt(s * (1.0 - s) / static_cast<double>(n)), n});
    }
    return out;
}

}  // namespace

std::vector<SurvivalPoint> survival_curve(std::span<const std::optional<Time>> samples, std::span<const Time> grid)
{
    return survival_impl(samples.size(), grid, [&](std::size_t i, Time t) {
        return !samples[i].has_value() || *samples[i] > t;
    });
}

std::vector<SurvivalPoint> survival_curve(std::span<const double> samples, std::span<const Time> grid)
{
    return survival_impl(samples.size(), grid, [&](std::size_t i, Time t) {
        return samples[i] > static_cast<double>(t);
    });
}

double min_block_index(std::uint32_t m, double p) noexcept
{
    return std::pow(static_cast<double>(m), 2.0 / (1.0 - p)) + 1.0;
}

void check_domination_hypothesis(const DominatingLawParams& law)
{
    law.validate();
    const double jmin = min_block_index(law.m, law.p);
    if (static_cast<double>(law.j) < jmin) {
        throw PreconditionError("domination bound requires j >= m^(2/(1-p)) + 1 = " + std::to_string(jmin) +
                                ", got j=" + std::to_string(law.j));
    }
}

DominationReport domination_test(const DominatingLawParams& law,
                                 std::span<const std::optional<Time>> empirical,
                                 std::span<const double> dominating,
                                 std::span<const Time> grid,
                                 double sigmas)
{
    check_domination_hypothesis(law);
    const auto emp = survival_curve(empirical, grid);
    const auto dom = survival_curve(dominating, grid);
    DominationReport report{law, {}, sigmas, true};
    for (std::size_t g = 0; g < grid.size(); ++g) {
        DominationPoint pt;
        pt.t = grid[g];
        pt.empirical = emp[g].survival;
        pt.dominating = dom[g].survival;
        pt.joint_stderr = std::hypot(emp[g].std_error, dom[g].std_error);
        pt.holds = pt.empirical <= pt.dominating + sigmas * pt.joint_stderr;
        report.holds = report.holds && pt.holds;
        report.points.push_back(pt);
    }
    return report;
}

std::vector<LowerTailPoint> lower_tail_curve(double p,
                                             std::uint32_t j,
                                             std::uint32_t m,
                                             double beta,
                                             std::span<const Time> times,
                                             std::size_t replicas,
                                             std::uint64_t base_seed)
{
    if (times.empty() || replicas == 0) {
        throw StatisticsError("lower tail needs times and replicas");
    }
    // d_{t,m}(j) < t^beta  <=>  block has not reached ceil(t^beta) by time t.
    std::vector<Degree> thresholds;
    for (Time t : times) {
        thresholds.push_back(static_cast<Degree>(std::ceil(std::pow(static_cast<double>(t), beta))));
    }
    std::vector<Degree> sorted = thresholds;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const std::vector<BlockSpec> block{{j, m, sorted}};
    const Time until = *std::max_element(times.begin(), times.end());

    std::vector<std::size_t> below(times.size(), 0);
    for (std::size_t r = 0; r < replicas; ++r) {
        const auto rec = track_blocks(p, replica_seed(base_seed, r), until, block).front();
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto idx = static_cast<std::size_t>(
                std::lower_bound(sorted.begin(), sorted.end(), thresholds[i]) - sorted.begin());
            const auto& hit = rec.hit_times[idx];
            if (!hit || *hit > times[i]) {
                ++below[i];
            }
        }
    }
    std::vector<LowerTailPoint> out;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double q = static_cast<double>(below[i]) / static_cast<double>(replicas);
        out.push_back({times[i], thresholds[i], q, std::sqrt(q * (1.0 - q) / static_cast<double>(replicas))});
    }
    return out;
}

}  // namespace glp
