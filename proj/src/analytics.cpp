#include "glp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/tools/minima.hpp>

#include "glp/edge_io.hpp"

namespace glp {

DerivedConstants derived_constants(double p, double eps)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("p must lie in [0, 1]");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ParameterError("eps must lie in (0, 1)");
    }
    DerivedConstants d;
    d.p = p;
    d.c_p = c_p(p);
    d.clique_exponent = (1.0 - eps) * (1.0 - p) / (2.0 - p);
    d.triangle_exponent = 3.0 * (1.0 - p) / (2.0 - p);
    d.powerlaw_exponent_hint = 1.0 + 2.0 / (2.0 - p);
    return d;
}

double phi(Time t, double p)
{
    if (t == 0) {
        throw ParameterError("phi is defined for t >= 1");
    }
    const double c = c_p(p);
    if (t <= 1000) {
        double prod = 1.0;
        for (Time s = 1; s < t; ++s) {
            prod *= 1.0 + c / static_cast<double>(s);
        }
        return prod;
    }
    const auto x = static_cast<double>(t);
    return std::exp(std::lgamma(x + c) - std::lgamma(1.0 + c) - std::lgamma(x));
}

double phi_exact(Time t, double p) { return phi(t + 1, p); }

std::vector<DriftEstimate> drift_check(const GlpGraph& graph,
                                       std::span<const VertexId> vertices,
                                       std::size_t trials,
                                       Rng& rng)
{
    if (trials < 2) {
        throw StatisticsError("drift check needs at least two trials");
    }
    const auto total = static_cast<double>(graph.total_degree());
    std::vector<double> sum(vertices.size(), 0.0);
    std::vector<double> sum_sq(vertices.size(), 0.0);
    for (std::size_t n = 0; n < trials; ++n) {
        const StepOutcome o = draw_step(graph, rng);
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const double inc = (o.u == vertices[i] ? 1.0 : 0.0) + (o.v == vertices[i] ? 1.0 : 0.0);
            sum[i] += inc;
            sum_sq[i] += inc * inc;
        }
    }
    std::vector<DriftEstimate> out;
    const auto nt = static_cast<double>(trials);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        DriftEstimate e;
        e.vertex = vertices[i];
        e.expected = (2.0 - graph.p()) * static_cast<double>(graph.degree(vertices[i])) / total;
        e.mean = sum[i] / nt;
        const double var = (sum_sq[i] - nt * e.mean * e.mean) / (nt - 1.0);
        e.std_error = std::sqrt(std::max(var, 0.0) / nt);
        e.z = e.std_error > 0 ? (e.mean - e.expected) / e.std_error : 0.0;
        out.push_back(e);
    }
    return out;
}

MartingaleReport martingale_check(double p,
                                  std::span<const Time> checkpoints,
                                  std::size_t replicas,
                                  std::uint64_t base_seed,
                                  double ci_z)
{
    if (replicas < 30) {
        throw StatisticsError("martingale check needs at least 30 replicas for a normal-approximation interval");
    }
    if (checkpoints.empty() || !std::is_sorted(checkpoints.begin(), checkpoints.end()) || checkpoints.front() == 0) {
        throw ParameterError("checkpoints must be positive and sorted");
    }
    const Time until = checkpoints.back();
    std::vector<double> norm(checkpoints.size());
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        norm[i] = phi_exact(checkpoints[i], p);
    }
    std::vector<double> sum(checkpoints.size(), 0.0);
    std::vector<double> sum_sq(checkpoints.size(), 0.0);

    for (std::size_t r = 0; r < replicas; ++r) {
        const std::uint64_t seed = replica_seed(base_seed, r);
        GlpGraph graph(p, seed);
        Rng rng(seed);
        std::size_t next = 0;
        advance(graph, rng, until, [&](const GlpGraph& g, const StepOutcome&) {
            while (next < checkpoints.size() && checkpoints[next] == g.t()) {
                const double ratio = static_cast<double>(g.degrees()[0]) / norm[next];
                sum[next] += ratio;
                sum_sq[next] += ratio * ratio;
                ++next;
            }
        });
    }

    MartingaleReport report;
    report.p = p;
    report.replicas = replicas;
    report.points.push_back({0, 2.0, 0.0, 2.0, 2.0, 0.0});
    const auto n = static_cast<double>(replicas);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        MartingalePoint pt;
        pt.t = checkpoints[i];
        pt.mean_ratio = sum[i] / n;
        const double var = std::max(0.0, (sum_sq[i] - n * pt.mean_ratio * pt.mean_ratio) / (n - 1.0));
        pt.std_error = std::sqrt(var / n);
        pt.ci_low = pt.mean_ratio - ci_z * pt.std_error;
        pt.ci_high = pt.mean_ratio + ci_z * pt.std_error;
        pt.relative_drift = (pt.mean_ratio - 2.0) / 2.0;
        report.max_relative_drift = std::max(report.max_relative_drift, std::abs(pt.relative_drift));
        report.points.push_back(pt);
    }
    return report;
}

double upper_bound_threshold(Time t, double p, double c1, VertexId j)
{
    const auto x = static_cast<double>(t);
    return c1 * std::pow(x, c_p(p)) * std::sqrt(std::log(x) / std::pow(static_cast<double>(j), 1.0 - p));
}

std::vector<VertexId> upper_bound_check(const GlpGraph& graph, double c1)
{
    if (graph.t() < 2) {
        throw ParameterError("upper bound check needs t >= 2");
    }
    const auto x = static_cast<double>(graph.t());
    const double scale = c1 * std::pow(x, c_p(graph.p())) * std::sqrt(std::log(x));
    const double decay = (1.0 - graph.p()) / 2.0;
    std::vector<VertexId> violators;
    const auto degrees = graph.degrees();
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const auto j = static_cast<double>(i + 1);
        if (static_cast<double>(degrees[i]) >= scale / std::pow(j, decay)) {
            violators.push_back(static_cast<VertexId>(i + 1));
        }
    }
    return violators;
}

std::vector<SeriesPoint> max_degree_series(std::span<const std::vector<Snapshot>> replicas)
{
    if (replicas.empty()) {
        throw StatisticsError("max degree series needs at least one replica");
    }
    const auto& first = replicas.front();
    if (first.size() < 3 || first.front().t == 0 ||
        static_cast<double>(first.back().t) < 100.0 * static_cast<double>(first.front().t)) {
        throw ParameterError("max degree series needs >= 3 snapshot times spanning >= 2 decades");
    }
    std::vector<SeriesPoint> out;
    for (std::size_t i = 0; i < first.size(); ++i) {
        double sum = 0;
        double sum_sq = 0;
        for (const auto& rep : replicas) {
            if (rep.size() != first.size() || rep[i].t != first[i].t) {
                throw ParameterError("replicas carry different snapshot schedules");
            }
            const auto d = static_cast<double>(rep[i].max_degree);
            sum += d;
            sum_sq += d * d;
        }
        const auto n = static_cast<double>(replicas.size());
        SeriesPoint pt{first[i].t, sum / n, 0.0, replicas.size()};
        if (replicas.size() > 1) {
            pt.std_error = std::sqrt(std::max(0.0, (sum_sq - n * pt.mean * pt.mean) / (n - 1.0)) / n);
        }
        out.push_back(pt);
    }
    return out;
}

ExponentFit fit_loglog(std::span<const std::pair<double, double>> points)
{
    if (points.size() < 2) {
        throw StatisticsError("exponent fit needs at least two points");
    }
    const auto n = static_cast<double>(points.size());
    double mx = 0;
    double my = 0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) {
        throw StatisticsError("exponent fit: all abscissae coincide");
    }
    if (syy == 0.0) {
        throw StatisticsError("exponent fit: degenerate constant series");
    }
    ExponentFit fit;
    fit.estimate = sxy / sxx;
    fit.sample_count = points.size();
    fit.points.assign(points.begin(), points.end());
    if (points.size() > 2) {
        const double intercept = my - fit.estimate * mx;
        double rss = 0;
        for (const auto& [x, y] : points) {
            const double r = y - intercept - fit.estimate * x;
            rss += r * r;
        }
        fit.std_error = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

ExponentFit fit_exponent(std::span<const SeriesPoint> series)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : series) {
        if (s.t == 0 || !(s.mean > 0)) {
            throw StatisticsError("exponent fit needs positive times and statistics");
        }
        pts.emplace_back(std::log(static_cast<double>(s.t)), std::log(s.mean));
    }
    return fit_loglog(pts);
}

std::size_t DegreeHistogram::vertex_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [d, c] : counts) {
        n += c;
    }
    return n;
}

Degree DegreeHistogram::degree_sum() const noexcept
{
    Degree s = 0;
    for (const auto& [d, c] : counts) {
        s += d * c;
    }
    return s;
}

DegreeHistogram degree_histogram(std::span<const Degree> degrees)
{
    DegreeHistogram h;
    for (Degree d : degrees) {
        ++h.counts[d];
    }
    return h;
}

DegreeHistogram degree_histogram(const GlpGraph& graph) { return degree_histogram(graph.degrees()); }

double hurwitz_zeta(double s, double q)
{
    if (!(s > 1.0) || !(q > 0.0)) {
        throw ParameterError("hurwitz_zeta needs s > 1 and q > 0");
    }
    constexpr int kTerms = 12;
    double sum = 0.0;
    for (int k = 0; k < kTerms; ++k) {
        sum += std::pow(q + k, -s);
    }
    // Euler-Maclaurin tail from x = q + kTerms.
    const double x = q + kTerms;
    const double xs = std::pow(x, -s);
    double tail = x * xs / (s - 1.0) + 0.5 * xs;
    const double inv_x2 = 1.0 / (x * x);
    // B_{2j} / (2j)! for j = 1..4
    constexpr double kBernoulli[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
    double rising = s;          // s (s+1) ... (s+2j-2)
    double power = xs / x;      // x^{-s-2j+1}
    for (int j = 0; j < 4; ++j) {
        tail += kBernoulli[j] * rising * power;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        power *= inv_x2;
    }
    return sum + tail;
}

ExponentFit fit_power_law(const DegreeHistogram& hist, Degree x_min)
{
    if (x_min < 1) {
        throw ParameterError("x_min must be at least 1");
    }
    std::size_t n = 0;
    double log_sum = 0.0;
    std::size_t distinct = 0;
    for (auto it = hist.counts.lower_bound(x_min); it != hist.counts.end(); ++it) {
        n += it->second;
        log_sum += static_cast<double>(it->second) * std::log(static_cast<double>(it->first));
        distinct += it->second > 0 ? 1 : 0;
    }
    if (n < 100) {
        throw StatisticsError("power-law fit needs at least 100 tail samples, got " + std::to_string(n));
    }
    if (distinct < 2) {
        throw StatisticsError("power-law fit: all tail samples are identical");
    }
    const double mean_log = log_sum / static_cast<double>(n);
    const auto q = static_cast<double>(x_min);
    // Negative mean log-likelihood per sample.
    const auto nll = [&](double a) { return std::log(hurwitz_zeta(a, q)) + a * mean_log; };
    const auto [alpha, value] = boost::math::tools::brent_find_minima(nll, 1.0 + 1e-6, 30.0, 50);
    (void)value;

    // Fisher information per sample is Var_alpha[log x] = d^2/da^2 log zeta.
    const double h = 1e-4 * std::max(1.0, alpha - 1.0);
    const double lz = [&](double a) { return std::log(hurwitz_zeta(a, q)); }(alpha);
    const double lzp = std::log(hurwitz_zeta(alpha + h, q));
    const double lzm = std::log(hurwitz_zeta(std::max(alpha - h, 1.0 + 1e-9), q));
    const double var_log = (lzp - 2.0 * lz + lzm) / (h * h);

    ExponentFit fit;
    fit.estimate = alpha;
    fit.sample_count = n;
    fit.std_error = var_log > 0 ? 1.0 / std::sqrt(static_cast<double>(n) * var_log)
                                : std::numeric_limits<double>::infinity();
    return fit;
}

void write_fit_csv(std::span<const FitRow> rows, std::ostream& out)
{
    out << "p,seed,t,statistic,estimate,stderr\n";
    for (const auto& r : rows) {
        out << format_double(r.p) << ',' << r.seed << ',' << r.t << ',' << r.statistic << ','
            << format_double(r.estimate) << ',' << format_double(r.std_error) << '\n';
    }
}

}  // namespace glp
