#pragma once

// Seeded, multi-threaded Monte Carlo experiments on self-intersection counts.
//
// Every replicate has its own random stream keyed by (derive_seed(base, n),
// replicate index), results land in an index-ordered buffer and are reduced
// in that order, so output does not depend on the thread count.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "sampler.hpp"

namespace eqwalk {

enum class ShapeKind { walk, polygon };
enum class PolygonSampler { conditional, mcmc };

inline const char* to_string(ShapeKind k) { return k == ShapeKind::walk ? "walk" : "polygon"; }
inline const char* to_string(PolygonSampler s) { return s == PolygonSampler::conditional ? "conditional" : "mcmc"; }

struct RunConfig {
    ShapeKind kind = ShapeKind::walk;
    std::vector<int> n_grid;
    int samples_per_n = 1000;
    std::uint64_t base_seed = 0;
    CountMethod counter = CountMethod::sweep;
    PolygonSampler polygon_sampler = PolygonSampler::conditional;
    int threads = 1;  ///< 0 means hardware concurrency
    bool timing = false;  ///< fill wall_ms (otherwise 0, keeping output reproducible)
};

inline void validate(const RunConfig& cfg)
{
    if (cfg.samples_per_n < 2) throw std::invalid_argument("samples_per_n must be >= 2");
    if (cfg.n_grid.empty()) throw std::invalid_argument("n_grid must not be empty");
    if (cfg.threads < 0) throw std::invalid_argument("threads must be >= 0");
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        const int n = cfg.n_grid[i];
        if (n < 1) throw std::invalid_argument("n_grid entries must be >= 1");
        if (cfg.kind == ShapeKind::polygon && n < 3) throw std::invalid_argument("polygon n_grid entries must be >= 3");
        if (i > 0 && n <= cfg.n_grid[i - 1]) throw std::invalid_argument("n_grid must be strictly increasing");
    }
}

/// One row of results: count statistics at one n plus the run metadata that
/// is persisted with it.
struct SummaryStats {
    int n = 0;
    long long samples = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased
    double std_error = 0.0;  ///< sqrt(variance / samples)
    long long min = 0;
    long long max = 0;
    std::string kind = "walk";
    std::uint64_t seed = 0;
    std::string counter = "sweep";
    std::string sampler = "iid";
    double wall_ms = 0.0;

    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// One-pass mean and variance (Welford), with integer min and max.
class StreamingStats {
public:
    void add(long long x)
    {
        ++count_;
        const double dx = static_cast<double>(x) - mean_;
        mean_ += dx / static_cast<double>(count_);
        m2_ += dx * (static_cast<double>(x) - mean_);
        min_ = count_ == 1 ? x : std::min(min_, x);
        max_ = count_ == 1 ? x : std::max(max_, x);
    }

    long long count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? std::max(0.0, m2_ / static_cast<double>(count_ - 1)) : 0.0; }

    SummaryStats summary(int n) const
    {
        SummaryStats s;
        s.n = n;
        s.samples = count_;
        s.mean = mean_;
        s.variance = variance();
        s.std_error = count_ > 0 ? std::sqrt(s.variance / static_cast<double>(count_)) : 0.0;
        s.min = min_;
        s.max = max_;
        return s;
    }

private:
    long long count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    long long min_ = 0;
    long long max_ = 0;
};

inline SummaryStats summarize(const std::vector<long long>& xs, int n)
{
    StreamingStats acc;
    for (long long x : xs) acc.add(x);
    return acc.summary(n);
}

inline int resolve_threads(int threads)
{
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs task(0..count-1) on `threads` workers. Tasks must write only to their
/// own slots. The first exception is rethrown after all workers stop.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task)
{
    threads = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Stream key for replicate r at step count n.
inline SeedSpec replicate_seed(std::uint64_t base, int n, std::uint64_t r)
{
    return {derive_seed(base, static_cast<std::uint64_t>(n)), r};
}

/// MCMC samples come from chains of this many consecutive states.
inline constexpr int kMcmcChainLength = 64;

namespace detail {

inline std::uint64_t mcmc_tag(int n) { return derive_seed(0x6d636d63ULL, static_cast<std::uint64_t>(n)); }

/// Self-intersection counts of `samples` independent shapes at one n.
inline std::vector<long long> simulate_counts(const RunConfig& cfg, int n)
{
    std::vector<long long> counts(static_cast<std::size_t>(cfg.samples_per_n));
    if (cfg.kind == ShapeKind::walk) {
        parallel_for(counts.size(), cfg.threads, [&](std::size_t r) {
            const Walk w = sample_walk(n, replicate_seed(cfg.base_seed, n, r));
            counts[r] = count_self_intersections(w, cfg.counter).count;
        });
    } else if (cfg.polygon_sampler == PolygonSampler::conditional) {
        const DensityTableSet tables = DensityTableSet::for_polygon(n);
        parallel_for(counts.size(), cfg.threads, [&](std::size_t r) {
            const Polygon p = sample_polygon_conditional(n, tables, replicate_seed(cfg.base_seed, n, r));
            counts[r] = count_self_intersections(p, cfg.counter).count;
        });
    } else {
        const std::size_t chains = (counts.size() + kMcmcChainLength - 1) / kMcmcChainLength;
        parallel_for(chains, cfg.threads, [&](std::size_t c) {
            const std::size_t first = c * kMcmcChainLength;
            const int length = static_cast<int>(std::min<std::size_t>(kMcmcChainLength, counts.size() - first));
            const SeedSpec seed{derive_seed(cfg.base_seed, mcmc_tag(n)), c};
            const auto polys = sample_polygons_mcmc(n, length, default_burn_in(n), default_stride(n), seed);
            for (int s = 0; s < length; ++s) counts[first + s] = count_self_intersections(polys[s], cfg.counter).count;
        });
    }
    return counts;
}

inline std::vector<SummaryStats> run_counts(const RunConfig& cfg)
{
    validate(cfg);
    std::vector<SummaryStats> rows;
    for (int n : cfg.n_grid) {
        const auto start = std::chrono::steady_clock::now();
        const auto counts = simulate_counts(cfg, n);
        SummaryStats row = summarize(counts, n);
        row.kind = to_string(cfg.kind);
        row.seed = cfg.base_seed;
        row.counter = to_string(cfg.counter);
        row.sampler = cfg.kind == ShapeKind::walk ? "iid" : to_string(cfg.polygon_sampler);
        if (cfg.timing) {
            row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// Per-n statistics of the self-intersection count K_n (walks) or K'_n (polygons).
inline std::vector<SummaryStats> run_mean_experiment(const RunConfig& cfg) { return detail::run_counts(cfg); }

/// Same sampling as the mean experiment; needs enough samples for a usable
/// sample variance.
inline std::vector<SummaryStats> run_variance_experiment(const RunConfig& cfg)
{
    if (cfg.samples_per_n < 200) throw std::invalid_argument("variance experiment needs samples_per_n >= 200");
    return detail::run_counts(cfg);
}

// --- E_m --------------------------------------------------------------------------

/// Frequency of the event that segments 1 and m+2 of an (m+2)-step walk cross,
/// simulated through the chord picture: the m middle steps give the chord
/// (R, Theta), and the end segments make independent uniform angles Psi, Phi
/// with it. Draw order per sample: m step angles, then Psi, then Phi.
inline SummaryStats estimate_em_probability(int m, long long samples, SeedSpec seed)
{
    if (m < 1) throw std::invalid_argument("estimate_em_probability: m must be >= 1");
    if (samples < 1000) throw std::invalid_argument("estimate_em_probability: samples must be >= 1000");
    CounterRng rng(seed);
    StreamingStats acc;
    for (long long s = 0; s < samples; ++s) {
        Point end{};
        for (int k = 0; k < m; ++k) end = end + unit(rng.angle());
        IntersectionGeometry g;
        g.r = norm(end);
        g.psi = rng.angle() - std::numbers::pi;
        g.phi = rng.angle() - std::numbers::pi;
        acc.add(g.r <= 2.0 && indicator(g) ? 1 : 0);
    }
    SummaryStats row = acc.summary(m);
    row.kind = "em";
    row.seed = seed.base_seed;
    row.counter = "predicate";
    row.sampler = "iid";
    return row;
}

// --- n log n regression -------------------------------------------------------------

struct NlognFit {
    double c = 0.0;  ///< slope of mean/n against ln n
    double b = 0.0;  ///< intercept
    double c_std_error = 0.0;
};

/// Least squares of mean/n = c ln n + b, weighted by 1 / (std_error/n)^2. When
/// some row has zero standard error the weights are undefined, so the fit is
/// unweighted and the slope error comes from the residuals.
inline NlognFit fit_nlogn_coefficient(const std::vector<SummaryStats>& rows)
{
    std::vector<double> xs, ys, ws;
    bool weighted = !rows.empty();
    for (const auto& r : rows) {
        if (r.n < 2) throw std::invalid_argument("fit_nlogn_coefficient: n must be >= 2");
        xs.push_back(std::log(static_cast<double>(r.n)));
        ys.push_back(r.mean / r.n);
        const double sigma = r.std_error / r.n;
        if (!(sigma > 0.0)) weighted = false;
        ws.push_back(sigma > 0.0 ? 1.0 / (sigma * sigma) : 1.0);
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw std::invalid_argument("fit_nlogn_coefficient: need at least 2 distinct n");
    if (!weighted) std::fill(ws.begin(), ws.end(), 1.0);

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
    }
    const double xbar = sx / sw, ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    NlognFit fit;
    fit.c = sxy / sxx;
    fit.b = ybar - fit.c * xbar;
    if (weighted) {
        fit.c_std_error = std::sqrt(1.0 / sxx);
    } else if (xs.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - fit.b - fit.c * xs[i];
            rss += e * e;
        }
        fit.c_std_error = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
    } else {
        fit.c_std_error = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

// --- covariance probes ------------------------------------------------------------

enum class GapPattern { nested, interleaved, disjoint };

inline const char* to_string(GapPattern p)
{
    switch (p) {
    case GapPattern::nested: return "nested";
    case GapPattern::interleaved: return "interleaved";
    default: return "disjoint";
    }
}

inline GapPattern parse_gap_pattern(const std::string& s)
{
    if (s == "nested") return GapPattern::nested;
    if (s == "interleaved") return GapPattern::interleaved;
    if (s == "disjoint") return GapPattern::disjoint;
    throw std::invalid_argument("unknown pattern '" + s + "' (expected nested, interleaved or disjoint)");
}

/// Four segment indices x1 < x2 < x3 < x4 with a, b, c steps strictly between
/// consecutive ones and d steps after the last (around the cycle back to x1
/// for polygons). The two intersection events pair them as
///   disjoint     (x1, x2) and (x3, x4)
///   nested       (x2, x3) inside (x1, x4)
///   interleaved  (x1, x3) and (x2, x4)
struct GapConfiguration {
    int a = 1, b = 1, c = 1, d = 1;
    GapPattern pattern = GapPattern::disjoint;

    int span() const { return a + b + c + d + 4; }

    std::array<int, 4> indices() const { return {1, a + 2, a + b + 3, a + b + c + 4}; }

    std::pair<int, int> first_pair() const
    {
        const auto x = indices();
        switch (pattern) {
        case GapPattern::nested: return {x[1], x[2]};
        case GapPattern::interleaved: return {x[0], x[2]};
        default: return {x[0], x[1]};
        }
    }

    std::pair<int, int> second_pair() const
    {
        const auto x = indices();
        switch (pattern) {
        case GapPattern::nested: return {x[0], x[3]};
        case GapPattern::interleaved: return {x[1], x[3]};
        default: return {x[2], x[3]};
        }
    }
};

struct CovarianceStdErrors {
    double p_first = 0.0;
    double p_second = 0.0;
    double p_joint = 0.0;
    double p_second_given_first = 0.0;
    double covariance = 0.0;
};

struct CovarianceProbeResult {
    long long samples = 0;
    double p_first = 0.0;
    double p_second = 0.0;  ///< marginal of the second event
    double p_joint = 0.0;
    double p_second_given_first = 0.0;
    double covariance = 0.0;  ///< p_joint - p_first * p_second
    CovarianceStdErrors std_errors;
    int first_gap = 0;   ///< steps strictly between the first event's segments
    int second_gap = 0;
    double predicted_first = 0.0;               ///< 2 / (pi^2 first_gap)
    double predicted_second_given_first = 0.0;  ///< walk prediction for the pattern; 0 if none
};

namespace detail {

inline bool steps_cross(std::span<const Point> v, int s, int t)
{
    return segments_properly_intersect({v[s - 1], v[s], s}, {v[t - 1], v[t], t});
}

inline void check_gaps(int n, const GapConfiguration& g, ShapeKind kind)
{
    if (g.a < 1 || g.b < 1 || g.c < 1 || g.d < 1) throw std::invalid_argument("all gaps must be >= 1");
    if (kind == ShapeKind::polygon && n != g.span()) {
        throw std::invalid_argument("polygon probes need n = a+b+c+d+4 = " + std::to_string(g.span()));
    }
    if (kind == ShapeKind::walk && n < g.span()) {
        throw std::invalid_argument("walk probes need n >= a+b+c+d+4 = " + std::to_string(g.span()));
    }
}

}  // namespace detail

/// Monte Carlo frequencies of the two intersection events of a gap pattern.
inline CovarianceProbeResult probe_covariance(int n, const GapConfiguration& g, long long samples, SeedSpec seed,
                                              ShapeKind kind = ShapeKind::walk,
                                              PolygonSampler sampler = PolygonSampler::conditional, int threads = 1)
{
    detail::check_gaps(n, g, kind);
    if (samples < 2) throw std::invalid_argument("probe_covariance: samples must be >= 2");
    const auto [s1, t1] = g.first_pair();
    const auto [s2, t2] = g.second_pair();
    std::vector<unsigned char> first(static_cast<std::size_t>(samples)), second(first.size());
    auto record = [&](std::size_t r, std::span<const Point> v) {
        first[r] = detail::steps_cross(v, s1, t1);
        second[r] = detail::steps_cross(v, s2, t2);
    };
    if (kind == ShapeKind::walk) {
        parallel_for(first.size(), threads, [&](std::size_t r) {
            const Walk w = sample_walk(n, {derive_seed(seed.base_seed, seed.replicate_index), r});
            record(r, w.vertices());
        });
    } else if (sampler == PolygonSampler::conditional) {
        const DensityTableSet tables = DensityTableSet::for_polygon(n);
        parallel_for(first.size(), threads, [&](std::size_t r) {
            const Polygon p = sample_polygon_conditional(n, tables, {derive_seed(seed.base_seed, seed.replicate_index), r});
            record(r, p.vertices());
        });
    } else {
        const std::size_t chains = (first.size() + kMcmcChainLength - 1) / kMcmcChainLength;
        parallel_for(chains, threads, [&](std::size_t c) {
            const std::size_t base = c * kMcmcChainLength;
            const int length = static_cast<int>(std::min<std::size_t>(kMcmcChainLength, first.size() - base));
            const auto polys = sample_polygons_mcmc(n, length, default_burn_in(n), default_stride(n),
                                                    {derive_seed(seed.base_seed, seed.replicate_index), c});
            for (int s = 0; s < length; ++s) record(base + s, polys[s].vertices());
        });
    }

    const double N = static_cast<double>(samples);
    double c1 = 0, c2 = 0, cj = 0;
    for (std::size_t r = 0; r < first.size(); ++r) {
        c1 += first[r];
        c2 += second[r];
        cj += first[r] & second[r];
    }
    CovarianceProbeResult out;
    out.samples = samples;
    out.p_first = c1 / N;
    out.p_second = c2 / N;
    out.p_joint = cj / N;
    out.p_second_given_first = c1 > 0 ? cj / c1 : 0.0;
    out.covariance = out.p_joint - out.p_first * out.p_second;
    auto bernoulli_se = [](double p, double count) { return count > 1 ? std::sqrt(p * (1.0 - p) / count) : 0.0; };
    out.std_errors.p_first = bernoulli_se(out.p_first, N);
    out.std_errors.p_second = bernoulli_se(out.p_second, N);
    out.std_errors.p_joint = bernoulli_se(out.p_joint, N);
    out.std_errors.p_second_given_first = bernoulli_se(out.p_second_given_first, c1);
    // Influence function of p_joint - p_first * p_second.
    double sum2 = 0.0;
    for (std::size_t r = 0; r < first.size(); ++r) {
        const double phi = ((first[r] & second[r]) - out.p_joint) - out.p_second * (first[r] - out.p_first) -
                           out.p_first * (second[r] - out.p_second);
        sum2 += phi * phi;
    }
    out.std_errors.covariance = std::sqrt(sum2 / (N - 1.0) / N);

    out.first_gap = t1 - s1 - 1;
    out.second_gap = t2 - s2 - 1;
    out.predicted_first = predicted_pair_probability(out.first_gap);
    if (kind == ShapeKind::walk) {
        switch (g.pattern) {
        case GapPattern::nested:
            // The outer chord is an (a+c)-step walk plus a bounded constant step.
            out.predicted_second_given_first = predicted_pair_probability(g.a + g.c);
            break;
        case GapPattern::interleaved: {
            const double v = parallel_sum(g.a, g.b) + g.c;
            out.predicted_second_given_first = 2.0 / (std::numbers::pi * std::numbers::pi * v);
            break;
        }
        default: out.predicted_second_given_first = predicted_pair_probability(out.second_gap); break;
        }
    }
    return out;
}

// --- persistence --------------------------------------------------------------------

enum class ResultFormat { csv, json };

inline constexpr const char* kCsvHeader = "kind,n,samples,mean,variance,std_error,min,max,seed,counter,sampler,wall_ms";

inline std::string format_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string render_results(const std::vector<SummaryStats>& rows, ResultFormat format)
{
    std::ostringstream os;
    if (format == ResultFormat::csv) {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) {
            os << r.kind << ',' << r.n << ',' << r.samples << ',' << format_double(r.mean) << ','
               << format_double(r.variance) << ',' << format_double(r.std_error) << ',' << r.min << ',' << r.max << ','
               << r.seed << ',' << r.counter << ',' << r.sampler << ',' << format_double(r.wall_ms) << '\n';
        }
        return os.str();
    }
    os << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << (i ? ",\n " : "\n ") << "{\"kind\": " << json_string(r.kind) << ", \"n\": " << r.n
           << ", \"samples\": " << r.samples << ", \"mean\": " << format_double(r.mean)
           << ", \"variance\": " << format_double(r.variance) << ", \"std_error\": " << format_double(r.std_error)
           << ", \"min\": " << r.min << ", \"max\": " << r.max << ", \"seed\": " << r.seed
           << ", \"counter\": " << json_string(r.counter) << ", \"sampler\": " << json_string(r.sampler)
           << ", \"wall_ms\": " << format_double(r.wall_ms) << "}";
    }
    os << (rows.empty() ? "]\n" : "\n]\n");
    return os.str();
}

/// Writes rows as CSV (header exactly kCsvHeader) or a JSON array of objects.
inline void persist_results(const std::vector<SummaryStats>& rows, const std::string& path, ResultFormat format)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << render_results(rows, format);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace detail

inline std::vector<SummaryStats> parse_results(const std::string& text, ResultFormat format)
{
    std::vector<SummaryStats> rows;
    if (format == ResultFormat::csv) {
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("unexpected CSV header");
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto f = detail::split(line, ',');
            if (f.size() != 12) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields");
            SummaryStats r;
            r.kind = f[0];
            r.n = std::stoi(f[1]);
            r.samples = std::stoll(f[2]);
            r.mean = std::stod(f[3]);
            r.variance = std::stod(f[4]);
            r.std_error = std::stod(f[5]);
            r.min = std::stoll(f[6]);
            r.max = std::stoll(f[7]);
            r.seed = std::stoull(f[8]);
            r.counter = f[9];
            r.sampler = f[10];
            r.wall_ms = std::stod(f[11]);
            rows.push_back(std::move(r));
        }
        return rows;
    }
    const auto doc = nlohmann::json::parse(text);
    for (const auto& o : doc) {
        SummaryStats r;
        r.kind = o.at("kind").get<std::string>();
        r.n = o.at("n").get<int>();
        r.samples = o.at("samples").get<long long>();
        r.mean = o.at("mean").get<double>();
        r.variance = o.at("variance").get<double>();
        r.std_error = o.at("std_error").get<double>();
        r.min = o.at("min").get<long long>();
        r.max = o.at("max").get<long long>();
        r.seed = o.at("seed").get<std::uint64_t>();
        r.counter = o.at("counter").get<std::string>();
        r.sampler = o.at("sampler").get<std::string>();
        r.wall_ms = o.at("wall_ms").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<SummaryStats> read_results(const std::string& path, ResultFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_results(ss.str(), format);
}

}  // namespace eqwalk
