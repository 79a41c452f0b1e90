#pragma once

// Command-line front end. run_cli() is the whole program; main() only forwards
// to it, so tests can drive it in-process.
//
// Exit codes: 0 success, 2 usage error (the message names the flag), 1 any
// other failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <eqwalk/eqwalk.hpp>

namespace eqwalk::cli {

struct UsageError : std::runtime_error {
    UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

inline std::vector<int> parse_int_list(const std::string& flag, const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(flag, "'" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw UsageError(flag, "expected a comma-separated list of integers");
    return out;
}

inline std::string points_json(std::span<const Point> v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += i ? ",\n [" : "\n [";
        s += format_double(v[i].x) + ", " + format_double(v[i].y) + "]";
    }
    s += v.empty() ? "]\n" : "\n]\n";
    return s;
}

inline std::vector<Point> read_points(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    const auto doc = nlohmann::json::parse(in);
    std::vector<Point> v;
    for (const auto& p : doc) {
        if (!p.is_array() || p.size() != 2) throw std::runtime_error(path + ": expected [x, y] pairs");
        v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (v.empty()) throw std::runtime_error(path + ": no vertices");
    return v;
}

/// Writes text to `path`, or to `out` when path is empty.
inline void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Equilateral random walks and polygons: sampling, self-intersection counts, densities, experiments"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    const int hw_threads = resolve_threads(0);

    // walk
    auto* walk = app.add_subcommand("walk", "Sample one random walk; JSON array of [x, y] vertices");
    int walk_n = 0;
    std::uint64_t walk_seed = 0, walk_rep = 0;
    std::string walk_out;
    walk->add_option("--n", walk_n, "Number of steps")->required();
    walk->add_option("--seed", walk_seed, "Base seed");
    walk->add_option("--replicate", walk_rep, "Replicate index");
    walk->add_option("--out", walk_out, "Output file (default: standard output)");

    // polygon
    auto* poly = app.add_subcommand("polygon", "Sample one random polygon; JSON array of [x, y] vertices");
    int poly_n = 0;
    std::uint64_t poly_seed = 0, poly_rep = 0;
    std::string poly_out, poly_sampler = "conditional";
    poly->add_option("--n", poly_n, "Number of steps (>= 3)")->required();
    poly->add_option("--seed", poly_seed, "Base seed");
    poly->add_option("--replicate", poly_rep, "Replicate index");
    poly->add_option("--sampler", poly_sampler, "conditional|mcmc")->check(CLI::IsMember({"conditional", "mcmc"}));
    poly->add_option("--out", poly_out, "Output file (default: standard output)");

    // count
    auto* count = app.add_subcommand("count", "Count self-intersections of a walk or polygon read from JSON");
    std::string count_input, count_kind = "auto", count_counter = "sweep", count_out;
    count->add_option("--input", count_input, "JSON file of [x, y] vertices")->required();
    count->add_option("--kind", count_kind, "walk|polygon|auto (auto: polygon when the path closes)")
        ->check(CLI::IsMember({"walk", "polygon", "auto"}));
    count->add_option("--counter", count_counter, "naive|sweep")->check(CLI::IsMember({"naive", "sweep"}));
    count->add_option("--out", count_out, "Output file (default: standard output)");

    // density
    auto* dens = app.add_subcommand("density", "CSV of r, radial density, Gaussian radial density, difference");
    std::string dens_n = "16", dens_out;
    int dens_points = 101;
    dens->add_option("--n", dens_n, "Comma list of step counts (>= 5)");
    dens->add_option("--points", dens_points, "Radii per n, evenly spaced on [0, min(n, 6 sqrt(n))]");
    dens->add_option("--out", dens_out, "Output file (default: standard output)");

    // constants
    auto* consts = app.add_subcommand("constants", "JSON with J, 2/pi^2 and inner-integral spot values");
    std::string consts_out;
    consts->add_option("--out", consts_out, "Output file (default: standard output)");

    // probe-em
    auto* em = app.add_subcommand("probe-em", "Estimate the pair-intersection probability for m middle steps");
    int em_m = 0;
    long long em_samples = 100000;
    std::uint64_t em_seed = 0;
    std::string em_out, em_format = "csv";
    em->add_option("--m", em_m, "Steps strictly between the two segments")->required();
    em->add_option("--samples", em_samples, "Monte Carlo samples (>= 1000)");
    em->add_option("--seed", em_seed, "Base seed");
    em->add_option("--format", em_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    em->add_option("--out", em_out, "Output file (default: standard output)");

    // mean / variance
    struct RunFlags {
        std::string kind = "walk", n = "64,128,256", counter = "sweep", sampler = "conditional", format = "csv", out;
        int samples = 1000;
        std::uint64_t seed = 0;
        int threads = 0;
        bool timing = false;
    };
    RunFlags mean_flags, var_flags;
    var_flags.samples = 500;
    auto add_run_flags = [&](CLI::App* sub, RunFlags& f) {
        f.threads = hw_threads;
        sub->add_option("--kind", f.kind, "walk|polygon")->check(CLI::IsMember({"walk", "polygon"}));
        sub->add_option("--n", f.n, "Comma list of step counts, strictly increasing");
        sub->add_option("--samples", f.samples, "Samples per n");
        sub->add_option("--seed", f.seed, "Base seed");
        sub->add_option("--threads", f.threads, "Worker threads (default: available parallelism)");
        sub->add_option("--counter", f.counter, "naive|sweep")->check(CLI::IsMember({"naive", "sweep"}));
        sub->add_option("--sampler", f.sampler, "conditional|mcmc (polygons)")
            ->check(CLI::IsMember({"conditional", "mcmc"}));
        sub->add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", f.out, "Output file (default: standard output)");
        sub->add_flag("--timing", f.timing, "Record wall_ms (makes output run-dependent)");
    };
    auto* mean = app.add_subcommand("mean", "Self-intersection count statistics per n");
    add_run_flags(mean, mean_flags);
    auto* variance = app.add_subcommand("variance", "As mean, with at least 200 samples per n");
    add_run_flags(variance, var_flags);

    // probe-covar
    auto* covar = app.add_subcommand("probe-covar", "Joint and marginal frequencies of two intersection events");
    std::string cov_pattern = "disjoint", cov_gaps = "8,8,8,8", cov_kind = "walk", cov_sampler = "conditional",
                cov_out;
    int cov_n = 0, cov_threads = hw_threads;
    long long cov_samples = 100000;
    std::uint64_t cov_seed = 0;
    covar->add_option("--pattern", cov_pattern, "nested|interleaved|disjoint")
        ->check(CLI::IsMember({"nested", "interleaved", "disjoint"}));
    covar->add_option("--gaps", cov_gaps, "a,b,c,d step gaps between the four segments");
    covar->add_option("--n", cov_n, "Steps (default: a+b+c+d+4)");
    covar->add_option("--samples", cov_samples, "Monte Carlo samples");
    covar->add_option("--seed", cov_seed, "Base seed");
    covar->add_option("--kind", cov_kind, "walk|polygon")->check(CLI::IsMember({"walk", "polygon"}));
    covar->add_option("--sampler", cov_sampler, "conditional|mcmc (polygons)")
        ->check(CLI::IsMember({"conditional", "mcmc"}));
    covar->add_option("--threads", cov_threads, "Worker threads (default: available parallelism)");
    covar->add_option("--out", cov_out, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        // Help requested on a subcommand surfaces as CallForHelp from that
        // subcommand; anything else is a usage error.
        if (e.get_exit_code() == 0) {
            for (auto* sub : app.get_subcommands()) out << sub->help();
            if (app.get_subcommands().empty()) out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    auto counter_of = [](const std::string& s) { return s == "naive" ? CountMethod::naive : CountMethod::sweep; };
    auto format_of = [](const std::string& s) { return s == "json" ? ResultFormat::json : ResultFormat::csv; };

    try {
        if (walk->parsed()) {
            if (walk_n < 1) throw UsageError("--n", "must be >= 1");
            const Walk w = sample_walk(walk_n, {walk_seed, walk_rep});
            emit(points_json(w.vertices()), walk_out, out);
        } else if (poly->parsed()) {
            if (poly_n < 3) throw UsageError("--n", "must be >= 3");
            const SeedSpec seed{poly_seed, poly_rep};
            const Polygon p = poly_sampler == "mcmc"
                                  ? sample_polygon_mcmc(poly_n, default_burn_in(poly_n), default_stride(poly_n), seed)
                                  : sample_polygon_conditional(poly_n, DensityTableSet::for_polygon(poly_n), seed);
            emit(points_json(p.vertices()), poly_out, out);
        } else if (count->parsed()) {
            auto v = read_points(count_input);
            bool closed = count_kind == "polygon";
            if (count_kind == "auto") closed = v.size() >= 4 && norm(v.back() - v.front()) <= 1e-9;
            CountResult r;
            if (closed) {
                if (v.size() < 4) throw UsageError("--kind", "a polygon needs at least 3 steps");
                r = count_self_intersections(Polygon(std::move(v)), counter_of(count_counter));
            } else {
                r = count_self_intersections(Walk(std::move(v)), counter_of(count_counter));
            }
            nlohmann::ordered_json j;
            j["count"] = r.count;
            j["kind"] = closed ? "polygon" : "walk";
            j["method"] = to_string(r.method);
            emit(j.dump() + "\n", count_out, out);
        } else if (dens->parsed()) {
            const auto ns = parse_int_list("--n", dens_n);
            for (int n : ns) {
                if (n < 5) throw UsageError("--n", "density needs n >= 5");
            }
            if (dens_points < 2) throw UsageError("--points", "must be >= 2");
            std::string text = "n,r,density,gaussian,difference\n";
            for (int n : ns) {
                const double r_max = std::min(static_cast<double>(n), 6.0 * std::sqrt(static_cast<double>(n)));
                for (int i = 0; i < dens_points; ++i) {
                    const double r = r_max * i / (dens_points - 1);
                    const double f = kluyver_radial_density(n, r);
                    const double g = 2.0 * std::numbers::pi * r * gaussian_planar_density(n, r);
                    text += std::to_string(n) + "," + format_double(r) + "," + format_double(f) + "," +
                            format_double(g) + "," + format_double(f - g) + "\n";
                }
            }
            emit(text, dens_out, out);
        } else if (consts->parsed()) {
            nlohmann::ordered_json j;
            const double pi = std::numbers::pi;
            j["J"] = triple_integral_J(1e-10);
            j["J_from_rho"] = triple_integral_J_from_rho(1e-9);
            j["two_over_pi_squared"] = 2.0 / (pi * pi);
            nlohmann::ordered_json spots = nlohmann::ordered_json::array();
            for (double psi : {0.0, pi / 6, pi / 4, pi / 3, pi / 2}) {
                spots.push_back({{"psi", psi}, {"closed_form", inner_integral(psi)},
                                 {"quadrature", inner_integral_quadrature(psi)}});
            }
            j["inner_integral"] = spots;
            emit(j.dump(2) + "\n", consts_out, out);
        } else if (em->parsed()) {
            if (em_m < 1) throw UsageError("--m", "must be >= 1");
            if (em_samples < 1000) throw UsageError("--samples", "must be >= 1000");
            const auto row = estimate_em_probability(em_m, em_samples, {em_seed, 0});
            emit(render_results({row}, format_of(em_format)), em_out, out);
        } else if (mean->parsed() || variance->parsed()) {
            const bool is_var = variance->parsed();
            const RunFlags& f = is_var ? var_flags : mean_flags;
            RunConfig cfg;
            cfg.kind = f.kind == "polygon" ? ShapeKind::polygon : ShapeKind::walk;
            cfg.n_grid = parse_int_list("--n", f.n);
            cfg.samples_per_n = f.samples;
            cfg.base_seed = f.seed;
            cfg.counter = counter_of(f.counter);
            cfg.polygon_sampler = f.sampler == "mcmc" ? PolygonSampler::mcmc : PolygonSampler::conditional;
            cfg.threads = f.threads;
            cfg.timing = f.timing;
            if (f.threads < 1) throw UsageError("--threads", "must be >= 1");
            if (f.samples < (is_var ? 200 : 2)) throw UsageError("--samples", is_var ? "must be >= 200" : "must be >= 2");
            try {
                validate(cfg);
            } catch (const std::invalid_argument& e) {
                throw UsageError("--n", e.what());
            }
            const auto rows = is_var ? run_variance_experiment(cfg) : run_mean_experiment(cfg);
            emit(render_results(rows, format_of(f.format)), f.out, out);
        } else if (covar->parsed()) {
            const auto gaps = parse_int_list("--gaps", cov_gaps);
            if (gaps.size() != 4) throw UsageError("--gaps", "expected exactly four values a,b,c,d");
            GapConfiguration g{gaps[0], gaps[1], gaps[2], gaps[3], parse_gap_pattern(cov_pattern)};
            if (g.a < 1 || g.b < 1 || g.c < 1 || g.d < 1) throw UsageError("--gaps", "all gaps must be >= 1");
            const int n = cov_n == 0 ? g.span() : cov_n;
            const ShapeKind kind = cov_kind == "polygon" ? ShapeKind::polygon : ShapeKind::walk;
            if (kind == ShapeKind::polygon && n != g.span()) throw UsageError("--n", "polygon probes need n = a+b+c+d+4");
            if (kind == ShapeKind::walk && n < g.span()) throw UsageError("--n", "walk probes need n >= a+b+c+d+4");
            if (cov_samples < 2) throw UsageError("--samples", "must be >= 2");
            if (cov_threads < 1) throw UsageError("--threads", "must be >= 1");
            const auto r = probe_covariance(n, g, cov_samples, {cov_seed, 0}, kind,
                                            cov_sampler == "mcmc" ? PolygonSampler::mcmc : PolygonSampler::conditional,
                                            cov_threads);
            nlohmann::ordered_json j;
            j["pattern"] = to_string(g.pattern);
            j["gaps"] = {g.a, g.b, g.c, g.d};
            j["n"] = n;
            j["kind"] = to_string(kind);
            j["samples"] = r.samples;
            j["p_first"] = r.p_first;
            j["p_second"] = r.p_second;
            j["p_joint"] = r.p_joint;
            j["p_second_given_first"] = r.p_second_given_first;
            j["covariance"] = r.covariance;
            j["std_errors"] = {{"p_first", r.std_errors.p_first},
                               {"p_second", r.std_errors.p_second},
                               {"p_joint", r.std_errors.p_joint},
                               {"p_second_given_first", r.std_errors.p_second_given_first},
                               {"covariance", r.std_errors.covariance}};
            j["first_gap"] = r.first_gap;
            j["second_gap"] = r.second_gap;
            j["predicted_first"] = r.predicted_first;
            j["predicted_second_given_first"] = r.predicted_second_given_first;
            emit(j.dump(2) + "\n", cov_out, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace eqwalk::cli
