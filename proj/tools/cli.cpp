#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edgeci/bootstrap.hpp"
#include "edgeci/detectors.hpp"
#include "edgeci/experiment_io.hpp"
#include "edgeci/g0i.hpp"
#include "edgeci/imaging.hpp"
#include "edgeci/parallel.hpp"
#include "edgeci/random.hpp"
#include "edgeci/simulation.hpp"

namespace edgeci::cli {

namespace {

using nlohmann::json;

/// Bad flags or inputs detected before any computation.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs `fn`, turning any failure into a UsageError.
template <class Fn>
auto validated(Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

struct Io {
    std::istream& in;
    std::ostream& out;
};

/// Writes `body` to `path`, or to standard output for "" and "-".
template <class Fn>
void emit(const Io& io, const std::string& path, Fn&& body) {
    if (path.empty() || path == "-") {
        body(io.out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    body(f);
    if (!f) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

std::string slurp(const Io& io, const std::string& path) {
    if (path == "-") {
        return std::string((std::istreambuf_iterator<char>(io.in)), std::istreambuf_iterator<char>());
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open '" + path + "'");
    }
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

/// Numbers separated by whitespace or commas; `#` starts a comment.
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::istringstream lines(text);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        for (char& c : line) {
            if (c == ',' || c == ';' || c == '\r' || c == '\t') {
                c = ' ';
            }
        }
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                throw UsageError("line " + std::to_string(n) + ": invalid number '" + tok + "'");
            }
            out.push_back(v);
        }
    }
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) { return seed ? *seed : entropy_seed(); }

struct BootstrapFlags {
    int B = 1000;
    int B_prime = 50;
    int B_double_prime = 200;
    int B_x = 200;
    double level = 0.95;
    std::string methods = "perc";

    void add(CLI::App& app, const std::string& default_methods) {
        methods = default_methods;
        app.add_option("--B", B, "outer bootstrap replications")->capture_default_str();
        app.add_option("--B-prime", B_prime, "subset / inner bootstrap size")->capture_default_str();
        app.add_option("--B-double-prime", B_double_prime, "retry cap")->capture_default_str();
        app.add_option("--B-x", B_x, "extra resamples for st2")->capture_default_str();
        app.add_option("--level", level, "nominal coverage in (0, 1)")->capture_default_str();
        app.add_option("--methods", methods, "comma list of perc, bbm, st1, st2, full-t")->capture_default_str();
    }

    BootstrapConfig config() const {
        BootstrapConfig c;
        c.B = B;
        c.B_prime = B_prime;
        c.B_double_prime = B_double_prime;
        c.B_x = B_x;
        c.level = level;
        return c;
    }

    /// Validates the bootstrap sizes against every requested method.
    std::vector<CiMethod> method_list() const {
        return validated([&] {
            const std::vector<CiMethod> list = parse_method_list(methods);
            for (CiMethod m : list) {
                BootstrapConfig c = config();
                c.method = m;
                c.validate();
            }
            return list;
        });
    }
};

struct DetectorFlags {
    std::string detector = "kw";
    double looks = 1.0;
    std::optional<int> j_min;
    std::optional<int> j_max;
    std::string tie_break = "lowest";

    void add(CLI::App& app) {
        app.add_option("--detector", detector, "kw or gambini")->capture_default_str();
        app.add_option("--looks", looks, "number of looks (likelihood detector)")->capture_default_str();
        app.add_option("--j-min", j_min, "smallest candidate split (default 1)");
        app.add_option("--j-max", j_max, "largest candidate split (default N - 1)");
        app.add_option("--tie-break", tie_break, "lowest or highest")->capture_default_str();
    }

    DetectorKind kind() const {
        if (detector == "kw") {
            return DetectorKind::KruskalWallis;
        }
        if (detector == "gambini") {
            return DetectorKind::GambiniML;
        }
        throw UsageError("--detector must be kw or gambini");
    }

    SplitSearchConfig search() const {
        SplitSearchConfig s = SplitSearchConfig::full();
        if (tie_break == "highest") {
            s.tie_break = TieBreak::Highest;
        } else if (tie_break != "lowest") {
            throw UsageError("--tie-break must be lowest or highest");
        }
        s.j_min = j_min;
        s.j_max = j_max;
        return s;
    }

    Detector make() const {
        if (!(looks > 0.0)) {
            throw UsageError("--looks must be positive");
        }
        return make_detector(kind(), looks, search());
    }

    json echo() const {
        return {{"detector", detector},
                {"looks", looks},
                {"j_min", j_min ? json(*j_min) : json(nullptr)},
                {"j_max", j_max ? json(*j_max) : json(nullptr)},
                {"tie_break", tie_break}};
    }
};

/// Strip input: a value list (`--input`) or a raster read as one window.
struct StripInput {
    std::string input;
    std::string image;
    std::string orientation = "horizontal";
    std::string aggregation = "pixels";

    void add(CLI::App& app) {
        app.add_option("--input,-i", input, "strip values, one per line ('-' for stdin)");
        app.add_option("--image", image, "raster (PGM or CSV) analyzed as one window");
        app.add_option("--orientation", orientation, "detection line direction in --image")->capture_default_str();
        app.add_option("--aggregation", aggregation, "pixels, mean or center (with --image)")->capture_default_str();
    }

    PixelStrip load(const Io& io) const {
        if (input.empty() == image.empty()) {
            throw UsageError("give exactly one of --input or --image");
        }
        if (!input.empty()) {
            const std::vector<double> values = parse_values(slurp(io, input));
            return validated([&] { return PixelStrip(values); });
        }
        const Raster raster = validated([&] {
            if (image == "-") {
                return read_raster(io.in, RasterFormat::Auto, "stdin");
            }
            return load_raster(image);
        });
        return validated([&] {
            WindowSpec spec;
            spec.rect = {0, 0, raster.image.width(), raster.image.height()};
            spec.orientation = parse_orientation(orientation);
            spec.aggregation = parse_aggregation(aggregation);
            Window w = extract_windows(raster.image, spec).front();
            const double offset = zero_offset_for(w.pixels.pixels());
            for (double& v : w.pixels.pixels()) {
                v += offset;
            }
            return image_to_strip(w.pixels, w.aggregation, w.line);
        });
    }

    json echo() const {
        return input.empty() ? json{{"image", image}, {"orientation", orientation}, {"aggregation", aggregation}}
                             : json{{"input", input}};
    }
};

json interval_json(const ConfidenceInterval& ci, std::optional<double> seconds) {
    json j = to_json(ci);
    if (seconds) {
        j["seconds"] = *seconds;
    }
    return j;
}

std::uint64_t method_stream(CiMethod m) { return 100 + static_cast<std::uint64_t>(m); }

// ---------------------------------------------------------------------------

struct SampleCmd {
    double alpha = 0.0;
    std::optional<double> gamma;
    bool unit_mean = false;
    double looks = 1.0;
    long long n = 0;
    std::optional<std::uint64_t> seed;
    std::string output;

    void add(CLI::App& app) {
        app.add_option("--alpha", alpha, "roughness (< 0)")->required();
        app.add_option("--gamma", gamma, "scale (> 0)");
        app.add_flag("--unit-mean", unit_mean, "choose the scale that gives unit mean (needs alpha < -1)");
        app.add_option("--looks", looks, "number of looks")->capture_default_str();
        app.add_option("-n", n, "number of draws")->required();
        app.add_option("--seed", seed, "random seed (drawn from entropy when absent)");
        app.add_option("--output,-o", output, "output file (default stdout)");
    }

    int run(const Io& io) const {
        const G0IParams params = validated([&] {
            if (gamma.has_value() == unit_mean) {
                throw UsageError("give exactly one of --gamma or --unit-mean");
            }
            if (n < 1) {
                throw UsageError("-n must be positive");
            }
            if (unit_mean && !(alpha < -1.0)) {
                throw UsageError("--unit-mean requires alpha < -1 for a finite mean");
            }
            G0IParams p{alpha, unit_mean ? gamma_for_unit_mean(alpha, looks) : *gamma, looks};
            p.validate();
            return p;
        });
        const std::uint64_t s = resolve_seed(seed);
        Rng rng(s);
        const std::vector<double> values = sample(params, static_cast<std::size_t>(n), rng);
        emit(io, output, [&](std::ostream& o) {
            o << "# edgeci " << kVersion << " sample alpha=" << format_number(params.alpha)
              << " gamma=" << format_number(params.gamma) << " looks=" << format_number(params.looks)
              << " n=" << n << " seed=" << s << '\n';
            for (double v : values) {
                o << format_number(v) << '\n';
            }
        });
        return kOk;
    }
};

struct FitCmd {
    std::string input = "-";
    double looks = 1.0;
    std::string output;

    void add(CLI::App& app) {
        app.add_option("--input,-i", input, "values, one per line ('-' for stdin)")->capture_default_str();
        app.add_option("--looks", looks, "number of looks")->capture_default_str();
        app.add_option("--output,-o", output, "output file (default stdout)");
    }

    int run(const Io& io) const {
        const std::vector<double> values = parse_values(slurp(io, input));
        validated([&] {
            if (!(looks > 0.0)) {
                throw UsageError("--looks must be positive");
            }
            if (values.size() < 2) {
                throw UsageError("need at least two values");
            }
            for (double v : values) {
                if (!(v > 0.0) || !std::isfinite(v)) {
                    throw UsageError("values must be finite and positive");
                }
            }
            return 0;
        });
        const MomentEstimate est = fit_moments(values, looks);
        json j{{"version", std::string(kVersion)},
               {"n", values.size()},
               {"looks", looks},
               {"alpha_hat", est.alpha_hat},
               {"gamma_hat", est.gamma_hat},
               {"converged", est.converged},
               {"iterations", est.iterations},
               {"texture", est.converged ? std::string(to_string(classify_texture(est.alpha_hat))) : "unknown"}};
        emit(io, output, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        return est.converged ? kOk : kRuntimeFailure;
    }
};

struct DetectCmd {
    StripInput strip_in;
    DetectorFlags det;
    std::string output;

    void add(CLI::App& app) {
        strip_in.add(app);
        det.add(app);
        app.add_option("--output,-o", output, "output file (default stdout)");
    }

    int run(const Io& io) const {
        const Detector detector = det.make();
        const PixelStrip strip = strip_in.load(io);
        validated([&] { return detector.range(strip.size()); });
        const EdgeEstimate e = detector(strip);
        json j{{"version", std::string(kVersion)}, {"n", strip.size()},     {"depth", strip.depth()},
               {"detector", det.detector},         {"j_hat", e.j_hat},      {"objective", e.objective},
               {"config", det.echo()},             {"source", strip_in.echo()}};
        emit(io, output, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        return kOk;
    }
};

struct CiCmd {
    StripInput strip_in;
    DetectorFlags det;
    BootstrapFlags boot;
    std::optional<std::uint64_t> seed;
    int workers = default_workers();
    bool no_timing = false;
    std::string output;

    void add(CLI::App& app) {
        strip_in.add(app);
        det.add(app);
        boot.add(app, "perc,bbm,st1,st2");
        app.add_option("--seed", seed, "random seed (drawn from entropy when absent)");
        app.add_option("--workers", workers, "threads for the outer bootstrap")->capture_default_str();
        app.add_flag("--no-timing", no_timing, "omit timings (byte-stable output)");
        app.add_option("--output,-o", output, "output file (default stdout)");
    }

    int run(const Io& io) const {
        const std::vector<CiMethod> methods = boot.method_list();
        const Detector detector = det.make();
        if (workers < 1) {
            throw UsageError("--workers must be >= 1");
        }
        const PixelStrip strip = strip_in.load(io);
        validated([&] { return detector.range(strip.size()); });
        const std::uint64_t s = resolve_seed(seed);

        const EdgeEstimate e = detector(strip);
        json intervals = json::array();
        for (CiMethod m : methods) {
            BootstrapConfig b = boot.config();
            b.method = m;
            b.workers = workers;
            Rng rng = Rng::substream(s, {method_stream(m)});
            const auto start = std::chrono::steady_clock::now();
            json entry;
            try {
                const ConfidenceInterval ci = confidence_interval(strip, detector, b, rng);
                const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                entry = interval_json(ci, no_timing ? std::nullopt : std::optional<double>(secs));
            } catch (const std::exception& ex) {
                entry = {{"method", std::string(to_string(m))}, {"error", ex.what()}};
            }
            intervals.push_back(entry);
        }
        json config = det.echo();
        config["B"] = boot.B;
        config["B_prime"] = boot.B_prime;
        config["B_double_prime"] = boot.B_double_prime;
        config["B_x"] = boot.B_x;
        config["level"] = boot.level;
        config["methods"] = boot.methods;
        json j{{"version", std::string(kVersion)},
               {"seed", s},
               {"n", strip.size()},
               {"depth", strip.depth()},
               {"j_hat", e.j_hat},
               {"objective", e.objective},
               {"intervals", intervals},
               {"config", config},
               {"source", strip_in.echo()}};
        emit(io, output, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        return kOk;
    }
};

struct SimulateCmd {
    std::string config_path;
    std::vector<std::string> overrides;
    bool grid = false;
    bool paper_scale = false;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool no_timing = false;
    std::string output;
    std::string json_path;
    std::string trace_path;

    void add(CLI::App& app) {
        app.add_option("--config,-c", config_path, "experiment file (key = value lines)");
        app.add_option("--set", overrides, "override one key, e.g. --set replications=50");
        app.add_flag("--grid", grid, "sweep grid_alpha_left x grid_alpha_right");
        app.add_flag("--paper-scale", paper_scale, "start from R = 5000, B = 1000 instead of R = 200, B = 199");
        app.add_option("--seed", seed, "master seed (drawn from entropy when absent)");
        app.add_option("--workers", workers, "replications run in parallel (default: all cores)");
        app.add_flag("--no-timing", no_timing, "omit runtime columns");
        app.add_option("--output,-o", output, "CSV report (default stdout)");
        app.add_option("--json", json_path, "JSON report");
        app.add_option("--trace", trace_path, "per-replication CSV (not with --grid)");
    }

    int run(const Io& io) const {
        ExperimentFile file = validated([&] {
            ExperimentFile f;
            if (paper_scale) {
                f.config.replications = 5000;
                f.config.bootstrap.B = 1000;
            }
            if (!config_path.empty()) {
                std::istringstream text(slurp(io, config_path));
                f = parse_experiment_config(text, std::move(f));
            }
            for (const std::string& o : overrides) {
                const auto eq = o.find('=');
                if (eq == std::string::npos) {
                    throw UsageError("--set expects key=value, got '" + o + "'");
                }
                apply_setting(f, o.substr(0, eq), o.substr(eq + 1));
            }
            if (seed) {
                f.config.master_seed = *seed;
                f.seed_given = true;
            }
            if (!f.seed_given) {
                f.config.master_seed = entropy_seed();
            }
            f.config.workers = workers.value_or(default_workers());
            f.config.keep_trace = !trace_path.empty();
            f.config.validate();
            if (grid && (f.grid_alpha_left.empty() || f.grid_alpha_right.empty())) {
                throw UsageError("--grid needs grid_alpha_left and grid_alpha_right");
            }
            if (grid && !trace_path.empty()) {
                throw UsageError("--trace is not available with --grid");
            }
            return f;
        });

        std::vector<ExperimentReport> reports;
        int failed_configs = 0;
        std::vector<std::string> failures;
        if (grid) {
            for (double al : file.grid_alpha_left) {
                for (double ar : file.grid_alpha_right) {
                    ExperimentConfig c = file.config;
                    c.spec.alpha_left = al;
                    c.spec.alpha_right = ar;
                    try {
                        reports.push_back(run_experiment(c));
                    } catch (const std::exception& e) {
                        ++failed_configs;
                        failures.push_back("alpha_left=" + format_number(al) + " alpha_right=" + format_number(ar)
                                           + ": " + e.what());
                    }
                }
            }
        } else {
            reports.push_back(run_experiment(file.config));
        }
        if (reports.empty()) {
            throw std::runtime_error("every configuration failed: " + failures.front());
        }

        emit(io, output, [&](std::ostream& o) { write_report_csv(o, reports, !no_timing); });
        if (!json_path.empty()) {
            json j;
            j["version"] = std::string(kVersion);
            j["seed"] = file.config.master_seed;
            j["reports"] = json::array();
            for (const ExperimentReport& r : reports) {
                j["reports"].push_back(to_json(r, !no_timing));
            }
            j["failed_configurations"] = failures;
            emit(io, json_path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
        }
        if (!trace_path.empty()) {
            emit(io, trace_path, [&](std::ostream& o) { write_trace_csv(o, reports.front(), !no_timing); });
        }
        return kOk;
    }
};

struct AnalyzeCmd {
    std::string image;
    std::string rects;
    std::string svg;
    std::string csv;
    DetectorFlags det;
    BootstrapFlags boot;
    std::optional<std::uint64_t> seed;
    double wide_fraction = 0.4;
    int workers = default_workers();

    void add(CLI::App& app) {
        app.add_option("--image", image, "raster (PGM or CSV)")->required();
        app.add_option("--rects", rects, "rectangle file: x y w h orientation n_windows aggregation")->required();
        app.add_option("--svg", svg, "overlay output")->required();
        app.add_option("--csv", csv, "per-window table (default stdout)");
        det.add(app);
        boot.add(app, "perc");
        app.add_option("--seed", seed, "random seed (drawn from entropy when absent)");
        app.add_option("--wide-fraction", wide_fraction, "no-edge flag threshold, fraction of line length")
            ->capture_default_str();
        app.add_option("--workers", workers, "windows analyzed in parallel")->capture_default_str();
    }

    int run(const Io& io) const {
        AnalysisOptions opt;
        opt.methods = boot.method_list();
        opt.bootstrap = boot.config();
        opt.detector = det.kind();
        opt.looks = det.looks;
        opt.search = det.search();
        opt.wide_fraction = wide_fraction;
        opt.workers = workers;
        if (!(wide_fraction > 0.0) || wide_fraction > 1.0) {
            throw UsageError("--wide-fraction must be in (0, 1]");
        }
        if (workers < 1) {
            throw UsageError("--workers must be >= 1");
        }
        const Raster raster = validated([&] {
            if (image == "-") {
                return read_raster(io.in, RasterFormat::Auto, "stdin");
            }
            return load_raster(image);
        });
        const std::vector<WindowSpec> specs = validated([&] {
            std::istringstream text(slurp(io, rects));
            std::vector<WindowSpec> list = parse_rectangles(text);
            if (list.empty()) {
                throw UsageError("rectangle file lists no rectangles");
            }
            for (const WindowSpec& s : list) {
                s.validate(raster.image.width(), raster.image.height());
            }
            return list;
        });
        opt.seed = resolve_seed(seed);

        const std::vector<WindowResult> results = analyze_raster(raster.image, specs, opt);
        std::size_t ok = 0;
        for (const WindowResult& r : results) {
            ok += r.ok() ? 1 : 0;
        }
        emit(io, svg, [&](std::ostream& o) { write_overlay_svg(o, results, raster.image.width(), raster.image.height()); });
        emit(io, csv, [&](std::ostream& o) {
            o << "# edgeci " << kVersion << " analyze image=" << raster.source << " seed=" << opt.seed
              << " detector=" << det.detector << " methods=" << boot.methods << " B=" << boot.B
              << " level=" << format_number(boot.level) << '\n';
            write_window_csv(o, results, opt.methods);
        });
        return ok > 0 ? kOk : kRuntimeFailure;
    }
};

struct BenchCmd {
    double alpha_left = -2.0;
    double alpha_right = -3.0;
    int replications = 10;
    BootstrapFlags boot;
    std::optional<std::uint64_t> seed;
    std::string output;

    void add(CLI::App& app) {
        app.add_option("--alpha-left", alpha_left, "left roughness")->capture_default_str();
        app.add_option("--alpha-right", alpha_right, "right roughness")->capture_default_str();
        app.add_option("--replications", replications, "timed replications")->capture_default_str();
        boot.add(app, "full-t,bbm,st1,st2,perc");
        app.add_option("--seed", seed, "random seed (drawn from entropy when absent)");
        app.add_option("--output,-o", output, "CSV output (default stdout)");
    }

    int run(const Io& io) const {
        BenchmarkConfig c;
        c.methods = boot.method_list();
        c.bootstrap = boot.config();
        c.replications = replications;
        c.spec.alpha_left = alpha_left;
        c.spec.alpha_right = alpha_right;
        validated([&] {
            c.spec.validate();
            if (replications < 1) {
                throw UsageError("--replications must be >= 1");
            }
            return 0;
        });
        c.master_seed = resolve_seed(seed);
        const std::vector<BenchmarkRow> rows = cost_benchmark(c);
        emit(io, output, [&](std::ostream& o) {
            o << "# edgeci " << kVersion << " bench alpha_left=" << format_number(alpha_left)
              << " alpha_right=" << format_number(alpha_right) << " replications=" << replications
              << " B=" << boot.B << " B_prime=" << boot.B_prime << " seed=" << c.master_seed << '\n';
            write_benchmark_csv(o, rows);
        });
        return kOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Edge location with bootstrap confidence intervals for speckled imagery", "edgeci"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SampleCmd sample_cmd;
    FitCmd fit_cmd;
    DetectCmd detect_cmd;
    CiCmd ci_cmd;
    SimulateCmd simulate_cmd;
    AnalyzeCmd analyze_cmd;
    BenchCmd bench_cmd;
    CLI::App* sample_app = app.add_subcommand("sample", "draw intensities from the G0I law");
    CLI::App* fit_app = app.add_subcommand("fit", "moment estimates of alpha and gamma");
    CLI::App* detect_app = app.add_subcommand("detect", "edge estimate on a strip or raster");
    CLI::App* ci_app = app.add_subcommand("ci", "edge estimate with bootstrap confidence intervals");
    CLI::App* simulate_app = app.add_subcommand("simulate", "Monte Carlo coverage and length study");
    CLI::App* analyze_app = app.add_subcommand("analyze", "windowed analysis of a raster with SVG overlay");
    CLI::App* bench_app = app.add_subcommand("bench", "relative cost of the interval methods");
    sample_cmd.add(*sample_app);
    fit_cmd.add(*fit_app);
    detect_cmd.add(*detect_app);
    ci_cmd.add(*ci_app);
    simulate_cmd.add(*simulate_app);
    analyze_cmd.add(*analyze_app);
    bench_cmd.add(*bench_app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    const Io io{in, out};
    try {
        if (*sample_app) {
            return sample_cmd.run(io);
        }
        if (*fit_app) {
            return fit_cmd.run(io);
        }
        if (*detect_app) {
            return detect_cmd.run(io);
        }
        if (*ci_app) {
            return ci_cmd.run(io);
        }
        if (*simulate_app) {
            return simulate_cmd.run(io);
        }
        if (*analyze_app) {
            return analyze_cmd.run(io);
        }
        return bench_cmd.run(io);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
}

}  // namespace edgeci::cli
