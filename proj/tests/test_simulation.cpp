#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

#include "edgeci/experiment_io.hpp"
#include "edgeci/simulation.hpp"

using namespace edgeci;

namespace {

ExperimentConfig small_config(double alpha_left, double alpha_right, int replications) {
    ExperimentConfig c;
    c.spec.alpha_left = alpha_left;
    c.spec.alpha_right = alpha_right;
    c.replications = replications;
    c.bootstrap.B = 99;
    c.bootstrap.B_prime = 20;
    c.bootstrap.B_x = 40;
    c.master_seed = 42;
    return c;
}

}  // namespace

TEST_CASE("synthetic image spec validation", "[simulation]") {
    SyntheticImageSpec s;
    CHECK_NOTHROW(s.validate());
    s.alpha_left = -1.0;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    s.alpha_left = -0.5;
    Rng rng(1);
    CHECK_THROWS_AS(generate_image(s, rng), std::domain_error);
    s = {};
    s.edge_j = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.edge_j = 100;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.edge_j = 99;
    CHECK_NOTHROW(s.validate());
    s = {};
    s.gamma_rule = GammaRule::Explicit;
    s.alpha_left = -0.5;
    s.gamma_left = 2.0;
    CHECK_NOTHROW(s.validate());
    CHECK(s.left_params().gamma == 2.0);
}

TEST_CASE("unit-mean images have unit mean on both sides", "[simulation]") {
    SyntheticImageSpec s;
    s.alpha_left = -2.0;
    s.alpha_right = -10.0;
    std::vector<double> left;
    std::vector<double> right;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const Image img = generate_image(s, rng);
        REQUIRE(img.width() == 100);
        REQUIRE(img.height() == 20);
        for (std::size_t x = 0; x < img.width(); ++x) {
            for (std::size_t y = 0; y < img.height(); ++y) {
                (x < 50 ? left : right).push_back(img.at(x, y));
            }
        }
    }
    for (const std::vector<double>* side : {&left, &right}) {
        const double n = static_cast<double>(side->size());
        const double mean = std::accumulate(side->begin(), side->end(), 0.0) / n;
        double ss = 0.0;
        for (double v : *side) {
            ss += (v - mean) * (v - mean);
        }
        const double se = std::sqrt(ss / (n - 1.0) / n);
        CHECK(std::abs(mean - 1.0) <= 3.0 * se);
    }
}

TEST_CASE("images are reproducible", "[simulation]") {
    SyntheticImageSpec s;
    Rng a(9);
    Rng b(9);
    Rng c(10);
    const Image x = generate_image(s, a);
    CHECK(x == generate_image(s, b));
    CHECK_FALSE(x == generate_image(s, c));
}

TEST_CASE("no-edge spec", "[simulation]") {
    SyntheticImageSpec s;
    s.edge_j.reset();
    CHECK_FALSE(s.has_edge());
    s.edge_j = 50;
    s.alpha_right = s.alpha_left;
    CHECK_FALSE(s.has_edge());
    s.alpha_right = -3.0;
    CHECK(s.has_edge());
}

TEST_CASE("strip aggregation", "[simulation]") {
    const Image row(5, 1, std::vector<double>{1, 2, 3, 4, 5});
    for (Aggregation a : {Aggregation::TransverseMean, Aggregation::CenterRow, Aggregation::AllPixelsFlattened}) {
        CHECK(image_to_strip(row, a).to_vector() == std::vector<double>{1, 2, 3, 4, 5});
    }
    const Image constant(6, 4, 2.5);
    for (Aggregation a : {Aggregation::TransverseMean, Aggregation::CenterRow, Aggregation::AllPixelsFlattened}) {
        const std::vector<double> v = image_to_strip(constant, a).to_vector();
        CHECK(std::all_of(v.begin(), v.end(), [](double z) { return z == 2.5; }));
    }
    const Image two(4, 2, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(aggregate_columns(two, Aggregation::TransverseMean) == std::vector<double>{3, 4, 5, 6});
    CHECK(aggregate_columns(two, Aggregation::CenterRow) == std::vector<double>{5, 6, 7, 8});
    const PixelStrip pixels = image_to_strip(two, Aggregation::AllPixelsFlattened);
    CHECK(pixels.size() == 4);
    CHECK(pixels.depth() == 2);
    CHECK(pixels.position(1)[0] == 2.0);
    CHECK(pixels.position(1)[1] == 6.0);
    CHECK_THROWS_AS(aggregate_columns(two, Aggregation::AllPixelsFlattened), std::invalid_argument);
    CHECK_THROWS_AS(image_to_strip(Image(), Aggregation::TransverseMean), std::invalid_argument);
    CHECK(parse_aggregation("pixels") == Aggregation::AllPixelsFlattened);
    CHECK_THROWS_AS(parse_aggregation("median"), std::invalid_argument);
}

TEST_CASE("KW locates the edge on pooled-pixel strips", "[simulation]") {
    // Calibration: ~78% of 200 seeds within 2 columns for (-2, -10).
    SyntheticImageSpec s;
    s.alpha_left = -2.0;
    s.alpha_right = -10.0;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const PixelStrip strip = image_to_strip(generate_image(s, rng), Aggregation::AllPixelsFlattened);
        hits += std::abs(detect_kw(strip, SplitSearchConfig::full()).j_hat - 50) <= 2 ? 1 : 0;
    }
    CHECK(hits >= 140);
}

TEST_CASE("experiment report arithmetic", "[simulation]") {
    ExperimentConfig c = small_config(-2.0, -10.0, 12);
    c.keep_trace = true;
    const ExperimentReport r = run_experiment(c);
    REQUIRE(r.methods.size() == 4);
    REQUIRE(r.trace.size() == 12);
    std::optional<double> perc;
    for (const MethodSummary& s : r.methods) {
        REQUIRE(s.coverage.has_value());
        CHECK(*s.coverage >= 0.0);
        CHECK(*s.coverage <= 1.0);
        CHECK(*s.distance == std::abs(*s.coverage - 0.95) * 100.0);
        CHECK(s.completed + s.failures == 12);
        CHECK(s.mean_length >= 0.0);
        CHECK(s.mean_length <= 100.0 * 2);
        if (s.method == CiMethod::PERC) {
            perc = s.distance;
        }
    }
    for (const MethodSummary& s : r.methods) {
        CHECK(*s.delta == *perc - *s.distance);
    }
    int covered = 0;
    for (const ReplicationRecord& rec : r.trace) {
        covered += rec.outcomes[0].interval->contains(50) ? 1 : 0;
    }
    CHECK(*r.methods[0].coverage == covered / 12.0);
}

TEST_CASE("exact nominal coverage gives zero distance", "[simulation]") {
    MethodSummary s;
    s.coverage = 0.95;
    CHECK(std::abs(*s.coverage - 0.95) * 100.0 == 0.0);
}

TEST_CASE("no-edge experiments omit coverage", "[simulation]") {
    ExperimentConfig c = small_config(-5.0, -5.0, 20);
    c.methods = {CiMethod::PERC, CiMethod::BBM};
    const ExperimentReport r = run_experiment(c);
    for (const MethodSummary& s : r.methods) {
        CHECK_FALSE(s.coverage.has_value());
        CHECK_FALSE(s.distance.has_value());
        CHECK_FALSE(s.delta.has_value());
    }
    CHECK(r.methods[0].mean_length >= 80.0);
    std::ostringstream csv;
    write_report_csv(csv, {r}, false);
    CHECK(csv.str().find("coverage") == std::string::npos);
    CHECK(csv.str().find("mean_length") != std::string::npos);
}

TEST_CASE("experiments are reproducible across worker counts", "[simulation][property]") {
    ExperimentConfig c = small_config(-2.0, -6.0, 8);
    c.methods = {CiMethod::PERC, CiMethod::BBM, CiMethod::ST1, CiMethod::ST2, CiMethod::StudentizedFull};
    c.bootstrap.B = 30;
    c.bootstrap.B_prime = 8;
    c.bootstrap.B_x = 12;
    c.workers = 1;
    const ExperimentReport a = run_experiment(c);
    c.workers = 4;
    const ExperimentReport b = run_experiment(c);
    std::ostringstream x;
    std::ostringstream y;
    write_report_csv(x, {a}, false);
    write_report_csv(y, {b}, false);
    CHECK(x.str() == y.str());
    CHECK(to_json(a, false) == to_json(b, false));
}

TEST_CASE("grid runs every pair", "[simulation]") {
    ExperimentConfig c = small_config(-2.0, -6.0, 3);
    c.methods = {CiMethod::PERC};
    const std::vector<ExperimentReport> g = run_grid(c, {-2.0, -3.0}, {-4.0, -5.0, -6.0});
    REQUIRE(g.size() == 6);
    CHECK(g[0].config.spec.alpha_left == -2.0);
    CHECK(g[0].config.spec.alpha_right == -4.0);
    CHECK(g[5].config.spec.alpha_left == -3.0);
    CHECK(g[5].config.spec.alpha_right == -6.0);
}

TEST_CASE("experiment validation", "[simulation]") {
    ExperimentConfig c = small_config(-2.0, -6.0, 0);
    CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
    c.replications = 1;
    c.methods = {CiMethod::ST2};
    c.bootstrap.B_x = c.bootstrap.B_prime;
    CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("failures are counted per method", "[simulation]") {
    // The likelihood detector on 4 x 1 images fails whenever no split
    // admits a moment fit; the run carries on.
    ExperimentConfig c = small_config(-2.0, -6.0, 30);
    c.spec.width = 4;
    c.spec.height = 1;
    c.spec.edge_j = 2;
    c.detector = DetectorKind::GambiniML;
    c.methods = {CiMethod::PERC};
    c.bootstrap.B = 5;
    const ExperimentReport r = run_experiment(c);
    CHECK(r.methods[0].completed + r.methods[0].failures == 30);
}

TEST_CASE("cost benchmark shape", "[simulation]") {
    BenchmarkConfig c;
    c.replications = 1;
    c.bootstrap.B = 20;
    c.bootstrap.B_prime = 5;
    c.bootstrap.B_x = 10;
    const std::vector<BenchmarkRow> rows = cost_benchmark(c);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].method == CiMethod::StudentizedFull);
    CHECK(*rows[0].percent_of_full_t == Catch::Approx(100.0));
    for (const BenchmarkRow& r : rows) {
        CHECK(r.mean_seconds > 0.0);
    }
}

TEST_CASE("configuration file", "[simulation][io]") {
    std::istringstream text(R"(# desk run
height = 10
width = 60
edge = 30
alpha_left = -3   # rough side
alpha_right = -9
looks = 2
replications = 7
B = 49
B_prime = 10
B_double_prime = 20
B_x = 30
level = 0.9
methods = perc, st2
aggregation = mean
detector = gambini
seed = 123
workers = 2
grid_alpha_left = -2, -3
grid_alpha_right = -4,-5,-6
)");
    const ExperimentFile f = parse_experiment_config(text);
    const ExperimentConfig& c = f.config;
    CHECK(c.spec.height == 10);
    CHECK(c.spec.width == 60);
    CHECK(c.spec.edge_j == 30);
    CHECK(c.spec.alpha_left == -3.0);
    CHECK(c.spec.looks == 2.0);
    CHECK(c.replications == 7);
    CHECK(c.bootstrap.B == 49);
    CHECK(c.bootstrap.B_x == 30);
    CHECK(c.bootstrap.level == 0.9);
    CHECK(c.methods == std::vector<CiMethod>{CiMethod::PERC, CiMethod::ST2});
    CHECK(c.aggregation == Aggregation::TransverseMean);
    CHECK(c.detector == DetectorKind::GambiniML);
    CHECK(c.master_seed == 123);
    CHECK(f.seed_given);
    CHECK(f.grid_alpha_left == std::vector<double>{-2.0, -3.0});
    CHECK(f.grid_alpha_right.size() == 3);

    ExperimentFile g;
    apply_setting(g, "edge", "none");
    CHECK_FALSE(g.config.spec.edge_j.has_value());

    std::istringstream bad("height = 10\nwidth = ten\n");
    try {
        parse_experiment_config(bad);
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream unknown("colour = red\n");
    CHECK_THROWS_AS(parse_experiment_config(unknown), ConfigError);
    std::istringstream no_eq("height 10\n");
    CHECK_THROWS_AS(parse_experiment_config(no_eq), ConfigError);
    CHECK_THROWS_AS(parse_method_list("perc,bca"), ConfigError);
}

TEST_CASE("report writers", "[simulation][io]") {
    ExperimentConfig c = small_config(-2.0, -8.0, 3);
    c.methods = {CiMethod::PERC, CiMethod::BBM};
    c.keep_trace = true;
    const ExperimentReport r = run_experiment(c);
    std::ostringstream csv;
    write_report_csv(csv, {r});
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header.find("coverage,distance,delta") != std::string::npos);
    CHECK(header.find("mean_runtime_s") != std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        ++rows;
    }
    CHECK(rows == 2);

    std::ostringstream trace;
    write_trace_csv(trace, r, false);
    const std::string text = trace.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 * 2);

    const nlohmann::json j = to_json(r);
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["methods"].size() == 2);
    CHECK(j["version"] == std::string(kVersion));
}
