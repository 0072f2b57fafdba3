#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edgeci/bootstrap.hpp"
#include "edgeci/detectors.hpp"
#include "edgeci/g0i.hpp"
#include "edgeci/image.hpp"

namespace edgeci {

enum class GammaRule { UnitMean, Explicit };

/// Two-region synthetic image: columns 1..edge_j follow the left law, the
/// rest the right law. Without edge_j every column follows the left law.
struct SyntheticImageSpec {
    std::size_t height = 20;
    std::size_t width = 100;
    std::optional<int> edge_j = 50;
    double alpha_left = -2.0;
    double alpha_right = -10.0;
    double looks = 1.0;
    GammaRule gamma_rule = GammaRule::UnitMean;
    double gamma_left = 1.0;  ///< used with GammaRule::Explicit
    double gamma_right = 1.0; ///< used with GammaRule::Explicit

    /// Throws std::invalid_argument / std::domain_error on invalid specs.
    void validate() const;
    G0IParams left_params() const;
    G0IParams right_params() const;
    /// True when an edge position is set and the two laws differ.
    bool has_edge() const;
};

Image generate_image(const SyntheticImageSpec& spec, Rng& rng);

struct ExperimentConfig {
    SyntheticImageSpec spec;
    int replications = 200;
    BootstrapConfig bootstrap{199, 50, 200, 200, 0.95, CiMethod::PERC, 1};
    std::vector<CiMethod> methods{CiMethod::PERC, CiMethod::BBM, CiMethod::ST1, CiMethod::ST2};
    std::uint64_t master_seed = 1;
    Aggregation aggregation = Aggregation::AllPixelsFlattened;
    DetectorKind detector = DetectorKind::KruskalWallis;
    SplitSearchConfig search = SplitSearchConfig::full();
    /// Replications run in parallel; reports do not depend on it.
    int workers = 1;
    /// Keep one record per replication in the report.
    bool keep_trace = false;

    void validate() const;
};

struct MethodOutcome {
    CiMethod method = CiMethod::PERC;
    std::optional<ConfidenceInterval> interval;
    double seconds = 0.0;
    std::string error;
};

struct ReplicationRecord {
    int replication = 0;
    int j_hat = 0;
    std::vector<MethodOutcome> outcomes;
};

struct MethodSummary {
    CiMethod method = CiMethod::PERC;
    int completed = 0;
    int failures = 0;
    std::optional<double> coverage;  ///< absent without an edge
    std::optional<double> distance;  ///< |coverage - level| * 100
    std::optional<double> delta;     ///< D(perc) - D(method), when perc ran
    double mean_length = 0.0;
    double mean_runtime = 0.0;       ///< seconds per replication
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<MethodSummary> methods;
    std::vector<ReplicationRecord> trace;
};

/// Monte Carlo coverage / length study. Replication r draws its image from
/// sub-stream (seed, r) and each method from (seed, r, method), so reports
/// are identical for any worker count. Per-method failures are counted,
/// not thrown.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// One run_experiment per (alpha_left, alpha_right) pair.
std::vector<ExperimentReport> run_grid(const ExperimentConfig& base, const std::vector<double>& alpha_left,
                                       const std::vector<double>& alpha_right);

struct BenchmarkRow {
    CiMethod method = CiMethod::PERC;
    double mean_seconds = 0.0;
    std::optional<double> percent_of_full_t;
};

struct BenchmarkConfig {
    SyntheticImageSpec spec{20, 100, 50, -2.0, -3.0, 1.0, GammaRule::UnitMean, 1.0, 1.0};
    int replications = 10;
    BootstrapConfig bootstrap;  ///< paper-scale defaults
    std::vector<CiMethod> methods{CiMethod::StudentizedFull, CiMethod::BBM, CiMethod::ST1, CiMethod::ST2,
                                  CiMethod::PERC};
    Aggregation aggregation = Aggregation::AllPixelsFlattened;
    std::uint64_t master_seed = 1;
};

/// Mean wall time per replication of each method on the same strips, and its
/// share of the full bootstrap-t time. One warm-up replication is discarded;
/// the method order rotates between replications.
std::vector<BenchmarkRow> cost_benchmark(const BenchmarkConfig& config);

}  // namespace edgeci
