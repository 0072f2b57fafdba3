#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edgeci/detectors.hpp"
#include "edgeci/random.hpp"

namespace edgeci {

enum class CiMethod { BBM, PERC, StudentizedFull, ST1, ST2 };

/// CLI / report name of a method: "bbm", "perc", "full-t", "st1", "st2".
std::string_view to_string(CiMethod m);
/// Inverse of to_string; nullopt for unknown names.
std::optional<CiMethod> parse_ci_method(std::string_view name);

/// Replication counts and level of a bootstrap interval.
struct BootstrapConfig {
    int B = 1000;             ///< outer replications
    int B_prime = 50;         ///< subset / inner bootstrap size
    int B_double_prime = 200; ///< retry cap
    int B_x = 200;            ///< extra resamples (ST2)
    double level = 0.95;      ///< nominal coverage 1 - a
    CiMethod method = CiMethod::PERC;
    /// Threads used for the outer replicates; results do not depend on it.
    int workers = 1;

    /// Throws std::invalid_argument when the configuration is unusable for `method`.
    void validate() const;
};

/// Sorted bootstrap estimates of the edge plus the estimate on the original strip.
struct BootstrapDistribution {
    std::vector<int> estimates;
    int center = 0;
    SplitRange range{1, 1};

    /// #{estimates <= j} / B.
    double cdf(int j) const;
};

/// Integer edge interval. `lower` / `upper` are clamped to the detector's
/// split range; `raw_lower` / `raw_upper` are the endpoints as constructed.
/// Reflected and studentized endpoints can leave the range, and the length
/// is measured on the constructed interval so that a reflected interval is
/// exactly as long as the percentile interval of the same distribution.
struct ConfidenceInterval {
    CiMethod method = CiMethod::PERC;
    double level = 0.95;
    int lower = 0;
    int upper = 0;
    int raw_lower = 0;
    int raw_upper = 0;

    int length() const { return raw_upper - raw_lower; }
    bool contains(int j) const { return lower <= j && j <= upper; }
};

/// Resamples the left segment z_1..z_j and the right segment z_{j+1}..z_N
/// independently with replacement, keeping both segment lengths.
PixelStrip resample_strip(const PixelStrip& strip, int j_hat, Rng& rng);

/// Outer bootstrap: detect on `strip`, then re-detect on B resamples split
/// at that estimate. Replicate b draws from its own sub-stream.
BootstrapDistribution bootstrap_distribution(const PixelStrip& strip, const Detector& detector,
                                             const BootstrapConfig& config, Rng& rng);

/// clamp(ceil(B q), 1, B), with products within 1e-9 of an integer taken as
/// that integer so that e.g. B = 1000, q = (1 - 0.95) / 2 gives 25.
int quantile_index(int B, double q);

/// Reflected (basic) interval, clamped to the detector's split range.
ConfidenceInterval ci_basic(const BootstrapDistribution& dist, double level);

/// Order-statistic interval.
ConfidenceInterval ci_percentile(const BootstrapDistribution& dist, double level);

/// Counts of the branches taken while estimating per-replicate variances.
struct StudentizedTrace {
    int zero_numerator = 0;      ///< replicate equals the original estimate, Z = 0
    int subset_first_try = 0;    ///< positive subset variance on the first draw
    int subset_retries = 0;      ///< zero-variance subset draws that were redrawn
    int subset_fallbacks = 0;    ///< retry cap hit, pool variance used instead
    int fresh_found = 0;         ///< zero-variance pool: a differing fresh estimate appeared
    int fresh_forced = 0;        ///< zero-variance pool: retry cap hit, value + 1 forced
    int inner_bootstraps = 0;    ///< full method: second-level bootstraps run
};

struct StudentizedInterval {
    ConfidenceInterval interval;
    StudentizedTrace trace;
    double scale = 0.0;          ///< sqrt of the outer-estimate variance
    std::vector<double> z_sorted;
};

/// Bootstrap-t with a second-level bootstrap of size B' per outer replicate.
StudentizedInterval studentized_full(const PixelStrip& strip, const Detector& detector,
                                     const BootstrapConfig& config, Rng& rng);

/// Bootstrap-t whose per-replicate variances come from B'-subsets of the
/// outer estimates (no second-level bootstrap).
StudentizedInterval studentized_st1(const PixelStrip& strip, const Detector& detector,
                                    const BootstrapConfig& config, Rng& rng);

/// As ST1, but the subsets are drawn from a pool of B_x extra resample estimates.
StudentizedInterval studentized_st2(const PixelStrip& strip, const Detector& detector,
                                    const BootstrapConfig& config, Rng& rng);

/// Produces one fresh bootstrap estimate of the original strip on demand.
using FreshEstimate = std::function<int()>;

/// ST1 / ST2 core on already computed estimates. Per outer replicate b:
/// Z_b = 0 when outer[b] == center; otherwise its variance comes from
/// B'-subsets drawn from `pool` (outer estimates for ST1, extra resample
/// estimates for ST2), or, when `pool` has zero variance, from the pool
/// patched with a fresh estimate that differs from pool[0].
StudentizedInterval studentized_from_pool(std::span<const int> outer, int center, SplitRange range,
                                          std::span<const int> pool, const BootstrapConfig& config,
                                          const FreshEstimate& fresh, Rng& rng);

ConfidenceInterval ci_studentized_full(const PixelStrip& strip, const Detector& detector,
                                       const BootstrapConfig& config, Rng& rng);
ConfidenceInterval ci_st1(const PixelStrip& strip, const Detector& detector,
                          const BootstrapConfig& config, Rng& rng);
ConfidenceInterval ci_st2(const PixelStrip& strip, const Detector& detector,
                          const BootstrapConfig& config, Rng& rng);

/// Dispatches on config.method.
ConfidenceInterval confidence_interval(const PixelStrip& strip, const Detector& detector,
                                       const BootstrapConfig& config, Rng& rng);

/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const int> values);

}  // namespace edgeci
