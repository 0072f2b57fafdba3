#include "edgeci/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "edgeci/parallel.hpp"

namespace edgeci {

std::string_view to_string(CiMethod m) {
    switch (m) {
    case CiMethod::BBM:
        return "bbm";
    case CiMethod::PERC:
        return "perc";
    case CiMethod::StudentizedFull:
        return "full-t";
    case CiMethod::ST1:
        return "st1";
    case CiMethod::ST2:
        return "st2";
    }
    return "unknown";
}

std::optional<CiMethod> parse_ci_method(std::string_view name) {
    for (CiMethod m : {CiMethod::BBM, CiMethod::PERC, CiMethod::StudentizedFull, CiMethod::ST1, CiMethod::ST2}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

void BootstrapConfig::validate() const {
    if (B < 2) {
        throw std::invalid_argument("bootstrap replications B must be >= 2");
    }
    if (B_prime <= 0) {
        throw std::invalid_argument("B' must be positive");
    }
    if (B_double_prime <= 0) {
        throw std::invalid_argument("B'' must be positive");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    }
    switch (method) {
    case CiMethod::StudentizedFull:
        if (B_prime < 2) {
            throw std::invalid_argument("full bootstrap-t needs B' >= 2");
        }
        break;
    case CiMethod::ST1:
        if (B_prime < 2 || B_prime > B) {
            throw std::invalid_argument("ST1 needs 2 <= B' <= B");
        }
        break;
    case CiMethod::ST2:
        if (B_prime < 2 || B_prime >= B_x) {
            throw std::invalid_argument("ST2 needs 2 <= B' < B_x");
        }
        break;
    default:
        break;
    }
}

double BootstrapDistribution::cdf(int j) const {
    const auto it = std::upper_bound(estimates.begin(), estimates.end(), j);
    return static_cast<double>(it - estimates.begin()) / static_cast<double>(estimates.size());
}

double sample_variance(std::span<const int> values) {
    if (values.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (int v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (int v : values) {
        ss += (v - mean) * (v - mean);
    }
    return ss / static_cast<double>(values.size() - 1);
}

PixelStrip resample_strip(const PixelStrip& strip, int j_hat, Rng& rng) {
    const std::size_t n = strip.size();
    if (j_hat < 1 || j_hat > static_cast<int>(n) - 1) {
        throw std::out_of_range("resampling split " + std::to_string(j_hat) + " outside [1, N-1]");
    }
    const auto split = static_cast<std::size_t>(j_hat);
    std::vector<std::uint32_t> picks(n);
    for (std::size_t i = 0; i < n; ++i) {
        picks[i] = static_cast<std::uint32_t>(i < split ? rng.uniform_index(split)
                                                        : split + rng.uniform_index(n - split));
    }
    return strip.select(picks);
}

namespace {

// Unsorted replicate estimates; replicate b uses sub-stream (base, b).
std::vector<int> replicate_estimates(const PixelStrip& strip, const Detector& detector, int center, int count,
                                     int workers, Rng& rng) {
    const std::uint64_t base = rng.next_u64();
    std::vector<int> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), workers, [&](std::size_t b) {
        Rng sub = Rng::substream(base, {b});
        out[b] = detector(resample_strip(strip, center, sub)).j_hat;
    });
    return out;
}

int original_estimate(const PixelStrip& strip, const Detector& detector) {
    const EdgeEstimate est = detector(strip);
    const SplitRange range = detector.range(strip.size());
    if (!range.contains(est.j_hat)) {
        throw std::runtime_error("detector returned split " + std::to_string(est.j_hat) + " outside its range");
    }
    return est.j_hat;
}

// Rounds outward, treating values within 1e-9 of an integer as that integer.
int floor_snap(double x) {
    const double r = std::round(x);
    return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::floor(x));
}

int ceil_snap(double x) {
    const double r = std::round(x);
    return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::ceil(x));
}

ConfidenceInterval assemble_studentized(CiMethod method, double level, int center, SplitRange range,
                                        double outer_variance, std::vector<double>& z, double& scale_out) {
    std::sort(z.begin(), z.end());
    const int B = static_cast<int>(z.size());
    const double a = 1.0 - level;
    const double t_lo = z[static_cast<std::size_t>(quantile_index(B, a / 2.0) - 1)];
    const double t_hi = z[static_cast<std::size_t>(quantile_index(B, 1.0 - a / 2.0) - 1)];
    const double scale = std::sqrt(outer_variance);
    scale_out = scale;
    ConfidenceInterval ci{method, level, center, center, center, center};
    ci.raw_lower = floor_snap(center - scale * t_hi);
    ci.raw_upper = ceil_snap(center - scale * t_lo);
    ci.lower = range.clamp(ci.raw_lower);
    ci.upper = range.clamp(ci.raw_upper);
    return ci;
}

std::vector<int> draw_subset(std::span<const int> pool, int size, Rng& rng) {
    std::vector<int> out(static_cast<std::size_t>(size));
    for (int& v : out) {
        v = pool[rng.uniform_index(pool.size())];
    }
    return out;
}

// Variance of {pool[0..B'-2], patch} where patch is the first fresh estimate
// that differs from pool[0], or pool[0] + 1 when none does within B'' tries.
double patched_variance(std::span<const int> pool, int b_prime, int b_double_prime, const FreshEstimate& fresh,
                        StudentizedTrace& trace) {
    const int first = pool[0];
    int patch = first;
    for (int attempt = 0; attempt < b_double_prime && patch == first; ++attempt) {
        patch = fresh();
    }
    if (patch == first) {
        patch = first + 1;
        ++trace.fresh_forced;
    } else {
        ++trace.fresh_found;
    }
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(b_prime - 1), pool.size());
    std::vector<int> patched(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep));
    patched.push_back(patch);
    return sample_variance(patched);
}

}  // namespace

BootstrapDistribution bootstrap_distribution(const PixelStrip& strip, const Detector& detector,
                                             const BootstrapConfig& config, Rng& rng) {
    if (config.B < 1) {
        throw std::invalid_argument("bootstrap replications B must be >= 1");
    }
    BootstrapDistribution dist;
    dist.range = detector.range(strip.size());
    dist.center = original_estimate(strip, detector);
    dist.estimates = replicate_estimates(strip, detector, dist.center, config.B, config.workers, rng);
    std::sort(dist.estimates.begin(), dist.estimates.end());
    return dist;
}

int quantile_index(int B, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument("quantile level must lie in (0, 1)");
    }
    const double x = static_cast<double>(B) * q;
    const double r = std::round(x);
    const double idx = std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : std::ceil(x);
    return std::clamp(static_cast<int>(idx), 1, B);
}

ConfidenceInterval ci_basic(const BootstrapDistribution& dist, double level) {
    const int B = static_cast<int>(dist.estimates.size());
    const double a = 1.0 - level;
    const int lo_stat = dist.estimates[static_cast<std::size_t>(quantile_index(B, a / 2.0) - 1)];
    const int hi_stat = dist.estimates[static_cast<std::size_t>(quantile_index(B, 1.0 - a / 2.0) - 1)];
    ConfidenceInterval ci{CiMethod::BBM, level, 0, 0, 2 * dist.center - hi_stat, 2 * dist.center - lo_stat};
    ci.lower = dist.range.clamp(ci.raw_lower);
    ci.upper = dist.range.clamp(ci.raw_upper);
    return ci;
}

ConfidenceInterval ci_percentile(const BootstrapDistribution& dist, double level) {
    const int B = static_cast<int>(dist.estimates.size());
    const double a = 1.0 - level;
    ConfidenceInterval ci{CiMethod::PERC, level, 0, 0, 0, 0};
    ci.lower = dist.estimates[static_cast<std::size_t>(quantile_index(B, a / 2.0) - 1)];
    ci.upper = dist.estimates[static_cast<std::size_t>(quantile_index(B, 1.0 - a / 2.0) - 1)];
    ci.raw_lower = ci.lower;
    ci.raw_upper = ci.upper;
    return ci;
}

StudentizedInterval studentized_from_pool(std::span<const int> outer, int center, SplitRange range,
                                          std::span<const int> pool, const BootstrapConfig& config,
                                          const FreshEstimate& fresh, Rng& rng) {
    StudentizedInterval out;
    const double pool_variance = sample_variance(pool);
    std::vector<double> z(outer.size(), 0.0);
    for (std::size_t b = 0; b < outer.size(); ++b) {
        if (outer[b] == center) {
            ++out.trace.zero_numerator;
            continue;
        }
        double v = 0.0;
        if (pool_variance != 0.0) {
            for (int attempt = 0; attempt < config.B_double_prime; ++attempt) {
                v = sample_variance(draw_subset(pool, config.B_prime, rng));
                if (v > 0.0) {
                    if (attempt == 0) {
                        ++out.trace.subset_first_try;
                    }
                    break;
                }
                ++out.trace.subset_retries;
            }
            if (v == 0.0) {
                v = pool_variance;
                ++out.trace.subset_fallbacks;
            }
        } else {
            v = patched_variance(pool, config.B_prime, config.B_double_prime, fresh, out.trace);
        }
        z[b] = (outer[b] - center) / std::sqrt(v);
    }
    out.interval = assemble_studentized(config.method, config.level, center, range, sample_variance(outer), z,
                                        out.scale);
    out.z_sorted = std::move(z);
    return out;
}

StudentizedInterval studentized_st1(const PixelStrip& strip, const Detector& detector,
                                    const BootstrapConfig& config, Rng& rng) {
    BootstrapConfig cfg = config;
    cfg.method = CiMethod::ST1;
    cfg.validate();
    const SplitRange range = detector.range(strip.size());
    const int center = original_estimate(strip, detector);
    const std::vector<int> outer = replicate_estimates(strip, detector, center, cfg.B, cfg.workers, rng);
    const FreshEstimate fresh = [&] { return detector(resample_strip(strip, center, rng)).j_hat; };
    return studentized_from_pool(outer, center, range, outer, cfg, fresh, rng);
}

StudentizedInterval studentized_st2(const PixelStrip& strip, const Detector& detector,
                                    const BootstrapConfig& config, Rng& rng) {
    BootstrapConfig cfg = config;
    cfg.method = CiMethod::ST2;
    cfg.validate();
    const SplitRange range = detector.range(strip.size());
    const int center = original_estimate(strip, detector);
    const std::vector<int> outer = replicate_estimates(strip, detector, center, cfg.B, cfg.workers, rng);
    const std::vector<int> pool = replicate_estimates(strip, detector, center, cfg.B_x, cfg.workers, rng);
    const FreshEstimate fresh = [&] { return detector(resample_strip(strip, center, rng)).j_hat; };
    return studentized_from_pool(outer, center, range, pool, cfg, fresh, rng);
}

StudentizedInterval studentized_full(const PixelStrip& strip, const Detector& detector,
                                     const BootstrapConfig& config, Rng& rng) {
    BootstrapConfig cfg = config;
    cfg.method = CiMethod::StudentizedFull;
    cfg.validate();
    const SplitRange range = detector.range(strip.size());
    const int center = original_estimate(strip, detector);
    const std::uint64_t base = rng.next_u64();

    const auto count = static_cast<std::size_t>(cfg.B);
    std::vector<int> outer(count);
    std::vector<double> z(count, 0.0);
    std::vector<StudentizedTrace> traces(count);
    parallel_for(count, cfg.workers, [&](std::size_t b) {
        Rng sub = Rng::substream(base, {b});
        const PixelStrip replicate = resample_strip(strip, center, sub);
        const int j_b = detector(replicate).j_hat;
        outer[b] = j_b;

        // Second-level bootstrap on the replicate, split at its own estimate.
        std::vector<int> inner(static_cast<std::size_t>(cfg.B_prime));
        for (int& e : inner) {
            e = detector(resample_strip(replicate, j_b, sub)).j_hat;
        }
        StudentizedTrace& trace = traces[b];
        ++trace.inner_bootstraps;
        if (j_b == center) {
            ++trace.zero_numerator;
            return;
        }
        double v = sample_variance(inner);
        if (v == 0.0) {
            const FreshEstimate fresh = [&] { return detector(resample_strip(replicate, j_b, sub)).j_hat; };
            v = patched_variance(inner, cfg.B_prime, cfg.B_double_prime, fresh, trace);
        } else {
            ++trace.subset_first_try;
        }
        z[b] = (j_b - center) / std::sqrt(v);
    });

    StudentizedInterval out;
    for (const StudentizedTrace& t : traces) {
        out.trace.zero_numerator += t.zero_numerator;
        out.trace.subset_first_try += t.subset_first_try;
        out.trace.fresh_found += t.fresh_found;
        out.trace.fresh_forced += t.fresh_forced;
        out.trace.inner_bootstraps += t.inner_bootstraps;
    }
    out.interval = assemble_studentized(CiMethod::StudentizedFull, cfg.level, center, range, sample_variance(outer),
                                        z, out.scale);
    out.z_sorted = std::move(z);
    return out;
}

ConfidenceInterval ci_studentized_full(const PixelStrip& strip, const Detector& detector,
                                       const BootstrapConfig& config, Rng& rng) {
    return studentized_full(strip, detector, config, rng).interval;
}

ConfidenceInterval ci_st1(const PixelStrip& strip, const Detector& detector, const BootstrapConfig& config,
                          Rng& rng) {
    return studentized_st1(strip, detector, config, rng).interval;
}

ConfidenceInterval ci_st2(const PixelStrip& strip, const Detector& detector, const BootstrapConfig& config,
                          Rng& rng) {
    return studentized_st2(strip, detector, config, rng).interval;
}

ConfidenceInterval confidence_interval(const PixelStrip& strip, const Detector& detector,
                                       const BootstrapConfig& config, Rng& rng) {
    switch (config.method) {
    case CiMethod::BBM:
        config.validate();
        return ci_basic(bootstrap_distribution(strip, detector, config, rng), config.level);
    case CiMethod::PERC:
        config.validate();
        return ci_percentile(bootstrap_distribution(strip, detector, config, rng), config.level);
    case CiMethod::StudentizedFull:
        return ci_studentized_full(strip, detector, config, rng);
    case CiMethod::ST1:
        return ci_st1(strip, detector, config, rng);
    case CiMethod::ST2:
        return ci_st2(strip, detector, config, rng);
    }
    throw std::invalid_argument("unknown interval method");
}

}  // namespace edgeci
