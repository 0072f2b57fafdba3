#include "edgeci/detectors.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "edgeci/g0i.hpp"

namespace edgeci {

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
    case DetectorKind::KruskalWallis:
        return "kruskal-wallis";
    case DetectorKind::GambiniML:
        return "gambini";
    case DetectorKind::Custom:
        return "custom";
    }
    return "unknown";
}

SplitRange SplitSearchConfig::resolve(std::size_t n) const {
    const int last = static_cast<int>(n) - 1;
    const int lo = j_min.value_or(margin);
    const int hi = j_max.value_or(static_cast<int>(n) - margin);
    if (lo < 1 || lo > hi || hi > last) {
        throw std::invalid_argument("invalid split range [" + std::to_string(lo) + ", " + std::to_string(hi)
                                    + "] for a strip of " + std::to_string(n) + " values");
    }
    return {lo, hi};
}

namespace {

struct RankSummary {
    std::vector<double> prefix;  // prefix[j] = sum of midranks at positions 1..j
    double sum_sq = 0.0;         // sum of squared midranks
    std::size_t observations = 0;
    std::size_t depth = 1;
    bool ties = false;
};

// Midranks of every observation in the strip. Positions that repeat a
// column of the shared data repeat its pixels, so each distinct value's
// multiplicity comes from the column counts and a single walk over the
// presorted shared data yields all midranks.
RankSummary rank_summary(const PixelStrip& strip) {
    const PixelStrip::Columns& data = strip.columns();
    const std::size_t depth = data.depth;
    const auto index = strip.column_index();

    std::vector<std::uint32_t> mult(data.count(), 0);
    for (std::uint32_t c : index) {
        ++mult[c];
    }

    RankSummary out;
    out.observations = strip.size() * depth;
    out.depth = depth;
    std::vector<double> column_rank_sum(data.count(), 0.0);
    double below = 0.0;
    const std::size_t total = data.sorted.size();
    for (std::size_t i = 0; i < total;) {
        const double v = data.sorted[i];
        std::size_t k = i;
        double count = 0.0;
        while (k < total && data.sorted[k] == v) {
            count += mult[data.sorted_column[k]];
            ++k;
        }
        if (count > 0.0) {
            if (count > 1.0) {
                out.ties = true;
            }
            const double mid = below + 0.5 * (count + 1.0);
            for (std::size_t m = i; m < k; ++m) {
                column_rank_sum[data.sorted_column[m]] += mid;
            }
            out.sum_sq += count * mid * mid;
            below += count;
        }
        i = k;
    }

    out.prefix.assign(strip.size() + 1, 0.0);
    for (std::size_t p = 0; p < strip.size(); ++p) {
        out.prefix[p + 1] = out.prefix[p] + column_rank_sum[index[p]];
    }
    return out;
}

double kw_from_ranks(const RankSummary& r, int j) {
    const double N = static_cast<double>(r.observations);
    const double n1 = static_cast<double>(j) * static_cast<double>(r.depth);
    const double n2 = N - n1;
    const double r1 = r.prefix[static_cast<std::size_t>(j)];
    const double r2 = r.prefix.back() - r1;
    const double between = r1 * r1 / n1 + r2 * r2 / n2;
    if (!r.ties) {
        return 12.0 / (N * (N + 1.0)) * between - 3.0 * (N + 1.0);
    }
    const double centre = N * (N + 1.0) * (N + 1.0) / 4.0;
    const double s2 = (r.sum_sq - centre) / (N - 1.0);
    if (!(s2 > 0.0)) {
        return 0.0;
    }
    return (between - centre) / s2;
}

bool improves(double candidate, double best, TieBreak tie) {
    return tie == TieBreak::Lowest ? candidate > best : candidate >= best;
}

}  // namespace

double kw_statistic(const PixelStrip& strip, int j) {
    const std::size_t n = strip.size();
    if (j < 1 || j > static_cast<int>(n) - 1) {
        throw std::out_of_range("split index " + std::to_string(j) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    return kw_from_ranks(rank_summary(strip), j);
}

EdgeEstimate detect_kw(const PixelStrip& strip, const SplitSearchConfig& config) {
    const SplitRange range = config.resolve(strip.size());
    const RankSummary ranks = rank_summary(strip);
    EdgeEstimate best{DetectorKind::KruskalWallis, range.lo, -std::numeric_limits<double>::infinity()};
    for (int j = range.lo; j <= range.hi; ++j) {
        const double t = kw_from_ranks(ranks, j);
        if (improves(t, best.objective, config.tie_break)) {
            best.j_hat = j;
            best.objective = t;
        }
    }
    return best;
}

namespace {

// Per-position prefix sums shared by all splits of one strip.
struct LoglikCache {
    std::size_t depth;
    std::vector<double> sum;       // z
    std::vector<double> sum_sqrt;  // sqrt(z)
    std::vector<double> sum_log;   // log(z)

    std::vector<double> values;    // position-major copy of the strip

    explicit LoglikCache(const PixelStrip& strip)
        : depth(strip.depth()),
          sum(strip.size() + 1, 0.0),
          sum_sqrt(strip.size() + 1, 0.0),
          sum_log(strip.size() + 1, 0.0),
          values(strip.to_vector()) {
        for (std::size_t p = 0; p < strip.size(); ++p) {
            double s = 0.0;
            double s_sqrt = 0.0;
            double s_log = 0.0;
            for (double z : strip.position(p)) {
                s += z;
                s_sqrt += std::sqrt(z);
                s_log += std::log(z);
            }
            sum[p + 1] = sum[p] + s;
            sum_sqrt[p + 1] = sum_sqrt[p] + s_sqrt;
            sum_log[p + 1] = sum_log[p] + s_log;
        }
    }
};

// Log-likelihood of positions [begin, end) under a G0I law moment-fitted to
// the same segment; -infinity when the fit fails.
double segment_loglik(std::span<const double> z, const LoglikCache& c, std::size_t begin, std::size_t end,
                      double looks) {
    const std::size_t count = (end - begin) * c.depth;
    if (count < 2) {
        return -std::numeric_limits<double>::infinity();
    }
    const double n = static_cast<double>(count);
    const MomentEstimate fit = fit_moments_from((c.sum[end] - c.sum[begin]) / n,
                                                (c.sum_sqrt[end] - c.sum_sqrt[begin]) / n, looks);
    if (!fit.converged) {
        return -std::numeric_limits<double>::infinity();
    }
    const double a = fit.alpha_hat;
    const double g = fit.gamma_hat;
    const double L = looks;
    const double per_obs = L * std::log(L) + std::lgamma(L - a) - a * std::log(g) - std::lgamma(L) - std::lgamma(-a);
    double tail = 0.0;
    for (std::size_t k = begin * c.depth; k < end * c.depth; ++k) {
        tail += std::log(g + L * z[k]);
    }
    return n * per_obs + (L - 1.0) * (c.sum_log[end] - c.sum_log[begin]) - (L - a) * tail;
}

double profile_from_cache(const PixelStrip& strip, const LoglikCache& c, int j, double looks) {
    const auto split = static_cast<std::size_t>(j);
    const double left = segment_loglik(c.values, c, 0, split, looks);
    if (left == -std::numeric_limits<double>::infinity()) {
        return left;
    }
    return left + segment_loglik(c.values, c, split, strip.size(), looks);
}

}  // namespace

double profile_loglik(const PixelStrip& strip, int j, double looks) {
    const std::size_t n = strip.size();
    if (j < 1 || j > static_cast<int>(n) - 1) {
        throw std::out_of_range("split index " + std::to_string(j) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    const LoglikCache cache(strip);
    return profile_from_cache(strip, cache, j, looks);
}

EdgeEstimate detect_gambini(const PixelStrip& strip, double looks, const SplitSearchConfig& config) {
    const SplitRange range = config.resolve(strip.size());
    const LoglikCache cache(strip);
    const double ninf = -std::numeric_limits<double>::infinity();
    EdgeEstimate best{DetectorKind::GambiniML, range.lo, ninf};
    bool any = false;
    for (int j = range.lo; j <= range.hi; ++j) {
        const double ll = profile_from_cache(strip, cache, j, looks);
        if (ll == ninf) {
            continue;
        }
        if (!any || improves(ll, best.objective, config.tie_break)) {
            best.j_hat = j;
            best.objective = ll;
            any = true;
        }
    }
    if (!any) {
        if (range.lo == range.hi) {
            // A single candidate is the answer whatever the data.
            return best;
        }
        throw std::runtime_error("Gambini detector: moment fit failed at every candidate split");
    }
    return best;
}

Detector::Detector(DetectorKind kind, std::string name, SplitSearchConfig config, Fn fn)
    : kind_(kind), name_(std::move(name)), config_(config), fn_(std::move(fn)) {}

Detector Detector::kruskal_wallis(SplitSearchConfig config) {
    return Detector(DetectorKind::KruskalWallis, "kruskal-wallis", config,
                    [config](const PixelStrip& s) { return detect_kw(s, config); });
}

Detector Detector::gambini(double looks, SplitSearchConfig config) {
    if (!(looks >= 1.0)) {
        throw std::invalid_argument("number of looks must be >= 1");
    }
    return Detector(DetectorKind::GambiniML, "gambini", config,
                    [looks, config](const PixelStrip& s) { return detect_gambini(s, looks, config); });
}

Detector Detector::custom(std::string name, SplitSearchConfig config, Fn fn) {
    return Detector(DetectorKind::Custom, std::move(name), config, std::move(fn));
}

Detector make_detector(DetectorKind kind, double looks, SplitSearchConfig search) {
    switch (kind) {
    case DetectorKind::KruskalWallis:
        return Detector::kruskal_wallis(search);
    case DetectorKind::GambiniML:
        return Detector::gambini(looks, search);
    default:
        throw std::invalid_argument("a custom detector needs its own estimator");
    }
}

}  // namespace edgeci
