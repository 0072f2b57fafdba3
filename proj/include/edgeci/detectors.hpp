#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "edgeci/strip.hpp"

namespace edgeci {

enum class DetectorKind { KruskalWallis, GambiniML, Custom };
enum class TieBreak { Lowest, Highest };

std::string_view to_string(DetectorKind kind);

/// Inclusive range of candidate split indices j; the edge sits between
/// strip elements j and j + 1 (1-based).
struct SplitRange {
    int lo;
    int hi;

    int clamp(int j) const { return j < lo ? lo : (j > hi ? hi : j); }
    bool contains(int j) const { return lo <= j && j <= hi; }
};

/// Candidate split range and argmax tie rule. Unset bounds default to
/// j_min = margin, j_max = N - margin; the default margin 2 keeps at least
/// two observations on each side.
struct SplitSearchConfig {
    std::optional<int> j_min;
    std::optional<int> j_max;
    TieBreak tie_break = TieBreak::Lowest;
    int margin = 2;

    /// Search over every split 1..N-1.
    static SplitSearchConfig full(TieBreak tie = TieBreak::Lowest) { return {{}, {}, tie, 1}; }

    /// Concrete range for a strip of n values. Throws std::invalid_argument
    /// unless 1 <= j_min <= j_max <= n - 1.
    SplitRange resolve(std::size_t n) const;
};

struct EdgeEstimate {
    DetectorKind detector = DetectorKind::KruskalWallis;
    int j_hat = 0;
    double objective = 0.0;
};

/// Kruskal-Wallis statistic for the two samples z_1..z_j and z_{j+1}..z_N.
///
/// Midranks are used for ties. Without ties the classic closed form
/// 12/(N(N+1)) sum R_i^2/n_i - 3(N+1) is returned; with ties the
/// statistic is normalized by the midrank variance S^2, and a strip with no
/// rank variation (S^2 = 0) scores 0. Throws std::out_of_range for j outside
/// [1, N-1].
double kw_statistic(const PixelStrip& strip, int j);

/// argmax of kw_statistic over the configured range. Ranks are computed
/// once per strip and per-split rank sums come from a prefix sum.
EdgeEstimate detect_kw(const PixelStrip& strip, const SplitSearchConfig& config = {});

/// Two-sided G0I log-likelihood with moment-fitted parameters on each side.
/// -infinity when a side has fewer than two values or its fit fails.
double profile_loglik(const PixelStrip& strip, int j, double looks);

/// argmax of profile_loglik. Throws std::runtime_error when every candidate
/// evaluates to -infinity.
EdgeEstimate detect_gambini(const PixelStrip& strip, double looks, const SplitSearchConfig& config = {});

/// A point edge detector together with its search range: the unit the
/// bootstrap machinery resamples against.
class Detector {
public:
    using Fn = std::function<EdgeEstimate(const PixelStrip&)>;

    static Detector kruskal_wallis(SplitSearchConfig config = {});
    static Detector gambini(double looks, SplitSearchConfig config = {});
    /// Arbitrary estimator; `config` only supplies the valid range used for clamping.
    static Detector custom(std::string name, SplitSearchConfig config, Fn fn);

    EdgeEstimate operator()(const PixelStrip& strip) const { return fn_(strip); }

    SplitRange range(std::size_t n) const { return config_.resolve(n); }
    DetectorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const SplitSearchConfig& search() const { return config_; }

private:
    Detector(DetectorKind kind, std::string name, SplitSearchConfig config, Fn fn);

    DetectorKind kind_;
    std::string name_;
    SplitSearchConfig config_;
    Fn fn_;
};

/// KruskalWallis or GambiniML detector; throws std::invalid_argument for Custom.
Detector make_detector(DetectorKind kind, double looks, SplitSearchConfig search = {});

}  // namespace edgeci
