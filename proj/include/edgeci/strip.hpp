#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace edgeci {

/// Where a strip sits in an image: pixel coordinates of its first element
/// and the unit step between consecutive elements.
struct StripGeometry {
    int x0 = 0;
    int y0 = 0;
    int dx = 1;
    int dy = 0;

    /// Image coordinates of the 1-based strip element k.
    struct Point {
        int x;
        int y;
        bool operator==(const Point&) const = default;
    };
    Point element(int k) const { return {x0 + (k - 1) * dx, y0 + (k - 1) * dy}; }

    /// Inverse of `element`; returns nullopt for points off the line.
    std::optional<int> index_of(Point p) const;
};

/// Ordered intensities along a detection line.
///
/// Each of the N positions holds `depth` observations: 1 for a plain line,
/// the window height when every pixel of a column is kept. Pixel data is
/// immutable and shared; a strip is a list of columns into that data, so a
/// bootstrap resample (see `select`) costs N indices rather than a copy, and
/// the value order of the shared data is sorted once for every resample.
class PixelStrip {
public:
    /// Shared storage: `values` column-major (column c owns
    /// [c * depth, (c + 1) * depth)); `sorted` holds the same values in
    /// ascending order and `sorted_column` the column each came from.
    struct Columns {
        std::vector<double> values;
        std::size_t depth = 1;
        std::vector<double> sorted;
        std::vector<std::uint32_t> sorted_column;

        std::size_t count() const { return values.size() / depth; }
    };

    /// Throws std::invalid_argument when fewer than 4 positions, any value
    /// <= 0 (or not finite), or a value count that is not a multiple of depth.
    explicit PixelStrip(std::vector<double> values, std::optional<StripGeometry> origin = std::nullopt);
    PixelStrip(std::vector<double> values, std::size_t depth, std::optional<StripGeometry> origin = std::nullopt);

    /// Number of positions N along the line.
    std::size_t size() const { return index_.size(); }
    std::size_t depth() const { return data_->depth; }

    /// Observations at 0-based position k.
    std::span<const double> position(std::size_t k) const {
        return std::span<const double>(data_->values).subspan(index_[k] * data_->depth, data_->depth);
    }
    /// First observation at position k (the value itself when depth == 1).
    double value(std::size_t k) const { return data_->values[index_[k] * data_->depth]; }

    /// All observations, position-major.
    std::vector<double> to_vector() const;

    /// Strip whose position k is position picks[k] of this one; shares storage.
    PixelStrip select(std::span<const std::uint32_t> picks) const;

    const Columns& columns() const { return *data_; }
    /// Column of the shared data shown at each position.
    std::span<const std::uint32_t> column_index() const { return index_; }

    const std::optional<StripGeometry>& origin() const { return origin_; }

private:
    PixelStrip(std::shared_ptr<const Columns> data, std::vector<std::uint32_t> index,
               std::optional<StripGeometry> origin);

    std::shared_ptr<const Columns> data_;
    std::vector<std::uint32_t> index_;
    std::optional<StripGeometry> origin_;
};

}  // namespace edgeci
