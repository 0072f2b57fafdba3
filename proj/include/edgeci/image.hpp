#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgeci/strip.hpp"

namespace edgeci {

/// Row-major grid of nonnegative intensities.
class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0);
    /// Throws std::invalid_argument when pixels.size() != width * height.
    Image(std::size_t width, std::size_t height, std::vector<double> pixels);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    double& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
    double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

    std::span<const double> pixels() const { return pixels_; }
    std::span<double> pixels() { return pixels_; }

    /// Copy of the w x h block whose top-left corner is (x, y).
    Image crop(std::size_t x, std::size_t y, std::size_t w, std::size_t h) const;

    bool operator==(const Image&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> pixels_;
};

/// How the rows of an image become one observation per column.
enum class Aggregation { TransverseMean, CenterRow, AllPixelsFlattened };

std::string_view to_string(Aggregation a);
/// "mean", "center" or "pixels"; throws std::invalid_argument otherwise.
Aggregation parse_aggregation(std::string_view name);

/// One value per column: the column mean or the middle row. Throws
/// std::invalid_argument for AllPixelsFlattened, which has no single-value form.
std::vector<double> aggregate_columns(const Image& image, Aggregation aggregation);

/// Detector-ready strip along the columns of `image`. TransverseMean and
/// CenterRow give depth 1; AllPixelsFlattened keeps the whole column at each
/// position (depth = image height), so ranks and moment fits see every pixel.
PixelStrip image_to_strip(const Image& image, Aggregation aggregation,
                          std::optional<StripGeometry> origin = std::nullopt);

}  // namespace edgeci
