#include "edgeci/strip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edgeci {

std::optional<int> StripGeometry::index_of(Point p) const {
    const int ox = p.x - x0;
    const int oy = p.y - y0;
    int steps = 0;
    if (dx != 0) {
        if (ox % dx != 0) {
            return std::nullopt;
        }
        steps = ox / dx;
    } else if (dy != 0) {
        if (oy % dy != 0) {
            return std::nullopt;
        }
        steps = oy / dy;
    }
    if (steps < 0 || ox != steps * dx || oy != steps * dy) {
        return std::nullopt;
    }
    return steps + 1;
}

PixelStrip::PixelStrip(std::vector<double> values, std::optional<StripGeometry> origin)
    : PixelStrip(std::move(values), 1, origin) {}

PixelStrip::PixelStrip(std::vector<double> values, std::size_t depth, std::optional<StripGeometry> origin)
    : origin_(origin) {
    if (depth == 0 || values.size() % depth != 0) {
        throw std::invalid_argument("pixel strip value count must be a positive multiple of its depth");
    }
    const std::size_t positions = values.size() / depth;
    if (positions < 4) {
        throw std::invalid_argument("a pixel strip needs at least 4 positions, got " + std::to_string(positions));
    }
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("pixel strip values must be finite and strictly positive");
        }
    }
    auto data = std::make_shared<Columns>();
    data->depth = depth;
    std::vector<std::uint32_t> order(values.size());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
    data->sorted.reserve(order.size());
    data->sorted_column.reserve(order.size());
    for (std::uint32_t i : order) {
        data->sorted.push_back(values[i]);
        data->sorted_column.push_back(static_cast<std::uint32_t>(i / depth));
    }
    data->values = std::move(values);
    data_ = std::move(data);
    index_.resize(positions);
    std::iota(index_.begin(), index_.end(), std::uint32_t{0});
}

PixelStrip::PixelStrip(std::shared_ptr<const Columns> data, std::vector<std::uint32_t> index,
                       std::optional<StripGeometry> origin)
    : data_(std::move(data)), index_(std::move(index)), origin_(origin) {}

std::vector<double> PixelStrip::to_vector() const {
    std::vector<double> out;
    out.reserve(size() * depth());
    for (std::size_t k = 0; k < size(); ++k) {
        const auto p = position(k);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

PixelStrip PixelStrip::select(std::span<const std::uint32_t> picks) const {
    std::vector<std::uint32_t> index(picks.size());
    for (std::size_t k = 0; k < picks.size(); ++k) {
        if (picks[k] >= index_.size()) {
            throw std::out_of_range("strip position " + std::to_string(picks[k]) + " out of range");
        }
        index[k] = index_[picks[k]];
    }
    if (index.size() < 4) {
        throw std::invalid_argument("a pixel strip needs at least 4 positions");
    }
    return PixelStrip(data_, std::move(index), origin_);
}

}  // namespace edgeci
