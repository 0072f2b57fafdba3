#include "edgeci/image.hpp"

#include <stdexcept>
#include <string>

namespace edgeci {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width_ * height_) {
        throw std::invalid_argument("image of " + std::to_string(width_) + "x" + std::to_string(height_)
                                    + " cannot hold " + std::to_string(pixels_.size()) + " pixels");
    }
}

Image Image::crop(std::size_t x, std::size_t y, std::size_t w, std::size_t h) const {
    if (x + w > width_ || y + h > height_) {
        throw std::out_of_range("crop rectangle exceeds image bounds");
    }
    Image out(w, h);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            out.at(c, r) = at(x + c, y + r);
        }
    }
    return out;
}

std::string_view to_string(Aggregation a) {
    switch (a) {
    case Aggregation::TransverseMean:
        return "mean";
    case Aggregation::CenterRow:
        return "center";
    case Aggregation::AllPixelsFlattened:
        return "pixels";
    }
    return "unknown";
}

Aggregation parse_aggregation(std::string_view name) {
    if (name == "mean") {
        return Aggregation::TransverseMean;
    }
    if (name == "center") {
        return Aggregation::CenterRow;
    }
    if (name == "pixels") {
        return Aggregation::AllPixelsFlattened;
    }
    throw std::invalid_argument("unknown aggregation '" + std::string(name) + "' (expected mean, center or pixels)");
}

std::vector<double> aggregate_columns(const Image& image, Aggregation aggregation) {
    if (image.empty()) {
        throw std::invalid_argument("cannot build a strip from an empty image");
    }
    std::vector<double> out(image.width(), 0.0);
    switch (aggregation) {
    case Aggregation::TransverseMean:
        for (std::size_t y = 0; y < image.height(); ++y) {
            for (std::size_t x = 0; x < image.width(); ++x) {
                out[x] += image.at(x, y);
            }
        }
        for (double& v : out) {
            v /= static_cast<double>(image.height());
        }
        return out;
    case Aggregation::CenterRow:
        for (std::size_t x = 0; x < image.width(); ++x) {
            out[x] = image.at(x, image.height() / 2);
        }
        return out;
    case Aggregation::AllPixelsFlattened:
        break;
    }
    throw std::invalid_argument("aggregation 'pixels' keeps every pixel of a column and has no single-value form");
}

PixelStrip image_to_strip(const Image& image, Aggregation aggregation, std::optional<StripGeometry> origin) {
    if (aggregation != Aggregation::AllPixelsFlattened) {
        return PixelStrip(aggregate_columns(image, aggregation), origin);
    }
    if (image.empty()) {
        throw std::invalid_argument("cannot build a strip from an empty image");
    }
    std::vector<double> values;
    values.reserve(image.width() * image.height());
    for (std::size_t x = 0; x < image.width(); ++x) {
        for (std::size_t y = 0; y < image.height(); ++y) {
            values.push_back(image.at(x, y));
        }
    }
    return PixelStrip(std::move(values), image.height(), origin);
}

}  // namespace edgeci
