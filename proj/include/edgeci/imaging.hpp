#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgeci/bootstrap.hpp"
#include "edgeci/detectors.hpp"
#include "edgeci/image.hpp"

namespace edgeci {

enum class RasterFormat { Auto, PgmAscii, PgmBinary, CsvMatrix };

struct Raster {
    Image image;
    std::string source;
};

/// Malformed raster text. `line` is 1-based; `byte_offset` counts from the
/// start of the input.
class RasterParseError : public std::runtime_error {
public:
    RasterParseError(const std::string& what, std::size_t line, std::size_t byte_offset);
    std::size_t line() const { return line_; }
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t line_;
    std::size_t byte_offset_;
};

/// The input file could not be opened.
class RasterIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// PGM (P2, P5 with 8- or big-endian 16-bit samples) or a CSV matrix with one
/// image row per line. Auto picks PGM when the data starts with "P2"/"P5".
Raster read_raster(std::istream& in, RasterFormat format = RasterFormat::Auto, std::string source = {});
Raster load_raster(const std::string& path, RasterFormat format = RasterFormat::Auto);

/// Shortest representation that reads back to the same doubles.
void write_csv_matrix(std::ostream& out, const Image& image);
/// Values are rounded and clipped to [0, maxval].
void write_pgm(std::ostream& out, const Image& image, bool binary, int maxval = 255);

/// Direction of the detection line inside each window.
enum class LineOrientation { Horizontal, Vertical };

std::string_view to_string(LineOrientation o);
LineOrientation parse_orientation(std::string_view name);

struct Rect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t w = 0;
    std::size_t h = 0;
};

/// A rectangle cut into n_windows equal windows across the line direction.
/// Horizontal lines: windows are h / n_windows rows tall, each line runs
/// along x through the window's middle row. Vertical lines: windows are
/// w / n_windows columns wide, each line runs along y through the middle
/// column.
struct WindowSpec {
    Rect rect;
    LineOrientation orientation = LineOrientation::Horizontal;
    int n_windows = 1;
    Aggregation aggregation = Aggregation::AllPixelsFlattened;

    /// Throws std::invalid_argument when the rectangle leaves the raster, is
    /// not divisible into n_windows, or gives lines shorter than 4 pixels.
    void validate(std::size_t raster_width, std::size_t raster_height) const;
};

/// One window, rotated so that its columns run along the detection line.
struct Window {
    int index = 0;
    Rect bounds;              ///< in raster coordinates
    Image pixels;             ///< transverse rows x line positions
    StripGeometry line;       ///< raster coordinates of each line position
    Aggregation aggregation = Aggregation::AllPixelsFlattened;
};

std::vector<Window> extract_windows(const Image& raster, const WindowSpec& spec);

/// `x y w h orientation n_windows aggregation` per line, `#` comments.
/// Throws std::invalid_argument naming the offending line.
std::vector<WindowSpec> parse_rectangles(std::istream& in);

struct AnalysisOptions {
    DetectorKind detector = DetectorKind::KruskalWallis;
    double looks = 1.0;                 ///< for the likelihood detector
    SplitSearchConfig search = SplitSearchConfig::full();
    BootstrapConfig bootstrap;          ///< `method` is ignored, see methods
    std::vector<CiMethod> methods{CiMethod::PERC};
    std::uint64_t seed = 1;
    /// Intervals of the first method at least this fraction of the line
    /// length flag the window as "no edge suspected".
    double wide_fraction = 0.4;
    int workers = 1;
};

struct WindowInterval {
    CiMethod method = CiMethod::PERC;
    std::optional<ConfidenceInterval> interval;
    StripGeometry::Point lower_point{0, 0};
    StripGeometry::Point upper_point{0, 0};
    std::string error;
};

struct WindowResult {
    int rectangle = 0;
    int window = 0;
    Rect bounds;
    StripGeometry line;
    int line_length = 0;
    double zero_offset = 0.0;     ///< added to every pixel when zeros were present
    std::optional<EdgeEstimate> estimate;
    StripGeometry::Point estimate_point{0, 0};
    std::vector<WindowInterval> intervals;
    bool no_edge_suspected = false;
    std::string error;

    bool ok() const { return estimate.has_value() && error.empty(); }
};

/// Half the smallest positive value when `values` contain zeros, else 0.
/// Throws std::domain_error when no value is positive.
double zero_offset_for(std::span<const double> values);

/// Detect and bound the edge on one window. Line index j maps to the raster
/// pixel of line element j, the last pixel before the edge. Errors are
/// recorded in the result rather than thrown.
WindowResult analyze_window(const Window& window, const AnalysisOptions& options, Rng& rng);

/// All windows of all rectangles; window w of rectangle r draws from
/// sub-stream (seed, r, w), so results do not depend on `workers`.
std::vector<WindowResult> analyze_raster(const Image& raster, const std::vector<WindowSpec>& rectangles,
                                         const AnalysisOptions& options);

/// SVG sized to the raster: a yellow rectangle per window and, per raster
/// rectangle, green polylines through the lower and upper limits and a red
/// polyline through the estimates of the first method.
void write_overlay_svg(std::ostream& out, const std::vector<WindowResult>& results, std::size_t width,
                       std::size_t height);

/// One row per window with raster coordinates of every limit.
void write_window_csv(std::ostream& out, const std::vector<WindowResult>& results,
                      const std::vector<CiMethod>& methods);

}  // namespace edgeci
