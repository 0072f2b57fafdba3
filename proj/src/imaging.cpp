#include "edgeci/imaging.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include "edgeci/experiment_io.hpp"
#include "edgeci/parallel.hpp"

namespace edgeci {

RasterParseError::RasterParseError(const std::string& what, std::size_t line, std::size_t byte_offset)
    : std::runtime_error("line " + std::to_string(line) + ", byte " + std::to_string(byte_offset) + ": " + what),
      line_(line),
      byte_offset_(byte_offset) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

/// Cursor over the raw bytes that knows its line number.
class Cursor {
public:
    explicit Cursor(const std::string& data) : data_(data) {}

    std::size_t pos() const { return pos_; }
    std::size_t line() const { return line_; }
    bool done() const { return pos_ >= data_.size(); }

    [[noreturn]] void fail(const std::string& what) const { throw RasterParseError(what, line_, pos_); }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < data_.size(); ++i) {
            if (data_[pos_++] == '\n') {
                ++line_;
            }
        }
    }

    /// Skips whitespace and, in PGM headers, comments running to end of line.
    void skip_space(bool comments) {
        while (!done()) {
            const char c = data_[pos_];
            if (is_space(c)) {
                advance();
            } else if (comments && c == '#') {
                while (!done() && data_[pos_] != '\n') {
                    advance();
                }
            } else {
                break;
            }
        }
    }

    unsigned long read_unsigned(const char* what, bool comments) {
        skip_space(comments);
        if (done()) {
            fail(std::string("unexpected end of data, expected ") + what);
        }
        unsigned long v = 0;
        const char* begin = data_.data() + pos_;
        const char* end = data_.data() + data_.size();
        const auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || (ptr != end && !is_space(*ptr) && *ptr != '#')) {
            fail(std::string("invalid ") + what);
        }
        advance(static_cast<std::size_t>(ptr - begin));
        return v;
    }

    unsigned char byte() const { return static_cast<unsigned char>(data_[pos_]); }

private:
    const std::string& data_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

Image parse_pgm(const std::string& data, bool binary_expected, std::optional<bool> force) {
    Cursor cur(data);
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5')) {
        cur.fail("missing PGM magic number P2 or P5");
    }
    const bool binary = data[1] == '5';
    if (force && *force != binary) {
        cur.fail(binary_expected ? "expected binary PGM (P5)" : "expected ASCII PGM (P2)");
    }
    cur.advance(2);
    if (!cur.done() && !is_space(cur.byte())) {
        cur.fail("missing whitespace after magic number");
    }
    const unsigned long width = cur.read_unsigned("width", true);
    const unsigned long height = cur.read_unsigned("height", true);
    const unsigned long maxval = cur.read_unsigned("maxval", true);
    if (width == 0 || height == 0) {
        cur.fail("zero image dimension");
    }
    if (maxval == 0 || maxval > 65535) {
        cur.fail("maxval must be in 1..65535");
    }
    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<double> pixels(count);
    if (binary) {
        if (cur.done() || !is_space(cur.byte())) {
            cur.fail("missing whitespace before binary data");
        }
        cur.advance();
        const std::size_t bytes = maxval > 255 ? 2 : 1;
        if (data.size() - cur.pos() < count * bytes) {
            cur.fail("binary data shorter than " + std::to_string(count * bytes) + " bytes");
        }
        for (std::size_t i = 0; i < count; ++i) {
            unsigned long v = cur.byte();
            cur.advance();
            if (bytes == 2) {
                v = (v << 8) | cur.byte();
                cur.advance();
            }
            if (v > maxval) {
                cur.fail("sample exceeds maxval");
            }
            pixels[i] = static_cast<double>(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned long v = cur.read_unsigned("sample", true);
            if (v > maxval) {
                cur.fail("sample exceeds maxval");
            }
            pixels[i] = static_cast<double>(v);
        }
    }
    return Image(width, height, std::move(pixels));
}

Image parse_csv_matrix(const std::string& data) {
    std::vector<double> pixels;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start < data.size()) {
        ++line;
        std::size_t stop = data.find('\n', start);
        if (stop == std::string::npos) {
            stop = data.size();
        }
        std::string_view row(data.data() + start, stop - start);
        if (!row.empty() && row.back() == '\r') {
            row.remove_suffix(1);
        }
        const std::size_t row_start = start;
        start = stop + 1;
        if (row.find_first_not_of(" \t") == std::string_view::npos) {
            continue;
        }
        std::size_t fields = 0;
        std::size_t field_start = 0;
        while (true) {
            const std::size_t comma = row.find(',', field_start);
            std::string_view field = row.substr(field_start, comma == std::string_view::npos ? row.npos : comma - field_start);
            const std::size_t offset = row_start + field_start;
            const auto first = field.find_first_not_of(" \t");
            const auto last = field.find_last_not_of(" \t");
            if (first == std::string_view::npos) {
                throw RasterParseError("empty field", line, offset);
            }
            field = field.substr(first, last - first + 1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw RasterParseError("invalid number '" + std::string(field) + "'", line, offset + first);
            }
            if (!std::isfinite(v) || v < 0.0) {
                throw RasterParseError("intensity must be finite and nonnegative", line, offset + first);
            }
            pixels.push_back(v);
            ++fields;
            if (comma == std::string_view::npos) {
                break;
            }
            field_start = comma + 1;
        }
        if (height == 0) {
            width = fields;
        } else if (fields != width) {
            throw RasterParseError("row has " + std::to_string(fields) + " values, expected " + std::to_string(width),
                                   line, row_start);
        }
        ++height;
    }
    if (height == 0) {
        throw RasterParseError("empty matrix", line == 0 ? 1 : line, data.size());
    }
    return Image(width, height, std::move(pixels));
}

std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

}  // namespace

Raster read_raster(std::istream& in, RasterFormat format, std::string source) {
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw RasterIoError("read error on " + (source.empty() ? std::string("input") : source));
    }
    if (format == RasterFormat::Auto) {
        const bool pgm = data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5');
        format = pgm ? RasterFormat::PgmAscii : RasterFormat::CsvMatrix;
        if (pgm) {
            return {parse_pgm(data, false, std::nullopt), std::move(source)};
        }
    }
    switch (format) {
        case RasterFormat::PgmAscii:
            return {parse_pgm(data, false, false), std::move(source)};
        case RasterFormat::PgmBinary:
            return {parse_pgm(data, true, true), std::move(source)};
        default:
            return {parse_csv_matrix(data), std::move(source)};
    }
}

Raster load_raster(const std::string& path, RasterFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw RasterIoError("cannot open '" + path + "'");
    }
    return read_raster(in, format, path);
}

void write_csv_matrix(std::ostream& out, const Image& image) {
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            if (x > 0) {
                out << ',';
            }
            out << format_number(image.at(x, y));
        }
        out << '\n';
    }
}

void write_pgm(std::ostream& out, const Image& image, bool binary, int maxval) {
    if (maxval < 1 || maxval > 65535) {
        throw std::invalid_argument("maxval must be in 1..65535");
    }
    out << (binary ? "P5" : "P2") << '\n' << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
    auto level = [&](double v) {
        const double r = std::round(v);
        return static_cast<unsigned>(std::clamp(r, 0.0, static_cast<double>(maxval)));
    };
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            const unsigned v = level(image.at(x, y));
            if (binary) {
                if (maxval > 255) {
                    out.put(static_cast<char>(v >> 8));
                }
                out.put(static_cast<char>(v & 0xFF));
            } else {
                out << v << (x + 1 == image.width() ? '\n' : ' ');
            }
        }
    }
}

std::string_view to_string(LineOrientation o) {
    return o == LineOrientation::Horizontal ? "horizontal" : "vertical";
}

LineOrientation parse_orientation(std::string_view name) {
    if (name == "horizontal") {
        return LineOrientation::Horizontal;
    }
    if (name == "vertical") {
        return LineOrientation::Vertical;
    }
    throw std::invalid_argument("orientation must be horizontal or vertical, got '" + std::string(name) + "'");
}

void WindowSpec::validate(std::size_t raster_width, std::size_t raster_height) const {
    if (rect.w == 0 || rect.h == 0) {
        throw std::invalid_argument("empty rectangle");
    }
    if (rect.x + rect.w > raster_width || rect.y + rect.h > raster_height) {
        throw std::invalid_argument("rectangle exceeds the raster bounds");
    }
    if (n_windows < 1) {
        throw std::invalid_argument("n_windows must be >= 1");
    }
    const bool horizontal = orientation == LineOrientation::Horizontal;
    const std::size_t transverse = horizontal ? rect.h : rect.w;
    const std::size_t along = horizontal ? rect.w : rect.h;
    if (transverse % static_cast<std::size_t>(n_windows) != 0) {
        throw std::invalid_argument("transverse extent " + std::to_string(transverse) + " is not divisible into "
                                    + std::to_string(n_windows) + " windows");
    }
    if (along < 4) {
        throw std::invalid_argument("detection line shorter than 4 pixels");
    }
}

std::vector<Window> extract_windows(const Image& raster, const WindowSpec& spec) {
    spec.validate(raster.width(), raster.height());
    const bool horizontal = spec.orientation == LineOrientation::Horizontal;
    const std::size_t n = static_cast<std::size_t>(spec.n_windows);
    std::vector<Window> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Window win;
        win.index = static_cast<int>(i);
        if (horizontal) {
            const std::size_t t = spec.rect.h / n;
            win.bounds = {spec.rect.x, spec.rect.y + i * t, spec.rect.w, t};
            win.pixels = raster.crop(win.bounds.x, win.bounds.y, win.bounds.w, win.bounds.h);
            win.line = {static_cast<int>(win.bounds.x), static_cast<int>(win.bounds.y + t / 2), 1, 0};
        } else {
            const std::size_t t = spec.rect.w / n;
            win.bounds = {spec.rect.x + i * t, spec.rect.y, t, spec.rect.h};
            const Image block = raster.crop(win.bounds.x, win.bounds.y, win.bounds.w, win.bounds.h);
            // Transpose so columns run along the line.
            Image rotated(block.height(), block.width());
            for (std::size_t y = 0; y < block.height(); ++y) {
                for (std::size_t x = 0; x < block.width(); ++x) {
                    rotated.at(y, x) = block.at(x, y);
                }
            }
            win.pixels = std::move(rotated);
            win.line = {static_cast<int>(win.bounds.x + t / 2), static_cast<int>(win.bounds.y), 0, 1};
        }
        win.aggregation = spec.aggregation;
        out.push_back(std::move(win));
    }
    return out;
}

std::vector<WindowSpec> parse_rectangles(std::istream& in) {
    std::vector<WindowSpec> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream fields(raw);
        std::vector<std::string> tok{std::istream_iterator<std::string>(fields), std::istream_iterator<std::string>()};
        if (tok.empty()) {
            continue;
        }
        const std::string where = "rectangle line " + std::to_string(line) + ": ";
        if (tok.size() != 7) {
            throw std::invalid_argument(where + "expected 'x y w h orientation n_windows aggregation'");
        }
        auto number = [&](const std::string& s, const char* name) {
            long long v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
                throw std::invalid_argument(where + "invalid " + name + " '" + s + "'");
            }
            return v;
        };
        WindowSpec spec;
        spec.rect = {static_cast<std::size_t>(number(tok[0], "x")), static_cast<std::size_t>(number(tok[1], "y")),
                     static_cast<std::size_t>(number(tok[2], "w")), static_cast<std::size_t>(number(tok[3], "h"))};
        try {
            spec.orientation = parse_orientation(tok[4]);
            spec.n_windows = static_cast<int>(number(tok[5], "n_windows"));
            spec.aggregation = parse_aggregation(tok[6]);
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            throw std::invalid_argument(msg.rfind("rectangle line", 0) == 0 ? msg : where + msg);
        }
        out.push_back(spec);
    }
    return out;
}

double zero_offset_for(std::span<const double> values) {
    double smallest = std::numeric_limits<double>::infinity();
    bool zeros = false;
    for (double v : values) {
        if (v > 0.0) {
            smallest = std::min(smallest, v);
        } else {
            zeros = true;
        }
    }
    if (!std::isfinite(smallest)) {
        throw std::domain_error("window has no positive intensity");
    }
    return zeros ? smallest / 2.0 : 0.0;
}

WindowResult analyze_window(const Window& window, const AnalysisOptions& options, Rng& rng) {
    WindowResult res;
    res.window = window.index;
    res.bounds = window.bounds;
    res.line = window.line;
    res.line_length = static_cast<int>(window.pixels.width());
    const std::uint64_t base = rng.next_u64();
    std::optional<PixelStrip> strip;
    std::optional<Detector> detector;
    try {
        Image img = window.pixels;
        res.zero_offset = zero_offset_for(img.pixels());
        if (res.zero_offset > 0.0) {
            for (double& v : img.pixels()) {
                v += res.zero_offset;
            }
        }
        strip.emplace(image_to_strip(img, window.aggregation, window.line));
        detector.emplace(make_detector(options.detector, options.looks, options.search));
        res.estimate = (*detector)(*strip);
        res.estimate_point = window.line.element(res.estimate->j_hat);
    } catch (const std::exception& e) {
        res.error = e.what();
        return res;
    }

    for (std::size_t m = 0; m < options.methods.size(); ++m) {
        WindowInterval wi;
        wi.method = options.methods[m];
        BootstrapConfig b = options.bootstrap;
        b.method = wi.method;
        b.workers = 1;
        Rng method_rng = Rng::substream(base, {static_cast<std::uint64_t>(wi.method)});
        try {
            wi.interval = confidence_interval(*strip, *detector, b, method_rng);
            wi.lower_point = window.line.element(wi.interval->lower);
            wi.upper_point = window.line.element(wi.interval->upper);
        } catch (const std::exception& e) {
            wi.error = e.what();
        }
        res.intervals.push_back(std::move(wi));
    }
    if (!res.intervals.empty() && res.intervals.front().interval) {
        const int len = res.intervals.front().interval->length();
        res.no_edge_suspected = len >= options.wide_fraction * res.line_length;
    }
    return res;
}

std::vector<WindowResult> analyze_raster(const Image& raster, const std::vector<WindowSpec>& rectangles,
                                         const AnalysisOptions& options) {
    if (options.methods.empty()) {
        throw std::invalid_argument("at least one interval method is required");
    }
    options.bootstrap.validate();
    struct Job {
        int rectangle;
        Window window;
    };
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < rectangles.size(); ++r) {
        for (Window& w : extract_windows(raster, rectangles[r])) {
            jobs.push_back({static_cast<int>(r), std::move(w)});
        }
    }
    std::vector<WindowResult> out(jobs.size());
    parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
        Rng rng = Rng::substream(options.seed, {static_cast<std::uint64_t>(jobs[i].rectangle),
                                                static_cast<std::uint64_t>(jobs[i].window.index)});
        out[i] = analyze_window(jobs[i].window, options, rng);
        out[i].rectangle = jobs[i].rectangle;
    });
    return out;
}

namespace {

std::string svg_point(StripGeometry::Point p) {
    return format_number(p.x + 0.5) + "," + format_number(p.y + 0.5);
}

void polyline(std::ostream& out, const std::vector<std::string>& points, const char* colour, const char* role) {
    if (points.empty()) {
        return;
    }
    out << "  <polyline class=\"" << role << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << (i ? " " : "") << points[i];
    }
    out << "\"/>\n";
}

}  // namespace

void write_overlay_svg(std::ostream& out, const std::vector<WindowResult>& results, std::size_t width,
                       std::size_t height) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    for (const WindowResult& r : results) {
        out << "  <rect class=\"window\" x=\"" << r.bounds.x << "\" y=\"" << r.bounds.y << "\" width=\""
            << r.bounds.w << "\" height=\"" << r.bounds.h << "\" fill=\"none\" stroke=\"yellow\"/>\n";
    }
    std::vector<int> rects;
    for (const WindowResult& r : results) {
        if (std::find(rects.begin(), rects.end(), r.rectangle) == rects.end()) {
            rects.push_back(r.rectangle);
        }
    }
    for (int rect : rects) {
        std::vector<std::string> lower;
        std::vector<std::string> upper;
        std::vector<std::string> estimate;
        for (const WindowResult& r : results) {
            if (r.rectangle != rect || !r.ok()) {
                continue;
            }
            estimate.push_back(svg_point(r.estimate_point));
            if (!r.intervals.empty() && r.intervals.front().interval) {
                lower.push_back(svg_point(r.intervals.front().lower_point));
                upper.push_back(svg_point(r.intervals.front().upper_point));
            }
        }
        polyline(out, lower, "green", "lower");
        polyline(out, upper, "green", "upper");
        polyline(out, estimate, "red", "estimate");
    }
    out << "</svg>\n";
}

void write_window_csv(std::ostream& out, const std::vector<WindowResult>& results,
                      const std::vector<CiMethod>& methods) {
    out << "rectangle,window,line_x0,line_y0,line_dx,line_dy,line_length,zero_offset,j_hat,j_hat_x,j_hat_y";
    for (CiMethod m : methods) {
        const std::string p(to_string(m));
        out << ',' << p << "_lower," << p << "_lower_x," << p << "_lower_y," << p << "_upper," << p << "_upper_x,"
            << p << "_upper_y," << p << "_length," << p << "_error";
    }
    out << ",no_edge_suspected,error\n";
    for (const WindowResult& r : results) {
        out << r.rectangle << ',' << r.window << ',' << r.line.x0 << ',' << r.line.y0 << ',' << r.line.dx << ','
            << r.line.dy << ',' << r.line_length << ',' << format_number(r.zero_offset) << ',';
        if (r.estimate) {
            out << r.estimate->j_hat << ',' << r.estimate_point.x << ',' << r.estimate_point.y;
        } else {
            out << ",,";
        }
        for (CiMethod m : methods) {
            const WindowInterval* wi = nullptr;
            for (const WindowInterval& c : r.intervals) {
                if (c.method == m) {
                    wi = &c;
                }
            }
            if (wi && wi->interval) {
                out << ',' << wi->interval->lower << ',' << wi->lower_point.x << ',' << wi->lower_point.y << ','
                    << wi->interval->upper << ',' << wi->upper_point.x << ',' << wi->upper_point.y << ','
                    << wi->interval->length() << ',';
            } else {
                out << ",,,,,,,," << csv_quote(wi ? wi->error : std::string());
            }
        }
        out << ',' << (r.no_edge_suspected ? 1 : 0) << ',' << csv_quote(r.error) << '\n';
    }
}

}  // namespace edgeci
