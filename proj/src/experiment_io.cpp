#include "edgeci/experiment_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace edgeci {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view key, int line) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(key), line);
    }
    return v;
}

long long parse_integer(std::string_view text, std::string_view key, int line) {
    text = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(key), line);
    }
    return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) {
            out.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string csv_field(std::string_view s) {
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
    out += '"';
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::vector<CiMethod> parse_method_list(std::string_view text) {
    std::vector<CiMethod> out;
    for (std::string_view item : split_list(text)) {
        const auto m = parse_ci_method(item);
        if (!m) {
            throw ConfigError("unknown interval method '" + std::string(item)
                                  + "' (expected perc, bbm, st1, st2, full-t)",
                              0);
        }
        out.push_back(*m);
    }
    if (out.empty()) {
        throw ConfigError("empty method list", 0);
    }
    return out;
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (std::string_view item : split_list(text)) {
        out.push_back(parse_double(item, "list", 0));
    }
    return out;
}

void apply_setting(ExperimentFile& file, std::string_view key, std::string_view value, int line) {
    ExperimentConfig& c = file.config;
    value = trim(value);
    key = trim(key);
    try {
        if (key == "height") {
            c.spec.height = static_cast<std::size_t>(parse_integer(value, key, line));
        } else if (key == "width") {
            c.spec.width = static_cast<std::size_t>(parse_integer(value, key, line));
        } else if (key == "edge") {
            if (value == "none") {
                c.spec.edge_j.reset();
            } else {
                c.spec.edge_j = static_cast<int>(parse_integer(value, key, line));
            }
        } else if (key == "alpha_left") {
            c.spec.alpha_left = parse_double(value, key, line);
        } else if (key == "alpha_right") {
            c.spec.alpha_right = parse_double(value, key, line);
        } else if (key == "looks") {
            c.spec.looks = parse_double(value, key, line);
        } else if (key == "gamma_rule") {
            if (value == "unit-mean") {
                c.spec.gamma_rule = GammaRule::UnitMean;
            } else if (value == "explicit") {
                c.spec.gamma_rule = GammaRule::Explicit;
            } else {
                throw ConfigError("gamma_rule must be unit-mean or explicit", line);
            }
        } else if (key == "gamma_left") {
            c.spec.gamma_left = parse_double(value, key, line);
        } else if (key == "gamma_right") {
            c.spec.gamma_right = parse_double(value, key, line);
        } else if (key == "replications") {
            c.replications = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "B") {
            c.bootstrap.B = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "B_prime") {
            c.bootstrap.B_prime = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "B_double_prime") {
            c.bootstrap.B_double_prime = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "B_x") {
            c.bootstrap.B_x = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "level") {
            c.bootstrap.level = parse_double(value, key, line);
        } else if (key == "methods") {
            c.methods = parse_method_list(value);
        } else if (key == "detector") {
            if (value == "kw") {
                c.detector = DetectorKind::KruskalWallis;
            } else if (value == "gambini") {
                c.detector = DetectorKind::GambiniML;
            } else {
                throw ConfigError("detector must be kw or gambini", line);
            }
        } else if (key == "aggregation") {
            c.aggregation = parse_aggregation(value);
        } else if (key == "seed") {
            c.master_seed = static_cast<std::uint64_t>(parse_integer(value, key, line));
            file.seed_given = true;
        } else if (key == "workers") {
            c.workers = static_cast<int>(parse_integer(value, key, line));
        } else if (key == "grid_alpha_left") {
            file.grid_alpha_left = parse_number_list(value);
        } else if (key == "grid_alpha_right") {
            file.grid_alpha_right = parse_number_list(value);
        } else {
            throw ConfigError("unknown configuration key '" + std::string(key) + "'", line);
        }
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), line);
    }
}

ExperimentFile parse_experiment_config(std::istream& in, ExperimentFile base) {
    ExperimentFile file = std::move(base);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected key = value", line);
        }
        apply_setting(file, text.substr(0, eq), text.substr(eq + 1), line);
    }
    return file;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json methods = nlohmann::json::array();
    for (CiMethod m : c.methods) {
        methods.push_back(std::string(to_string(m)));
    }
    nlohmann::json j;
    j["height"] = c.spec.height;
    j["width"] = c.spec.width;
    j["edge"] = c.spec.edge_j ? nlohmann::json(*c.spec.edge_j) : nlohmann::json(nullptr);
    j["alpha_left"] = c.spec.alpha_left;
    j["alpha_right"] = c.spec.alpha_right;
    j["looks"] = c.spec.looks;
    j["gamma_rule"] = c.spec.gamma_rule == GammaRule::UnitMean ? "unit-mean" : "explicit";
    j["gamma_left"] = c.spec.left_params().gamma;
    j["gamma_right"] = c.spec.right_params().gamma;
    j["replications"] = c.replications;
    j["B"] = c.bootstrap.B;
    j["B_prime"] = c.bootstrap.B_prime;
    j["B_double_prime"] = c.bootstrap.B_double_prime;
    j["B_x"] = c.bootstrap.B_x;
    j["level"] = c.bootstrap.level;
    j["methods"] = methods;
    j["detector"] = c.detector == DetectorKind::GambiniML ? "gambini" : "kw";
    j["aggregation"] = std::string(to_string(c.aggregation));
    j["seed"] = c.master_seed;
    return j;
}

nlohmann::json to_json(const ConfidenceInterval& ci) {
    return {{"method", std::string(to_string(ci.method))},
            {"level", ci.level},
            {"lower", ci.lower},
            {"upper", ci.upper},
            {"raw_lower", ci.raw_lower},
            {"raw_upper", ci.raw_upper},
            {"length", ci.length()}};
}

nlohmann::json to_json(const ExperimentReport& report, bool include_timing) {
    nlohmann::json methods = nlohmann::json::array();
    for (const MethodSummary& s : report.methods) {
        nlohmann::json m;
        m["method"] = std::string(to_string(s.method));
        m["completed"] = s.completed;
        m["failures"] = s.failures;
        if (s.coverage) {
            m["coverage"] = *s.coverage;
            m["distance"] = *s.distance;
        }
        if (s.delta) {
            m["delta"] = *s.delta;
        }
        m["mean_length"] = s.mean_length;
        if (include_timing) {
            m["mean_runtime_s"] = s.mean_runtime;
        }
        methods.push_back(m);
    }
    nlohmann::json j;
    j["version"] = std::string(kVersion);
    j["config"] = to_json(report.config);
    j["has_edge"] = report.config.spec.has_edge();
    j["methods"] = methods;
    return j;
}

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports, bool include_timing) {
    bool any_edge = false;
    for (const ExperimentReport& r : reports) {
        any_edge = any_edge || r.config.spec.has_edge();
    }
    out << "alpha_left,alpha_right,looks,edge,replications,B,level,seed,method,completed,failures";
    if (any_edge) {
        out << ",coverage,distance,delta";
    }
    out << ",mean_length";
    if (include_timing) {
        out << ",mean_runtime_s";
    }
    out << '\n';
    for (const ExperimentReport& r : reports) {
        const ExperimentConfig& c = r.config;
        for (const MethodSummary& s : r.methods) {
            out << format_number(c.spec.alpha_left) << ',' << format_number(c.spec.alpha_right) << ','
                << format_number(c.spec.looks) << ',' << (c.spec.has_edge() ? std::to_string(*c.spec.edge_j) : "none")
                << ',' << c.replications << ',' << c.bootstrap.B << ',' << format_number(c.bootstrap.level) << ','
                << c.master_seed << ',' << to_string(s.method) << ',' << s.completed << ',' << s.failures;
            if (any_edge) {
                out << ',' << (s.coverage ? format_number(*s.coverage) : "") << ','
                    << (s.distance ? format_number(*s.distance) : "") << ','
                    << (s.delta ? format_number(*s.delta) : "");
            }
            out << ',' << format_number(s.mean_length);
            if (include_timing) {
                out << ',' << format_number(s.mean_runtime);
            }
            out << '\n';
        }
    }
}

void write_trace_csv(std::ostream& out, const ExperimentReport& report, bool include_timing) {
    out << "replication,j_hat,method,lower,upper,length,covered";
    if (include_timing) {
        out << ",seconds";
    }
    out << ",error\n";
    const bool edge = report.config.spec.has_edge();
    for (const ReplicationRecord& rec : report.trace) {
        for (const MethodOutcome& o : rec.outcomes) {
            out << rec.replication << ',' << rec.j_hat << ',' << to_string(o.method) << ',';
            if (o.interval) {
                out << o.interval->lower << ',' << o.interval->upper << ',' << o.interval->length() << ','
                    << (edge ? (o.interval->contains(*report.config.spec.edge_j) ? "1" : "0") : "");
            } else {
                out << ",,,";
            }
            if (include_timing) {
                out << ',' << format_number(o.seconds);
            }
            out << ',' << csv_field(o.error) << '\n';
        }
    }
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "method,mean_seconds,percent_of_full_t\n";
    for (const BenchmarkRow& r : rows) {
        out << to_string(r.method) << ',' << format_number(r.mean_seconds) << ','
            << (r.percent_of_full_t ? format_number(*r.percent_of_full_t) : "") << '\n';
    }
}

}  // namespace edgeci
