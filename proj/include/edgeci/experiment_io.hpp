#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgeci/simulation.hpp"

namespace edgeci {

inline constexpr std::string_view kVersion = "0.1.0";

/// Thrown for malformed configuration text; `line` is 1-based (0 for overrides).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Experiment configuration file: one `key = value` per line, `#` comments.
///
///   height, width            image size (transverse, along the line)
///   edge                     true edge index, or `none`
///   alpha_left, alpha_right  roughness of each region
///   looks                    number of looks L
///   gamma_rule               `unit-mean` or `explicit`
///   gamma_left, gamma_right  scales for `explicit`
///   replications             Monte Carlo replications R
///   B, B_prime, B_double_prime, B_x, level
///   methods                  comma list of perc, bbm, st1, st2, full-t
///   detector                 `kw` or `gambini`
///   aggregation              `pixels`, `mean` or `center`
///   seed, workers
///   grid_alpha_left, grid_alpha_right   comma lists swept by --grid
struct ExperimentFile {
    ExperimentConfig config;
    std::vector<double> grid_alpha_left;
    std::vector<double> grid_alpha_right;
    bool seed_given = false;
};

/// Settings in `in` are applied on top of `base`.
ExperimentFile parse_experiment_config(std::istream& in, ExperimentFile base = {});

/// Applies one `key = value` setting (file line or command-line override).
void apply_setting(ExperimentFile& file, std::string_view key, std::string_view value, int line = 0);

std::vector<CiMethod> parse_method_list(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const ConfidenceInterval& ci);
nlohmann::json to_json(const ExperimentReport& report, bool include_timing = true);

/// One row per (report, method). Coverage, distance and delta columns are
/// written only when at least one report has an edge; timing columns only
/// when `include_timing`.
void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports, bool include_timing = true);

/// One row per (replication, method).
void write_trace_csv(std::ostream& out, const ExperimentReport& report, bool include_timing = true);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace edgeci
