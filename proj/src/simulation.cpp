#include "edgeci/simulation.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include "edgeci/parallel.hpp"

namespace edgeci {

namespace {

double explicit_or_unit_mean(GammaRule rule, double alpha, double looks, double gamma) {
    return rule == GammaRule::UnitMean ? gamma_for_unit_mean(alpha, looks) : gamma;
}

constexpr std::uint64_t method_key(CiMethod m) {
    return 100 + static_cast<std::uint64_t>(m);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void SyntheticImageSpec::validate() const {
    if (height < 1 || width < 4) {
        throw std::invalid_argument("synthetic image must be at least 1 x 4 pixels");
    }
    if (edge_j && (*edge_j < 1 || *edge_j > static_cast<int>(width) - 1)) {
        throw std::invalid_argument("edge position must lie in [1, width - 1]");
    }
    if (gamma_rule == GammaRule::UnitMean && (!(alpha_left < -1.0) || !(alpha_right < -1.0))) {
        throw std::domain_error("unit-mean scale requires alpha < -1 on both sides");
    }
    left_params().validate();
    right_params().validate();
}

G0IParams SyntheticImageSpec::left_params() const {
    return {alpha_left, explicit_or_unit_mean(gamma_rule, alpha_left, looks, gamma_left), looks};
}

G0IParams SyntheticImageSpec::right_params() const {
    return {alpha_right, explicit_or_unit_mean(gamma_rule, alpha_right, looks, gamma_right), looks};
}

bool SyntheticImageSpec::has_edge() const {
    if (!edge_j) {
        return false;
    }
    const G0IParams l = left_params();
    const G0IParams r = right_params();
    return l.alpha != r.alpha || l.gamma != r.gamma;
}

Image generate_image(const SyntheticImageSpec& spec, Rng& rng) {
    spec.validate();
    const G0IParams left = spec.left_params();
    const G0IParams right = spec.right_params();
    const int edge = spec.edge_j.value_or(static_cast<int>(spec.width));
    Image image(spec.width, spec.height);
    for (std::size_t x = 0; x < spec.width; ++x) {
        const G0IParams& p = static_cast<int>(x) < edge ? left : right;
        const std::vector<double> column = sample(p, spec.height, rng);
        for (std::size_t y = 0; y < spec.height; ++y) {
            image.at(x, y) = column[y];
        }
    }
    return image;
}

void ExperimentConfig::validate() const {
    spec.validate();
    if (replications < 1) {
        throw std::invalid_argument("replication count R must be >= 1");
    }
    if (methods.empty()) {
        throw std::invalid_argument("at least one interval method is required");
    }
    for (CiMethod m : methods) {
        BootstrapConfig b = bootstrap;
        b.method = m;
        b.validate();
    }
    if (spec.width < 4) {
        throw std::invalid_argument("strip needs at least 4 positions");
    }
    search.resolve(spec.width);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Detector detector = make_detector(config.detector, config.spec.looks, config.search);
    const bool with_edge = config.spec.has_edge();
    const int truth = config.spec.edge_j.value_or(0);

    std::vector<ReplicationRecord> records(static_cast<std::size_t>(config.replications));
    parallel_for(records.size(), config.workers, [&](std::size_t r) {
        ReplicationRecord& rec = records[r];
        rec.replication = static_cast<int>(r);
        Rng image_rng = Rng::substream(config.master_seed, {r});
        const PixelStrip strip = image_to_strip(generate_image(config.spec, image_rng), config.aggregation);
        try {
            rec.j_hat = detector(strip).j_hat;
        } catch (const std::exception&) {
            rec.j_hat = 0;
        }
        for (CiMethod m : config.methods) {
            MethodOutcome out;
            out.method = m;
            BootstrapConfig b = config.bootstrap;
            b.method = m;
            b.workers = 1;
            Rng method_rng = Rng::substream(config.master_seed, {r, method_key(m)});
            const auto start = std::chrono::steady_clock::now();
            try {
                out.interval = confidence_interval(strip, detector, b, method_rng);
            } catch (const std::exception& e) {
                out.error = e.what();
            }
            out.seconds = seconds_since(start);
            rec.outcomes.push_back(std::move(out));
        }
    });

    ExperimentReport report;
    report.config = config;
    std::optional<double> perc_distance;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        MethodSummary s;
        s.method = config.methods[mi];
        int covered = 0;
        double length = 0.0;
        double runtime = 0.0;
        for (const ReplicationRecord& rec : records) {
            const MethodOutcome& out = rec.outcomes[mi];
            runtime += out.seconds;
            if (!out.interval) {
                ++s.failures;
                continue;
            }
            ++s.completed;
            length += out.interval->length();
            if (with_edge && out.interval->contains(truth)) {
                ++covered;
            }
        }
        if (s.completed > 0) {
            s.mean_length = length / s.completed;
            if (with_edge) {
                s.coverage = static_cast<double>(covered) / s.completed;
                s.distance = std::abs(*s.coverage - config.bootstrap.level) * 100.0;
            }
        }
        s.mean_runtime = runtime / static_cast<double>(records.size());
        if (s.method == CiMethod::PERC) {
            perc_distance = s.distance;
        }
        report.methods.push_back(s);
    }
    if (perc_distance) {
        for (MethodSummary& s : report.methods) {
            if (s.distance) {
                s.delta = *perc_distance - *s.distance;
            }
        }
    }
    if (config.keep_trace) {
        report.trace = std::move(records);
    }
    return report;
}

std::vector<ExperimentReport> run_grid(const ExperimentConfig& base, const std::vector<double>& alpha_left,
                                       const std::vector<double>& alpha_right) {
    std::vector<ExperimentReport> out;
    for (double al : alpha_left) {
        for (double ar : alpha_right) {
            ExperimentConfig cfg = base;
            cfg.spec.alpha_left = al;
            cfg.spec.alpha_right = ar;
            out.push_back(run_experiment(cfg));
        }
    }
    return out;
}

std::vector<BenchmarkRow> cost_benchmark(const BenchmarkConfig& config) {
    config.spec.validate();
    if (config.replications < 1 || config.methods.empty()) {
        throw std::invalid_argument("benchmark needs >= 1 replication and >= 1 method");
    }
    const Detector detector = Detector::kruskal_wallis(SplitSearchConfig::full());
    const std::size_t m_count = config.methods.size();
    std::vector<double> total(m_count, 0.0);

    // Replication 0 is the warm-up.
    for (int r = 0; r <= config.replications; ++r) {
        Rng image_rng = Rng::substream(config.master_seed, {static_cast<std::uint64_t>(r)});
        const PixelStrip strip = image_to_strip(generate_image(config.spec, image_rng), config.aggregation);
        for (std::size_t step = 0; step < m_count; ++step) {
            const std::size_t mi = (step + static_cast<std::size_t>(r)) % m_count;
            BootstrapConfig b = config.bootstrap;
            b.method = config.methods[mi];
            b.workers = 1;
            Rng rng = Rng::substream(config.master_seed, {static_cast<std::uint64_t>(r), method_key(b.method)});
            const auto start = std::chrono::steady_clock::now();
            (void)confidence_interval(strip, detector, b, rng);
            const double s = seconds_since(start);
            if (r > 0) {
                total[mi] += s;
            }
        }
    }

    std::vector<BenchmarkRow> rows(m_count);
    std::optional<double> full_t;
    for (std::size_t mi = 0; mi < m_count; ++mi) {
        rows[mi].method = config.methods[mi];
        rows[mi].mean_seconds = total[mi] / config.replications;
        if (rows[mi].method == CiMethod::StudentizedFull) {
            full_t = rows[mi].mean_seconds;
        }
    }
    if (full_t && *full_t > 0.0) {
        for (BenchmarkRow& row : rows) {
            row.percent_of_full_t = 100.0 * row.mean_seconds / *full_t;
        }
    }
    return rows;
}

}  // namespace edgeci
