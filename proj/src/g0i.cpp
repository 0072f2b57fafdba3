#include "edgeci/g0i.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace edgeci {

void G0IParams::validate() const {
    if (!(alpha < 0.0)) {
        throw std::invalid_argument("G0I roughness alpha must be < 0, got " + std::to_string(alpha));
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("G0I scale gamma must be > 0, got " + std::to_string(gamma));
    }
    if (!(looks >= 1.0)) {
        throw std::invalid_argument("number of looks must be >= 1, got " + std::to_string(looks));
    }
}

TextureClass classify_texture(double alpha) {
    if (alpha >= -4.0) {
        return TextureClass::ExtremelyHeterogeneous;
    }
    if (alpha >= -10.0) {
        return TextureClass::Heterogeneous;
    }
    return TextureClass::Homogeneous;
}

std::string_view to_string(TextureClass c) {
    switch (c) {
    case TextureClass::ExtremelyHeterogeneous:
        return "extremely-heterogeneous";
    case TextureClass::Heterogeneous:
        return "heterogeneous";
    case TextureClass::Homogeneous:
        return "homogeneous";
    }
    return "unknown";
}

double log_density(double z, const G0IParams& p) {
    if (!(z > 0.0)) {
        throw std::domain_error("G0I density requires z > 0");
    }
    const double L = p.looks;
    return L * std::log(L) + std::lgamma(L - p.alpha) + (L - 1.0) * std::log(z)
        - p.alpha * std::log(p.gamma) - std::lgamma(L) - std::lgamma(-p.alpha)
        - (L - p.alpha) * std::log(p.gamma + L * z);
}

double density(double z, const G0IParams& params) {
    return std::exp(log_density(z, params));
}

double noncentral_moment(double r, const G0IParams& p) {
    if (!(-p.alpha > r)) {
        return std::numeric_limits<double>::infinity();
    }
    const double log_ratio = std::lgamma(-p.alpha - r) + std::lgamma(p.looks + r)
        - std::lgamma(-p.alpha) - std::lgamma(p.looks);
    return std::pow(p.gamma / p.looks, r) * std::exp(log_ratio);
}

double gamma_for_unit_mean(double alpha, double looks) {
    if (!(alpha < -1.0)) {
        throw std::domain_error("unit-mean scale requires alpha < -1 (the mean does not exist otherwise)");
    }
    return looks * std::exp(std::lgamma(-alpha) + std::lgamma(looks)
                            - std::lgamma(-alpha - 1.0) - std::lgamma(looks + 1.0));
}

std::vector<double> sample(const G0IParams& params, std::size_t n, Rng& rng) {
    params.validate();
    std::vector<double> out(n);
    for (double& z : out) {
        const double speckle = rng.gamma(params.looks, 1.0 / params.looks);
        const double inv_backscatter = rng.gamma(-params.alpha, 1.0 / params.gamma);
        z = speckle / inv_backscatter;
    }
    return out;
}

namespace {

// log of gamma/L implied by m1, minus the one implied by m_half. Decreasing
// in alpha; the root is the moment estimate.
double moment_gap(double alpha, double log_m1, double log_m_half, double looks) {
    const double from_m1 = log_m1 + std::lgamma(-alpha) + std::lgamma(looks)
        - std::lgamma(-alpha - 1.0) - std::lgamma(looks + 1.0);
    const double from_m_half = 2.0 * (log_m_half + std::lgamma(-alpha) + std::lgamma(looks)
                                      - std::lgamma(-alpha - 0.5) - std::lgamma(looks + 0.5));
    return from_m1 - from_m_half;
}

}  // namespace

MomentEstimate fit_moments_from(double m1, double m_half, double looks,
                                const MomentFitOptions& options) {
    MomentEstimate est;
    if (!(m1 > 0.0) || !(m_half > 0.0)) {
        return est;
    }
    const double log_m1 = std::log(m1);
    const double log_m_half = std::log(m_half);

    double lo = options.alpha_min;
    double hi = -1.0 - options.boundary_eps;
    double f_lo = moment_gap(lo, log_m1, log_m_half, looks);
    double f_hi = moment_gap(hi, log_m1, log_m_half, looks);
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo * f_hi > 0.0) {
        return est;
    }

    int it = 0;
    while (hi - lo >= options.tolerance && it < options.max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = moment_gap(mid, log_m1, log_m_half, looks);
        ++it;
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    est.alpha_hat = 0.5 * (lo + hi);
    if (est.alpha_hat > -1.0 - options.boundary_eps) {
        est.alpha_hat = -1.0 - options.boundary_eps;
    }
    // E[Z] = gamma / (-alpha - 1), so gamma_hat follows from m1 directly.
    est.gamma_hat = m1 * looks * std::exp(std::lgamma(-est.alpha_hat) + std::lgamma(looks)
                                          - std::lgamma(-est.alpha_hat - 1.0)
                                          - std::lgamma(looks + 1.0));
    est.iterations = it;
    est.converged = est.gamma_hat > 0.0 && std::isfinite(est.gamma_hat);
    return est;
}

MomentEstimate fit_moments(std::span<const double> data, double looks,
                           const MomentFitOptions& options) {
    if (data.size() < 2) {
        throw std::invalid_argument("moment fit needs at least two observations");
    }
    double s1 = 0.0;
    double s_half = 0.0;
    for (double z : data) {
        if (!(z > 0.0)) {
            throw std::domain_error("moment fit requires strictly positive data");
        }
        s1 += z;
        s_half += std::sqrt(z);
    }
    const double n = static_cast<double>(data.size());
    return fit_moments_from(s1 / n, s_half / n, looks, options);
}

}  // namespace edgeci
