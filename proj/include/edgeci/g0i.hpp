#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "edgeci/random.hpp"

namespace edgeci {

/// Parameters of the G0 intensity law Z = X * Y.
///
/// Speckle Y ~ Gamma(shape L, rate L), so E[Y] = 1.
/// Backscatter X ~ InverseGamma(shape -alpha, scale gamma), i.e. 1/X is
/// Gamma with shape -alpha and rate gamma (scale 1/gamma).
struct G0IParams {
    double alpha;  ///< roughness, < 0
    double gamma;  ///< scale, > 0
    double looks;  ///< number of looks L, >= 1

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

enum class TextureClass { ExtremelyHeterogeneous, Heterogeneous, Homogeneous };

/// Texture class of a roughness value. -4 and -10 go to the rougher class.
TextureClass classify_texture(double alpha);
std::string_view to_string(TextureClass c);

/// Density of the G0I law. Throws std::domain_error for z <= 0.
double density(double z, const G0IParams& params);

/// Natural log of `density`, computed through log-gamma differences.
double log_density(double z, const G0IParams& params);

/// E[Z^r]; +infinity when -alpha <= r.
double noncentral_moment(double r, const G0IParams& params);

/// Scale gamma that gives E[Z] = 1. Throws std::domain_error for alpha >= -1.
double gamma_for_unit_mean(double alpha, double looks);

/// Draws n variates as Gamma(L, rate L) / Gamma(-alpha, rate gamma).
std::vector<double> sample(const G0IParams& params, std::size_t n, Rng& rng);

struct MomentEstimate {
    double alpha_hat = 0.0;
    double gamma_hat = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct MomentFitOptions {
    double alpha_min = -50.0;
    double boundary_eps = 1e-6;  ///< upper end of the bracket is -1 - eps
    double tolerance = 1e-8;
    int max_iterations = 200;
};

/// Method-of-moments fit from the orders 1 and 1/2 sample moments.
///
/// Eliminating gamma leaves a one-dimensional equation in alpha that is
/// solved by bisection on [alpha_min, -1 - eps]. A sample without a sign
/// change in that bracket yields converged = false rather than an exception.
/// Throws std::domain_error for nonpositive data and std::invalid_argument
/// for fewer than two observations.
MomentEstimate fit_moments(std::span<const double> data, double looks,
                           const MomentFitOptions& options = {});

/// Same fit, from precomputed sample moments m1 = mean(z), m_half = mean(sqrt z).
MomentEstimate fit_moments_from(double m1, double m_half, double looks,
                                const MomentFitOptions& options = {});

}  // namespace edgeci
