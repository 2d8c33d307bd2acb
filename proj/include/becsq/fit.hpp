#ifndef BECSQ_FIT_HPP
#define BECSQ_FIT_HPP

#include <optional>
#include <span>
#include <vector>

namespace becsq {

// Estimator B for chi: least squares of <J_x>(t) = (N/2) cos^(N-1)(chi t) over
// the window where <J_x>/(N/2) is in [0.7, 0.999]. The in-window samples must
// be positive and strictly decreasing.
double fit_chi_from_jx(std::span<const double> t, std::span<const double> jx, int n_atoms);

struct Dip {
    double t;
    double value;
    std::size_t index;
};

// First local minimum lying within depth_factor of the global minimum,
// parabolically refined. nullopt when no interior local minimum qualifies.
std::optional<Dip> find_first_deep_dip(std::span<const double> t, std::span<const double> y,
                                       double depth_factor = 4.0);

std::vector<std::size_t> local_minima(std::span<const double> y);
std::vector<std::size_t> local_maxima(std::span<const double> y);

struct PowerLawFit {
    double exponent;
    double stderr;
    int n_points;
};

// log-log linear regression y ~ x^p
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

} // namespace becsq

#endif
