#ifndef BECSQ_OAT_HPP
#define BECSQ_OAT_HPP

#include <vector>

#include "becsq/dicke.hpp"

namespace becsq {

// One-axis twisting H = chi J_z^2 (hbar = 1). chi is in units of the trap
// frequency when fed from the condensate modules; times are then in 1/omega.
struct TwistingParams {
    double chi;
    int n_atoms;
};

// Dimensionless couplings g_jk = 4 pi a_jk / d0 and the mode overlap
// integral (units d0^-3) entering the twisting rate.
struct InteractionConstants {
    double g_aa;
    double g_bb;
    double g_ab;
    double overlap_integral;
};

// Diagonal evolution c_k -> exp(-i chi t (k - N/2)^2) c_k. Exact, O(N).
DickeState evolve(const DickeState& state, const TwistingParams& params, double t);

// xi^2(t) of the +x coherent state, optimal theta at each time.
std::vector<SqueezingResult> xi2_curve(const TwistingParams& params,
                                       const std::vector<double>& times);

// Large-N minimum (1/2)(3/N)^(2/3).
double asymptotic_min(int n_atoms);

struct OptimalTime {
    double t_opt;
    double xi2_min;
};

// Golden-section search on the unimodal region before the first revival,
// bracketed from a coarse log-spaced pre-scan.
OptimalTime find_optimal_time(const TwistingParams& params);

// d(xi^2_theta)/dt at t = 0: sin(2 theta) (N-1) (g_aa + g_bb - 2 g_ab)/2 * I,
// in units of omega.
double initial_rate(const InteractionConstants& c, int n_atoms, double theta);

// Estimator A: the quadratic-in-J_z coefficient of the frozen-mode energy
// functional, chi = (g_aa + g_bb - 2 g_ab)/2 * I. The <J_x>-decay fit
// (estimator B) lives with the experiment runner.
double estimate_chi(const InteractionConstants& c);

} // namespace becsq

#endif
