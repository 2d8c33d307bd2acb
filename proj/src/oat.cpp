#include "becsq/oat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace becsq {

DickeState evolve(const DickeState& state, const TwistingParams& params, double t) {
    const int n = state.n_atoms();
    std::vector<cplx> c = state.amplitudes();
    for (int k = 0; k <= n; ++k) {
        const double m = k - 0.5 * n;
        c[k] *= std::polar(1.0, -params.chi * t * m * m);
    }
    return DickeState(n, std::move(c));
}

std::vector<SqueezingResult> xi2_curve(const TwistingParams& params,
                                       const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0) fail(errc::invalid_argument, "xi2_curve: times must be nonnegative");
        if (i > 0 && times[i] < times[i - 1])
            fail(errc::invalid_argument, "xi2_curve: times must be sorted");
    }
    const DickeState initial = coherent_state(params.n_atoms);
    std::vector<SqueezingResult> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out.push_back(SqueezingResult{0, 0, SpinFrame::canonical(0)});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < times.size(); ++i) {
        DickeState st = evolve(initial, params, times[i]);
        out[i] = optimal_xi_squared(moments(st), params.n_atoms);
    }
    return out;
}

double asymptotic_min(int n_atoms) {
    return 0.5 * std::pow(3.0 / n_atoms, 2.0 / 3.0);
}

namespace {

double xi2_at(const DickeState& initial, const TwistingParams& p, double t) {
    return optimal_xi_squared(moments(evolve(initial, p, t)), p.n_atoms).xi2;
}

} // namespace

OptimalTime find_optimal_time(const TwistingParams& params) {
    if (params.n_atoms < 10)
        fail(errc::invalid_argument, "find_optimal_time: n_atoms must be >= 10");
    if (!(params.chi > 0) || !std::isfinite(params.chi))
        fail(errc::invalid_argument, "find_optimal_time: chi must be positive and finite");

    const DickeState initial = coherent_state(params.n_atoms);
    const double t_hint =
        std::pow(3.0, 1.0 / 6.0) * std::pow(params.n_atoms / 2.0, -2.0 / 3.0) / params.chi;

    // coarse log-spaced pre-scan; stop once xi^2 has clearly climbed off its minimum
    constexpr int kScan = 64;
    const double t_lo = 1e-2 * t_hint, t_hi = 60.0 * t_hint;
    std::vector<double> ts, xs;
    double run_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, i / double(kScan - 1));
        double x = xi2_at(initial, params, t);
        ts.push_back(t);
        xs.push_back(x);
        run_min = std::min(run_min, x);
        if (x > 4.0 * run_min && x > xs.front()) break; // past the minimum and climbing
    }
    std::size_t imin = std::min_element(xs.begin(), xs.end()) - xs.begin();
    if (imin == 0 || imin + 1 >= xs.size()) {
        std::ostringstream os;
        os << "find_optimal_time: bracket failure, scan minimum at the edge; samples:";
        for (std::size_t i = 0; i < ts.size(); ++i) os << " (" << ts[i] << "," << xs[i] << ")";
        fail(errc::search, os.str());
    }

    // golden-section on [ts[imin-1], ts[imin+1]]
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = ts[imin - 1], b = ts[imin + 1];
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = xi2_at(initial, params, c), fd = xi2_at(initial, params, d);
    while ((b - a) > 1e-6 * 0.5 * (a + b)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = xi2_at(initial, params, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = xi2_at(initial, params, d);
        }
    }
    const double t_opt = 0.5 * (a + b);
    return {t_opt, xi2_at(initial, params, t_opt)};
}

double initial_rate(const InteractionConstants& c, int n_atoms, double theta) {
    if (!(c.overlap_integral > 0))
        fail(errc::invalid_argument, "initial_rate: overlap integral must be > 0");
    return std::sin(2.0 * theta) * (n_atoms - 1.0) * 0.5 * (c.g_aa + c.g_bb - 2.0 * c.g_ab) *
           c.overlap_integral;
}

double estimate_chi(const InteractionConstants& c) {
    if (!(c.overlap_integral > 0))
        fail(errc::invalid_argument, "estimate_chi: overlap integral must be > 0");
    return 0.5 * (c.g_aa + c.g_bb - 2.0 * c.g_ab) * c.overlap_integral;
}

} // namespace becsq
