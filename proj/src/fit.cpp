#include "becsq/fit.hpp"

#include <algorithm>
#include <cmath>

#include "becsq/errors.hpp"

namespace becsq {

double fit_chi_from_jx(std::span<const double> t, std::span<const double> jx, int n_atoms) {
    if (n_atoms < 2) fail(errc::invalid_argument, "fit_chi_from_jx: n_atoms must be >= 2");
    if (t.size() != jx.size()) fail(errc::invalid_argument, "fit_chi_from_jx: size mismatch");
    const double half_n = 0.5 * n_atoms;

    std::vector<double> tw, jw;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ratio = jx[i] / half_n;
        if (ratio >= 0.7 && ratio <= 0.999) {
            tw.push_back(t[i]);
            jw.push_back(jx[i]);
        }
    }
    if (tw.size() < 2)
        fail(errc::fit, "fit_chi_from_jx: fewer than 2 samples in the fit window "
                        "(<J_x>/(N/2) in [0.7, 0.999])");
    for (std::size_t i = 1; i < jw.size(); ++i)
        if (!(jw[i] < jw[i - 1]))
            fail(errc::fit, "fit_chi_from_jx: <J_x> not strictly decreasing over the fit window");

    // initial guess from the transformed problem chi t = acos((2 J_x/N)^(1/(N-1)))
    double num = 0, den = 0;
    for (std::size_t i = 0; i < tw.size(); ++i) {
        const double y = std::clamp(std::pow(jw[i] / half_n, 1.0 / (n_atoms - 1.0)), -1.0, 1.0);
        num += std::acos(y) * tw[i];
        den += tw[i] * tw[i];
    }
    double chi = num / den;

    // Gauss-Newton on the untransformed residuals
    for (int it = 0; it < 20; ++it) {
        double jtj = 0, jtr = 0;
        for (std::size_t i = 0; i < tw.size(); ++i) {
            const double c = std::cos(chi * tw[i]);
            const double model = half_n * std::pow(c, n_atoms - 1.0);
            const double deriv =
                -half_n * (n_atoms - 1.0) * std::pow(c, n_atoms - 2.0) * std::sin(chi * tw[i]) *
                tw[i];
            const double r = model - jw[i];
            jtj += deriv * deriv;
            jtr += deriv * r;
        }
        if (jtj <= 0) break;
        const double step = jtr / jtj;
        chi -= step;
        if (std::abs(step) < 1e-14 * std::abs(chi)) break;
    }
    if (!(chi > 0) || !std::isfinite(chi))
        fail(errc::fit, "fit_chi_from_jx: fit did not produce a positive chi");
    return chi;
}

std::vector<std::size_t> local_minima(std::span<const double> y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] < y[i - 1] && y[i] <= y[i + 1]) out.push_back(i);
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> y) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
    return out;
}

std::optional<Dip> find_first_deep_dip(std::span<const double> t, std::span<const double> y,
                                       double depth_factor) {
    if (t.size() != y.size() || y.size() < 3) return std::nullopt;
    const auto mins = local_minima(y);
    if (mins.empty()) return std::nullopt;
    double global_min = y[mins[0]];
    for (auto i : mins) global_min = std::min(global_min, y[i]);
    for (auto i : mins) {
        if (y[i] <= depth_factor * global_min) {
            // parabolic refinement through the three neighboring samples
            const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
            const double denom = y0 - 2 * y1 + y2;
            double tref = t[i], yref = y1;
            if (denom > 0) {
                const double delta = 0.5 * (y0 - y2) / denom; // in grid units, |delta| <= 1
                const double h = 0.5 * (t[i + 1] - t[i - 1]);
                tref = t[i] + delta * h;
                yref = y1 - 0.25 * (y0 - y2) * delta;
            }
            return Dip{tref, yref, i};
        }
    }
    return std::nullopt;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        fail(errc::invalid_argument, "fit_power_law: need at least 3 points per axis");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            fail(errc::invalid_argument, "fit_power_law: data must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    double ss_res = 0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        ss_res += r * r;
    }
    const double se = std::sqrt(ss_res / std::max(1, n - 2) / sxx);
    return {slope, se, n};
}

} // namespace becsq
