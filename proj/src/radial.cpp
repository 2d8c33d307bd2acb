#include "becsq/radial.hpp"

#include <cmath>

#include "becsq/rng.hpp"
#include "sine_transform.hpp"

namespace becsq {

RadialGrid::RadialGrid(int n_points, double r_max) : n_(n_points), rmax_(r_max) {
    if (n_ < 64) fail(errc::invalid_argument, "RadialGrid: n_points must be >= 64");
    if (n_ % 2 == 0)
        fail(errc::invalid_argument, "RadialGrid: n_points must be odd (Simpson rule)");
    if (!(rmax_ > 0)) fail(errc::invalid_argument, "RadialGrid: r_max must be > 0");
    dr_ = rmax_ / (n_ + 1);
    r_.resize(n_);
    w_.resize(n_);
    qw_.resize(n_);
    for (int j = 1; j <= n_; ++j) {
        r_[j - 1] = j * dr_;
        w_[j - 1] = (j % 2 == 1) ? 4.0 * dr_ / 3.0 : 2.0 * dr_ / 3.0;
        qw_[j - 1] = 4.0 * M_PI * w_[j - 1] * r_[j - 1] * r_[j - 1];
    }
    if (quadrature_residual() > 1e-10)
        fail(errc::invalid_argument, "RadialGrid: quadrature fails the r^2 exactness check");
}

double RadialGrid::quadrature_residual() const {
    // full rule including endpoints, applied to f = 1
    KahanSum s;
    for (int j = 0; j < n_; ++j) s.add(qw_[j]);
    s.add(4.0 * M_PI * (dr_ / 3.0) * rmax_ * rmax_); // endpoint r = r_max
    const double exact = 4.0 * M_PI * rmax_ * rmax_ * rmax_ / 3.0;
    return std::abs(s.value() - exact) / exact;
}

double field_norm2(const RadialGrid& g, const RadialField& f) {
    KahanSum s;
    for (int j = 0; j < g.n_points(); ++j) s.add(g.qw()[j] * std::norm(f.values[j]));
    return s.value();
}

void normalize(const RadialGrid& g, RadialField& f) {
    const double inv = 1.0 / std::sqrt(field_norm2(g, f));
    for (cplx& v : f.values) v *= inv;
}

cplx inner(const RadialGrid& g, const RadialField& bra, const RadialField& ket) {
    KahanSum re, im;
    for (int j = 0; j < g.n_points(); ++j) {
        const cplx z = std::conj(bra.values[j]) * ket.values[j] * g.qw()[j];
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

double overlap_integral(const RadialGrid& g, const RadialField& f) {
    KahanSum s;
    for (int j = 0; j < g.n_points(); ++j) {
        const double d = std::norm(f.values[j]);
        s.add(g.qw()[j] * d * d);
    }
    return s.value();
}

double mean_r2(const RadialGrid& g, const RadialField& f) {
    KahanSum s;
    for (int j = 0; j < g.n_points(); ++j)
        s.add(g.qw()[j] * g.r()[j] * g.r()[j] * std::norm(f.values[j]));
    return s.value();
}

double edge_density(const RadialField& f) { return std::norm(f.values.back()); }

double kinetic_energy(const RadialGrid& g, const RadialField& f) {
    // spectral: int |u'|^2 dr / 2 with u = r phi, via DST-I Parseval
    const int n = g.n_points();
    SineTransform dst(n);
    std::vector<double> ure(n), uim(n);
    for (int j = 0; j < n; ++j) {
        ure[j] = (f.values[j] * g.r()[j]).real();
        uim[j] = (f.values[j] * g.r()[j]).imag();
    }
    dst.execute(ure.data());
    dst.execute(uim.data());
    // sum_j u_j^2 = sum_m Y_m^2 / (2(n+1)); int dr adds dr
    KahanSum s;
    for (int m = 1; m <= n; ++m) {
        const double k = M_PI * m / g.r_max();
        s.add(k * k * (ure[m - 1] * ure[m - 1] + uim[m - 1] * uim[m - 1]));
    }
    return 4.0 * M_PI * 0.5 * g.dr() * s.value() / (2.0 * (n + 1));
}

double trap_energy(const RadialGrid& g, const RadialField& f) {
    KahanSum s;
    for (int j = 0; j < g.n_points(); ++j)
        s.add(g.qw()[j] * 0.5 * g.r()[j] * g.r()[j] * std::norm(f.values[j]));
    return s.value();
}

double interaction_energy(const RadialGrid& g, const RadialField& f, double g_eff) {
    return 0.5 * g_eff * overlap_integral(g, f);
}

} // namespace becsq
