#ifndef BECSQ_RADIAL_HPP
#define BECSQ_RADIAL_HPP

#include <complex>
#include <span>
#include <vector>

#include "becsq/errors.hpp"

namespace becsq {

using cplx = std::complex<double>;

// Uniform radial grid on [0, r_max] in oscillator units (d0 = 1). Fields live
// on the n_points interior nodes r_j = j dr; the endpoints carry u = r phi = 0
// and only enter the quadrature weights. Simpson weights keep the rule exact
// for r^2 (the grid invariant), and for the smooth confined fields they agree
// with the plain sum to ~1e-12, which is what lets the spectral kinetic step
// conserve the measured norm.
class RadialGrid {
public:
    RadialGrid(int n_points, double r_max);

    int n_points() const { return n_; }
    double r_max() const { return rmax_; }
    double dr() const { return dr_; }
    const std::vector<double>& r() const { return r_; }
    // quadrature weight including the 4 pi r^2 measure, interior nodes only
    const std::vector<double>& qw() const { return qw_; }

    // | quadrature(1) - (4 pi/3) r_max^3 | / exact, endpoints included
    double quadrature_residual() const;

private:
    int n_;
    double rmax_, dr_;
    std::vector<double> r_, qw_, w_; // w_: bare Simpson weight per interior node
};

// Complex radial mode phi(r) on the interior nodes; 4 pi int |phi|^2 r^2 dr = 1.
struct RadialField {
    std::vector<cplx> values;

    static constexpr double kNormTol = 1e-10;
    static constexpr double kLeakTol = 1e-12; // |phi(r_max)|^2 bound
};

double field_norm2(const RadialGrid& g, const RadialField& f);
void normalize(const RadialGrid& g, RadialField& f);
cplx inner(const RadialGrid& g, const RadialField& bra, const RadialField& ket);
// 4 pi int |phi|^4 r^2 dr  (units d0^-3)
double overlap_integral(const RadialGrid& g, const RadialField& f);
double mean_r2(const RadialGrid& g, const RadialField& f);
// boundary-adjacent density, the box-leak guard
double edge_density(const RadialField& f);

// energies (per atom, units hbar omega) for i d phi/dt = [-del^2/2 + r^2/2 + g_eff |phi|^2] phi
double kinetic_energy(const RadialGrid& g, const RadialField& f);
double trap_energy(const RadialGrid& g, const RadialField& f);
double interaction_energy(const RadialGrid& g, const RadialField& f, double g_eff);

} // namespace becsq

#endif
