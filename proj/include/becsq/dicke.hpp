#ifndef BECSQ_DICKE_HPP
#define BECSQ_DICKE_HPP

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "becsq/errors.hpp"

namespace becsq {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0, y = 0, z = 0;
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Symmetric (Dicke) state of N two-level atoms. Index k counts atoms in |a>,
// J_z eigenvalue m = k - N/2.
class DickeState {
public:
    DickeState(int n_atoms, std::vector<cplx> amplitudes);

    int n_atoms() const { return n_; }
    const std::vector<cplx>& amplitudes() const { return c_; }
    std::vector<cplx>& amplitudes() { return c_; }
    double norm() const;

    static constexpr double kNormTol = 1e-12;

private:
    int n_;
    std::vector<cplx> c_;
};

// Spin-coherent state with every atom in cos(polar/2)|a> + e^{i azimuth} sin(polar/2)|b>.
// Mean spin points along (sin polar cos azimuth, sin polar sin azimuth, cos polar).
// Defaults give the +x state produced by a pi/2 pulse on all-|a>.
DickeState coherent_state(int n_atoms, double polar = M_PI / 2, double azimuth = 0.0);

// Mutually orthogonal unit vectors (n1, n2, n3).
class SpinFrame {
public:
    SpinFrame(Vec3 n1, Vec3 n2, Vec3 n3);

    // n1 = (0, cos theta, sin theta), n2 = x, n3 = n1 x n2. The frame used for
    // the theta-parameterized squeezing curve.
    static SpinFrame canonical(double theta);

    const Vec3& n1() const { return n1_; }
    const Vec3& n2() const { return n2_; }
    const Vec3& n3() const { return n3_; }

    static constexpr double kOrthoTol = 1e-10;

private:
    Vec3 n1_, n2_, n3_;
};

// First moments and symmetrized covariance of the collective spin.
struct SpinMoments {
    Vec3 mean;
    std::array<std::array<double, 3>, 3> cov{}; // cov[i][j] = <{J_i,J_j}>/2 - <J_i><J_j>

    double variance(const Vec3& n) const;
    double mean_along(const Vec3& n) const;
    // raw symmetrized second moment <{J_i,J_j}>/2
    double second(int i, int j) const;
};

// Ladder-operator expectation values; the common algebraic core shared by the
// exact Dicke route and the sector-ensemble route.
struct LadderSums {
    cplx jp{};        // <J_+>
    cplx jp2{};       // <J_+^2>
    cplx jpjz_sym{};  // <{J_+,J_z}>/2
    double jpjm = 0;  // <J_+ J_->
    double jmjp = 0;  // <J_- J_+>
    double jz = 0;    // <J_z>
    double jz2 = 0;   // <J_z^2>
};

SpinMoments assemble_moments(const LadderSums& s);

SpinMoments moments(const DickeState& state);

// Same ladder sums evaluated on a contiguous amplitude window c[k_lo .. k_lo+len-1]
// of an n_atoms Dicke vector (amplitudes outside are treated as zero).
SpinMoments moments_windowed(std::span<const cplx> c, int k_lo, int n_atoms);

// Eq.-style squeezing ratio N Var(J_n1) / (<J_n2>^2 + <J_n3>^2).
double xi_squared(const SpinMoments& m, int n_atoms, const SpinFrame& frame);
// Loss runs divide by a non-integer ensemble-mean atom number.
double xi_squared_scaled(const SpinMoments& m, double n_factor, const SpinFrame& frame);

struct SqueezingResult {
    double xi2;
    double theta_opt; // in [-pi/2, pi/2)
    SpinFrame frame;
};

// Minimizes Var(J_n1) over n1 = (0, cos theta, sin theta) in closed form via the
// 2x2 y-z covariance block; n2 = x by convention. Degenerate (isotropic) block
// ties break to theta = 0.
SqueezingResult optimal_xi_squared(const SpinMoments& m, int n_atoms);
SqueezingResult optimal_xi_squared_scaled(const SpinMoments& m, double n_factor);

enum class Witness { entangled, inconclusive };

// One-sided criterion: entangled iff xi^2 < 1 - tol. Degenerate frames are
// inconclusive rather than an error.
Witness witness_check(const SpinMoments& m, int n_atoms, const SpinFrame& frame,
                      std::string* diagnostic = nullptr);

} // namespace becsq

#endif
