#include "becsq/dicke.hpp"

#include <algorithm>
#include <cmath>

#include "becsq/rng.hpp"

namespace becsq {

namespace {

struct KahanCplx {
    KahanSum re, im;
    void add(cplx z) {
        re.add(z.real());
        im.add(z.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

} // namespace

DickeState::DickeState(int n_atoms, std::vector<cplx> amplitudes)
    : n_(n_atoms), c_(std::move(amplitudes)) {
    if (n_ < 1) fail(errc::invalid_argument, "DickeState: n_atoms must be >= 1");
    if (static_cast<int>(c_.size()) != n_ + 1)
        fail(errc::invalid_argument, "DickeState: amplitude vector length must be n_atoms + 1");
    double nrm = norm();
    if (std::abs(nrm - 1.0) > kNormTol)
        fail(errc::invalid_argument, "DickeState: state not normalized, |norm-1| = " +
                                         std::to_string(std::abs(nrm - 1.0)));
}

double DickeState::norm() const {
    KahanSum s;
    for (const cplx& a : c_) s.add(std::norm(a));
    return std::sqrt(s.value());
}

DickeState coherent_state(int n_atoms, double polar, double azimuth) {
    if (n_atoms < 1) fail(errc::invalid_argument, "coherent_state: n_atoms must be >= 1");
    const int n = n_atoms;
    std::vector<cplx> c(n + 1);
    const double ca = std::cos(polar / 2), sa = std::sin(polar / 2);
    // log-space binomial amplitudes; far tails underflow to exactly zero
    const double lg_n = std::lgamma(n + 1.0);
    const double lca = (ca > 0) ? std::log(ca) : -std::numeric_limits<double>::infinity();
    const double lsa = (sa > 0) ? std::log(sa) : -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        double lmag;
        if (k == 0)
            lmag = n * lsa;
        else if (k == n)
            lmag = n * lca;
        else
            lmag = 0.5 * (lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) + k * lca +
                   (n - k) * lsa;
        double mag = std::exp(lmag);
        double phase = (n - k) * azimuth;
        c[k] = std::polar(mag, phase);
    }
    // pin the norm exactly
    KahanSum s;
    for (const cplx& a : c) s.add(std::norm(a));
    double inv = 1.0 / std::sqrt(s.value());
    for (cplx& a : c) a *= inv;
    return DickeState(n, std::move(c));
}

SpinFrame::SpinFrame(Vec3 n1, Vec3 n2, Vec3 n3) : n1_(n1), n2_(n2), n3_(n3) {
    auto unit = [](const Vec3& v) { return std::abs(v.norm() - 1.0) <= kOrthoTol; };
    if (!unit(n1_) || !unit(n2_) || !unit(n3_))
        fail(errc::invalid_argument, "SpinFrame: vectors must be unit length");
    if (std::abs(n1_.dot(n2_)) > kOrthoTol || std::abs(n1_.dot(n3_)) > kOrthoTol ||
        std::abs(n2_.dot(n3_)) > kOrthoTol)
        fail(errc::invalid_argument, "SpinFrame: vectors must be pairwise orthogonal");
}

SpinFrame SpinFrame::canonical(double theta) {
    Vec3 n1{0.0, std::cos(theta), std::sin(theta)};
    Vec3 n2{1.0, 0.0, 0.0};
    return SpinFrame(n1, n2, n1.cross(n2));
}

double SpinMoments::variance(const Vec3& n) const {
    double v = 0;
    const double nn[3] = {n.x, n.y, n.z};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v += nn[i] * cov[i][j] * nn[j];
    return v;
}

double SpinMoments::mean_along(const Vec3& n) const { return mean.dot(n); }

double SpinMoments::second(int i, int j) const {
    const double m[3] = {mean.x, mean.y, mean.z};
    return cov[i][j] + m[i] * m[j];
}

SpinMoments assemble_moments(const LadderSums& s) {
    SpinMoments m;
    m.mean = {s.jp.real(), s.jp.imag(), s.jz};
    // J_x = (J_+ + J_-)/2, J_y = (J_+ - J_-)/(2i)
    const double jx2 = 0.25 * (s.jpjm + s.jmjp + 2.0 * s.jp2.real());
    const double jy2 = 0.25 * (s.jpjm + s.jmjp - 2.0 * s.jp2.real());
    const double jxjy = 0.5 * s.jp2.imag();         // <{J_x,J_y}>/2
    const double jxjz = s.jpjz_sym.real();          // <{J_x,J_z}>/2
    const double jyjz = s.jpjz_sym.imag();          // <{J_y,J_z}>/2
    const double sec[3][3] = {{jx2, jxjy, jxjz}, {jxjy, jy2, jyjz}, {jxjz, jyjz, s.jz2}};
    const double mu[3] = {m.mean.x, m.mean.y, m.mean.z};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.cov[i][j] = sec[i][j] - mu[i] * mu[j];
    return m;
}

SpinMoments moments_windowed(std::span<const cplx> c, int k_lo, int n_atoms) {
    const int n = n_atoms;
    const int len = static_cast<int>(c.size());
    KahanCplx jp, jp2, jpjz;
    KahanSum jpjm, jmjp, jz, jz2;
    for (int i = 0; i < len; ++i) {
        const int k = k_lo + i;
        const double p = std::norm(c[i]);
        const double mz = k - 0.5 * n;
        jz.add(p * mz);
        jz2.add(p * mz * mz);
        jpjm.add(p * k * (n - k + 1.0));
        jmjp.add(p * (k + 1.0) * (n - k));
        if (i + 1 < len && k + 1 <= n) {
            const cplx coh = std::conj(c[i + 1]) * c[i];
            const double w = std::sqrt((k + 1.0) * (n - k));
            jp.add(coh * w);
            jpjz.add(coh * w * (mz + 0.5));
        }
        if (i + 2 < len && k + 2 <= n) {
            const cplx coh2 = std::conj(c[i + 2]) * c[i];
            const double w2 =
                std::sqrt((k + 1.0) * (k + 2.0) * (n - k) * (n - k - 1.0));
            jp2.add(coh2 * w2);
        }
    }
    LadderSums s;
    s.jp = jp.value();
    s.jp2 = jp2.value();
    s.jpjz_sym = jpjz.value();
    s.jpjm = jpjm.value();
    s.jmjp = jmjp.value();
    s.jz = jz.value();
    s.jz2 = jz2.value();
    return assemble_moments(s);
}

SpinMoments moments(const DickeState& state) {
    return moments_windowed(state.amplitudes(), 0, state.n_atoms());
}

namespace {

double xi2_impl(const SpinMoments& m, double n_factor, const SpinFrame& frame) {
    const double denom = std::pow(m.mean_along(frame.n2()), 2) +
                         std::pow(m.mean_along(frame.n3()), 2);
    if (denom <= 0.0)
        fail(errc::degenerate_frame,
             "xi_squared: mean spin orthogonal to both n2 and n3 (zero denominator)");
    return n_factor * m.variance(frame.n1()) / denom;
}

// Minimizing angle of the quadratic form over n1(theta) in the y-z plane.
// Var(theta) = (a+b)/2 + (a-b)/2 cos 2theta + c sin 2theta; minimum at
// 2theta = atan2(2c, a-b) + pi.
double optimal_theta(const SpinMoments& m) {
    const double a = m.cov[1][1], b = m.cov[2][2], c = m.cov[1][2];
    const double r = std::hypot(a - b, 2.0 * c);
    if (r < 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) return 0.0; // isotropic tie
    double theta = 0.5 * (std::atan2(2.0 * c, a - b) + M_PI);
    // wrap into [-pi/2, pi/2); Var has period pi in theta
    while (theta >= M_PI / 2) theta -= M_PI;
    while (theta < -M_PI / 2) theta += M_PI;
    return theta;
}

} // namespace

double xi_squared(const SpinMoments& m, int n_atoms, const SpinFrame& frame) {
    if (n_atoms < 1) fail(errc::invalid_argument, "xi_squared: n_atoms must be >= 1");
    return xi2_impl(m, static_cast<double>(n_atoms), frame);
}

double xi_squared_scaled(const SpinMoments& m, double n_factor, const SpinFrame& frame) {
    if (!(n_factor > 0)) fail(errc::invalid_argument, "xi_squared: n_factor must be > 0");
    return xi2_impl(m, n_factor, frame);
}

SqueezingResult optimal_xi_squared_scaled(const SpinMoments& m, double n_factor) {
    const double theta = optimal_theta(m);
    SpinFrame frame = SpinFrame::canonical(theta);
    return {xi2_impl(m, n_factor, frame), theta, frame};
}

SqueezingResult optimal_xi_squared(const SpinMoments& m, int n_atoms) {
    if (n_atoms < 1) fail(errc::invalid_argument, "optimal_xi_squared: n_atoms must be >= 1");
    return optimal_xi_squared_scaled(m, static_cast<double>(n_atoms));
}

Witness witness_check(const SpinMoments& m, int n_atoms, const SpinFrame& frame,
                      std::string* diagnostic) {
    constexpr double tol = 1e-9;
    try {
        double xi2 = xi_squared(m, n_atoms, frame);
        if (xi2 < 1.0 - tol) return Witness::entangled;
        return Witness::inconclusive;
    } catch (const Error& e) {
        if (e.code() == errc::degenerate_frame) {
            if (diagnostic) *diagnostic = e.what();
            return Witness::inconclusive;
        }
        throw;
    }
}

} // namespace becsq
