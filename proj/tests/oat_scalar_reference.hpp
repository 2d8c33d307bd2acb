#ifndef BECSQ_TESTS_OAT_SCALAR_REFERENCE_HPP
#define BECSQ_TESTS_OAT_SCALAR_REFERENCE_HPP

// Independent scalar route for twisting of the +x coherent state: closed-form
// ladder moments assembled into xi^2 without touching the Dicke machinery.
// The formulas are validated against the product-space oracle at small N
// before being used as golden values at large N.

#include <cmath>

namespace becsq::test {

struct OatScalarMoments {
    double jx, jy2, jz2, cov_yz;
};

inline OatScalarMoments oat_scalar_moments(int n, double chi_t) {
    const double c = std::cos(chi_t);
    OatScalarMoments m;
    m.jx = 0.5 * n * std::pow(c, n - 1.0);
    const double jp2 = 0.25 * n * (n - 1.0) * std::pow(std::cos(2.0 * chi_t), n - 2.0);
    const double jpjm_plus_jmjp = 0.5 * n * n + 0.5 * n; // 2(J(J+1) - <Jz^2>), <Jz^2> = N/4
    m.jy2 = 0.25 * (jpjm_plus_jmjp - 2.0 * jp2);
    m.jz2 = 0.25 * n;
    m.cov_yz = 0.25 * n * (n - 1.0) * std::pow(c, n - 2.0) * std::sin(chi_t);
    return m;
}

// minimum over theta of N Var(n1(theta)) / <Jx>^2, closed 2x2 eigenvalue form
inline double oat_scalar_xi2_min(int n, double chi_t) {
    const OatScalarMoments m = oat_scalar_moments(n, chi_t);
    const double a = m.jy2, b = m.jz2, c = m.cov_yz;
    const double lam_min = 0.5 * (a + b) - 0.5 * std::sqrt((a - b) * (a - b) + 4.0 * c * c);
    return n * lam_min / (m.jx * m.jx);
}

} // namespace becsq::test

#endif
