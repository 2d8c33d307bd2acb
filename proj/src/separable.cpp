#include "becsq/separable.hpp"

#include <cmath>

#include "becsq/rng.hpp"

namespace becsq {

SpinMoments separable_moments(int n_atoms, const std::vector<SeparableTerm>& terms) {
    if (n_atoms < 2) fail(errc::invalid_argument, "separable_moments: n_atoms must be >= 2");
    if (terms.empty()) fail(errc::invalid_argument, "separable_moments: no mixture terms");

    const int n = n_atoms;
    double mean[3] = {0, 0, 0};
    double sec[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}; // symmetrized second moments
    double wsum = 0;

    for (const SeparableTerm& term : terms) {
        if (static_cast<int>(term.bloch.size()) != n)
            fail(errc::invalid_argument, "separable_moments: term needs one Bloch vector per atom");
        wsum += term.weight;
        // per-term sums: M_a = sum_i <j_a>_i, Q_ab = sum_i <j_a>_i <j_b>_i
        double M[3] = {0, 0, 0};
        double Q[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        for (const Vec3& s : term.bloch) {
            const double j[3] = {0.5 * s.x, 0.5 * s.y, 0.5 * s.z};
            for (int a = 0; a < 3; ++a) {
                M[a] += j[a];
                for (int b = 0; b < 3; ++b) Q[a][b] += j[a] * j[b];
            }
        }
        // <{J_a,J_b}>/2 for a product state: N delta_ab/4 + M_a M_b - Q_ab
        for (int a = 0; a < 3; ++a) {
            mean[a] += term.weight * M[a];
            for (int b = 0; b < 3; ++b)
                sec[a][b] += term.weight * ((a == b ? 0.25 * n : 0.0) + M[a] * M[b] - Q[a][b]);
        }
    }
    if (std::abs(wsum - 1.0) > 1e-10)
        fail(errc::invalid_argument, "separable_moments: mixture weights must sum to 1");

    SpinMoments m;
    m.mean = {mean[0], mean[1], mean[2]};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m.cov[a][b] = sec[a][b] - mean[a] * mean[b];
    return m;
}

SpinMoments sample_separable_state(int n_atoms, std::uint64_t seed) {
    if (n_atoms < 2) fail(errc::invalid_argument, "sample_separable_state: n_atoms must be >= 2");
    Rng rng(seed);

    const int n_terms = 1 + static_cast<int>(rng.uniform() * 4.0); // 1..4
    std::vector<SeparableTerm> terms(n_terms);

    // flat Dirichlet weights via normalized Exp(1) draws
    double wsum = 0;
    for (auto& t : terms) {
        t.weight = rng.exponential(1.0);
        wsum += t.weight;
    }
    for (auto& t : terms) t.weight /= wsum;

    for (auto& t : terms) {
        t.bloch.resize(n_atoms);
        for (Vec3& s : t.bloch) {
            // uniform in the unit ball: isotropic direction, radius ~ u^(1/3)
            Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
            double dn = dir.norm();
            if (dn < 1e-300) dir = {1, 0, 0}, dn = 1;
            double r = std::cbrt(rng.uniform());
            s = {r * dir.x / dn, r * dir.y / dn, r * dir.z / dn};
        }
    }
    return separable_moments(n_atoms, terms);
}

} // namespace becsq
