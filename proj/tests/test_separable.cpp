#include <doctest.h>

#include <cmath>

#include "becsq/dicke.hpp"
#include "becsq/rng.hpp"
#include "becsq/separable.hpp"

using namespace becsq;

TEST_CASE("separable moments: pure product cases") {
    SUBCASE("all Bloch vectors +x reproduces the +x coherent state") {
        const int n = 23;
        SeparableTerm t{1.0, std::vector<Vec3>(n, Vec3{1, 0, 0})};
        const SpinMoments m = separable_moments(n, {t});
        const SpinMoments ref = moments(coherent_state(n));
        CHECK(std::abs(m.mean.x - ref.mean.x) < 1e-12);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(m.cov[i][j] - ref.cov[i][j]) < 1e-11);
    }
    SUBCASE("maximally mixed qubits: zero mean, Var = N/4") {
        const int n = 9;
        SeparableTerm t{1.0, std::vector<Vec3>(n, Vec3{0, 0, 0})};
        const SpinMoments m = separable_moments(n, {t});
        CHECK(std::abs(m.mean.x) < 1e-14);
        CHECK(std::abs(m.mean.y) < 1e-14);
        CHECK(std::abs(m.mean.z) < 1e-14);
        for (int i = 0; i < 3; ++i) {
            CHECK(m.cov[i][i] == doctest::Approx(n / 4.0).epsilon(1e-14));
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(std::abs(m.cov[i][j]) < 1e-14);
        }
    }
}

TEST_CASE("separable sampler is deterministic in the seed") {
    const SpinMoments a = sample_separable_state(17, 42);
    const SpinMoments b = sample_separable_state(17, 42);
    CHECK(a.mean.x == b.mean.x);
    CHECK(a.cov[1][2] == b.cov[1][2]);
    const SpinMoments c = sample_separable_state(17, 43);
    CHECK(a.mean.x != c.mean.x);
}

TEST_CASE("witness soundness over random separable states (mini)") {
    // the acceptance suite runs the full 1e4-sample version
    Rng frame_rng(999);
    int tested = 0;
    for (int s = 0; s < 500; ++s) {
        const int n = 2 + (s % 49);
        const SpinMoments m = sample_separable_state(n, 1000 + s);
        for (int f = 0; f < 3; ++f) {
            double xi2;
            try {
                if (f == 0) {
                    xi2 = optimal_xi_squared(m, n).xi2;
                } else {
                    Vec3 n1{frame_rng.normal(), frame_rng.normal(), frame_rng.normal()};
                    const double nn = n1.norm();
                    n1 = {n1.x / nn, n1.y / nn, n1.z / nn};
                    Vec3 h = std::abs(n1.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
                    Vec3 n2 = n1.cross(h);
                    const double n2n = n2.norm();
                    n2 = {n2.x / n2n, n2.y / n2n, n2.z / n2n};
                    xi2 = xi_squared(m, n, SpinFrame(n1, n2, n1.cross(n2)));
                }
            } catch (const Error& e) {
                if (e.code() == errc::degenerate_frame) continue;
                throw;
            }
            ++tested;
            CHECK(xi2 >= 1.0 - 1e-9);
        }
    }
    CHECK(tested > 1000); // the check must not be vacuous
}

TEST_CASE("separable moments validation") {
    CHECK_THROWS_AS(sample_separable_state(1, 7), Error);
    SeparableTerm bad{1.0, std::vector<Vec3>(3, Vec3{1, 0, 0})};
    CHECK_THROWS_AS(separable_moments(4, {bad}), Error); // wrong atom count
}
