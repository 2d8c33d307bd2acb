#include <doctest.h>

#include <cmath>

#include "becsq/loss.hpp"
#include "becsq/oat.hpp"
#include "oracle_lindblad.hpp"

using namespace becsq;

TEST_CASE("Gamma = 0 reproduces pure twisting exactly") {
    LossParams p;
    p.gamma_over_chi = 0.0;
    p.n_atoms_initial = 60;
    p.seed = 5;
    p.time_grid = {0.0, 0.01, 0.05, 0.2};
    const TrajectoryRecord rec = run_trajectory(p, 0);
    CHECK(rec.jump_times.empty());
    const DickeState initial = coherent_state(60);
    for (std::size_t i = 0; i < p.time_grid.size(); ++i) {
        const SpinMoments ref = moments(evolve(initial, {1.0, 60}, p.time_grid[i]));
        CHECK(std::abs(rec.samples[i].mean.x - ref.mean.x) < 1e-10);
        CHECK(std::abs(rec.samples[i].cov[1][2] - ref.cov[1][2]) < 1e-10);
        CHECK(rec.remaining_n[i] == 60);
    }
}

TEST_CASE("pure death process at chi = 0") {
    // no twisting: remaining N is a death process with rate Gamma N
    LossParams p;
    p.gamma_over_chi = 0.5;
    p.n_atoms_initial = 200;
    p.n_trajectories = 300;
    p.seed = 11;
    p.time_grid = {0.5, 1.0};
    p.twisting = false;
    for (std::size_t ti = 0; ti < p.time_grid.size(); ++ti) {
        double sum = 0, sum2 = 0;
        for (int i = 0; i < p.n_trajectories; ++i) {
            const TrajectoryRecord rec = run_trajectory(p, i);
            sum += rec.remaining_n[ti];
            sum2 += double(rec.remaining_n[ti]) * rec.remaining_n[ti];
        }
        const double mean = sum / p.n_trajectories;
        const double var = sum2 / p.n_trajectories - mean * mean;
        const double stderr_mean = std::sqrt(var / p.n_trajectories);
        const double expected = p.n_atoms_initial * std::exp(-p.gamma_over_chi * p.time_grid[ti]);
        CHECK(std::abs(mean - expected) < 3.0 * stderr_mean + 1e-9);
    }
}

TEST_CASE("uniform loss maps coherent states to coherent states") {
    // with chi = 0 the +x coherent state stays +x coherent with fewer atoms
    // along every single trajectory
    LossParams p;
    p.gamma_over_chi = 2.0;
    p.n_atoms_initial = 40;
    p.seed = 21;
    p.time_grid = {0.8};
    p.twisting = false;
    for (int i = 0; i < 10; ++i) {
        const TrajectoryRecord rec = run_trajectory(p, i);
        const int n_left = rec.remaining_n[0];
        if (n_left < 2) continue;
        const SpinMoments ref = moments(coherent_state(n_left));
        CHECK(std::abs(rec.samples[0].mean.x - ref.mean.x) < 1e-10);
        CHECK(std::abs(rec.samples[0].mean.y) < 1e-10);
        CHECK(std::abs(rec.samples[0].mean.z - ref.mean.z) < 1e-10);
        CHECK(std::abs(rec.samples[0].cov[1][1] - ref.cov[1][1]) < 1e-9);
        CHECK(std::abs(rec.samples[0].cov[2][2] - ref.cov[2][2]) < 1e-9);
        CHECK(int(rec.jump_times.size()) == p.n_atoms_initial - n_left);
    }
}

TEST_CASE("trajectory averages converge to the dense master equation") {
    const int n = 4;
    const double gamma = 1.0;
    LossParams p;
    p.gamma_over_chi = gamma;
    p.n_atoms_initial = n;
    p.n_trajectories = 500;
    p.seed = 31;
    p.time_grid = {0.15};

    // sample moments across trajectories with their spread
    double mean[9] = {0}, m2[9] = {0};
    auto put = [&](int idx, double v, double w[9], double w2[9]) {
        w[idx] += v;
        w2[idx] += v * v;
    };
    for (int i = 0; i < p.n_trajectories; ++i) {
        const TrajectoryRecord rec = run_trajectory(p, i);
        const SpinMoments& m = rec.samples[0];
        const double vals[9] = {m.mean.x,      m.mean.y,      m.mean.z,
                                m.second(0, 0), m.second(1, 1), m.second(2, 2),
                                m.second(0, 1), m.second(0, 2), m.second(1, 2)};
        for (int k = 0; k < 9; ++k) put(k, vals[k], mean, m2);
    }
    test::LindbladOracle oracle(n, 1.0, gamma);
    oracle.evolve(0.15, 1e-4);
    const SpinMoments ref = oracle.moments();
    const double refs[9] = {ref.mean.x,      ref.mean.y,      ref.mean.z,
                            ref.second(0, 0), ref.second(1, 1), ref.second(2, 2),
                            ref.second(0, 1), ref.second(0, 2), ref.second(1, 2)};
    for (int k = 0; k < 9; ++k) {
        const double avg = mean[k] / p.n_trajectories;
        const double var = m2[k] / p.n_trajectories - avg * avg;
        const double se = std::sqrt(std::max(var, 1e-30) / p.n_trajectories);
        CHECK(std::abs(avg - refs[k]) < 3.5 * se + 1e-9);
    }
}

TEST_CASE("xi2_with_loss") {
    SUBCASE("Gamma -> 0: curves coincide") {
        LossParams p;
        p.gamma_over_chi = 0.0;
        p.n_atoms_initial = 100;
        p.n_trajectories = 4;
        p.seed = 41;
        for (int i = 0; i <= 20; ++i) p.time_grid.push_back(i * 0.002);
        const LossCurve curve = xi2_with_loss(p);
        for (const auto& pt : curve.points) {
            CHECK(pt.xi2_loss == doctest::Approx(pt.xi2_lossless).epsilon(1e-10));
            CHECK(pt.mean_n == doctest::Approx(100.0));
        }
    }
    SUBCASE("monotone damage: loss never improves the ensemble squeezing") {
        LossParams p;
        p.gamma_over_chi = 2.0;
        p.n_atoms_initial = 100;
        p.n_trajectories = 400;
        p.seed = 43;
        for (int i = 0; i <= 15; ++i) p.time_grid.push_back(i * 0.004);
        const LossCurve curve = xi2_with_loss(p);
        for (const auto& pt : curve.points) {
            // allow ~3 standard errors of slack via the block estimate at the min
            CHECK(pt.xi2_loss >=
                  pt.xi2_lossless * (1.0 - 3.0 * std::max(curve.min_rel_stderr, 0.02)) - 1e-9);
        }
    }
    SUBCASE("deterministic: identical runs produce identical curves") {
        LossParams p;
        p.gamma_over_chi = 1.0;
        p.n_atoms_initial = 50;
        p.n_trajectories = 20;
        p.seed = 47;
        p.time_grid = {0.0, 0.01, 0.03};
        const LossCurve a = xi2_with_loss(p, 1);
        const LossCurve b = xi2_with_loss(p, 2); // thread count must not matter
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].xi2_loss == b.points[i].xi2_loss);
            CHECK(a.points[i].mean_n == b.points[i].mean_n);
        }
    }
    SUBCASE("record invariant: remaining N matches the jump count") {
        LossParams p;
        p.gamma_over_chi = 3.0;
        p.n_atoms_initial = 30;
        p.seed = 53;
        p.time_grid = {0.1, 0.5, 1.0};
        for (int i = 0; i < 20; ++i) {
            const TrajectoryRecord rec = run_trajectory(p, i);
            int jumps_before = 0;
            for (std::size_t ti = 0; ti < p.time_grid.size(); ++ti) {
                jumps_before = 0;
                for (double tj : rec.jump_times)
                    if (tj <= p.time_grid[ti]) ++jumps_before;
                CHECK(rec.remaining_n[ti] == p.n_atoms_initial - jumps_before);
                CHECK(rec.remaining_n[ti] >= 0);
            }
        }
    }
    SUBCASE("parameter validation") {
        LossParams p;
        p.n_atoms_initial = 0;
        p.time_grid = {0.1};
        CHECK_THROWS_AS(run_trajectory(p, 0), Error);
        p.n_atoms_initial = 10;
        p.time_grid = {0.2, 0.1};
        CHECK_THROWS_AS(run_trajectory(p, 0), Error);
        p.time_grid.clear();
        CHECK_THROWS_AS(run_trajectory(p, 0), Error);
    }
}
