#ifndef BECSQ_LOSS_HPP
#define BECSQ_LOSS_HPP

#include <cstdint>
#include <vector>

#include "becsq/dicke.hpp"

namespace becsq {

// Quantum-trajectory unravelling of twisting plus uniform one-body loss.
// Everything is expressed in units of chi: times are chi*t, the loss rate is
// Gamma/chi per atom. Uniform loss makes the no-jump evolution norm-trivial,
// so jump times come straight from the exponential waiting-time distribution.
struct LossParams {
    double gamma_over_chi = 0.0;
    int n_atoms_initial = 0;
    int n_trajectories = 1;
    std::uint64_t seed = 0;
    std::vector<double> time_grid;    // sorted, units 1/chi
    bool normalize_with_initial_n = false; // xi^2 N-factor: initial N instead of mean remaining
    bool twisting = true; // false models chi = 0 (grid times then in units of the bare rate)
};

enum class JumpType : std::uint8_t { a_loss = 0, b_loss = 1 };

struct TrajectoryRecord {
    std::vector<double> jump_times;
    std::vector<JumpType> jump_types;
    std::vector<SpinMoments> samples; // one per grid time
    std::vector<int> remaining_n;     // one per grid time
    bool exhausted = false;           // N hit zero before the last grid time
};

TrajectoryRecord run_trajectory(const LossParams& params, std::uint64_t traj_index);

struct LossCurvePoint {
    double chi_t;
    double xi2_loss;
    double xi2_lossless;
    double mean_n;
};

struct LossCurve {
    std::vector<LossCurvePoint> points;
    double min_xi2_loss = 0.0;
    double min_rel_stderr = 0.0; // block estimate at the curve minimum
};

// Ensemble-averages moments across trajectories (density-matrix semantics)
// before forming xi^2; also emits the Gamma = 0 reference curve.
LossCurve xi2_with_loss(const LossParams& params, int threads = 0);

} // namespace becsq

#endif
