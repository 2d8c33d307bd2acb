#ifndef BECSQ_GPE_HPP
#define BECSQ_GPE_HPP

#include <functional>
#include <string>
#include <vector>

#include "becsq/dicke.hpp"
#include "becsq/radial.hpp"

namespace becsq {

// Scattering lengths in units of d0, spherical trap with omega = 1 implied.
struct CondensateParams {
    double a_aa;
    double a_bb;
    double a_ab;
    int n_atoms;

    double g_aa() const { return 4.0 * M_PI * a_aa; }
    double g_bb() const { return 4.0 * M_PI * a_bb; }
    double g_ab() const { return 4.0 * M_PI * a_ab; }

    double tf_mu() const { return 0.5 * std::pow(15.0 * n_atoms * a_aa, 0.4); }
    double tf_radius() const { return std::sqrt(2.0 * tf_mu()); }

    void validate() const;
    // non-fatal conditions, e.g. a_ab >= min(a_aa, a_bb) (demixing-unstable regime)
    std::vector<std::string> warnings() const;
};

// r_max = 0 picks 6x the Thomas-Fermi radius estimate (floor 8 d0 for the
// Gaussian tail).
RadialGrid make_grid(const CondensateParams& p, int n_points = 511, double r_max = 0.0);

struct GroundStateOptions {
    double dt = 0.01;
    double energy_tol = 1e-12; // |Delta E| per step
    long max_steps = 200000;
};

struct GroundStateResult {
    RadialField mode;
    double energy;
    double mu;
    long steps;
};

// Imaginary-time propagation of the single-component GPE with coupling
// g_aa (N-1), renormalizing each step; dt halves whenever the energy rises.
GroundStateResult ground_state(const CondensateParams& p, const RadialGrid& g,
                               const GroundStateOptions& opt = {});

// Hartree-Fock state of the full system: binomial window of N_a sectors, each
// carrying a pair of spatial modes plus the accumulated interaction phase
// Lambda_k = int E_int,k dt. The mean-field single-particle phases double-count
// the interactions; Lambda_k is the counter-phase that restores the many-body
// sector phase in the moment formulas (pinned by the frozen-mode oracle).
struct SectorEnsemble {
    int n_atoms = 0;
    int k_min = 0, k_max = 0;
    std::vector<double> amps;        // renormalized binomial window, real
    std::vector<RadialField> mode_a; // per sector N_a = k_min .. k_max
    std::vector<RadialField> mode_b;
    std::vector<double> phase_ledger; // Lambda_k
    double mass_outside = 0.0;        // binomial mass beyond the window
    double time = 0.0;

    int n_sectors() const { return k_max - k_min + 1; }
};

// pi/2-pulse initial state: binomial amplitudes, every mode = phi0.
SectorEnsemble make_pulse_ensemble(const CondensateParams& p, const RadialGrid& g,
                                   const RadialField& phi0, double window_sigmas = 6.0);

// Coupled per-sector GPE evolution, Strang splitting with a spectral
// (sine-transform) kinetic step. Sectors are independent between checkpoints
// and run in parallel; output is deterministic for any thread count.
class SectorEvolver {
public:
    SectorEvolver(const CondensateParams& p, const RadialGrid& g, int threads = 0);
    ~SectorEvolver();
    SectorEvolver(const SectorEvolver&) = delete;
    SectorEvolver& operator=(const SectorEvolver&) = delete;

    void advance(SectorEnsemble& e, double t_target, double dt);

    static constexpr double kDefaultDt = 0.005; // documented stability bound
    static constexpr double kDriftTol = 1e-8;   // norm drift per unit time

private:
    struct Impl;
    Impl* impl_;
};

SectorEnsemble evolve_sectors(SectorEnsemble ensemble, const CondensateParams& p,
                              const RadialGrid& g, double t_final,
                              double dt = SectorEvolver::kDefaultDt);

// Collective-spin moments of the sector ensemble. Coherences between sectors
// are damped by products of single-particle mode overlaps (A(k), A2(k)) and
// carry the phase-ledger correction.
SpinMoments ensemble_moments(const SectorEnsemble& e, const RadialGrid& g);

// damping factor magnitudes |A(k)|, for the |A| <= 1 property
std::vector<double> coherence_damping(const SectorEnsemble& e, const RadialGrid& g);

// per-atom mean square radius, binomially weighted over sectors
double ensemble_width(const SectorEnsemble& e, const RadialGrid& g);

struct Fig1Point {
    double t;
    double xi2;
    double theta_opt;
    double jx;
    double width;
};

struct Fig1Options {
    int n_points = 511;
    double r_max = 0.0; // 0 = auto
    double dt = SectorEvolver::kDefaultDt;
    double t_max = 20.0;
    int n_times = 2000;
    double window_sigmas = 6.0;
    bool frozen_modes = false; // pin mode shapes to phi0 (oracle mode)
    int threads = 0;
    std::function<void(int, int)> progress; // (done, total) checkpoints
};

struct Fig1Result {
    std::vector<Fig1Point> gpe;   // full simulation
    std::vector<Fig1Point> hspin; // twisting-only comparison at chi = estimator A
    double chi_estimate;
    double phi0_overlap_integral;
    double ground_state_mu;
    std::vector<std::string> warnings;
};

Fig1Result run_fig1(const CondensateParams& p, const Fig1Options& opt = {});

// Checkpoint: binary sector blocks (little-endian, length-prefixed complex64
// pairs, trailing float64 phase-ledger block) plus a plain-text manifest.
void save_checkpoint(const std::string& path, const SectorEnsemble& e,
                     const CondensateParams& p, const RadialGrid& g);

struct Checkpoint {
    CondensateParams params;
    int n_points;
    double r_max;
    SectorEnsemble ensemble;
};

Checkpoint load_checkpoint(const std::string& path);

} // namespace becsq

#endif
