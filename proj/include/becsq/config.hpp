#ifndef BECSQ_CONFIG_HPP
#define BECSQ_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace becsq {

enum class ExperimentKind {
    oat_curve,
    gpe_fig1,
    mc_fig2,
    witness_suite,
    scaling_sweep,
    dressing,
};

std::string kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);

// Flat key = value config with one [section] per experiment. Every field has
// a default; unknown keys are a hard error so typos cannot pass silently.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::oat_curve;

    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    int threads = 0; // 0 = auto
    bool emit_gnuplot = false;

    // oat-curve
    int oat_n_atoms = 1000;
    double oat_chi = 1.0;
    double oat_t_max = 0.0; // 0 = auto (a few optimal times)
    int oat_n_times = 400;

    // gpe-fig1
    int gpe_n_atoms = 10000;
    double gpe_a_aa = 0.006;
    double gpe_a_bb = 0.006;
    double gpe_a_ab = 0.003;
    int gpe_grid_points = 511;
    double gpe_r_max = 0.0; // 0 = auto
    double gpe_dt = 0.005;
    double gpe_t_max = 20.0;
    int gpe_n_times = 2000;
    double gpe_window_sigmas = 6.0;
    bool gpe_frozen_modes = false;

    // mc-fig2
    int mc_n_atoms = 100000;
    double mc_gamma_over_chi = 200.0;
    int mc_n_trajectories = 200;
    double mc_t_max_chi = 1.2e-3;
    int mc_n_times = 121;
    std::string mc_loss_norm = "remaining"; // or "initial"

    // witness-suite
    int wit_n_samples = 10000;
    int wit_n_min = 2;
    int wit_n_max = 50;
    int wit_frames_per_sample = 4;

    // scaling-sweep
    std::string sw_n_list = "1000,3000,10000";
    std::string sw_a_list = "0.003,0.006,0.012";
    int sw_n_fixed = 10000;
    double sw_a_fixed = 0.006;
    int sw_grid_points = 511;
    double sw_dt = 0.005;
    double sw_window_sigmas = 6.0;
    int sw_n_times = 800;
    double sw_t_max = 32.0;

    // dressing
    double dr_rabi_mhz = 2.0;     // Omega / 2pi
    double dr_detuning_mhz = 25.0; // delta / 2pi
};

ExperimentConfig default_config(ExperimentKind kind);

// Parses and applies a config file; the [section] must match cfg.kind.
// Reports line numbers and key names on error (errc::config).
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_stream(ExperimentConfig& cfg, std::istream& in, const std::string& origin);

// Manifest = resolved config (re-runnable) + metadata comment lines.
void write_manifest(const ExperimentConfig& cfg, const std::string& path,
                    const std::vector<std::string>& meta_comments);

// key names valid for a section, for docs and error messages
std::vector<std::string> config_keys(ExperimentKind kind);

} // namespace becsq

#endif
