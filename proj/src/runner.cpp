#include "becsq/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "becsq/csv.hpp"
#include "becsq/dicke.hpp"
#include "becsq/dressing.hpp"
#include "becsq/fit.hpp"
#include "becsq/gpe.hpp"
#include "becsq/loss.hpp"
#include "becsq/oat.hpp"
#include "becsq/rng.hpp"
#include "becsq/separable.hpp"

namespace becsq {

namespace {

namespace fs = std::filesystem;

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

std::vector<double> uniform_times(double t_max, int n) {
    if (n < 2) fail(errc::config, "n_times must be >= 2");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t_max * i / double(n - 1);
    return t;
}

std::vector<double> parse_list(const std::string& key, const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size() || item.empty())
            fail(errc::config, "key '" + key + "': cannot parse list element '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) fail(errc::config, "key '" + key + "': empty list");
    return out;
}

void emit_gnuplot_script(const std::string& path, const std::string& csv_name,
                         const std::string& ylabel, int ycol, bool logy) {
    std::ofstream gp(path, std::ios::binary);
    gp << "set datafile separator ','\n";
    gp << "set key off\nset xlabel 'time'\nset ylabel '" << ylabel << "'\n";
    if (logy) gp << "set logscale y\n";
    gp << "plot '" << csv_name << "' using 1:" << ycol << " with lines\n";
}

// random orthonormal frame; skips nothing, caller handles degenerate denominators
SpinFrame random_frame(Rng& rng) {
    Vec3 n1{rng.normal(), rng.normal(), rng.normal()};
    double nn = n1.norm();
    while (nn < 1e-6) {
        n1 = {rng.normal(), rng.normal(), rng.normal()};
        nn = n1.norm();
    }
    n1 = {n1.x / nn, n1.y / nn, n1.z / nn};
    Vec3 h = std::abs(n1.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 n2 = n1.cross(h);
    const double n2n = n2.norm();
    n2 = {n2.x / n2n, n2.y / n2n, n2.z / n2n};
    return SpinFrame(n1, n2, n1.cross(n2));
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void finish_manifest(const ExperimentConfig& cfg, const Timer& timer) {
    std::vector<std::string> meta = {
        std::string("becsqueeze ") + kVersion,
        "experiment = " + kind_name(cfg.kind),
        "wall_time_s = " + CsvWriter::format(timer.seconds()),
    };
    write_manifest(cfg, out_path(cfg, kind_name(cfg.kind) + ".manifest"), meta);
}

void run_oat_curve(const ExperimentConfig& cfg) {
    Timer timer;
    const int n = cfg.oat_n_atoms;
    if (n < 2) fail(errc::config, "oat-curve: n_atoms must be >= 2");
    if (!(cfg.oat_chi > 0)) fail(errc::config, "oat-curve: chi must be > 0");
    double t_max = cfg.oat_t_max;
    if (t_max <= 0)
        t_max = 4.0 * std::pow(3.0, 1.0 / 6.0) * std::pow(n / 2.0, -2.0 / 3.0) / cfg.oat_chi;
    const auto times = uniform_times(t_max, cfg.oat_n_times);

    CsvWriter csv(out_path(cfg, "oat-curve.csv"), {"t", "xi2", "theta_opt", "jx"});
    const DickeState initial = coherent_state(n);
    const TwistingParams tw{cfg.oat_chi, n};
    for (double t : times) {
        const SpinMoments m = moments(evolve(initial, tw, t));
        const SqueezingResult sq = optimal_xi_squared(m, n);
        csv.row({t, sq.xi2, sq.theta_opt, m.mean.x});
    }
    if (cfg.emit_gnuplot)
        emit_gnuplot_script(out_path(cfg, "oat-curve.gp"), "oat-curve.csv", "xi^2", 2, true);
    finish_manifest(cfg, timer);
}

void run_gpe_fig1(const ExperimentConfig& cfg) {
    Timer timer;
    CondensateParams p{cfg.gpe_a_aa, cfg.gpe_a_bb, cfg.gpe_a_ab, cfg.gpe_n_atoms};
    Fig1Options opt;
    opt.n_points = cfg.gpe_grid_points;
    opt.r_max = cfg.gpe_r_max;
    opt.dt = cfg.gpe_dt;
    opt.t_max = cfg.gpe_t_max;
    opt.n_times = cfg.gpe_n_times;
    opt.window_sigmas = cfg.gpe_window_sigmas;
    opt.frozen_modes = cfg.gpe_frozen_modes;
    opt.threads = cfg.threads;

    const Fig1Result res = run_fig1(p, opt);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

    CsvWriter csv(out_path(cfg, "gpe-fig1.csv"), {"t", "xi2", "theta_opt", "jx", "width"});
    for (const auto& pt : res.gpe) csv.row({pt.t, pt.xi2, pt.theta_opt, pt.jx, pt.width});
    CsvWriter csv2(out_path(cfg, "gpe-fig1_hspin.csv"), {"t", "xi2", "theta_opt", "jx"});
    for (const auto& pt : res.hspin) csv2.row({pt.t, pt.xi2, pt.theta_opt, pt.jx});

    std::ofstream info(out_path(cfg, "gpe-fig1_info.txt"), std::ios::binary);
    info << "chi_estimate = " << CsvWriter::format(res.chi_estimate) << "\n";
    info << "phi0_overlap_integral = " << CsvWriter::format(res.phi0_overlap_integral) << "\n";
    info << "ground_state_mu = " << CsvWriter::format(res.ground_state_mu) << "\n";

    if (cfg.emit_gnuplot)
        emit_gnuplot_script(out_path(cfg, "gpe-fig1.gp"), "gpe-fig1.csv", "xi^2", 2, true);
    finish_manifest(cfg, timer);
}

void run_mc_fig2(const ExperimentConfig& cfg) {
    Timer timer;
    LossParams lp;
    lp.gamma_over_chi = cfg.mc_gamma_over_chi;
    lp.n_atoms_initial = cfg.mc_n_atoms;
    lp.n_trajectories = cfg.mc_n_trajectories;
    lp.seed = cfg.seed;
    lp.time_grid = uniform_times(cfg.mc_t_max_chi, cfg.mc_n_times);
    if (cfg.mc_loss_norm == "initial")
        lp.normalize_with_initial_n = true;
    else if (cfg.mc_loss_norm != "remaining")
        fail(errc::config, "mc-fig2: loss_norm must be 'remaining' or 'initial'");

    const LossCurve curve = xi2_with_loss(lp, cfg.threads);
    CsvWriter csv(out_path(cfg, "mc-fig2.csv"), {"chi_t", "xi2_loss", "xi2_lossless", "mean_n"});
    for (const auto& pt : curve.points)
        csv.row({pt.chi_t, pt.xi2_loss, pt.xi2_lossless, pt.mean_n});
    if (cfg.emit_gnuplot)
        emit_gnuplot_script(out_path(cfg, "mc-fig2.gp"), "mc-fig2.csv", "xi^2", 2, true);
    finish_manifest(cfg, timer);
}

void run_witness_suite(const ExperimentConfig& cfg) {
    Timer timer;
    if (cfg.wit_n_min < 2 || cfg.wit_n_max < cfg.wit_n_min)
        fail(errc::config, "witness-suite: need 2 <= n_min <= n_max");
    const int span = cfg.wit_n_max - cfg.wit_n_min + 1;
    std::vector<double> min_xi2(span, std::numeric_limits<double>::infinity());
    std::vector<int> count(span, 0), violations(span, 0);

    for (int s = 0; s < cfg.wit_n_samples; ++s) {
        const int n = cfg.wit_n_min + (s % span);
        const SpinMoments m = sample_separable_state(n, Rng::derive(cfg.seed, s));
        ++count[n - cfg.wit_n_min];
        Rng frame_rng(Rng::derive(cfg.seed ^ 0x5eedf4a3ULL, s));
        for (int f = 0; f < cfg.wit_frames_per_sample + 1; ++f) {
            double xi2;
            try {
                if (f == 0)
                    xi2 = optimal_xi_squared(m, n).xi2; // paper-convention frame
                else
                    xi2 = xi_squared(m, n, random_frame(frame_rng));
            } catch (const Error& e) {
                if (e.code() == errc::degenerate_frame) continue;
                throw;
            }
            min_xi2[n - cfg.wit_n_min] = std::min(min_xi2[n - cfg.wit_n_min], xi2);
            if (xi2 < 1.0 - 1e-9) ++violations[n - cfg.wit_n_min];
        }
    }

    CsvWriter csv(out_path(cfg, "witness-suite.csv"),
                  {"n_atoms", "n_samples", "min_xi2", "n_violations"});
    for (int i = 0; i < span; ++i)
        csv.row({double(cfg.wit_n_min + i), double(count[i]), min_xi2[i], double(violations[i])});
    finish_manifest(cfg, timer);
}

void run_scaling_sweep(const ExperimentConfig& cfg) {
    Timer timer;
    const auto n_list = parse_list("n_list", cfg.sw_n_list);
    const auto a_list = parse_list("a_list", cfg.sw_a_list);
    if (n_list.size() < 3 || a_list.size() < 3)
        fail(errc::config, "scaling-sweep: need >= 3 points per swept axis");

    struct Row {
        double a, n;
        std::optional<Dip> gpe_dip;
        double t_opt_hspin, xi2_min_hspin;
    };

    auto run_point = [&](double a, int n) {
        CondensateParams p{a, a, a / 2.0, n};
        Fig1Options opt;
        opt.n_points = cfg.sw_grid_points;
        opt.dt = cfg.sw_dt;
        opt.t_max = cfg.sw_t_max;
        opt.n_times = cfg.sw_n_times;
        opt.window_sigmas = cfg.sw_window_sigmas;
        opt.threads = cfg.threads;
        const Fig1Result res = run_fig1(p, opt);
        std::vector<double> t, x, th, xh;
        for (const auto& pt : res.gpe) {
            t.push_back(pt.t);
            x.push_back(pt.xi2);
        }
        for (const auto& pt : res.hspin) {
            th.push_back(pt.t);
            xh.push_back(pt.xi2);
        }
        Row row;
        row.a = a;
        row.n = n;
        row.gpe_dip = find_first_deep_dip(t, x, 1.5);
        // the twisting-only comparison curve has a single smooth dip: its minimum
        const auto hm = find_first_deep_dip(th, xh, 1.5);
        if (!hm) fail(errc::search, "scaling-sweep: comparison curve has no minimum in range");
        row.t_opt_hspin = hm->t;
        row.xi2_min_hspin = hm->value;
        return row;
    };

    std::vector<Row> rows_n, rows_a;
    for (double n : n_list) rows_n.push_back(run_point(cfg.sw_a_fixed, int(n)));
    for (double a : a_list) rows_a.push_back(run_point(a, cfg.sw_n_fixed));

    CsvWriter csv(out_path(cfg, "scaling-sweep.csv"),
                  {"a_aa", "n_atoms", "t_opt", "xi2_min", "t_dip_gpe", "xi2_dip_gpe", "flagged"});
    auto emit = [&](const Row& r) {
        csv.row({r.a, r.n, r.t_opt_hspin, r.xi2_min_hspin,
                 r.gpe_dip ? r.gpe_dip->t : 0.0, r.gpe_dip ? r.gpe_dip->value : 0.0,
                 r.gpe_dip ? 0.0 : 1.0});
    };
    for (const auto& r : rows_n) emit(r);
    for (const auto& r : rows_a) emit(r);

    CsvWriter expo(out_path(cfg, "scaling-sweep_exponents.csv"),
                   {"axis", "exponent", "stderr", "n_points"});
    auto fit_axis = [&](const std::vector<Row>& rows, bool n_axis, bool use_gpe_dip,
                        const std::string& label) {
        std::vector<double> x, y;
        for (const auto& r : rows) {
            if (use_gpe_dip) {
                if (!r.gpe_dip) continue; // flagged rows excluded from the fit
                y.push_back(r.gpe_dip->t);
            } else {
                y.push_back(r.t_opt_hspin);
            }
            x.push_back(n_axis ? r.n : r.a);
        }
        if (x.size() >= 3) {
            const PowerLawFit f = fit_power_law(x, y);
            expo.row_mixed({label, CsvWriter::format(f.exponent), CsvWriter::format(f.stderr),
                            std::to_string(f.n_points)});
        } else {
            expo.row_mixed({label, "nan", "nan", std::to_string(int(x.size()))});
        }
    };
    fit_axis(rows_n, true, false, "n_atoms");
    fit_axis(rows_a, false, false, "a_aa");
    fit_axis(rows_n, true, true, "n_atoms_gpe_dip");
    fit_axis(rows_a, false, true, "a_aa_gpe_dip");
    finish_manifest(cfg, timer);
}

void run_dressing(const ExperimentConfig& cfg) {
    Timer timer;
    DressingParams dp;
    dp.rabi = 2.0 * M_PI * cfg.dr_rabi_mhz * 1e6;
    dp.detuning = 2.0 * M_PI * cfg.dr_detuning_mhz * 1e6;
    const DressingShift shift = dressing_shift(dp);
    CsvWriter csv(out_path(cfg, "dressing.csv"),
                  {"rabi_mhz", "detuning_mhz", "delta_e_nk", "delta_e_hz"});
    csv.row({cfg.dr_rabi_mhz, cfg.dr_detuning_mhz, shift.nanokelvin, shift.hertz});
    std::cout << "dressing shift: " << shift.nanokelvin << " nK (" << shift.hertz << " Hz)\n";
    finish_manifest(cfg, timer);
}

} // namespace

void run(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::oat_curve: return run_oat_curve(cfg);
        case ExperimentKind::gpe_fig1: return run_gpe_fig1(cfg);
        case ExperimentKind::mc_fig2: return run_mc_fig2(cfg);
        case ExperimentKind::witness_suite: return run_witness_suite(cfg);
        case ExperimentKind::scaling_sweep: return run_scaling_sweep(cfg);
        case ExperimentKind::dressing: return run_dressing(cfg);
    }
}

} // namespace becsq
