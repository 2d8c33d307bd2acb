#include "becsq/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "becsq/oat.hpp"
#include "becsq/rng.hpp"
#include "sine_transform.hpp"

namespace becsq {

void CondensateParams::validate() const {
    if (!(a_aa > 0)) fail(errc::invalid_argument, "CondensateParams: a_aa must be > 0");
    if (n_atoms < 2) fail(errc::invalid_argument, "CondensateParams: n_atoms must be >= 2");
    if (!std::isfinite(a_bb) || !std::isfinite(a_ab))
        fail(errc::invalid_argument, "CondensateParams: scattering lengths must be finite");
}

std::vector<std::string> CondensateParams::warnings() const {
    std::vector<std::string> w;
    if (a_ab >= std::min(a_aa, a_bb))
        w.push_back("a_ab >= min(a_aa, a_bb): component deviations grow instead of "
                    "oscillating; squeezing results may be unreliable");
    return w;
}

RadialGrid make_grid(const CondensateParams& p, int n_points, double r_max) {
    p.validate();
    if (r_max <= 0.0) r_max = std::max(6.0 * p.tf_radius(), 8.0);
    if (r_max < std::max(6.0 * p.tf_radius(), 8.0) - 1e-9)
        fail(errc::invalid_argument, "make_grid: r_max below 6x the Thomas-Fermi radius estimate");
    return RadialGrid(n_points, r_max);
}

// ---------------------------------------------------------------------------
// ground state
// ---------------------------------------------------------------------------

namespace {

// in-place kinetic factor exp(scale * k_m^2 / 2) on u = r phi, spectral basis.
// scale = -i dt for real time, -dt for imaginary time; handled by the caller
// providing per-mode complex factors.
struct UWorkspace {
    std::vector<double> re, im;
    explicit UWorkspace(int n) : re(n), im(n) {}
};

void kinetic_apply(const SineTransform& dst, const RadialGrid& g, RadialField& f,
                   const std::vector<double>& fac_re, const std::vector<double>& fac_im,
                   UWorkspace& ws) {
    const int n = g.n_points();
    for (int j = 0; j < n; ++j) {
        const cplx u = f.values[j] * g.r()[j];
        ws.re[j] = u.real();
        ws.im[j] = u.imag();
    }
    dst.execute(ws.re.data());
    dst.execute(ws.im.data());
    for (int m = 0; m < n; ++m) {
        const double a = ws.re[m], b = ws.im[m];
        ws.re[m] = fac_re[m] * a - fac_im[m] * b;
        ws.im[m] = fac_re[m] * b + fac_im[m] * a;
    }
    dst.execute(ws.re.data());
    dst.execute(ws.im.data());
    const double s = 1.0 / (2.0 * (n + 1));
    for (int j = 0; j < n; ++j)
        f.values[j] = cplx(ws.re[j] * s, ws.im[j] * s) / g.r()[j];
}

} // namespace

GroundStateResult ground_state(const CondensateParams& p, const RadialGrid& g,
                               const GroundStateOptions& opt) {
    p.validate();
    if (g.r_max() < std::max(6.0 * p.tf_radius(), 8.0) - 1e-9)
        fail(errc::invalid_argument, "ground_state: grid r_max too small for these parameters");

    const int n = g.n_points();
    const double g_eff = p.g_aa() * (p.n_atoms - 1.0);
    SineTransform dst(n);
    UWorkspace ws(n);

    // Thomas-Fermi-blended seed: a bare Gaussian under a strong nonlinear term
    // makes the first imaginary-time steps hopelessly stiff
    RadialField phi;
    phi.values.resize(n);
    const double mu_tf = p.tf_mu();
    for (int j = 0; j < n; ++j) {
        const double r = g.r()[j];
        const double gauss = std::exp(-0.5 * r * r);
        if (mu_tf > 2.0 && g_eff > 0) {
            const double n_tf = std::max(mu_tf - 0.5 * r * r, 0.0) / g_eff;
            phi.values[j] = std::sqrt(n_tf + 1e-8 * gauss * gauss);
        } else {
            phi.values[j] = gauss;
        }
    }
    normalize(g, phi);

    auto energy_of = [&](const RadialField& f) {
        return kinetic_energy(g, f) + trap_energy(g, f) + interaction_energy(g, f, g_eff);
    };

    double dt = opt.dt;
    double dt_cached = -1.0;
    std::vector<double> fac_re(n), fac_im(n, 0.0);
    double e_prev = energy_of(phi);
    long step = 0;
    bool converged = false;
    for (; step < opt.max_steps; ++step) {
        if (dt != dt_cached) {
            for (int m = 1; m <= n; ++m) {
                const double k = M_PI * m / g.r_max();
                fac_re[m - 1] = std::exp(-0.5 * dt * k * k);
            }
            dt_cached = dt;
        }
        RadialField trial = phi;
        // Strang: half potential decay, kinetic decay, half potential decay.
        // The decay under d phi/dtau = -(V + g |phi|^2) phi has a closed form
        // (the density obeys a Bernoulli equation); using it keeps the split
        // second order, where a frozen-density factor would leave an O(dtau)
        // bias in the converged state.
        auto half_decay = [&](RadialField& f) {
            for (int j = 0; j < n; ++j) {
                const double v = 0.5 * g.r()[j] * g.r()[j];
                const double n0 = std::norm(f.values[j]);
                const double tau = 0.5 * dt;
                const double w = -std::expm1(-2.0 * v * tau) / std::max(v, 1e-300);
                f.values[j] *= std::exp(-v * tau) / std::sqrt(1.0 + g_eff * n0 * w);
            }
        };
        half_decay(trial);
        kinetic_apply(dst, g, trial, fac_re, fac_im, ws);
        half_decay(trial);
        normalize(g, trial);
        const double e = energy_of(trial);
        const double rounding = 1e-13 * std::max(1.0, std::abs(e));
        if (e > e_prev + rounding) {
            dt *= 0.5; // overshoot; retry the same state with a smaller step
            if (dt < 1e-5)
                fail(errc::convergence,
                     "ground_state: imaginary-time step collapsed, residual dE = " +
                         std::to_string(e - e_prev));
            continue;
        }
        const double de = std::abs(e_prev - e);
        phi = std::move(trial);
        e_prev = e;
        if (de < opt.energy_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        fail(errc::convergence, "ground_state: no convergence after " +
                                    std::to_string(opt.max_steps) + " steps");

    // Polish to the discrete stationary point: the split-step fixed point sits
    // O(dtau) away from the minimizer in state space even though its energy is
    // O(dtau^2) accurate. Preconditioned residual iteration on u = r phi rubs
    // that out at ~2 transforms per sweep; fields are real in imaginary time.
    {
        const double scale = 4.0 * M_PI * g.dr();
        std::vector<double> u(n), hu(n), res(n), k2h(n);
        for (int m = 1; m <= n; ++m) {
            const double k = M_PI * m / g.r_max();
            k2h[m - 1] = 0.5 * k * k;
        }
        for (int j = 0; j < n; ++j) u[j] = std::abs(phi.values[j]) * g.r()[j];
        auto plain_norm = [&](const std::vector<double>& x) {
            KahanSum s;
            for (double v : x) s.add(v * v);
            return std::sqrt(scale * s.value());
        };
        auto apply_h = [&](const std::vector<double>& x, std::vector<double>& out) {
            out = x;
            dst.execute(out.data());
            for (int m = 0; m < n; ++m) out[m] *= k2h[m];
            dst.execute(out.data());
            const double rn = 1.0 / (2.0 * (n + 1));
            for (int j = 0; j < n; ++j) {
                const double r = g.r()[j];
                const double dens = (x[j] / r) * (x[j] / r);
                out[j] = out[j] * rn + (0.5 * r * r + g_eff * dens) * x[j];
            }
        };
        auto energy_plain = [&](const std::vector<double>& x) {
            std::vector<double> xh = x;
            dst.execute(xh.data());
            KahanSum t;
            for (int m = 0; m < n; ++m) t.add(k2h[m] * xh[m] * xh[m]);
            KahanSum pot;
            for (int j = 0; j < n; ++j) {
                const double r = g.r()[j];
                const double dens = (x[j] / r) * (x[j] / r);
                pot.add((0.5 * r * r + 0.5 * g_eff * dens) * x[j] * x[j]);
            }
            return scale * (t.value() / (2.0 * (n + 1)) + pot.value());
        };

        const double inv0 = 1.0 / plain_norm(u);
        for (double& v : u) v *= inv0;
        double e_cur = energy_plain(u);
        std::vector<double> trial(n);
        for (int it = 0; it < 3000; ++it) {
            apply_h(u, hu);
            KahanSum mu_acc;
            for (int j = 0; j < n; ++j) mu_acc.add(u[j] * hu[j]);
            const double mu = scale * mu_acc.value();
            double rmax = 0;
            for (int j = 0; j < n; ++j) {
                res[j] = hu[j] - mu * u[j];
                rmax = std::max(rmax, std::abs(res[j]));
            }
            if (rmax < 1e-11 * std::max(1.0, mu)) break;
            dst.execute(res.data());
            for (int m = 0; m < n; ++m) res[m] /= (k2h[m] + mu) * (2.0 * (n + 1));
            dst.execute(res.data());
            // backtracking on the energy; the bare update overshoots where the
            // trap potential dominates the preconditioner
            double alpha = 1.0;
            bool accepted = false;
            while (alpha > 1e-6) {
                for (int j = 0; j < n; ++j) trial[j] = u[j] - alpha * res[j];
                const double inv = 1.0 / plain_norm(trial);
                for (double& v : trial) v *= inv;
                const double e_try = energy_plain(trial);
                if (e_try <= e_cur + 1e-13 * std::max(1.0, std::abs(e_cur))) {
                    u.swap(trial);
                    e_cur = e_try;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break; // at the floor of the line search: converged
        }
        for (int j = 0; j < n; ++j) phi.values[j] = u[j] / g.r()[j];
        normalize(g, phi);
        e_prev = energy_of(phi);
    }

    const double mu = kinetic_energy(g, phi) + trap_energy(g, phi) +
                      2.0 * interaction_energy(g, phi, g_eff);
    return {std::move(phi), e_prev, mu, step};
}

// ---------------------------------------------------------------------------
// sector ensemble
// ---------------------------------------------------------------------------

SectorEnsemble make_pulse_ensemble(const CondensateParams& p, const RadialGrid& g,
                                   const RadialField& phi0, double window_sigmas) {
    p.validate();
    if (static_cast<int>(phi0.values.size()) != g.n_points())
        fail(errc::invalid_argument, "make_pulse_ensemble: phi0 does not match the grid");

    const int n = p.n_atoms;
    const double sigma = 0.5 * std::sqrt(static_cast<double>(n));
    const int hw = static_cast<int>(std::ceil(window_sigmas * sigma));
    SectorEnsemble e;
    e.n_atoms = n;
    e.k_min = std::max(0, n / 2 - hw);
    e.k_max = std::min(n, n / 2 + hw);

    const int ns = e.n_sectors();
    e.amps.resize(ns);
    const double lg_n = std::lgamma(n + 1.0);
    KahanSum mass;
    for (int i = 0; i < ns; ++i) {
        const int k = e.k_min + i;
        const double lp = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                          n * std::log(2.0);
        e.amps[i] = std::exp(0.5 * lp);
        mass.add(std::exp(lp));
    }
    e.mass_outside = std::max(0.0, 1.0 - mass.value());
    if (e.mass_outside > 1e-8)
        fail(errc::window_truncation,
             "make_pulse_ensemble: binomial mass outside the window is " +
                 std::to_string(e.mass_outside) + " (> 1e-8); widen window_sigmas");
    const double inv = 1.0 / std::sqrt(mass.value());
    for (double& a : e.amps) a *= inv;

    e.mode_a.assign(ns, phi0);
    e.mode_b.assign(ns, phi0);
    e.phase_ledger.assign(ns, 0.0);
    return e;
}

// ---------------------------------------------------------------------------
// evolution: Strang split per sector
// ---------------------------------------------------------------------------

struct SectorEvolver::Impl {
    CondensateParams params;
    const RadialGrid& grid;
    SineTransform dst;
    int threads;
    double dt_cached = -1.0;
    std::vector<double> kin_re, kin_im; // full-step kinetic phase per mode
    std::vector<UWorkspace> ws;         // per thread

    Impl(const CondensateParams& p, const RadialGrid& g, int nthreads)
        : params(p), grid(g), dst(g.n_points()) {
#ifdef _OPENMP
        threads = nthreads > 0 ? nthreads : omp_get_max_threads();
#else
        threads = 1;
#endif
        for (int t = 0; t < threads; ++t) ws.emplace_back(g.n_points());
    }

    void set_dt(double dt) {
        if (dt == dt_cached) return;
        const int n = grid.n_points();
        kin_re.resize(n);
        kin_im.resize(n);
        for (int m = 1; m <= n; ++m) {
            const double k = M_PI * m / grid.r_max();
            kin_re[m - 1] = std::cos(-0.5 * dt * k * k);
            kin_im[m - 1] = std::sin(-0.5 * dt * k * k);
        }
        dt_cached = dt;
    }

    double sector_eint(int k, const RadialField& fa, const RadialField& fb) const {
        const double na = k, nb = params.n_atoms - k;
        const double paa = overlap_integral(grid, fa);
        const double pbb = overlap_integral(grid, fb);
        KahanSum pab;
        for (int j = 0; j < grid.n_points(); ++j)
            pab.add(grid.qw()[j] * std::norm(fa.values[j]) * std::norm(fb.values[j]));
        return 0.5 * params.g_aa() * na * (na - 1.0) * paa +
               0.5 * params.g_bb() * nb * (nb - 1.0) * pbb +
               params.g_ab() * na * nb * pab.value();
    }

    // one Strang step of the coupled pair for sector N_a = k; returns norm drift
    double step_pair(int k, RadialField& fa, RadialField& fb, double dt, UWorkspace& w) {
        const int n = grid.n_points();
        const double ca_self = params.g_aa() * std::max(0.0, k - 1.0);
        const double ca_cross = params.g_ab() * (params.n_atoms - k);
        const double cb_self = params.g_bb() * std::max(0.0, params.n_atoms - k - 1.0);
        const double cb_cross = params.g_ab() * k;

        auto half_potential = [&]() {
            for (int j = 0; j < n; ++j) {
                const double da = std::norm(fa.values[j]);
                const double db = std::norm(fb.values[j]);
                const double r2h = 0.5 * grid.r()[j] * grid.r()[j];
                fa.values[j] *= std::polar(1.0, -0.5 * dt * (r2h + ca_self * da + ca_cross * db));
                fb.values[j] *= std::polar(1.0, -0.5 * dt * (r2h + cb_self * db + cb_cross * da));
            }
        };
        half_potential();
        kinetic_apply(dst, grid, fa, kin_re, kin_im, w);
        kinetic_apply(dst, grid, fb, kin_re, kin_im, w);
        half_potential();

        const double na2 = field_norm2(grid, fa), nb2 = field_norm2(grid, fb);
        const double drift = std::max(std::abs(na2 - 1.0), std::abs(nb2 - 1.0));
        const double ia = 1.0 / std::sqrt(na2), ib = 1.0 / std::sqrt(nb2);
        for (cplx& v : fa.values) v *= ia;
        for (cplx& v : fb.values) v *= ib;
        return drift;
    }
};

SectorEvolver::SectorEvolver(const CondensateParams& p, const RadialGrid& g, int threads)
    : impl_(new Impl(p, g, threads)) {
    p.validate();
}

SectorEvolver::~SectorEvolver() { delete impl_; }

void SectorEvolver::advance(SectorEnsemble& e, double t_target, double dt) {
    if (t_target < e.time)
        fail(errc::invalid_argument, "SectorEvolver: t_target before current time");
    if (t_target == e.time) return;
    if (!(dt > 0)) fail(errc::invalid_argument, "SectorEvolver: dt must be > 0");

    const double span = t_target - e.time;
    const long nsteps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-12)));
    const double h = span / nsteps;
    impl_->set_dt(h);

    const int ns = e.n_sectors();
    std::vector<double> drift(ns, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(impl_->threads)
#endif
    for (int i = 0; i < ns; ++i) {
#ifdef _OPENMP
        UWorkspace& w = impl_->ws[omp_get_thread_num()];
#else
        UWorkspace& w = impl_->ws[0];
#endif
        const int k = e.k_min + i;
        double e_prev = impl_->sector_eint(k, e.mode_a[i], e.mode_b[i]);
        double dmax = 0.0;
        for (long s = 0; s < nsteps; ++s) {
            dmax = std::max(dmax, impl_->step_pair(k, e.mode_a[i], e.mode_b[i], h, w));
            const double e_now = impl_->sector_eint(k, e.mode_a[i], e.mode_b[i]);
            e.phase_ledger[i] += 0.5 * h * (e_prev + e_now);
            e_prev = e_now;
        }
        drift[i] = dmax;
    }
    e.time = t_target;

    const double worst = *std::max_element(drift.begin(), drift.end());
    if (worst / impl_->dt_cached > kDriftTol)
        fail(errc::stability, "SectorEvolver: norm drift " + std::to_string(worst) +
                                  " per step exceeds the stability bound; reduce dt");
    for (int i = 0; i < ns; ++i) {
        if (edge_density(e.mode_a[i]) > RadialField::kLeakTol ||
            edge_density(e.mode_b[i]) > RadialField::kLeakTol)
            fail(errc::grid_leak, "SectorEvolver: density reached the grid wall (sector " +
                                      std::to_string(e.k_min + i) + "); enlarge r_max");
    }
}

SectorEnsemble evolve_sectors(SectorEnsemble ensemble, const CondensateParams& p,
                              const RadialGrid& g, double t_final, double dt) {
    SectorEvolver ev(p, g);
    ev.advance(ensemble, t_final, dt);
    return ensemble;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

namespace {

struct SectorOverlaps {
    cplx v1{};   // phase-ledger corrected A(k), coherence k -> k+1
    cplx v2{};   // likewise A2(k), k -> k+2
    double ovab2 = 1.0; // |<phi_a(k)|phi_b(k)>|^2, same-sector correction
};

std::vector<SectorOverlaps> compute_overlaps(const SectorEnsemble& e, const RadialGrid& g) {
    const int ns = e.n_sectors();
    const int n = e.n_atoms;
    std::vector<SectorOverlaps> out(ns);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < ns; ++i) {
        const int k = e.k_min + i;
        out[i].ovab2 = std::norm(inner(g, e.mode_a[i], e.mode_b[i]));
        if (i + 1 < ns) {
            const cplx t1 = inner(g, e.mode_a[i + 1], e.mode_b[i]);
            const cplx aa = inner(g, e.mode_a[i + 1], e.mode_a[i]);
            const cplx bb = inner(g, e.mode_b[i + 1], e.mode_b[i]);
            const cplx a1 = t1 * std::pow(aa, static_cast<double>(k)) *
                            std::pow(bb, static_cast<double>(n - k - 1));
            out[i].v1 = std::polar(1.0, e.phase_ledger[i] - e.phase_ledger[i + 1]) * a1;
        }
        if (i + 2 < ns) {
            const cplx t2 = inner(g, e.mode_a[i + 2], e.mode_b[i]);
            const cplx aa = inner(g, e.mode_a[i + 2], e.mode_a[i]);
            const cplx bb = inner(g, e.mode_b[i + 2], e.mode_b[i]);
            const cplx a2 = t2 * t2 * std::pow(aa, static_cast<double>(k)) *
                            std::pow(bb, static_cast<double>(n - k - 2));
            out[i].v2 = std::polar(1.0, e.phase_ledger[i] - e.phase_ledger[i + 2]) * a2;
        }
    }
    return out;
}

} // namespace

SpinMoments ensemble_moments(const SectorEnsemble& e, const RadialGrid& g) {
    if (e.mass_outside > 1e-8)
        fail(errc::window_truncation, "ensemble_moments: window truncation error " +
                                          std::to_string(e.mass_outside) + " exceeds 1e-8");
    const int ns = e.n_sectors();
    const int n = e.n_atoms;
    const auto ov = compute_overlaps(e, g);

    KahanSum jp_re, jp_im, jp2_re, jp2_im, jpjz_re, jpjz_im, jpjm, jmjp, jz, jz2;
    for (int i = 0; i < ns; ++i) {
        const int k = e.k_min + i;
        const double p = e.amps[i] * e.amps[i];
        const double mz = k - 0.5 * n;
        jz.add(p * mz);
        jz2.add(p * mz * mz);
        // within-ansatz diagonal ladder products; reduce to k(N-k+1), (k+1)(N-k)
        // when the same-sector overlap is 1
        jpjm.add(p * k * (1.0 + (n - k) * ov[i].ovab2));
        jmjp.add(p * (n - k) * (1.0 + k * ov[i].ovab2));
        if (i + 1 < ns) {
            const double w = std::sqrt((k + 1.0) * (n - k));
            const cplx coh = e.amps[i + 1] * e.amps[i] * w * ov[i].v1;
            jp_re.add(coh.real());
            jp_im.add(coh.imag());
            const cplx cz = coh * (mz + 0.5);
            jpjz_re.add(cz.real());
            jpjz_im.add(cz.imag());
        }
        if (i + 2 < ns) {
            const double w2 = std::sqrt((k + 1.0) * (k + 2.0) * (n - k) * (n - k - 1.0));
            const cplx coh2 = e.amps[i + 2] * e.amps[i] * w2 * ov[i].v2;
            jp2_re.add(coh2.real());
            jp2_im.add(coh2.imag());
        }
    }
    LadderSums s;
    s.jp = {jp_re.value(), jp_im.value()};
    s.jp2 = {jp2_re.value(), jp2_im.value()};
    s.jpjz_sym = {jpjz_re.value(), jpjz_im.value()};
    s.jpjm = jpjm.value();
    s.jmjp = jmjp.value();
    s.jz = jz.value();
    s.jz2 = jz2.value();
    return assemble_moments(s);
}

std::vector<double> coherence_damping(const SectorEnsemble& e, const RadialGrid& g) {
    const auto ov = compute_overlaps(e, g);
    std::vector<double> mags;
    mags.reserve(ov.size());
    for (std::size_t i = 0; i + 1 < ov.size(); ++i) mags.push_back(std::abs(ov[i].v1));
    return mags;
}

double ensemble_width(const SectorEnsemble& e, const RadialGrid& g) {
    KahanSum s;
    for (int i = 0; i < e.n_sectors(); ++i) {
        const int k = e.k_min + i;
        const double p = e.amps[i] * e.amps[i];
        s.add(p * (k * mean_r2(g, e.mode_a[i]) +
                   (e.n_atoms - k) * mean_r2(g, e.mode_b[i])));
    }
    return s.value() / e.n_atoms;
}

// ---------------------------------------------------------------------------
// Fig.-1 style experiment
// ---------------------------------------------------------------------------

Fig1Result run_fig1(const CondensateParams& p, const Fig1Options& opt) {
    p.validate();
    Fig1Result res;
    res.warnings = p.warnings();

    const RadialGrid grid = make_grid(p, opt.n_points, opt.r_max);
    GroundStateResult gs = ground_state(p, grid);
    res.phi0_overlap_integral = overlap_integral(grid, gs.mode);
    res.ground_state_mu = gs.mu;
    const InteractionConstants ic{p.g_aa(), p.g_bb(), p.g_ab(), res.phi0_overlap_integral};
    res.chi_estimate = estimate_chi(ic);

    std::vector<double> times(opt.n_times);
    for (int i = 0; i < opt.n_times; ++i)
        times[i] = opt.t_max * i / double(opt.n_times - 1);

    const int n = p.n_atoms;
    SectorEnsemble ens = make_pulse_ensemble(p, grid, gs.mode, opt.window_sigmas);

    if (opt.frozen_modes) {
        // Mode shapes pinned to phi0: mean-field phases and the interaction
        // counter-phase are analytic in t, everything else goes through the
        // standard moment assembly.
        const double i0 = res.phi0_overlap_integral;
        const double h0 = kinetic_energy(grid, gs.mode) + trap_energy(grid, gs.mode);
        std::vector<double> mu_a(ens.n_sectors()), mu_b(ens.n_sectors()), eint(ens.n_sectors());
        for (int i = 0; i < ens.n_sectors(); ++i) {
            const double na = ens.k_min + i, nb = n - na;
            mu_a[i] = h0 + (p.g_aa() * std::max(0.0, na - 1.0) + p.g_ab() * nb) * i0;
            mu_b[i] = h0 + (p.g_bb() * std::max(0.0, nb - 1.0) + p.g_ab() * na) * i0;
            eint[i] = (0.5 * p.g_aa() * na * (na - 1.0) + 0.5 * p.g_bb() * nb * (nb - 1.0) +
                       p.g_ab() * na * nb) * i0;
        }
        for (double t : times) {
            for (int i = 0; i < ens.n_sectors(); ++i) {
                const cplx fa = std::polar(1.0, -mu_a[i] * t);
                const cplx fb = std::polar(1.0, -mu_b[i] * t);
                for (int j = 0; j < grid.n_points(); ++j) {
                    ens.mode_a[i].values[j] = fa * gs.mode.values[j];
                    ens.mode_b[i].values[j] = fb * gs.mode.values[j];
                }
                ens.phase_ledger[i] = eint[i] * t;
            }
            ens.time = t;
            SpinMoments m = ensemble_moments(ens, grid);
            SqueezingResult sq = optimal_xi_squared(m, n);
            res.gpe.push_back({t, sq.xi2, sq.theta_opt, m.mean.x, ensemble_width(ens, grid)});
        }
    } else {
        SectorEvolver ev(p, grid, opt.threads);
        int done = 0;
        for (double t : times) {
            ev.advance(ens, t, opt.dt);
            SpinMoments m = ensemble_moments(ens, grid);
            SqueezingResult sq = optimal_xi_squared(m, n);
            res.gpe.push_back({t, sq.xi2, sq.theta_opt, m.mean.x, ensemble_width(ens, grid)});
            if (opt.progress) opt.progress(++done, opt.n_times);
        }
    }

    // twisting-only comparison curve at the estimator-A chi
    const TwistingParams tw{res.chi_estimate, n};
    const DickeState initial = coherent_state(n);
    res.hspin.resize(times.size(), {0, 0, 0, 0, 0});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < times.size(); ++i) {
        SpinMoments m = moments(evolve(initial, tw, times[i]));
        SqueezingResult sq = optimal_xi_squared(m, n);
        res.hspin[i] = {times[i], sq.xi2, sq.theta_opt, m.mean.x, 0.0};
    }
    return res;
}

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void put_field(std::ostream& os, const RadialField& f) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.values.size()));
    for (const cplx& z : f.values) {
        put<float>(os, static_cast<float>(z.real()));
        put<float>(os, static_cast<float>(z.imag()));
    }
}

RadialField get_field(std::istream& is, int expect) {
    const auto len = get<std::uint32_t>(is);
    if (static_cast<int>(len) != expect)
        fail(errc::io, "checkpoint: sector block length mismatch");
    RadialField f;
    f.values.resize(len);
    for (auto& z : f.values) {
        const float re = get<float>(is);
        const float im = get<float>(is);
        z = {re, im};
    }
    return f;
}

} // namespace

void save_checkpoint(const std::string& path, const SectorEnsemble& e,
                     const CondensateParams& p, const RadialGrid& g) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) fail(errc::io, "save_checkpoint: cannot open " + path);
    bin.write("BSQSECT1", 8);
    put<std::uint32_t>(bin, static_cast<std::uint32_t>(e.n_sectors()));
    for (int i = 0; i < e.n_sectors(); ++i) {
        put_field(bin, e.mode_a[i]);
        put_field(bin, e.mode_b[i]);
    }
    put<std::uint32_t>(bin, static_cast<std::uint32_t>(e.n_sectors()));
    for (double l : e.phase_ledger) put<double>(bin, l);
    if (!bin) fail(errc::io, "save_checkpoint: write failed for " + path);

    std::ofstream man(path + ".manifest");
    man << "# sector checkpoint manifest\n";
    man << "n_atoms = " << e.n_atoms << "\n";
    man << "a_aa = " << p.a_aa << "\n";
    man << "a_bb = " << p.a_bb << "\n";
    man << "a_ab = " << p.a_ab << "\n";
    man << "grid_points = " << g.n_points() << "\n";
    man << "r_max = " << g.r_max() << "\n";
    man << "k_min = " << e.k_min << "\n";
    man << "k_max = " << e.k_max << "\n";
    man << "time = " << std::setprecision(17) << e.time << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream man(path + ".manifest");
    if (!man) fail(errc::io, "load_checkpoint: missing manifest for " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(man, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto req = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) fail(errc::io, "load_checkpoint: manifest missing " + key);
        return it->second;
    };

    Checkpoint cp;
    cp.params = {std::stod(req("a_aa")), std::stod(req("a_bb")), std::stod(req("a_ab")),
                 std::stoi(req("n_atoms"))};
    cp.n_points = std::stoi(req("grid_points"));
    cp.r_max = std::stod(req("r_max"));

    SectorEnsemble& e = cp.ensemble;
    e.n_atoms = cp.params.n_atoms;
    e.k_min = std::stoi(req("k_min"));
    e.k_max = std::stoi(req("k_max"));
    e.time = std::stod(req("time"));

    std::ifstream bin(path, std::ios::binary);
    if (!bin) fail(errc::io, "load_checkpoint: cannot open " + path);
    char magic[8];
    bin.read(magic, 8);
    if (std::memcmp(magic, "BSQSECT1", 8) != 0)
        fail(errc::io, "load_checkpoint: bad magic in " + path);
    const auto ns = get<std::uint32_t>(bin);
    if (static_cast<int>(ns) != e.n_sectors())
        fail(errc::io, "load_checkpoint: sector count mismatch");
    for (std::uint32_t i = 0; i < ns; ++i) {
        e.mode_a.push_back(get_field(bin, cp.n_points));
        e.mode_b.push_back(get_field(bin, cp.n_points));
    }
    const auto nl = get<std::uint32_t>(bin);
    if (nl != ns) fail(errc::io, "load_checkpoint: phase ledger length mismatch");
    e.phase_ledger.resize(nl);
    for (auto& l : e.phase_ledger) l = get<double>(bin);
    if (!bin) fail(errc::io, "load_checkpoint: truncated file " + path);

    // amplitudes are derivable: renormalized binomial window
    const int n = e.n_atoms;
    const double lg_n = std::lgamma(n + 1.0);
    e.amps.resize(e.n_sectors());
    KahanSum mass;
    for (int i = 0; i < e.n_sectors(); ++i) {
        const int k = e.k_min + i;
        const double lp = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                          n * std::log(2.0);
        e.amps[i] = std::exp(0.5 * lp);
        mass.add(std::exp(lp));
    }
    e.mass_outside = std::max(0.0, 1.0 - mass.value());
    const double inv = 1.0 / std::sqrt(mass.value());
    for (double& a : e.amps) a *= inv;
    return cp;
}

} // namespace becsq
