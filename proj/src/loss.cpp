#include "becsq/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "becsq/rng.hpp"

namespace becsq {

namespace {

// Dicke amplitudes in a fixed buffer with a support window. An a-loss shifts
// the logical index by bumping the offset instead of moving data; the support
// never grows under phases or loss maps.
struct WindowedState {
    std::vector<cplx> buf; // absolute index j; logical k = j - n_a_lost
    int lo = 0, hi = 0;    // inclusive absolute support bounds
    int n0 = 0;            // initial atom number
    int n_a_lost = 0, n_b_lost = 0;

    int atoms() const { return n0 - n_a_lost - n_b_lost; }
    int k_of(int j) const { return j - n_a_lost; }

    static WindowedState plus_x(int n_atoms) {
        WindowedState s;
        s.n0 = n_atoms;
        s.buf.assign(n_atoms + 1, cplx{});
        const double lg_n = std::lgamma(n_atoms + 1.0);
        const double l2 = n_atoms * std::log(2.0);
        // keep amplitudes down to ~1e-250 of the peak
        s.lo = -1;
        for (int k = 0; k <= n_atoms; ++k) {
            const double lmag =
                0.5 * (lg_n - std::lgamma(k + 1.0) - std::lgamma(n_atoms - k + 1.0) - l2);
            const double mag = std::exp(lmag);
            if (mag > 1e-250) {
                s.buf[k] = mag;
                if (s.lo < 0) s.lo = k;
                s.hi = k;
            }
        }
        s.renormalize();
        return s;
    }

    void renormalize() {
        KahanSum n2;
        for (int j = lo; j <= hi; ++j) n2.add(std::norm(buf[j]));
        const double inv = 1.0 / std::sqrt(n2.value());
        for (int j = lo; j <= hi; ++j) buf[j] *= inv;
    }

    void trim() {
        while (lo < hi && std::norm(buf[lo]) < 1e-300) buf[lo++] = cplx{};
        while (hi > lo && std::norm(buf[hi]) < 1e-300) buf[hi--] = cplx{};
    }

    void apply_phases(double dt) {
        if (dt == 0.0) return;
        const double n = atoms();
        for (int j = lo; j <= hi; ++j) {
            const double m = k_of(j) - 0.5 * n;
            buf[j] *= std::polar(1.0, -dt * m * m);
        }
    }

    double mean_na() const {
        KahanSum s;
        for (int j = lo; j <= hi; ++j) s.add(std::norm(buf[j]) * k_of(j));
        return s.value();
    }

    void jump_a() { // c_k -> sqrt(k) c_k, then k -> k-1 via the offset
        for (int j = lo; j <= hi; ++j) buf[j] *= std::sqrt(static_cast<double>(k_of(j)));
        ++n_a_lost;
        lo = std::max(lo, n_a_lost);
        renormalize();
        trim();
    }

    void jump_b() { // c_k -> sqrt(N-k) c_k at fixed k
        const int n = atoms();
        for (int j = lo; j <= hi; ++j)
            buf[j] *= std::sqrt(static_cast<double>(n - k_of(j)));
        ++n_b_lost;
        hi = std::min(hi, n_a_lost + atoms());
        renormalize();
        trim();
    }

    SpinMoments moments() const {
        return moments_windowed(
            std::span<const cplx>(buf.data() + lo, static_cast<std::size_t>(hi - lo + 1)),
            k_of(lo), atoms());
    }
};

void validate(const LossParams& p) {
    if (p.n_atoms_initial < 1)
        fail(errc::invalid_argument, "loss: n_atoms_initial must be >= 1");
    if (p.n_trajectories < 1)
        fail(errc::invalid_argument, "loss: n_trajectories must be >= 1");
    if (p.gamma_over_chi < 0) fail(errc::invalid_argument, "loss: Gamma must be >= 0");
    if (p.time_grid.empty()) fail(errc::invalid_argument, "loss: empty time grid");
    for (std::size_t i = 0; i < p.time_grid.size(); ++i) {
        if (p.time_grid[i] < 0 || (i > 0 && p.time_grid[i] < p.time_grid[i - 1]))
            fail(errc::invalid_argument, "loss: time grid must be sorted and nonnegative");
    }
}

} // namespace

TrajectoryRecord run_trajectory(const LossParams& params, std::uint64_t traj_index) {
    validate(params);
    Rng rng(Rng::derive(params.seed, traj_index));
    WindowedState st = WindowedState::plus_x(params.n_atoms_initial);
    const double gamma = params.gamma_over_chi;

    TrajectoryRecord rec;
    rec.samples.reserve(params.time_grid.size());
    rec.remaining_n.reserve(params.time_grid.size());

    double t = 0.0;       // time of the last jump
    double t_phase = 0.0; // phases are current up to here
    std::size_t gi = 0;
    while (gi < params.time_grid.size()) {
        if (st.atoms() == 0) {
            rec.exhausted = true;
            for (; gi < params.time_grid.size(); ++gi) {
                rec.samples.push_back(SpinMoments{});
                rec.remaining_n.push_back(0);
            }
            break;
        }
        const double rate = gamma * st.atoms();
        const double t_jump =
            rate > 0 ? t + rng.exponential(rate) : std::numeric_limits<double>::infinity();

        while (gi < params.time_grid.size() && params.time_grid[gi] <= t_jump) {
            if (params.twisting) st.apply_phases(params.time_grid[gi] - t_phase);
            t_phase = params.time_grid[gi];
            rec.samples.push_back(st.moments());
            rec.remaining_n.push_back(st.atoms());
            ++gi;
        }
        if (gi >= params.time_grid.size()) break;

        if (params.twisting) st.apply_phases(t_jump - t_phase);
        t_phase = t_jump;
        t = t_jump;
        const double p_a = st.mean_na() / st.atoms();
        if (rng.uniform() < p_a) {
            st.jump_a();
            rec.jump_types.push_back(JumpType::a_loss);
        } else {
            st.jump_b();
            rec.jump_types.push_back(JumpType::b_loss);
        }
        rec.jump_times.push_back(t_jump);
    }
    return rec;
}

LossCurve xi2_with_loss(const LossParams& params, int threads) {
    validate(params);
    const std::size_t nt = params.time_grid.size();
    const int ntraj = params.n_trajectories;

    std::vector<TrajectoryRecord> recs(ntraj);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (int i = 0; i < ntraj; ++i) recs[i] = run_trajectory(params, i);

    // Gamma = 0 reference: same machinery, no jumps, one deterministic pass
    LossParams lossless = params;
    lossless.gamma_over_chi = 0.0;
    lossless.n_trajectories = 1;
    const TrajectoryRecord ref = run_trajectory(lossless, 0);

    // ordered reduction: ensemble-average first moments and raw second moments
    auto ensemble_point = [&](std::size_t ti, int i_begin, int i_end, double& mean_n_out) {
        double mean[3] = {0, 0, 0};
        double sec[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        KahanSum nsum;
        const int count = i_end - i_begin;
        for (int i = i_begin; i < i_end; ++i) {
            const SpinMoments& m = recs[i].samples[ti];
            const double mu[3] = {m.mean.x, m.mean.y, m.mean.z};
            for (int a = 0; a < 3; ++a) {
                mean[a] += mu[a];
                for (int b = 0; b < 3; ++b) sec[a][b] += m.second(a, b);
            }
            nsum.add(recs[i].remaining_n[ti]);
        }
        SpinMoments out;
        out.mean = {mean[0] / count, mean[1] / count, mean[2] / count};
        const double mu[3] = {out.mean.x, out.mean.y, out.mean.z};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.cov[a][b] = sec[a][b] / count - mu[a] * mu[b];
        mean_n_out = nsum.value() / count;
        return out;
    };

    auto xi2_of = [&](const SpinMoments& m, double n_factor) {
        return optimal_xi_squared_scaled(m, n_factor).xi2;
    };

    LossCurve curve;
    curve.points.resize(nt);
    std::size_t imin = 0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        double mean_n = 0;
        const SpinMoments ens = ensemble_point(ti, 0, ntraj, mean_n);
        const double n_factor =
            params.normalize_with_initial_n ? params.n_atoms_initial : mean_n;
        LossCurvePoint pt;
        pt.chi_t = params.time_grid[ti];
        pt.mean_n = mean_n;
        pt.xi2_loss = xi2_of(ens, std::max(n_factor, 1e-300));
        pt.xi2_lossless =
            xi2_of(ref.samples[ti], static_cast<double>(params.n_atoms_initial));
        curve.points[ti] = pt;
        if (pt.xi2_loss < curve.points[imin].xi2_loss) imin = ti;
    }
    curve.min_xi2_loss = curve.points[imin].xi2_loss;

    // block estimate of the statistical error at the minimum
    const int nblk = std::min(10, ntraj);
    if (nblk >= 2) {
        std::vector<double> vals;
        for (int b = 0; b < nblk; ++b) {
            const int i0 = b * ntraj / nblk, i1 = (b + 1) * ntraj / nblk;
            if (i1 <= i0) continue;
            double mn = 0;
            const SpinMoments ens = ensemble_point(imin, i0, i1, mn);
            const double nf = params.normalize_with_initial_n ? params.n_atoms_initial : mn;
            vals.push_back(xi2_of(ens, std::max(nf, 1e-300)));
        }
        double avg = 0;
        for (double v : vals) avg += v;
        avg /= vals.size();
        double var = 0;
        for (double v : vals) var += (v - avg) * (v - avg);
        var /= (vals.size() - 1);
        curve.min_rel_stderr =
            std::sqrt(var / vals.size()) / std::max(curve.min_xi2_loss, 1e-300);
        if (curve.min_rel_stderr > 0.10)
            fail(errc::sampling,
                 "xi2_with_loss: statistical error at the minimum is " +
                     std::to_string(100 * curve.min_rel_stderr) +
                     "% (> 10%); raise n_trajectories");
    }
    return curve;
}

} // namespace becsq
