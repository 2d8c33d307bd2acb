#ifndef BECSQ_TESTS_ORACLE_LINDBLAD_HPP
#define BECSQ_TESTS_ORACLE_LINDBLAD_HPP

// Dense master-equation integrator for twisting plus uniform one-body loss:
//   drho/dt = -i chi [Jz^2, rho] + Gamma sum_{c=a,b} (c rho c+ - {c+c, rho}/2).
// rho is block diagonal over atom-number sectors; each block is a small dense
// matrix in the Dicke basis of its sector. Fixed-step RK4. Oracle use only.

#include <Eigen/Dense>

#include <vector>

#include "becsq/dicke.hpp"

namespace becsq::test {

class LindbladOracle {
public:
    // blocks[m] is the density matrix of the (n0 - m)-atom sector... indexing by
    // atoms directly is clearer: blocks_[na] has dimension na+1, na = 0..n0.
    LindbladOracle(int n0, double chi, double gamma) : n0_(n0), chi_(chi), gamma_(gamma) {
        blocks_.resize(n0 + 1);
        for (int na = 0; na <= n0; ++na)
            blocks_[na] = Eigen::MatrixXcd::Zero(na + 1, na + 1);
        // start in the +x coherent pure state of n0 atoms
        Eigen::VectorXcd c(n0 + 1);
        const DickeState st = coherent_state(n0);
        for (int k = 0; k <= n0; ++k) c(k) = st.amplitudes()[k];
        blocks_[n0] = c * c.adjoint();
    }

    void evolve(double t_final, double dt) {
        double t = 0;
        while (t < t_final - 1e-15) {
            const double h = std::min(dt, t_final - t);
            rk4_step(h);
            t += h;
        }
    }

    SpinMoments moments() const {
        double mean[3] = {0, 0, 0};
        double sec[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        for (int na = 1; na <= n0_; ++na) {
            const auto [jx, jy, jz] = spin_matrices(na);
            const Eigen::MatrixXcd& rho = blocks_[na];
            const Eigen::MatrixXcd j[3] = {jx, jy, jz};
            for (int a = 0; a < 3; ++a) {
                mean[a] += (rho * j[a]).trace().real();
                for (int b = 0; b < 3; ++b)
                    sec[a][b] += 0.5 * (rho * (j[a] * j[b] + j[b] * j[a])).trace().real();
            }
        }
        SpinMoments m;
        m.mean = {mean[0], mean[1], mean[2]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) m.cov[a][b] = sec[a][b] - mean[a] * mean[b];
        return m;
    }

    double mean_atoms() const {
        double n = 0;
        for (int na = 0; na <= n0_; ++na) n += na * blocks_[na].trace().real();
        return n;
    }

private:
    int n0_;
    double chi_, gamma_;
    std::vector<Eigen::MatrixXcd> blocks_;

    static std::tuple<Eigen::MatrixXcd, Eigen::MatrixXcd, Eigen::MatrixXcd> spin_matrices(int n) {
        Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(n + 1, n + 1);
        for (int k = 0; k <= n; ++k) {
            jz(k, k) = k - 0.5 * n;
            if (k < n) jp(k + 1, k) = std::sqrt((k + 1.0) * (n - k));
        }
        const Eigen::MatrixXcd jm = jp.adjoint();
        return {0.5 * (jp + jm), cplx(0, -0.5) * (jp - jm), jz};
    }

    std::vector<Eigen::MatrixXcd> rhs(const std::vector<Eigen::MatrixXcd>& rho) const {
        std::vector<Eigen::MatrixXcd> d(n0_ + 1);
        for (int na = 0; na <= n0_; ++na) {
            const int dim = na + 1;
            Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
            // coherent part and number decay within the sector
            if (na >= 1) {
                Eigen::VectorXd mz(dim);
                for (int k = 0; k < dim; ++k) mz(k) = k - 0.5 * na;
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) {
                        const cplx comm = cplx(0, -chi_) * (mz(i) * mz(i) - mz(j) * mz(j));
                        out(i, j) += comm * rho[na](i, j);
                    }
                out -= gamma_ * na * rho[na];
            }
            // feed from the sector above: a|k> = sqrt(k)|k-1>, b|k> = sqrt(n+1-k)|k>
            if (na < n0_) {
                const int dsrc = na + 2;
                Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dsrc);
                Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(dim, dsrc);
                for (int k = 0; k < dsrc; ++k) {
                    if (k >= 1) A(k - 1, k) = std::sqrt(double(k));
                    if (k < dim) B(k, k) = std::sqrt(double(na + 1 - k));
                }
                out += gamma_ * (A * rho[na + 1] * A.adjoint() + B * rho[na + 1] * B.adjoint());
            }
            d[na] = std::move(out);
        }
        return d;
    }

    void rk4_step(double h) {
        auto add = [&](const std::vector<Eigen::MatrixXcd>& x, double c,
                       const std::vector<Eigen::MatrixXcd>& y) {
            std::vector<Eigen::MatrixXcd> z(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + c * y[i];
            return z;
        };
        const auto k1 = rhs(blocks_);
        const auto k2 = rhs(add(blocks_, 0.5 * h, k1));
        const auto k3 = rhs(add(blocks_, 0.5 * h, k2));
        const auto k4 = rhs(add(blocks_, h, k3));
        for (int na = 0; na <= n0_; ++na)
            blocks_[na] += (h / 6.0) * (k1[na] + 2.0 * k2[na] + 2.0 * k3[na] + k4[na]);
    }
};

} // namespace becsq::test

#endif
