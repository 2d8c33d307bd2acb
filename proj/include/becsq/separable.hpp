#ifndef BECSQ_SEPARABLE_HPP
#define BECSQ_SEPARABLE_HPP

#include <cstdint>
#include <vector>

#include "becsq/dicke.hpp"

namespace becsq {

// One mixture term: a Bloch vector (|s| <= 1) per atom.
struct SeparableTerm {
    double weight;
    std::vector<Vec3> bloch;
};

// Collective moments of rho = sum_k P_k rho_k^(1) x ... x rho_k^(N), computed
// analytically from the single-particle means. No 2^N object is ever built,
// so N up to 1e5 is fine.
SpinMoments separable_moments(int n_atoms, const std::vector<SeparableTerm>& terms);

// Draws random mixture weights (flat Dirichlet) and Bloch vectors uniform in
// the unit ball, then composes the exact moments.
SpinMoments sample_separable_state(int n_atoms, std::uint64_t seed);

} // namespace becsq

#endif
