#include "becsq/dressing.hpp"

#include <cmath>

#include "becsq/constants.hpp"
#include "becsq/errors.hpp"

namespace becsq {

DressingShift dressing_shift(const DressingParams& p) {
    if (p.detuning == 0.0) fail(errc::invalid_argument, "dressing_shift: detuning must be nonzero");
    if (!(std::abs(p.rabi / p.detuning) < 0.5))
        fail(errc::invalid_argument,
             "dressing_shift: |Omega/delta| must be < 0.5 for the perturbative shift");
    if (!(p.cg0_sq > 0) || !(p.cg1_sq > 0))
        fail(errc::invalid_argument, "dressing_shift: Clebsch-Gordan factors must be positive");

    const double joules =
        consts::hbar * p.rabi * p.rabi / (4.0 * p.detuning) * (p.cg0_sq / p.cg1_sq - 1.0);
    return {joules, joules / consts::k_boltzmann * 1e9, joules / consts::h_planck};
}

} // namespace becsq
