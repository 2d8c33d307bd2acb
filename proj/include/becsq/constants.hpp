#ifndef BECSQ_CONSTANTS_HPP
#define BECSQ_CONSTANTS_HPP

namespace becsq::consts {

// CODATA 2018 (exact in the 2019 SI)
inline constexpr double h_planck = 6.62607015e-34;  // J s
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K

} // namespace becsq::consts

#endif
