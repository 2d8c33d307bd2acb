#ifndef BECSQ_DRESSING_HPP
#define BECSQ_DRESSING_HPP

namespace becsq {

// Off-resonant microwave dressing of the F=1 -> F=2 transition, pi-polarized.
// The differential AC Stark shift raises |F=1,m=0> relative to |F=1,m=+-1>
// and freezes out spin-exchange collisions.
struct DressingParams {
    double rabi;     // resonant Rabi frequency for the m=+-1 -> m=+-1 lines, rad/s
    double detuning; // rad/s, nonzero
    // squared Clebsch-Gordan factors of the default transition pair
    double cg0_sq = 2.0 / 3.0; // m=0 -> m=0
    double cg1_sq = 1.0 / 2.0; // m=+-1 -> m=+-1
};

struct DressingShift {
    double joules;
    double nanokelvin;
    double hertz;
};

// Delta E = (hbar Omega^2 / 4 delta) (cg0^2/cg1^2 - 1), perturbative regime
// |Omega/delta| < 0.5 enforced.
DressingShift dressing_shift(const DressingParams& p);

} // namespace becsq

#endif
