#include <doctest.h>

#include <cmath>

#include "becsq/dressing.hpp"
#include "becsq/errors.hpp"

using namespace becsq;

TEST_CASE("dressing shift") {
    const DressingParams dflt{2.0 * M_PI * 2e6, 2.0 * M_PI * 25e6};
    SUBCASE("reference point: 2 MHz Rabi, 25 MHz detuning gives 640 nK") {
        const DressingShift s = dressing_shift(dflt);
        CHECK(std::abs(s.nanokelvin - 640.0) / 640.0 < 0.01);
        CHECK(s.hertz == doctest::Approx(s.joules / 6.62607015e-34).epsilon(1e-12));
    }
    SUBCASE("quadratic in the Rabi frequency") {
        DressingParams twice = dflt;
        twice.rabi *= 2.0;
        CHECK(dressing_shift(twice).nanokelvin ==
              doctest::Approx(4.0 * dressing_shift(dflt).nanokelvin).epsilon(1e-12));
    }
    SUBCASE("vanishes as the drive turns off") {
        DressingParams off = dflt;
        off.rabi = 0.0;
        CHECK(dressing_shift(off).nanokelvin == doctest::Approx(0.0));
    }
    SUBCASE("guards") {
        DressingParams bad = dflt;
        bad.detuning = 0.0;
        CHECK_THROWS_AS(dressing_shift(bad), Error);
        bad = dflt;
        bad.rabi = bad.detuning; // |Omega/delta| = 1
        CHECK_THROWS_AS(dressing_shift(bad), Error);
    }
}
