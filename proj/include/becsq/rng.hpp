#ifndef BECSQ_RNG_HPP
#define BECSQ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace becsq {

// mt19937_64 engine with hand-rolled variate transforms so that streams are
// identical across standard libraries (std::*_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // splitmix64 mix of (seed, stream), used to derive independent per-worker seeds
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { // [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    double normal() { // Box-Muller, no cached spare (keeps the stream position obvious)
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Compensated accumulator for the long ladder-operator sums.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

} // namespace becsq

#endif
