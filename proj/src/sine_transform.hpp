#ifndef BECSQ_SINE_TRANSFORM_HPP
#define BECSQ_SINE_TRANSFORM_HPP

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <vector>

namespace becsq {

// DST-I (FFTW RODFT00) wrapper for u = r phi on n interior nodes. The basis
// functions sin(pi m r / r_max) vanish at both walls; mode m carries kinetic
// eigenvalue k_m^2/2 with k_m = pi m / r_max. FFTW's unnormalized transform
// applied twice is 2(n+1) times the identity.
//
// One plan per size, FFTW_ESTIMATE (deterministic plan choice), executed on
// caller-owned buffers via the new-array interface. Plan creation is
// serialized; execution is thread-safe.
class SineTransform {
public:
    explicit SineTransform(int n) : n_(n), buf_(static_cast<std::size_t>(n)) {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan_ = fftw_plan_r2r_1d(n_, buf_.data(), buf_.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    ~SineTransform() {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan_);
    }
    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

    int size() const { return n_; }
    double renorm() const { return 1.0 / (2.0 * (n_ + 1)); }

    // in-place unnormalized DST-I on a caller buffer of length n
    void execute(double* data) const { fftw_execute_r2r(plan_, data, data); }

private:
    int n_;
    std::vector<double> buf_;
    fftw_plan plan_;
};

} // namespace becsq

#endif
