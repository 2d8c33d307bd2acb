#ifndef BECSQ_ERRORS_HPP
#define BECSQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace becsq {

// Failure categories. config maps to exit code 2 in the CLI, the rest to 3.
enum class errc {
    invalid_argument,
    degenerate_frame,
    convergence,
    stability,
    grid_leak,
    window_truncation,
    search,
    fit,
    sampling,
    io,
    config,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace becsq

#endif
