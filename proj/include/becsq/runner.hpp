#ifndef BECSQ_RUNNER_HPP
#define BECSQ_RUNNER_HPP

#include "becsq/config.hpp"

namespace becsq {

inline constexpr const char* kVersion = "0.1.0";

// Dispatches one experiment: writes <out>/<kind>.csv (plus any secondary
// files) and <out>/<kind>.manifest. Throws Error; the CLI maps errc::config
// to exit 2 and everything else to exit 3.
void run(const ExperimentConfig& cfg);

} // namespace becsq

#endif
