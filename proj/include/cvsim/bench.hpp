#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvsim/circuit.hpp"

namespace cvsim {

/// Scaling measurement: wall time (resource proxy R) against mode count
/// (instance size S), with a least-squares log-log exponent fit.
struct BenchReport {
  std::vector<int> mode_counts;
  std::vector<long> op_counts;
  std::vector<double> wall_seconds;
  double fitted_exponent = 0.0;
  std::string resource_proxy = "wall_seconds";
  std::string instance_size = "modes";
};

// Random all-Gaussian circuit on `num_modes` modes with `num_modes` gates
// followed by num_modes/4 homodyne measurements on distinct modes.
CircuitProgram random_bench_circuit(int num_modes, std::uint64_t seed);

// Times execution at geometric mode counts max(8, max_modes/32), ..,
// max_modes (doubling), `repetitions` runs per count (median wall time).
BenchReport run_bench(int max_modes, int repetitions, std::uint64_t seed);

std::string bench_to_csv(const BenchReport& report);

}  // namespace cvsim
