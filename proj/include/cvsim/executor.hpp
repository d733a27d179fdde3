#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cvsim/circuit.hpp"
#include "cvsim/gaussian_state.hpp"
#include "cvsim/random_stream.hpp"

namespace cvsim {

struct ExecutionTrace {
  std::uint64_t seed = 0;
  int shot_index = 0;
  std::vector<std::pair<std::string, double>> outcomes;  // measurement order
  GaussianState final_state;  // surviving modes in declaration order
};

// Runs one shot against the Gaussian engine with the supplied deviate
// source. The program must validate cleanly and contain only toolkit
// ingredients; Kerr gates and fock(k>=1) inputs raise NonGaussianInput and
// photon counting raises NonGaussianOutcome, each carrying a rule citation.
ExecutionTrace execute_shot(const CircuitProgram& program, NormalSource& rng);

// Runs `shots` independent shots with per-shot streams derived from (seed,
// shot index). Traces are ordered by shot index.
std::vector<ExecutionTrace> execute(const CircuitProgram& program,
                                    std::uint64_t seed, int shots);

}  // namespace cvsim
