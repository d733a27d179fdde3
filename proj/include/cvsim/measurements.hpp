#pragma once

#include <string>
#include <utility>

#include "cvsim/gaussian_state.hpp"
#include "cvsim/random_stream.hpp"

namespace cvsim {

enum class OutcomeKind { Homodyne, Heterodyne, VacuumFlag };

struct MeasurementOutcome {
  OutcomeKind kind = OutcomeKind::Homodyne;
  int mode = 0;        // mode index at measurement time
  double value = 0.0;  // homodyne outcome / heterodyne x / vacuum branch probability
  double value_p = 0.0;      // heterodyne p component
  double angle = 0.0;        // homodyne only
  double efficiency = 1.0;   // homodyne only
  std::string register_name;  // filled by the executor
};

struct MeasurementResult {
  MeasurementOutcome outcome;
  GaussianState state;  // post-measurement state, measured mode removed
};

// Quadrature measurement at the given angle: homodyne(angle) measures
// x cos(angle) - p sin(angle) (the mode is rotated by -angle and its x
// quadrature is read out). efficiency in (0, 1]; sub-unit efficiency is a
// loss channel applied before the ideal measurement. The measured mode is
// removed; its unmeasured conjugate quadrature is traced out.
MeasurementResult homodyne(GaussianState state, int mode, double angle,
                           double efficiency, NormalSource& rng);

// Deterministic variant conditioning on a given outcome value.
GaussianState homodyne_conditioned(GaussianState state, int mode, double angle,
                                   double efficiency, double outcome);

// Coherent-basis measurement: outcome pair distributed with covariance
// cov_block + I around the mode mean (vacuum gives 2I).
MeasurementResult heterodyne(GaussianState state, int mode, NormalSource& rng);

GaussianState heterodyne_conditioned(GaussianState state, int mode,
                                     double outcome_x, double outcome_p);

// <0|rho_mode|0> from the reduced mean/cov via the Gaussian overlap formula.
double vacuum_projection_prob(const GaussianState& state, int mode);

// No-absorption branch of a threshold photodetection: returns the branch
// probability and the conditional state of the remaining modes. Probabilities
// below 1e-300 raise DegenerateOutcome. Finite-efficiency detectors are
// modeled by a preceding loss channel.
std::pair<double, GaussianState> condition_on_no_absorption(GaussianState state,
                                                            int mode);

// The absorption branch is not a Gaussian map; this always throws
// NonGaussianOutcome carrying the rule citation and the branch probability.
[[noreturn]] void condition_on_absorption(const GaussianState& state, int mode);

}  // namespace cvsim
