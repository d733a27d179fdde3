#pragma once

#include <set>
#include <string>
#include <vector>

#include "cvsim/circuit.hpp"

namespace cvsim {

enum class StateClass { Vacuum, Coherent, Squeezed, Thermal, Fock };
enum class GateClass { LinearOptics, Squeezing, GaussianChannel, Kerr };
enum class MeasurementClass { Homodyne, Heterodyne, VacuumBranch, PhotonCount };

const char* state_class_name(StateClass c);
const char* gate_class_name(GateClass c);
const char* measurement_class_name(MeasurementClass c);

// Exhaustive mappings; every opcode and initial-state token has a class.
StateClass classify_init(InitKind kind);
GateClass classify_gate(Opcode op);                // gates only
MeasurementClass classify_measurement(Opcode op);  // measurements only

struct IngredientProfile {
  std::set<StateClass> state_classes;
  std::set<GateClass> gate_classes;
  std::set<MeasurementClass> measurement_classes;
  bool uses_feedforward = false;

  bool all_gaussian() const;
};

enum class Simulatability { Simulatable, NotCovered, Unknown };

const char* simulatability_name(Simulatability s);

struct Verdict {
  Simulatability status = Simulatability::Simulatable;
  std::vector<std::string> citations;  // "Theorem 1", "Corollary 2", "Table 1 row k"
  std::string narrative;
};

// Mechanical scan of the program's ingredients.
IngredientProfile profile(const CircuitProgram& program);

// Decision table over the profile. Statuses: everything in the Gaussian
// toolkit is Simulatable; Kerr or photon counting is NotCovered; Fock inputs
// with otherwise-Gaussian ingredients are Unknown (the open row of the rule
// table). The vacuum branch of photodetection alone stays Simulatable.
Verdict classify(const IngredientProfile& profile);

// Deterministic report text containing each citation exactly once.
std::string explain(const Verdict& verdict);

}  // namespace cvsim
