#include "cvsim/classifier.hpp"

#include "cvsim/errors.hpp"

namespace cvsim {

const char* state_class_name(StateClass c) {
  switch (c) {
    case StateClass::Vacuum: return "vacuum";
    case StateClass::Coherent: return "coherent";
    case StateClass::Squeezed: return "squeezed";
    case StateClass::Thermal: return "thermal";
    case StateClass::Fock: return "fock";
  }
  return "?";
}

const char* gate_class_name(GateClass c) {
  switch (c) {
    case GateClass::LinearOptics: return "linear_optics";
    case GateClass::Squeezing: return "squeezing";
    case GateClass::GaussianChannel: return "gaussian_channel";
    case GateClass::Kerr: return "kerr";
  }
  return "?";
}

const char* measurement_class_name(MeasurementClass c) {
  switch (c) {
    case MeasurementClass::Homodyne: return "homodyne";
    case MeasurementClass::Heterodyne: return "heterodyne";
    case MeasurementClass::VacuumBranch: return "vacuum_branch";
    case MeasurementClass::PhotonCount: return "photon_count";
  }
  return "?";
}

const char* simulatability_name(Simulatability s) {
  switch (s) {
    case Simulatability::Simulatable: return "Simulatable";
    case Simulatability::NotCovered: return "NotCovered";
    case Simulatability::Unknown: return "Unknown";
  }
  return "?";
}

StateClass classify_init(InitKind kind) {
  switch (kind) {
    case InitKind::Vacuum: return StateClass::Vacuum;
    case InitKind::Coherent: return StateClass::Coherent;
    case InitKind::Squeezed: return StateClass::Squeezed;
    case InitKind::Thermal: return StateClass::Thermal;
    case InitKind::Fock: return StateClass::Fock;
  }
  throw SimError("unmapped initial-state token");
}

GateClass classify_gate(Opcode op) {
  switch (op) {
    case Opcode::Displace:
    case Opcode::Rotate:
    case Opcode::Bs:
      return GateClass::LinearOptics;
    case Opcode::Squeeze:
    case Opcode::Tms:
      return GateClass::Squeezing;
    case Opcode::Loss:
    case Opcode::Amplify:
    case Opcode::Noise:
    case Opcode::Channel:
      return GateClass::GaussianChannel;
    case Opcode::Kerr:
      return GateClass::Kerr;
    default:
      throw SimError("opcode is not a gate");
  }
}

MeasurementClass classify_measurement(Opcode op) {
  switch (op) {
    case Opcode::Homodyne: return MeasurementClass::Homodyne;
    case Opcode::Heterodyne: return MeasurementClass::Heterodyne;
    case Opcode::VacProject: return MeasurementClass::VacuumBranch;
    case Opcode::PhotonCount: return MeasurementClass::PhotonCount;
    default: throw SimError("opcode is not a measurement");
  }
}

bool IngredientProfile::all_gaussian() const {
  return !state_classes.count(StateClass::Fock) &&
         !gate_classes.count(GateClass::Kerr) &&
         !measurement_classes.count(MeasurementClass::PhotonCount);
}

IngredientProfile profile(const CircuitProgram& program) {
  IngredientProfile p;
  for (const auto& ins : program.instructions) {
    for (const auto& expr : ins.params) {
      if (!expr.terms.empty()) p.uses_feedforward = true;
    }
    switch (ins.op) {
      case Opcode::DeclareMode:
        p.state_classes.insert(classify_init(ins.init.kind));
        break;
      case Opcode::Displace:
      case Opcode::Rotate:
      case Opcode::Squeeze:
      case Opcode::Tms:
      case Opcode::Bs:
      case Opcode::Loss:
      case Opcode::Amplify:
      case Opcode::Noise:
      case Opcode::Channel:
      case Opcode::Kerr:
        p.gate_classes.insert(classify_gate(ins.op));
        break;
      case Opcode::Homodyne:
      case Opcode::Heterodyne:
      case Opcode::VacProject:
      case Opcode::PhotonCount:
        p.measurement_classes.insert(classify_measurement(ins.op));
        break;
    }
  }
  return p;
}

Verdict classify(const IngredientProfile& p) {
  Verdict v;
  const bool fock = p.state_classes.count(StateClass::Fock) > 0;
  if (p.gate_classes.count(GateClass::Kerr)) {
    v.status = Simulatability::NotCovered;
    v.citations = {"Table 1 row 2"};
  } else if (p.measurement_classes.count(MeasurementClass::PhotonCount)) {
    v.status = Simulatability::NotCovered;
    v.citations = {"Corollary 2", fock ? "Table 1 row 3" : "Table 1 row 4"};
  } else if (fock) {
    v.status = Simulatability::Unknown;
    v.citations = {"Table 1 row 5"};
  } else {
    v.status = Simulatability::Simulatable;
    v.citations = {"Theorem 1", "Theorem 2"};
    if (p.uses_feedforward &&
        p.measurement_classes.count(MeasurementClass::Homodyne)) {
      v.citations.push_back("Corollary 1");
    }
    if (p.measurement_classes.count(MeasurementClass::VacuumBranch)) {
      v.citations.push_back("Corollary 2");
    }
  }
  v.narrative = explain(v);
  return v;
}

namespace {

bool cites(const Verdict& v, const std::string& label) {
  for (const auto& c : v.citations) {
    if (c == label) return true;
  }
  return false;
}

}  // namespace

std::string explain(const Verdict& v) {
  std::string text;
  switch (v.status) {
    case Simulatability::Simulatable:
      text =
          "Verdict: Simulatable. Every ingredient stays inside the Gaussian "
          "toolkit, so the circuit can be simulated in time polynomial in the "
          "number of modes by tracking quadrature means and the covariance "
          "matrix (Theorem 1, Theorem 2).";
      if (cites(v, "Corollary 1")) {
        text +=
            " Feeding homodyne outcomes forward into later Gaussian operations "
            "cannot induce a nonlinearity (Corollary 1).";
      }
      if (cites(v, "Corollary 2")) {
        text +=
            " Conditioning on the no-absorption outcome of photodetection is "
            "itself a Gaussian map and remains simulatable (Corollary 2); any "
            "nonlinear gate built this way could only fire on the complementary "
            "absorption branch, so such a gate must be nondeterministic.";
      }
      break;
    case Simulatability::NotCovered:
      if (cites(v, "Table 1 row 2")) {
        text =
            "Verdict: NotCovered. The circuit applies a Kerr-type gate, a "
            "higher-order nonlinear process that maps Gaussian states to "
            "non-Gaussian ones; the mean/covariance representation no longer "
            "closes and the rule table marks this scheme as not efficiently "
            "simulatable (Table 1 row 2). NotCovered records that the "
            "simulatability results do not apply; it is not a hardness proof.";
      } else {
        text =
            "Verdict: NotCovered. The circuit uses photon counting, whose "
            "absorption outcomes are not Gaussian maps and cannot be followed "
            "by the mean/covariance simulation (Corollary 2); the rule table "
            "marks this scheme as not efficiently simulatable (" +
            std::string(cites(v, "Table 1 row 3") ? "Table 1 row 3" : "Table 1 row 4") +
            "). NotCovered records that the simulatability results do not "
            "apply; it is not a hardness proof.";
      }
      break;
    case Simulatability::Unknown:
      text =
          "Verdict: Unknown. The circuit initiates from Fock (single-photon) "
          "inputs but otherwise uses only Gaussian gates and homodyne-class "
          "measurement. The rule table leaves this case open, marked '?', and "
          "the classifier preserves that status (Table 1 row 5).";
      break;
  }
  return text;
}

}  // namespace cvsim
