#include "cvsim/serialize.hpp"

#include <algorithm>

#include "cvsim/errors.hpp"

namespace cvsim {

nlohmann::json state_to_json(const GaussianState& state) {
  nlohmann::json j;
  j["num_modes"] = state.num_modes();
  j["mean"] = std::vector<double>(state.mean.data(), state.mean.data() + state.mean.size());
  std::vector<double> cov;
  cov.reserve(state.mean.size() * state.mean.size());
  for (long r = 0; r < state.cov.rows(); ++r) {
    for (long c = 0; c < state.cov.cols(); ++c) cov.push_back(state.cov(r, c));
  }
  j["cov"] = cov;
  return j;
}

GaussianState state_from_json(const nlohmann::json& j) {
  const int n = j.at("num_modes").get<int>();
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto cov = j.at("cov").get<std::vector<double>>();
  if (mean.size() != static_cast<size_t>(2 * n) ||
      cov.size() != static_cast<size_t>(4 * n * n)) {
    throw ShapeMismatch("serialized state has inconsistent sizes");
  }
  GaussianState st;
  st.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), 2 * n);
  st.cov.resize(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    for (int c = 0; c < 2 * n; ++c) st.cov(r, c) = cov[2 * n * r + c];
  }
  return st;
}

nlohmann::json traces_to_json(const std::vector<ExecutionTrace>& traces,
                              std::uint64_t seed, bool emit_final_state) {
  nlohmann::json j;
  j["seed"] = seed;
  j["shots"] = traces.size();

  // Register columns in first-measurement order.
  std::vector<std::string> order;
  for (const auto& trace : traces) {
    for (const auto& [name, value] : trace.outcomes) {
      (void)value;
      if (std::find(order.begin(), order.end(), name) == order.end()) {
        order.push_back(name);
      }
    }
  }
  nlohmann::json registers = nlohmann::json::array();
  for (const auto& name : order) {
    nlohmann::json reg;
    reg["name"] = name;
    nlohmann::json values = nlohmann::json::array();
    for (const auto& trace : traces) {
      for (const auto& [n, v] : trace.outcomes) {
        if (n == name) values.push_back(v);
      }
    }
    reg["values"] = std::move(values);
    registers.push_back(std::move(reg));
  }
  j["registers"] = std::move(registers);

  if (emit_final_state) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& trace : traces) states.push_back(state_to_json(trace.final_state));
    j["final_state"] = std::move(states);
  }
  return j;
}

nlohmann::json verdict_to_json(const Verdict& verdict, const IngredientProfile& profile) {
  nlohmann::json j;
  j["status"] = simulatability_name(verdict.status);
  j["citations"] = verdict.citations;
  nlohmann::json p;
  std::vector<std::string> states, gates, measurements;
  for (auto c : profile.state_classes) states.push_back(state_class_name(c));
  for (auto c : profile.gate_classes) gates.push_back(gate_class_name(c));
  for (auto c : profile.measurement_classes) measurements.push_back(measurement_class_name(c));
  p["state_classes"] = states;
  p["gate_classes"] = gates;
  p["measurement_classes"] = measurements;
  p["uses_feedforward"] = profile.uses_feedforward;
  j["profile"] = std::move(p);
  j["narrative"] = verdict.narrative;
  return j;
}

}  // namespace cvsim
