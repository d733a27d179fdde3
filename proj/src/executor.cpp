#include "cvsim/executor.hpp"

#include <cmath>
#include <map>

#include "cvsim/errors.hpp"
#include "cvsim/measurements.hpp"

namespace cvsim {

namespace {

class ShotRunner {
 public:
  ShotRunner(const CircuitProgram& program, NormalSource& rng)
      : program_(program), rng_(rng) {}

  ExecutionTrace run() {
    // The leading block of declarations is allocated in one go; appending
    // modes one at a time would copy the covariance quadratically.
    size_t lead = 0;
    while (lead < program_.instructions.size() &&
           program_.instructions[lead].op == Opcode::DeclareMode) {
      ++lead;
    }
    state_ = GaussianState::vacuum(static_cast<int>(lead));
    for (size_t i = 0; i < lead; ++i) {
      const Instruction& ins = program_.instructions[i];
      initialize_mode(static_cast<int>(i), ins.init);
      live_[ins.modes[0]] = static_cast<int>(i);
    }
    for (size_t i = lead; i < program_.instructions.size(); ++i) {
      dispatch(program_.instructions[i]);
    }
    ExecutionTrace trace;
    trace.outcomes = std::move(outcomes_);
    trace.final_state = std::move(state_);
    return trace;
  }

 private:
  int resolve(const std::string& name) const {
    auto it = live_.find(name);
    if (it == live_.end()) {
      throw SimError("mode '" + name + "' is not alive");
    }
    return it->second;
  }

  void consume(const std::string& name) {
    const int removed = live_.at(name);
    live_.erase(name);
    for (auto& [n, idx] : live_) {
      if (idx > removed) --idx;
    }
  }

  double eval(const AffineExpr& e) const { return e.eval(registers_); }

  void record(const std::string& reg, double value) {
    registers_[reg] = value;
    outcomes_.emplace_back(reg, value);
  }

  // Prepares the (already vacuum) mode at the given index.
  void initialize_mode(int mode, const InitState& init) {
    switch (init.kind) {
      case InitKind::Vacuum:
        break;
      case InitKind::Coherent:
        state_.mean(2 * mode) = init.a;
        state_.mean(2 * mode + 1) = init.b;
        break;
      case InitKind::Squeezed:
        state_.squeeze(mode, init.a, init.b);
        break;
      case InitKind::Thermal:
        state_.cov.block<2, 2>(2 * mode, 2 * mode) =
            (2.0 * init.a + 1.0) * Eigen::Matrix2d::Identity();
        break;
      case InitKind::Fock:
        if (init.fock_n >= 1) {
          throw NonGaussianInput(
              "fock(" + std::to_string(init.fock_n) +
                  ") initial state has no mean/covariance representation",
              "Table 1 row 5");
        }
        break;
    }
  }

  void declare(const Instruction& ins) {
    state_.append_vacuum();
    initialize_mode(state_.num_modes() - 1, ins.init);
    live_[ins.modes[0]] = state_.num_modes() - 1;
  }

  void dispatch(const Instruction& ins) {
    switch (ins.op) {
      case Opcode::DeclareMode:
        declare(ins);
        return;
      case Opcode::Displace:
        state_.displace(resolve(ins.modes[0]), eval(ins.params[0]), eval(ins.params[1]));
        return;
      case Opcode::Rotate:
        state_.phase_rotate(resolve(ins.modes[0]), eval(ins.params[0]));
        return;
      case Opcode::Squeeze:
        state_.squeeze(resolve(ins.modes[0]), eval(ins.params[0]), eval(ins.params[1]));
        return;
      case Opcode::Tms:
        state_.two_mode_squeeze(resolve(ins.modes[0]), resolve(ins.modes[1]),
                                eval(ins.params[0]));
        return;
      case Opcode::Bs:
        state_.beamsplitter(resolve(ins.modes[0]), resolve(ins.modes[1]),
                            eval(ins.params[0]), eval(ins.params[1]));
        return;
      case Opcode::Loss:
        loss_inplace(state_, resolve(ins.modes[0]), eval(ins.params[0]));
        return;
      case Opcode::Amplify:
        amplify_inplace(state_, resolve(ins.modes[0]), eval(ins.params[0]));
        return;
      case Opcode::Noise:
        add_noise_inplace(state_, resolve(ins.modes[0]), eval(ins.params[0]));
        return;
      case Opcode::Channel: {
        GaussianChannel ch = *ins.channel;
        ch.modes.clear();
        for (const auto& name : ins.modes) ch.modes.push_back(resolve(name));
        apply_channel_inplace(state_, ch);
        return;
      }
      case Opcode::Homodyne: {
        const int mode = resolve(ins.modes[0]);
        const double angle = eval(ins.params[0]);
        const double efficiency = eval(ins.params[1]);
        auto res = homodyne(std::move(state_), mode, angle, efficiency, rng_);
        res.outcome.register_name = ins.target_register;
        state_ = std::move(res.state);
        consume(ins.modes[0]);
        record(ins.target_register, res.outcome.value);
        return;
      }
      case Opcode::Heterodyne: {
        const int mode = resolve(ins.modes[0]);
        auto res = heterodyne(std::move(state_), mode, rng_);
        state_ = std::move(res.state);
        consume(ins.modes[0]);
        record(ins.target_register + "_x", res.outcome.value);
        record(ins.target_register + "_p", res.outcome.value_p);
        return;
      }
      case Opcode::VacProject: {
        const int mode = resolve(ins.modes[0]);
        auto [prob, post] = condition_on_no_absorption(std::move(state_), mode);
        state_ = std::move(post);
        consume(ins.modes[0]);
        record(ins.target_register, prob);
        return;
      }
      case Opcode::PhotonCount:
        throw NonGaussianOutcome("Corollary 2");
      case Opcode::Kerr:
        throw NonGaussianInput("Kerr gate is not a Gaussian unitary", "Table 1 row 2");
    }
  }

  const CircuitProgram& program_;
  NormalSource& rng_;
  GaussianState state_;
  std::map<std::string, int> live_;
  std::map<std::string, double> registers_;
  std::vector<std::pair<std::string, double>> outcomes_;
};

void reject_unrunnable(const CircuitProgram& program) {
  auto diags = validate(program);
  if (!diags.empty()) {
    std::string msg = "program failed validation:";
    for (const auto& d : diags) {
      msg += "\n  " + std::string(diagnostic_kind_name(d.kind)) + " at line " +
             std::to_string(d.pos.line) + ": " + d.message;
    }
    throw SimError(msg);
  }
  if (program.has_opcode(Opcode::PhotonCount)) {
    // Counting resolves into absorption branches, which only the oracle can
    // follow at desk scale.
    throw NonGaussianOutcome("Corollary 2");
  }
  if (program.has_opcode(Opcode::Kerr)) {
    throw NonGaussianInput("Kerr gate is not a Gaussian unitary", "Table 1 row 2");
  }
}

}  // namespace

ExecutionTrace execute_shot(const CircuitProgram& program, NormalSource& rng) {
  return ShotRunner(program, rng).run();
}

std::vector<ExecutionTrace> execute(const CircuitProgram& program,
                                    std::uint64_t seed, int shots) {
  if (shots < 0) throw InvalidParameter("shot count must be >= 0");
  reject_unrunnable(program);
  std::vector<ExecutionTrace> traces;
  traces.reserve(shots);
  for (int shot = 0; shot < shots; ++shot) {
    RandomStream rng(seed, static_cast<std::uint64_t>(shot));
    ExecutionTrace trace = execute_shot(program, rng);
    trace.seed = seed;
    trace.shot_index = shot;
    traces.push_back(std::move(trace));
  }
  return traces;
}

}  // namespace cvsim
