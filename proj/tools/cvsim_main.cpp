#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cvsim/bench.hpp"
#include "cvsim/classifier.hpp"
#include "cvsim/errors.hpp"
#include "cvsim/executor.hpp"
#include "cvsim/fock_oracle.hpp"
#include "cvsim/parser.hpp"
#include "cvsim/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;       // unreadable file, parse or validation failure
constexpr int kExitNotCovered = 2;  // classifier refused the program
constexpr int kExitUnknown = 3;     // check: open case
constexpr int kExitRuntime = 4;     // numeric / runtime failure
constexpr int kExitOversize = 5;    // verify: too many modes for the oracle
constexpr int kExitDeviation = 6;   // verify: deviation above tolerance

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    out << text << "\n";
  }
}

void print_diagnostics(const std::vector<cvsim::Diagnostic>& diags,
                       const std::string& path) {
  for (const auto& d : diags) {
    std::cerr << path << ":" << d.pos.line << ":" << d.pos.col << ": "
              << cvsim::diagnostic_kind_name(d.kind) << ": " << d.message << "\n";
  }
}

std::optional<cvsim::CircuitProgram> load_program(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "cannot read '" << path << "'\n";
    return std::nullopt;
  }
  auto result = cvsim::parse(*text);
  if (!result.ok()) {
    print_diagnostics(result.diagnostics, path);
    return std::nullopt;
  }
  return *result.program;
}

// Gaussian-style per-shot summary (moments) for oracle executions.
nlohmann::json oracle_trace_json(const cvsim::CircuitProgram& program,
                                 std::uint64_t seed, int shots, int cutoff,
                                 bool emit_final_state) {
  std::vector<cvsim::ExecutionTrace> traces;
  for (int shot = 0; shot < shots; ++shot) {
    cvsim::RandomStream rng(seed, shot);
    cvsim::OracleOptions opt;
    opt.cutoff = cutoff;
    auto run = cvsim::oracle_execute(program, opt, rng, nullptr);
    cvsim::ExecutionTrace t;
    t.seed = seed;
    t.shot_index = shot;
    t.outcomes = std::move(run.outcomes);
    auto [mean, cov] = cvsim::moments(run.state);
    t.final_state = cvsim::GaussianState(std::move(mean), std::move(cov));
    traces.push_back(std::move(t));
  }
  return cvsim::traces_to_json(traces, seed, emit_final_state);
}

int cmd_run(const std::string& path, std::uint64_t seed, int shots,
            const std::string& out, bool emit_final_state, bool force_oracle,
            int cutoff) {
  auto program = load_program(path);
  if (!program) return kExitInput;

  auto prof = cvsim::profile(*program);
  auto verdict = cvsim::classify(prof);
  if (verdict.status != cvsim::Simulatability::Simulatable) {
    if (force_oracle && program->num_declared_modes() <= 3) {
      try {
        write_output(
            oracle_trace_json(*program, seed, shots, cutoff, emit_final_state).dump(2),
            out);
        return kExitOk;
      } catch (const cvsim::SimError& e) {
        std::cerr << "oracle execution failed: " << e.what() << "\n";
        return kExitRuntime;
      }
    }
    std::cerr << cvsim::verdict_to_json(verdict, prof).dump(2) << "\n";
    return kExitNotCovered;
  }

  try {
    auto traces = cvsim::execute(*program, seed, shots);
    write_output(cvsim::traces_to_json(traces, seed, emit_final_state).dump(2), out);
    return kExitOk;
  } catch (const cvsim::SimError& e) {
    std::cerr << "execution failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_check(const std::string& path, const std::string& out) {
  auto program = load_program(path);
  if (!program) return kExitInput;
  auto prof = cvsim::profile(*program);
  auto verdict = cvsim::classify(prof);
  write_output(cvsim::verdict_to_json(verdict, prof).dump(2), out);
  switch (verdict.status) {
    case cvsim::Simulatability::Simulatable: return kExitOk;
    case cvsim::Simulatability::NotCovered: return kExitNotCovered;
    case cvsim::Simulatability::Unknown: return kExitUnknown;
  }
  return kExitRuntime;
}

int cmd_verify(const std::string& path, std::uint64_t seed, int cutoff, double tol,
               const std::string& out) {
  auto program = load_program(path);
  if (!program) return kExitInput;
  if (program->num_declared_modes() > 3) {
    std::cerr << "verify needs a program with at most 3 modes\n";
    return kExitOversize;
  }
  auto verdict = cvsim::classify(cvsim::profile(*program));
  if (verdict.status != cvsim::Simulatability::Simulatable) {
    std::cerr << "verify needs a program the Gaussian engine can run\n";
    return kExitNotCovered;
  }

  try {
    auto trace = cvsim::execute(*program, seed, 1).at(0);
    std::map<std::string, double> forced(trace.outcomes.begin(), trace.outcomes.end());
    cvsim::RandomStream rng(seed);
    cvsim::OracleOptions opt;
    opt.cutoff = cutoff;
    auto oracle = cvsim::oracle_execute(*program, opt, rng, &forced);
    auto rep = cvsim::compare(trace.final_state, oracle.state, tol);

    nlohmann::json j;
    j["cutoff"] = cutoff;
    j["tolerance_mean"] = rep.tol_mean;
    j["tolerance_cov"] = rep.tol_cov;
    j["max_mean_dev"] = rep.max_mean_dev;
    j["max_cov_dev"] = rep.max_cov_dev;
    j["truncation_leakage"] = rep.leakage;
    j["pass"] = rep.pass;
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& [name, value] : trace.outcomes) {
      outcomes.push_back({{"name", name}, {"value", value}});
    }
    j["outcomes"] = std::move(outcomes);
    write_output(j.dump(2), out);
    return rep.pass ? kExitOk : kExitDeviation;
  } catch (const cvsim::SimError& e) {
    std::cerr << "verify failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_bench(int max_modes, std::uint64_t seed, const std::string& out) {
  try {
    auto report = cvsim::run_bench(max_modes, 3, seed);
    nlohmann::json j;
    j["mode_counts"] = report.mode_counts;
    j["op_counts"] = report.op_counts;
    j["wall_seconds"] = report.wall_seconds;
    j["fitted_exponent"] = report.fitted_exponent;
    j["resource_proxy"] = report.resource_proxy;
    j["instance_size"] = report.instance_size;
    const std::string csv_path = out.empty() ? "bench.csv" : out + ".csv";
    std::ofstream csv(csv_path);
    csv << cvsim::bench_to_csv(report);
    write_output(j.dump(2), out);
    return kExitOk;
  } catch (const cvsim::SimError& e) {
    std::cerr << "bench failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian quantum-optics circuit simulator"};
  app.require_subcommand(1);

  std::string path, out;
  std::uint64_t seed = 0;
  int shots = 1;
  int cutoff = 30;
  int max_modes = 512;
  double tol = 1e-5;
  bool emit_final_state = false;
  bool force_oracle = false;

  auto* run = app.add_subcommand("run", "execute a circuit and write its trace");
  run->add_option("file", path)->required();
  run->add_option("--seed", seed);
  run->add_option("--shots", shots)->check(CLI::PositiveNumber);
  run->add_option("--out", out);
  run->add_option("--cutoff", cutoff);
  run->add_flag("--emit-final-state", emit_final_state);
  run->add_flag("--force-oracle", force_oracle,
                "run a refused program (<= 3 modes) on the Fock oracle instead");

  auto* check = app.add_subcommand("check", "classify a circuit's simulatability");
  check->add_option("file", path)->required();
  check->add_option("--out", out);

  auto* verify = app.add_subcommand("verify",
                                    "cross-check the Gaussian engine against the oracle");
  verify->add_option("file", path)->required();
  verify->add_option("--seed", seed);
  verify->add_option("--cutoff", cutoff);
  verify->add_option("--tol", tol);
  verify->add_option("--out", out);

  auto* bench = app.add_subcommand("bench", "measure execution-time scaling");
  bench->add_option("--max-modes", max_modes)->check(CLI::Range(8, 1 << 20));
  bench->add_option("--seed", seed);
  bench->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(path, seed, shots, out, emit_final_state, force_oracle, cutoff);
  }
  if (check->parsed()) return cmd_check(path, out);
  if (verify->parsed()) return cmd_verify(path, seed, cutoff, tol, out);
  if (bench->parsed()) return cmd_bench(max_modes, seed, out);
  return kExitInput;
}
