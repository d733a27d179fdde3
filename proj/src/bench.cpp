#include "cvsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cvsim/errors.hpp"
#include "cvsim/executor.hpp"
#include "cvsim/random_stream.hpp"

namespace cvsim {

CircuitProgram random_bench_circuit(int num_modes, std::uint64_t seed) {
  RandomStream rng(seed);
  CircuitProgram program;
  auto mode_name = [](int i) { return "m" + std::to_string(i); };
  for (int i = 0; i < num_modes; ++i) {
    Instruction decl;
    decl.op = Opcode::DeclareMode;
    decl.modes = {mode_name(i)};
    program.instructions.push_back(std::move(decl));
  }
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * rng.next_uniform();
  };
  auto pick_mode = [&]() {
    return static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(num_modes));
  };
  for (int g = 0; g < num_modes; ++g) {
    Instruction ins;
    const int kind = static_cast<int>(rng.next_u64() % 5);
    const int a = pick_mode();
    switch (kind) {
      case 0:
        ins.op = Opcode::Displace;
        ins.modes = {mode_name(a)};
        ins.params = {AffineExpr::literal(uniform(-1, 1)),
                      AffineExpr::literal(uniform(-1, 1))};
        break;
      case 1:
        ins.op = Opcode::Rotate;
        ins.modes = {mode_name(a)};
        ins.params = {AffineExpr::literal(uniform(-3.14, 3.14))};
        break;
      case 2:
        ins.op = Opcode::Squeeze;
        ins.modes = {mode_name(a)};
        ins.params = {AffineExpr::literal(uniform(-0.3, 0.3)),
                      AffineExpr::literal(uniform(-3.14, 3.14))};
        break;
      case 3: {
        int b = pick_mode();
        if (b == a) b = (a + 1) % num_modes;
        ins.op = Opcode::Bs;
        ins.modes = {mode_name(a), mode_name(b)};
        ins.params = {AffineExpr::literal(uniform(-3.14, 3.14)),
                      AffineExpr::literal(uniform(-3.14, 3.14))};
        break;
      }
      default: {
        int b = pick_mode();
        if (b == a) b = (a + 1) % num_modes;
        ins.op = Opcode::Tms;
        ins.modes = {mode_name(a), mode_name(b)};
        ins.params = {AffineExpr::literal(uniform(-0.3, 0.3))};
        break;
      }
    }
    program.instructions.push_back(std::move(ins));
  }
  // Homodyne a quarter of the modes, each once.
  const int measured = num_modes / 4;
  for (int i = 0; i < measured; ++i) {
    Instruction ins;
    ins.op = Opcode::Homodyne;
    ins.modes = {mode_name(i)};
    ins.params = {AffineExpr::literal(uniform(-3.14, 3.14)), AffineExpr::literal(1.0)};
    ins.target_register = "r" + std::to_string(i);
    program.instructions.push_back(std::move(ins));
  }
  return program;
}

BenchReport run_bench(int max_modes, int repetitions, std::uint64_t seed) {
  if (max_modes < 8) throw InvalidParameter("bench needs max_modes >= 8");
  if (repetitions < 1) throw InvalidParameter("bench needs repetitions >= 1");

  BenchReport report;
  for (int n = std::max(8, max_modes / 32); n <= max_modes; n *= 2) {
    CircuitProgram program = random_bench_circuit(n, seed + n);
    std::vector<double> times;
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      execute(program, seed + rep, 1);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    report.mode_counts.push_back(n);
    report.op_counts.push_back(static_cast<long>(program.instructions.size()) - n);
    report.wall_seconds.push_back(times[(times.size() - 1) / 2]);
  }

  // Least-squares slope of log(time) against log(modes).
  const size_t k = report.mode_counts.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < k; ++i) {
    const double x = std::log(static_cast<double>(report.mode_counts[i]));
    const double y = std::log(std::max(report.wall_seconds[i], 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  report.fitted_exponent = denom != 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
  return report;
}

std::string bench_to_csv(const BenchReport& report) {
  std::string csv = "modes,ops,seconds\n";
  for (size_t i = 0; i < report.mode_counts.size(); ++i) {
    csv += std::to_string(report.mode_counts[i]) + "," +
           std::to_string(report.op_counts[i]) + "," +
           std::to_string(report.wall_seconds[i]) + "\n";
  }
  return csv;
}

}  // namespace cvsim
