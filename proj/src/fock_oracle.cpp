#include "cvsim/fock_oracle.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Sparse>

#include "cvsim/errors.hpp"

namespace cvsim {

namespace {

using Complex = std::complex<double>;
using SparseU = Eigen::SparseMatrix<Complex>;

constexpr Complex kI(0.0, 1.0);

long ipow(long base, int exp) {
  long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

long slot_stride(const FockState& st, int slot) {
  return ipow(st.cutoff, st.num_slots - 1 - slot);
}

// ---- elementary operators -------------------------------------------------

Eigen::MatrixXcd annihilation(int d) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd x_operator(int d) {
  Eigen::MatrixXcd a = annihilation(d);
  return a + a.adjoint();
}

Eigen::MatrixXcd p_operator(int d) {
  Eigen::MatrixXcd a = annihilation(d);
  return -kI * (a - a.adjoint());
}

// exp(G) for anti-Hermitian G via the eigendecomposition of -iG.
Eigen::MatrixXcd exp_antihermitian(const Eigen::MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(-kI * g);
  Eigen::VectorXcd phases =
      (kI * es.eigenvalues().array().cast<Complex>()).exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd rotation_unitary(int d, double theta) {
  Eigen::VectorXcd diag(d);
  for (int n = 0; n < d; ++n) diag(n) = std::exp(-kI * (theta * n));
  return diag.asDiagonal();
}

Eigen::MatrixXcd displacement_unitary(int d, double dx, double dp) {
  const Complex alpha(dx / 2.0, dp / 2.0);
  Eigen::MatrixXcd a = annihilation(d);
  return exp_antihermitian(alpha * a.adjoint() - std::conj(alpha) * a);
}

Eigen::MatrixXcd squeeze0_unitary(int d, double s) {
  Eigen::MatrixXcd a = annihilation(d);
  Eigen::MatrixXcd a2 = a * a;
  return exp_antihermitian(0.5 * s * (a2 - a2.adjoint()));
}

Eigen::MatrixXcd squeeze_unitary(int d, double s, double phi) {
  if (phi == 0.0) return squeeze0_unitary(d, s);
  return rotation_unitary(d, -phi) * squeeze0_unitary(d, s) * rotation_unitary(d, phi);
}

Eigen::MatrixXcd kerr_unitary(int d, double kappa) {
  Eigen::VectorXcd diag(d);
  for (int n = 0; n < d; ++n) {
    diag(n) = std::exp(kI * (kappa * n * (n - 1.0)));
  }
  return diag.asDiagonal();
}

// Two-mode generators conserve either the photon-number sum (beamsplitter)
// or difference (two-mode squeezer), so their exponentials are built
// sector-by-sector from small Hermitian eigenproblems.
SparseU beamsplitter_unitary(int d, double theta, double phi) {
  std::vector<Eigen::Triplet<Complex>> trips;
  const Complex f = theta * std::exp(kI * phi);
  for (int total = 0; total <= 2 * (d - 1); ++total) {
    const int lo = std::max(0, total - (d - 1));
    const int hi = std::min(total, d - 1);
    const int dim = hi - lo + 1;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (int ma = lo; ma <= hi; ++ma) {
      const int mb = total - ma;
      if (ma + 1 <= hi) {
        // theta e^{i phi} a^dag b
        g(ma + 1 - lo, ma - lo) +=
            f * std::sqrt(static_cast<double>((ma + 1) * mb));
      }
      if (ma - 1 >= lo) {
        // -theta e^{-i phi} a b^dag
        g(ma - 1 - lo, ma - lo) -=
            std::conj(f) * std::sqrt(static_cast<double>(ma * (mb + 1)));
      }
    }
    Eigen::MatrixXcd u = exp_antihermitian(g);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const int row = (lo + r) * d + (total - lo - r);
        const int col = (lo + c) * d + (total - lo - c);
        trips.emplace_back(row, col, u(r, c));
      }
    }
  }
  SparseU u(d * d, d * d);
  u.setFromTriplets(trips.begin(), trips.end());
  return u;
}

SparseU two_mode_squeeze_unitary(int d, double s) {
  std::vector<Eigen::Triplet<Complex>> trips;
  for (int diff = -(d - 1); diff <= d - 1; ++diff) {
    const int lo = std::max(0, diff);
    const int hi = std::min(d - 1, d - 1 + diff);
    const int dim = hi - lo + 1;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (int ma = lo; ma <= hi; ++ma) {
      const int mb = ma - diff;
      if (ma + 1 <= hi) {
        // s a^dag b^dag
        g(ma + 1 - lo, ma - lo) +=
            s * std::sqrt(static_cast<double>((ma + 1) * (mb + 1)));
      }
      if (ma - 1 >= lo) {
        // -s a b
        g(ma - 1 - lo, ma - lo) -= s * std::sqrt(static_cast<double>(ma * mb));
      }
    }
    Eigen::MatrixXcd u = exp_antihermitian(g);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const int row = (lo + r) * d + (lo + r - diff);
        const int col = (lo + c) * d + (lo + c - diff);
        trips.emplace_back(row, col, u(r, c));
      }
    }
  }
  SparseU u(d * d, d * d);
  u.setFromTriplets(trips.begin(), trips.end());
  return u;
}

// ---- tensor plumbing ------------------------------------------------------

void apply_single(FockState& st, int slot, const Eigen::MatrixXcd& u) {
  const int d = st.cutoff;
  const long r = slot_stride(st, slot);
  const long blocks = st.amplitudes.size() / (d * r);
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (long b = 0; b < blocks; ++b) {
    Eigen::Map<RowMat, 0, Eigen::OuterStride<>> block(
        st.amplitudes.data() + b * d * r, d, r, Eigen::OuterStride<>(r));
    block = (u * block).eval();
  }
}

void apply_two(FockState& st, int slot_a, int slot_b, const SparseU& u) {
  const int d = st.cutoff;
  const long sa = slot_stride(st, slot_a);
  const long sb = slot_stride(st, slot_b);
  const long rest = st.amplitudes.size() / (static_cast<long>(d) * d);

  // Base offsets for every assignment of the untouched slots.
  std::vector<long> bases(rest, 0);
  long repeat = 1;
  for (int slot = st.num_slots - 1; slot >= 0; --slot) {
    if (slot == slot_a || slot == slot_b) continue;
    const long stride = slot_stride(st, slot);
    const long cycle = repeat * d;
    for (long k = 0; k < rest; ++k) {
      bases[k] += ((k % cycle) / repeat) * stride;
    }
    repeat = cycle;
  }

  Eigen::MatrixXcd gathered(d * d, rest);
  for (int ma = 0; ma < d; ++ma) {
    for (int mb = 0; mb < d; ++mb) {
      const long off = ma * sa + mb * sb;
      const int row = ma * d + mb;
      for (long k = 0; k < rest; ++k) {
        gathered(row, k) = st.amplitudes(bases[k] + off);
      }
    }
  }
  gathered = (u * gathered).eval();
  for (int ma = 0; ma < d; ++ma) {
    for (int mb = 0; mb < d; ++mb) {
      const long off = ma * sa + mb * sb;
      const int row = ma * d + mb;
      for (long k = 0; k < rest; ++k) {
        st.amplitudes(bases[k] + off) = gathered(row, k);
      }
    }
  }
}

// Probability mass in the top two levels of a slot.
double boundary_mass(const FockState& st, int slot) {
  const int d = st.cutoff;
  const long r = slot_stride(st, slot);
  const long blocks = st.amplitudes.size() / (d * r);
  double mass = 0.0;
  for (long b = 0; b < blocks; ++b) {
    for (int n = d - 2; n < d; ++n) {
      mass += st.amplitudes.segment(b * d * r + n * r, r).squaredNorm();
    }
  }
  const double norm2 = st.norm2();
  return norm2 > 0.0 ? mass / norm2 : 0.0;
}

// Reduced density matrix of one slot.
Eigen::MatrixXcd reduced_density(const FockState& st, int slot) {
  const int d = st.cutoff;
  const long r = slot_stride(st, slot);
  const long blocks = st.amplitudes.size() / (d * r);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd fiber(d);
  for (long b = 0; b < blocks; ++b) {
    for (long k = 0; k < r; ++k) {
      const long base = b * d * r + k;
      for (int n = 0; n < d; ++n) fiber(n) = st.amplitudes(base + n * r);
      rho.noalias() += fiber * fiber.adjoint();
    }
  }
  const double norm2 = st.norm2();
  if (norm2 > 0.0) rho /= norm2;
  return rho;
}

// Contracts a slot against the functional f (projects and removes it).
// Returns the squared norm of the unnormalized residual state.
double contract_slot(FockState& st, int slot, const Eigen::VectorXcd& f) {
  const int d = st.cutoff;
  const long r = slot_stride(st, slot);
  const long blocks = st.amplitudes.size() / (d * r);
  Eigen::VectorXcd out(st.amplitudes.size() / d);
  for (long b = 0; b < blocks; ++b) {
    for (long k = 0; k < r; ++k) {
      Complex acc(0.0, 0.0);
      const long base = b * d * r + k;
      for (int n = 0; n < d; ++n) acc += f(n) * st.amplitudes(base + n * r);
      out(b * r + k) = acc;
    }
  }
  st.amplitudes = std::move(out);
  --st.num_slots;
  for (auto& v : st.visible) {
    if (v > slot) --v;
  }
  return st.amplitudes.squaredNorm();
}

Complex expect1(const FockState& st, int slot, const Eigen::MatrixXcd& op) {
  FockState tmp = st;
  apply_single(tmp, slot, op);
  return st.amplitudes.dot(tmp.amplitudes) / st.norm2();
}

Complex expect2(const FockState& st, int slot_a, const Eigen::MatrixXcd& op_a,
                int slot_b, const Eigen::MatrixXcd& op_b) {
  FockState tmp = st;
  apply_single(tmp, slot_a, op_a);
  apply_single(tmp, slot_b, op_b);
  return st.amplitudes.dot(tmp.amplitudes) / st.norm2();
}

// ---- the interpreter ------------------------------------------------------

class OracleRunner {
 public:
  OracleRunner(const CircuitProgram& program, const OracleOptions& options,
               RandomStream& rng, const std::map<std::string, double>* forced)
      : program_(program), opt_(options), rng_(rng), forced_(forced) {
    st_.cutoff = options.cutoff;
    st_.num_slots = 0;
    st_.amplitudes = Eigen::VectorXcd::Ones(1);
  }

  OracleRun run() {
    for (const auto& ins : program_.instructions) dispatch(ins);
    OracleRun out;
    out.state = std::move(st_);
    out.outcomes = std::move(outcomes_);
    return out;
  }

 private:
  int resolve(const std::string& name) const { return live_.at(name); }

  void budget_check(int extra_slots) const {
    long size = st_.amplitudes.size();
    for (int i = 0; i < extra_slots; ++i) {
      size *= st_.cutoff;
      if (size > opt_.max_amplitudes) {
        throw ResourceLimitError("truncated state would exceed the amplitude budget");
      }
    }
  }

  int append_slot(const Eigen::VectorXcd& init) {
    budget_check(1);
    const long old = st_.amplitudes.size();
    Eigen::VectorXcd grown(old * st_.cutoff);
    for (long i = 0; i < old; ++i) {
      grown.segment(i * st_.cutoff, st_.cutoff) = st_.amplitudes(i) * init;
    }
    st_.amplitudes = std::move(grown);
    return st_.num_slots++;
  }

  Eigen::VectorXcd basis_vector(int n) const {
    if (n >= st_.cutoff) {
      throw ResourceLimitError("fock occupation exceeds the cutoff");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(st_.cutoff);
    v(n) = 1.0;
    return v;
  }

  void track_leakage(std::initializer_list<int> slots) {
    for (int slot : slots) st_.leakage += boundary_mass(st_, slot);
    if (st_.leakage > opt_.leakage_budget) {
      throw TruncationBudgetExceeded(st_.leakage);
    }
  }

  void gate1(int slot, const Eigen::MatrixXcd& u) {
    apply_single(st_, slot, u);
    track_leakage({slot});
  }

  void gate2(int slot_a, int slot_b, const SparseU& u) {
    apply_two(st_, slot_a, slot_b, u);
    track_leakage({slot_a, slot_b});
  }

  // Unitary dilation of the loss channel: vacuum ancilla behind a
  // beamsplitter with transmissivity eta.
  void apply_loss(int slot, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw InvalidParameter("loss transmissivity must be in [0, 1]");
    }
    if (eta == 1.0) return;
    const int anc = append_slot(basis_vector(0));
    gate2(slot, anc, beamsplitter_unitary(st_.cutoff, std::acos(std::sqrt(eta)), 0.0));
  }

  void apply_amplify(int slot, double gain) {
    if (!(gain >= 1.0)) throw InvalidParameter("amplifier gain must be >= 1");
    if (gain == 1.0) return;
    const int anc = append_slot(basis_vector(0));
    gate2(slot, anc, two_mode_squeeze_unitary(st_.cutoff, std::acosh(std::sqrt(gain))));
  }

  void apply_noise(int slot, double n) {
    if (!(n >= 0.0)) throw InvalidParameter("noise variance must be >= 0");
    if (n == 0.0) return;
    const double gain = 1.0 + 0.5 * n;
    apply_loss(slot, 1.0 / gain);
    apply_amplify(slot, gain);
  }

  std::optional<double> forced_value(const std::string& reg) const {
    if (!forced_) return std::nullopt;
    auto it = forced_->find(reg);
    if (it == forced_->end()) return std::nullopt;
    return it->second;
  }

  void record(const std::string& reg, double value) {
    outcomes_.emplace_back(reg, value);
  }

  // x-quadrature readout of one slot: sample (or accept) the outcome, then
  // condition by contracting against the quadrature wavefunctions.
  double measure_x(int slot, std::optional<double> forced) {
    double m;
    if (forced) {
      m = *forced;
    } else {
      m = sample_quadrature(slot);
    }
    Eigen::VectorXcd f =
        quadrature_wavefunctions(st_.cutoff, m).cast<Complex>();
    const double weight = contract_slot(st_, slot, f);
    if (weight < 1e-300) throw DegenerateOutcome(weight);
    st_.amplitudes /= std::sqrt(weight);
    return m;
  }

  double sample_quadrature(int slot) {
    const Eigen::MatrixXcd x_op = x_operator(st_.cutoff);
    const double mu = expect1(st_, slot, x_op).real();
    const double xsq = expect1(st_, slot, x_op * x_op).real();
    const double sigma = std::sqrt(std::max(xsq - mu * mu, 1e-9));
    const Eigen::MatrixXcd rho = reduced_density(st_, slot);

    // Inverse-CDF draw from the discretized quadrature density on a
    // 201-point grid spanning +-8 standard deviations.
    constexpr int kPoints = 201;
    Eigen::VectorXd xs(kPoints), density(kPoints);
    for (int j = 0; j < kPoints; ++j) {
      xs(j) = mu + sigma * (-8.0 + 16.0 * j / (kPoints - 1));
      Eigen::VectorXcd phi =
          quadrature_wavefunctions(st_.cutoff, xs(j)).cast<Complex>();
      density(j) = std::max((phi.adjoint() * rho * phi)(0, 0).real(), 0.0);
    }
    Eigen::VectorXd cdf(kPoints);
    cdf(0) = 0.0;
    for (int j = 1; j < kPoints; ++j) {
      cdf(j) = cdf(j - 1) + 0.5 * (density(j) + density(j - 1)) * (xs(j) - xs(j - 1));
    }
    const double u = rng_.next_uniform() * cdf(kPoints - 1);
    int j = 1;
    while (j < kPoints - 1 && cdf(j) < u) ++j;
    const double span = cdf(j) - cdf(j - 1);
    const double t = span > 0.0 ? (u - cdf(j - 1)) / span : 0.5;
    return xs(j - 1) + t * (xs(j) - xs(j - 1));
  }

  void consume(const std::string& name) {
    const int slot = live_.at(name);
    live_.erase(name);
    for (auto& [n, s] : live_) {
      if (s > slot) --s;
    }
    for (size_t i = 0; i < st_.visible.size(); ++i) {
      if (st_.visible[i] == slot) {
        st_.visible.erase(st_.visible.begin() + i);
        break;
      }
    }
  }

  void declare(const Instruction& ins) {
    const InitState& init = ins.init;
    int slot = -1;
    switch (init.kind) {
      case InitKind::Vacuum:
        slot = append_slot(basis_vector(0));
        break;
      case InitKind::Coherent:
        slot = append_slot(basis_vector(0));
        gate1(slot, displacement_unitary(st_.cutoff, init.a, init.b));
        break;
      case InitKind::Squeezed:
        slot = append_slot(basis_vector(0));
        gate1(slot, squeeze_unitary(st_.cutoff, init.a, init.b));
        break;
      case InitKind::Thermal: {
        slot = append_slot(basis_vector(0));
        if (init.a > 0.0) {
          const int anc = append_slot(basis_vector(0));
          gate2(slot, anc,
                two_mode_squeeze_unitary(st_.cutoff, std::asinh(std::sqrt(init.a))));
        }
        break;
      }
      case InitKind::Fock:
        slot = append_slot(basis_vector(init.fock_n));
        break;
    }
    live_[ins.modes[0]] = slot;
    st_.visible.push_back(slot);
  }

  void dispatch(const Instruction& ins) {
    auto param = [&](int i) { return ins.params[i].eval(registers_); };
    switch (ins.op) {
      case Opcode::DeclareMode:
        declare(ins);
        return;
      case Opcode::Displace:
        gate1(resolve(ins.modes[0]),
              displacement_unitary(st_.cutoff, param(0), param(1)));
        return;
      case Opcode::Rotate:
        gate1(resolve(ins.modes[0]), rotation_unitary(st_.cutoff, param(0)));
        return;
      case Opcode::Squeeze:
        gate1(resolve(ins.modes[0]), squeeze_unitary(st_.cutoff, param(0), param(1)));
        return;
      case Opcode::Tms:
        gate2(resolve(ins.modes[0]), resolve(ins.modes[1]),
              two_mode_squeeze_unitary(st_.cutoff, param(0)));
        return;
      case Opcode::Bs:
        gate2(resolve(ins.modes[0]), resolve(ins.modes[1]),
              beamsplitter_unitary(st_.cutoff, param(0), param(1)));
        return;
      case Opcode::Kerr:
        gate1(resolve(ins.modes[0]), kerr_unitary(st_.cutoff, param(0)));
        return;
      case Opcode::Loss:
        apply_loss(resolve(ins.modes[0]), param(0));
        return;
      case Opcode::Amplify:
        apply_amplify(resolve(ins.modes[0]), param(0));
        return;
      case Opcode::Noise:
        apply_noise(resolve(ins.modes[0]), param(0));
        return;
      case Opcode::Channel:
        throw ResourceLimitError("general channels have no oracle dilation");
      case Opcode::Homodyne: {
        const int slot = resolve(ins.modes[0]);
        const double angle = param(0);
        const double efficiency = param(1);
        if (!(efficiency > 0.0 && efficiency <= 1.0)) {
          throw InvalidParameter("measurement efficiency must be in (0, 1]");
        }
        if (efficiency < 1.0) apply_loss(slot, efficiency);
        gate1(slot, rotation_unitary(st_.cutoff, -angle));
        const double m = measure_x(slot, forced_value(ins.target_register));
        consume(ins.modes[0]);
        registers_[ins.target_register] = m;
        record(ins.target_register, m);
        return;
      }
      case Opcode::Heterodyne: {
        // Double homodyne on a 50:50 split with a vacuum ancilla.
        const int slot = resolve(ins.modes[0]);
        const int anc = append_slot(basis_vector(0));
        gate2(slot, anc,
              beamsplitter_unitary(st_.cutoff, std::acos(std::sqrt(0.5)), 0.0));
        const double sqrt2 = std::sqrt(2.0);
        auto fx = forced_value(ins.target_register + "_x");
        std::optional<double> ux;
        if (fx) ux = *fx / sqrt2;
        const double mx = sqrt2 * measure_x(slot, ux);
        // The ancilla slot shifted down if it sat above the measured slot.
        const int anc_now = anc > slot ? anc - 1 : anc;
        gate1(anc_now, rotation_unitary(st_.cutoff, M_PI / 2.0));
        auto fp = forced_value(ins.target_register + "_p");
        std::optional<double> up;
        if (fp) up = -*fp / sqrt2;
        const double mp = -sqrt2 * measure_x(anc_now, up);
        consume(ins.modes[0]);
        registers_[ins.target_register + "_x"] = mx;
        registers_[ins.target_register + "_p"] = mp;
        record(ins.target_register + "_x", mx);
        record(ins.target_register + "_p", mp);
        return;
      }
      case Opcode::VacProject: {
        const int slot = resolve(ins.modes[0]);
        const double norm_before = st_.norm2();
        const double weight = contract_slot(st_, slot, basis_vector(0));
        const double prob = weight / norm_before;
        if (prob < 1e-300) throw DegenerateOutcome(prob);
        st_.amplitudes /= std::sqrt(weight);
        consume(ins.modes[0]);
        registers_[ins.target_register] = prob;
        record(ins.target_register, prob);
        return;
      }
      case Opcode::PhotonCount: {
        const int slot = resolve(ins.modes[0]);
        const Eigen::VectorXd pmf = reduced_density(st_, slot).diagonal().real();
        int k;
        if (auto f = forced_value(ins.target_register)) {
          k = static_cast<int>(std::lround(*f));
        } else {
          const double u = rng_.next_uniform() * pmf.sum();
          double acc = 0.0;
          k = 0;
          while (k < st_.cutoff - 1 && acc + pmf(k) < u) acc += pmf(k++);
        }
        const double weight = contract_slot(st_, slot, basis_vector(k));
        if (weight < 1e-300) throw DegenerateOutcome(weight);
        st_.amplitudes /= std::sqrt(weight);
        consume(ins.modes[0]);
        registers_[ins.target_register] = k;
        record(ins.target_register, k);
        return;
      }
    }
  }

  const CircuitProgram& program_;
  OracleOptions opt_;
  RandomStream& rng_;
  const std::map<std::string, double>* forced_;
  FockState st_;
  std::map<std::string, int> live_;
  std::map<std::string, double> registers_;
  std::vector<std::pair<std::string, double>> outcomes_;
};

}  // namespace

OracleRun oracle_execute(const CircuitProgram& program, const OracleOptions& options,
                         RandomStream& rng,
                         const std::map<std::string, double>* forced) {
  if (options.cutoff < 2 || options.cutoff > 64) {
    throw ResourceLimitError("oracle cutoff must be in [2, 64]");
  }
  if (program.num_declared_modes() > 3) {
    throw ResourceLimitError("oracle handles at most 3 declared modes");
  }
  auto diags = validate(program);
  if (!diags.empty()) {
    throw SimError("oracle given an invalid program: " + diags.front().message);
  }
  return OracleRunner(program, options, rng, forced).run();
}

Eigen::VectorXd quadrature_wavefunctions(int count, double x) {
  Eigen::VectorXd phi(count);
  phi(0) = std::pow(2.0 * M_PI, -0.25) * std::exp(-x * x / 4.0);
  if (count > 1) phi(1) = x * phi(0);
  for (int n = 1; n + 1 < count; ++n) {
    phi(n + 1) = (x * phi(n) - std::sqrt(static_cast<double>(n)) * phi(n - 1)) /
                 std::sqrt(static_cast<double>(n + 1));
  }
  return phi;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> moments(const FockState& state) {
  const int m = state.num_visible();
  const int d = state.cutoff;
  const Eigen::MatrixXcd xo = x_operator(d);
  const Eigen::MatrixXcd po = p_operator(d);
  const Eigen::MatrixXcd quads[2] = {xo, po};

  Eigen::VectorXd mean(2 * m);
  for (int i = 0; i < m; ++i) {
    mean(2 * i) = expect1(state, state.visible[i], xo).real();
    mean(2 * i + 1) = expect1(state, state.visible[i], po).real();
  }

  Eigen::MatrixXd cov(2 * m, 2 * m);
  for (int qi = 0; qi < 2 * m; ++qi) {
    const int slot_i = state.visible[qi / 2];
    const Eigen::MatrixXcd& op_i = quads[qi % 2];
    for (int qj = qi; qj < 2 * m; ++qj) {
      const int slot_j = state.visible[qj / 2];
      const Eigen::MatrixXcd& op_j = quads[qj % 2];
      double second;
      if (slot_i == slot_j) {
        second = expect1(state, slot_i, 0.5 * (op_i * op_j + op_j * op_i)).real();
      } else {
        second = expect2(state, slot_i, op_i, slot_j, op_j).real();
      }
      const double c = second - mean(qi) * mean(qj);
      cov(qi, qj) = c;
      cov(qj, qi) = c;
    }
  }
  return {std::move(mean), std::move(cov)};
}

double vacuum_prob(const FockState& state, int mode) {
  if (mode < 0 || mode >= state.num_visible()) {
    throw ModeIndexError(mode, state.num_visible());
  }
  return reduced_density(state, state.visible[mode])(0, 0).real();
}

double fourth_cumulant_x(const FockState& state, int mode) {
  if (mode < 0 || mode >= state.num_visible()) {
    throw ModeIndexError(mode, state.num_visible());
  }
  const int slot = state.visible[mode];
  const Eigen::MatrixXcd xo = x_operator(state.cutoff);
  const double mu = expect1(state, slot, xo).real();
  Eigen::MatrixXcd centered = xo - mu * Eigen::MatrixXcd::Identity(state.cutoff, state.cutoff);
  const Eigen::MatrixXcd c2 = centered * centered;
  const double var = expect1(state, slot, c2).real();
  const double m4 = expect1(state, slot, c2 * c2).real();
  return m4 - 3.0 * var * var;
}

CompareReport compare(const GaussianState& gauss, const FockState& fock, double tol) {
  if (gauss.num_modes() != fock.num_visible()) {
    throw ShapeMismatch("engine and oracle disagree on the surviving mode count");
  }
  CompareReport rep;
  rep.tol_mean = tol;
  rep.tol_cov = 10.0 * tol;
  rep.leakage = fock.leakage;
  if (gauss.num_modes() > 0) {
    auto [fmean, fcov] = moments(fock);
    rep.max_mean_dev = (gauss.mean - fmean).cwiseAbs().maxCoeff();
    rep.max_cov_dev = (gauss.cov - fcov).cwiseAbs().maxCoeff();
  }
  rep.pass = rep.max_mean_dev <= rep.tol_mean && rep.max_cov_dev <= rep.tol_cov;
  return rep;
}

}  // namespace cvsim
