#include "qtsl/prgind.hpp"

#include <cmath>

namespace qtsl {

namespace {

/// Unitary whose first column is `column` (real, unit norm): a Householder reflection.
Eigen::MatrixXcd first_column_unitary(const Eigen::VectorXd& column) {
  const auto n = column.size();
  Eigen::VectorXcd v = -column.cast<Complex>();
  v(0) += 1.0;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  const double norm2 = v.squaredNorm();
  if (norm2 > 1e-24) u -= 2.0 * v * v.adjoint() / norm2;
  return u;
}

PureState run_case(std::size_t N, std::size_t M, const PrgIndProgram& program, bool real) {
  const std::size_t L = program.domain;
  std::vector<Register> regs = program.registers;
  regs.push_back({"ch", Role::Input, M});
  regs.push_back({real ? "_cx" : "_cy", Role::Workspace, real ? L : M});
  OracleSession session(OracleMode::Compressed, L, M, PureState::zero(RegisterLayout(regs)));
  apply_steps(session, program.prefix);
  if (real) {
    Eigen::VectorXd amp = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(L), std::sqrt(1.0 / static_cast<double>(N)));
    amp(static_cast<Eigen::Index>(L - 1)) = std::sqrt(static_cast<double>(N - L + 1) / static_cast<double>(N));
    session.set_state(apply_unitary(session.state(), "_cx", first_column_unitary(amp)));
    session.query_uncounted("_cx", "ch");
  } else {
    PureState s = qft(session.state(), "_cy");
    s = apply_step(s, QStep::compute({"_cy"}, "ch", [](QStep::Digits d) { return d[0]; }));
    session.set_state(std::move(s));
  }
  apply_steps(session, program.suffix);
  if (!real && L < N) {
    const auto& layout = session.state().layout();
    const std::size_t cell = layout.index(database_register(L - 1));
    double touched = 0.0;
    for (const auto& [label, amp] : session.state().entries()) {
      if (layout.digit(label, cell) != M) touched += std::norm(amp);
    }
    if (touched > 1e-12) throw std::logic_error("distinguisher queried the stand-in point");
  }
  return session.state();
}

Eigen::MatrixXcd embedded_unitary(std::size_t N, const std::vector<std::size_t>& points, std::size_t rest,
                                  Rng& rng) {
  const std::size_t k = points.size();
  const Eigen::MatrixXcd block = random_unitary(k * rest, rng);
  const auto dim = static_cast<Eigen::Index>(N * rest);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t i = 0; i < rest; ++i) {
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t j = 0; j < rest; ++j) {
          u(static_cast<Eigen::Index>(points[a] * rest + i), static_cast<Eigen::Index>(points[b] * rest + j)) =
              block(static_cast<Eigen::Index>(a * rest + i), static_cast<Eigen::Index>(b * rest + j));
        }
      }
    }
  }
  return u;
}

}  // namespace

PrgIndResult prgind_advantage(std::size_t N, std::size_t M, std::size_t q, std::size_t q_prime,
                              const PrgIndProgram& program) {
  if (program.domain < 1 || program.domain > N) throw std::invalid_argument("simulated domain must be in [1, N]");
  if (count_queries(program.prefix) > q) throw std::invalid_argument("prefix makes more than q queries");
  if (count_queries(program.suffix) > q_prime) throw std::invalid_argument("suffix makes more than q' queries");
  std::vector<std::string> keep;
  for (const auto& r : program.registers) keep.push_back(r.name);
  keep.push_back("ch");
  const PureState real = run_case(N, M, program, true);
  const PureState ideal = run_case(N, M, program, false);
  PrgIndResult result;
  result.advantage = trace_distance(reduced_density(real, keep), reduced_density(ideal, keep));
  result.bound = 2.0 * (std::sqrt(static_cast<double>(q)) + static_cast<double>(q_prime)) /
                 std::sqrt(static_cast<double>(N));
  return result;
}

PrgIndProgram random_prgind_program(std::size_t N, std::size_t M, std::size_t q, std::size_t q_prime,
                                    std::size_t points, Rng& rng) {
  points = std::clamp<std::size_t>(points, 1, N);
  const std::size_t L = points < N ? points + 1 : N;
  std::vector<std::size_t> chosen(points);
  for (std::size_t i = 0; i < points; ++i) chosen[i] = i;

  PrgIndProgram p;
  p.domain = L;
  p.registers = {{"x", Role::Input, L}, {"u", Role::Output, M}};
  const std::vector<std::string> before{"x", "u"};
  const std::vector<std::string> after{"x", "u", "ch"};
  p.prefix.push_back(QStep::unitary(before, embedded_unitary(L, chosen, M, rng)));
  for (std::size_t i = 0; i < q; ++i) {
    p.prefix.push_back(QStep::query("x", "u"));
    p.prefix.push_back(QStep::unitary(before, embedded_unitary(L, chosen, M, rng)));
  }
  p.suffix.push_back(QStep::unitary(after, embedded_unitary(L, chosen, M * M, rng)));
  for (std::size_t i = 0; i < q_prime; ++i) {
    p.suffix.push_back(QStep::query("x", "u"));
    p.suffix.push_back(QStep::unitary(after, embedded_unitary(L, chosen, M * M, rng)));
  }
  return p;
}

}  // namespace qtsl
