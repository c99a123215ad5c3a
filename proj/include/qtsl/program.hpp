#pragma once

// Invertible quantum steps over named registers, and small query programs
// whose output distribution can be compared across oracle modes.

#include <map>

#include "qtsl/oracles.hpp"
#include "qtsl/parallel.hpp"

namespace qtsl {

struct QStep {
  enum class Kind { Unitary, Compute, Phase, Query };
  using Digits = std::span<const std::size_t>;

  Kind kind = Kind::Unitary;
  std::vector<std::string> regs;  // targets (Unitary, Phase), inputs (Compute), {in} (Query)
  std::string out;                // Compute and Query output
  Eigen::MatrixXcd matrix;
  std::function<std::size_t(Digits)> fn;
  std::function<Complex(Digits)> phase;
  int sign = 1;

  static QStep unitary(std::vector<std::string> regs, Eigen::MatrixXcd matrix);
  /// out += fn(inputs) mod |out|.
  static QStep compute(std::vector<std::string> inputs, std::string out, std::function<std::size_t(Digits)> fn);
  /// Multiplies each component by phase(digits of regs); must be unimodular.
  static QStep phase_step(std::vector<std::string> regs, std::function<Complex(Digits)> phase);
  static QStep query(std::string in, std::string out, int sign = 1);
};

QStep inverse(const QStep& step);
std::vector<QStep> inverse(const std::vector<QStep>& steps);
QStep rename(const QStep& step, const std::function<std::string(const std::string&)>& map);
std::size_t count_queries(const std::vector<QStep>& steps);

/// Applies a non-query step.
PureState apply_step(const PureState& state, const QStep& step);
/// Applies steps, routing queries through the session (counted) and the filter.
void apply_steps(OracleSession& session, const std::vector<QStep>& steps, const QueryFilter* filter = nullptr);

/// Register layout, steps and the registers measured at the end.
struct QueryProgram {
  std::vector<Register> registers;
  std::vector<QStep> steps;
  std::vector<std::string> outputs;

  std::size_t queries() const { return count_queries(steps); }
};

using Distribution = std::map<std::vector<std::size_t>, double>;

/// Marginal distribution of the listed registers.
Distribution output_distribution(const PureState& state, std::span<const std::string> outputs);
double total_variation(const Distribution& a, const Distribution& b);

struct DistributionOptions {
  /// Exact mode enumerates all tables up to this count.
  std::uint64_t max_tables = 4096;
  bool allow_monte_carlo = false;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  Exec exec = Exec::Parallel;
};

/// Final-measurement distribution of the program's outputs under one oracle mode.
Distribution oracle_output_distribution(const QueryProgram& program, OracleMode mode, std::size_t N, std::size_t M,
                                        const DistributionOptions& options = {});

/// Random program on x over [N], u over Z/M and a qubit workspace: random
/// unitaries interleaved with up to `max_queries` forward or inverse queries.
QueryProgram random_program(std::size_t N, std::size_t M, std::size_t max_queries, Rng& rng);

}  // namespace qtsl
