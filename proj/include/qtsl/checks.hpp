#pragma once

// Property and invariant families run by `qtsl verify` and the acceptance
// binary. Every family is deterministic given its pinned seeds.

#include <string>
#include <vector>

#include "qtsl/parallel.hpp"

namespace qtsl {

struct CheckResult {
  std::string family;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Names in the order `verify` runs them.
const std::vector<std::string>& check_families();
/// Throws std::invalid_argument for an unknown family.
std::vector<CheckResult> run_family(const std::string& family, Exec exec = Exec::Parallel);

/// Worst pairwise total variation across the four oracle modes over `programs`
/// seeded random programs with at most 3 queries, N, M in {2, 3, 4}.
double oracle_equivalence_worst_tv(std::size_t programs, std::uint64_t seed, Exec exec = Exec::Parallel);

struct WrapperDisturbance {
  /// Largest d_i - sqrt(eps_i) over rounds and branches (gentle bound slack, <= 0 passes).
  double gentle_excess = 0.0;
  /// Largest accumulated distance minus sum of sqrt(eps_j) (union bound, <= 0 passes).
  double union_excess = 0.0;
  /// Largest distance of the advice from its original state after g rounds.
  double final_distance = 0.0;
  std::size_t branches = 0;
};

/// k-copy wrapper around the noisy quantum-advice owf adversary at N = M = 2,
/// followed through every table and randomness sequence along successful branches.
WrapperDisturbance wrapper_disturbance(double eta, std::size_t k, std::size_t g);

}  // namespace qtsl
