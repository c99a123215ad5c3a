#pragma once

// Exhaustive optimum over deterministic classical adversaries: advice maps
// H -> [2^S] and adaptive query/answer strategies, by expectimax over the
// adversary's information sets. Worlds are held as bitsets over all tables.

#include "qtsl/arena.hpp"

namespace qtsl {

struct BruteForceOptions {
  std::size_t S = 0;
  std::size_t T = 0;
  std::size_t g = 1;
  /// |R| * |H| * (2^S)^|H| must stay below this.
  double max_space = 1e7;
  /// Tables are held as bitsets; M^domain must stay below this.
  std::uint64_t max_tables = std::uint64_t{1} << 20;
  Exec exec = Exec::Parallel;
};

struct BruteForceResult {
  double value = 0.0;
  /// Winning (H, r_1..r_g) worlds of the optimum out of |H| |R|^g.
  std::uint64_t wins = 0;
  std::uint64_t worlds = 0;
  /// Witness advice map: advice value per table index (empty when S = 0).
  std::vector<std::uint32_t> advice;
};

/// Throws GuardExceeded when the search space is too large.
BruteForceResult brute_force_best(const GameSpec& game, const BruteForceOptions& options);

}  // namespace qtsl
