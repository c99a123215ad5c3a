#pragma once

// Hellman time-memory tables for inverting H: [N] -> [N]. Table i iterates
// f_i(x) = (H(x) + i) mod N; only chain endpoints are stored.

#include <unordered_map>

#include "qtsl/arena.hpp"

namespace qtsl {

struct HellmanTable {
  std::size_t N = 0;
  std::size_t m = 0;  // chains per table
  std::size_t t = 0;  // chain length
  std::size_t l = 0;  // tables
  /// Per table: end point -> start points.
  std::vector<std::unordered_map<std::size_t, std::vector<std::size_t>>> chains;

  std::size_t stored_pairs() const;
  /// 2 m l ceil(log2 N).
  std::size_t advice_bits() const;
};

/// Chain starts drawn from derive_seed(seed, chain index), so the table is
/// the same for every worker count.
HellmanTable hellman_build(const TruthTable& H, std::size_t m, std::size_t t, std::size_t l, std::uint64_t seed,
                           Exec exec = Exec::Parallel);

struct HellmanResult {
  std::optional<std::size_t> preimage;
  std::size_t queries = 0;
};

/// Walks every table at most t steps. A preimage is returned only after a
/// query confirms H(x) = y. Stops with no answer once `budget` queries are spent.
HellmanResult hellman_invert(const HellmanTable& table, std::size_t y, const TruthTable& H,
                             std::optional<std::size_t> budget = std::nullopt);

struct HellmanExperiment {
  std::size_t N = 16;
  std::size_t m = 1;
  std::size_t t = 1;
  std::size_t l = 1;
  std::optional<std::size_t> budget;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
};

/// Fresh H, table and challenge x per trial; success when H(answer) = H(x).
Estimate hellman_success(const HellmanExperiment& e, Exec exec = Exec::Parallel);

/// Parameters for a sweep point: t = l = max(1, floor(sqrt T)),
/// m = max(1, floor(S / (2 l ceil(log2 N)))).
HellmanExperiment hellman_for_budget(std::size_t N, std::size_t S, std::size_t T);

}  // namespace qtsl
