#include "qtsl/hellman.hpp"

#include <cmath>

#include "qtsl/adversaries.hpp"

namespace qtsl {

std::size_t HellmanTable::stored_pairs() const {
  std::size_t n = 0;
  for (const auto& c : chains) {
    for (const auto& [end, starts] : c) n += starts.size();
  }
  return n;
}

std::size_t HellmanTable::advice_bits() const { return 2 * m * l * std::max<std::size_t>(1, ceil_log2(N)); }

HellmanTable hellman_build(const TruthTable& H, std::size_t m, std::size_t t, std::size_t l, std::uint64_t seed,
                           Exec exec) {
  if (H.M != H.N) throw std::invalid_argument("Hellman tables need H: [N] -> [N]");
  if (m < 1 || t < 1 || l < 1) throw std::invalid_argument("Hellman parameters m, t, l must be >= 1");
  const std::size_t N = H.N;
  auto ends = parallel_map<std::pair<std::size_t, std::size_t>>(m * l, exec, [&](std::size_t c) {
    const std::size_t i = c / m;
    Rng rng = make_rng(seed, c);
    const std::size_t start = uniform_index(rng, N);
    std::size_t x = start;
    for (std::size_t j = 0; j < t; ++j) x = (H(x) + i) % N;
    return std::pair{start, x};
  });
  HellmanTable table;
  table.N = N;
  table.m = m;
  table.t = t;
  table.l = l;
  table.chains.resize(l);
  for (std::size_t c = 0; c < ends.size(); ++c) table.chains[c / m][ends[c].second].push_back(ends[c].first);
  return table;
}

HellmanResult hellman_invert(const HellmanTable& table, std::size_t y, const TruthTable& H,
                             std::optional<std::size_t> budget) {
  HellmanResult result;
  const std::size_t N = table.N;
  auto query = [&](std::size_t x) -> std::optional<std::size_t> {
    if (budget && result.queries >= *budget) return std::nullopt;
    ++result.queries;
    return H(x);
  };
  for (std::size_t i = 0; i < table.l; ++i) {
    const auto& chains = table.chains[i];
    std::size_t z = (y + i) % N;
    for (std::size_t s = 0; s < table.t; ++s) {
      if (auto it = chains.find(z); it != chains.end()) {
        for (std::size_t start : it->second) {
          std::size_t x = start;
          for (std::size_t j = 0; j < table.t; ++j) {
            const auto h = query(x);
            if (!h) return result;
            if (*h == y) {
              const auto check = query(x);
              if (!check) return result;
              if (*check == y) {
                result.preimage = x;
                return result;
              }
            }
            x = (*h + i) % N;
          }
        }
      }
      if (s + 1 == table.t) break;
      const auto h = query(z);
      if (!h) return result;
      z = (*h + i) % N;
    }
  }
  return result;
}

Estimate hellman_success(const HellmanExperiment& e, Exec exec) {
  auto wins = parallel_map<int>(e.trials, exec, [&](std::size_t trial) {
    Rng rng = make_rng(e.seed, trial);
    const TruthTable H = TruthTable::sample(e.N, e.N, rng);
    const HellmanTable table = hellman_build(H, e.m, e.t, e.l, derive_seed(e.seed, trial) ^ 0x9e3779b97f4a7c15ULL,
                                             Exec::Serial);
    const std::size_t x = uniform_index(rng, e.N);
    const std::size_t y = H(x);
    const auto r = hellman_invert(table, y, H, e.budget);
    if (e.budget && r.queries > *e.budget) throw BudgetExceeded("Hellman inversion exceeded its query budget");
    return r.preimage && H(*r.preimage) == y ? 1 : 0;
  });
  double total = 0.0;
  for (int w : wins) total += w;
  return wilson(total, e.trials, e.seed);
}

HellmanExperiment hellman_for_budget(std::size_t N, std::size_t S, std::size_t T) {
  HellmanExperiment e;
  e.N = N;
  e.t = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(T)))));
  e.l = e.t;
  e.m = std::max<std::size_t>(1, S / (2 * e.l * std::max<std::size_t>(1, ceil_log2(N))));
  e.budget = T;
  return e;
}

}  // namespace qtsl
