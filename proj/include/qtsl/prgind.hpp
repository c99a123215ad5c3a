#pragma once

// Distinguishing a challenge H(x) (x uniform) from a uniform y after q
// queries before the challenge and q' after, on the compressed oracle.

#include "qtsl/program.hpp"

namespace qtsl {

/// Distinguisher over `registers` plus the challenge register "ch" (range M).
/// Prefix steps run before the challenge, suffix steps after. The oracle is
/// simulated on `domain` points. When domain < N, point domain-1 stands for
/// the N-domain+1 points the distinguisher never queries, which all behave
/// alike as challenge points.
struct PrgIndProgram {
  std::size_t domain = 0;
  std::vector<Register> registers;
  std::vector<QStep> prefix;
  std::vector<QStep> suffix;
};

struct PrgIndResult {
  double advantage = 0.0;  // trace distance of the distinguisher's two states
  double bound = 0.0;      // 2 (sqrt q + q') / sqrt N
  bool holds() const { return advantage <= bound + 1e-9; }
};

/// Throws std::invalid_argument when the program exceeds q or q' queries.
PrgIndResult prgind_advantage(std::size_t N, std::size_t M, std::size_t q, std::size_t q_prime,
                              const PrgIndProgram& program);

/// Random distinguisher with registers x, u (M) whose unitaries mix x over
/// `points` domain points. Simulated on min(N, points + 1) points.
PrgIndProgram random_prgind_program(std::size_t N, std::size_t M, std::size_t q, std::size_t q_prime,
                                    std::size_t points, Rng& rng);

}  // namespace qtsl
