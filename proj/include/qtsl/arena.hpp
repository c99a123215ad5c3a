#pragma once

// Adversary programs and the executor for single and sequential
// multi-instance games. Quantum runs split into weighted worlds at every
// measurement; classical runs enumerate challenger randomness and coins.

#include <map>
#include <variant>

#include "qtsl/games.hpp"
#include "qtsl/parallel.hpp"
#include "qtsl/program.hpp"

namespace qtsl {

struct AdviceSpec {
  enum class Kind { None, Classical, Quantum };
  Kind kind = Kind::None;
  std::size_t bits = 0;
  /// Advice drawn uniformly and independently of H (classical: a uniform
  /// S-bit string; quantum: a uniform basis state of the advice registers).
  bool uniform = false;
  std::function<std::uint64_t(const TruthTable&)> classical;
  std::vector<Register> registers;
  std::function<PureState(const TruthTable&)> quantum;

  /// Number of basis states of the advice registers.
  std::uint64_t quantum_dimension() const;
};

class ClassicalOracle {
 public:
  ClassicalOracle(const GameSpec& game, std::size_t r, const TruthTable& table, std::size_t budget)
      : game_(game), r_(r), table_(table), budget_(budget) {}
  /// Throws BudgetExceeded past the budget. nullopt for a bottom response.
  std::optional<std::size_t> query(std::size_t x);
  std::size_t used() const { return used_; }

 private:
  const GameSpec& game_;
  std::size_t r_;
  const TruthTable& table_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

using Memory = std::vector<std::int64_t>;

struct ClassicalRound {
  std::size_t round;
  const Challenge& challenge;
  std::uint64_t advice;
  std::size_t coin;
  ClassicalOracle& oracle;
  Memory& memory;
};

struct ClassicalBody {
  /// Size of the per-round coin space; coins are enumerated exactly.
  std::size_t coins = 1;
  std::function<std::size_t(ClassicalRound&)> online;
};

struct QuantumRound {
  std::size_t round;
  const Challenge& challenge;
};

struct QuantumBody {
  /// Workspace registers for all rounds, zero-initialized after the advice.
  std::vector<Register> registers;
  std::function<std::vector<QStep>(const QuantumRound&)> steps;
  /// Steps run after the challenger hands the answer register back.
  std::function<std::vector<QStep>(const QuantumRound&)> after;
  std::function<std::string(std::size_t round)> answer;
};

struct AdversaryProgram {
  std::string name;
  std::size_t rounds = 1;
  std::size_t budget = 0;
  AdviceSpec advice;
  std::variant<ClassicalBody, QuantumBody> body;

  bool is_quantum() const { return std::holds_alternative<QuantumBody>(body); }
};

struct RoundRecord {
  std::size_t round = 0;
  Challenge challenge;
  std::size_t queries = 0;
  bool bit = false;
  std::uint64_t issued_seq = 0;
  std::uint64_t measured_seq = 0;
};

struct Transcript {
  std::vector<RoundRecord> rounds;
  bool win = false;
  double weight = 1.0;
  std::optional<std::uint64_t> table_index;

  nlohmann::json to_json() const;
};

/// Aggregated outcomes: weight per round-bit pattern (bit i-1 is round i).
struct TranscriptSet {
  std::size_t rounds = 1;
  std::map<std::uint32_t, double> patterns;
  bool exact = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<Transcript> samples;

  double total() const;
};

struct Estimate {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool exact = false;
};

inline constexpr double kWilsonZ = 1.959964;
Estimate wilson(double successes, std::size_t trials, std::uint64_t seed = 0);
Estimate exact_estimate(double probability, std::size_t worlds, std::uint64_t seed = 0);

struct RunOptions {
  enum class Method { Auto, Exact, MonteCarlo };
  OracleMode mode = OracleMode::Exact;
  std::uint64_t seed = 1;
  Method method = Method::Auto;
  std::size_t trials = 1000;
  double max_worlds = 1e6;
  Exec exec = Exec::Parallel;
  bool keep_transcripts = false;
  /// Step 1(e): hand the post-measurement answer state back. When false the
  /// answer register is measured in the computational basis instead.
  bool return_answer_state = true;
  /// Explicit weighted table space (weights sum to 1) for exact runs.
  std::optional<std::vector<std::pair<TruthTable, double>>> tables;
};

/// Worlds an exact run would enumerate, as a double to avoid overflow.
double enumeration_size(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options);

/// Sequential multi-instance game with adv.rounds rounds.
TranscriptSet run_multi_instance(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options);
/// One sampled single-instance game: the answer is measured in the
/// computational basis, then checked classically.
Transcript run_single(const GameSpec& game, const AdversaryProgram& adv, OracleMode mode, std::uint64_t seed);
/// Single-instance win probability by exact enumeration (g must be 1);
/// answers are measured in the computational basis before verification.
double single_win_probability(const GameSpec& game, const AdversaryProgram& adv, const RunOptions& options);

Estimate estimate_win(const TranscriptSet& set);
/// Pr[b_i = 1 | condition(bits of rounds < i)], i is 1-based. Throws
/// std::domain_error when the condition has zero support.
Estimate conditional_round_success(const TranscriptSet& set, std::size_t i,
                                   const std::function<bool(std::uint32_t)>& condition);

// Building blocks for quantum runs.

struct QuantumWorld {
  OracleSession session;
  double weight = 1.0;
  std::uint32_t bits = 0;
  std::vector<RoundRecord> records;
  std::uint64_t seq = 0;
};

struct VerifyBranch {
  bool bit;
  double probability;
  OracleSession session;
};

/// Computes ver into a fresh bit with raw oracle queries, measures it and
/// uncomputes. One branch per outcome with nonzero probability.
std::vector<VerifyBranch> challenger_verify_superposed(const OracleSession& session, const std::string& answer_reg,
                                                       const GameSpec& game, std::size_t r);

/// The advice-plus-workspace start state for a quantum adversary. `label`
/// selects the basis state when the advice is uniform.
PureState quantum_start(const AdversaryProgram& adv, const std::optional<TruthTable>& table, std::uint64_t label = 0);

/// Plays one round from `world` with randomness r. Challenge queries and
/// the verification measurement branch; every branch is returned. With a
/// sampler, one branch is drawn at each split instead.
std::vector<QuantumWorld> play_round(const QuantumWorld& world, const GameSpec& game, const AdversaryProgram& adv,
                                     std::size_t round, std::size_t r, bool return_answer_state,
                                     Rng* sampler = nullptr);

/// Canonical tables per fiber profile with their probability weight. Exact
/// only for adversaries and games invariant under relabeling domain and range.
std::vector<std::pair<TruthTable, double>> fiber_classes(std::size_t N, std::size_t M);

}  // namespace qtsl
