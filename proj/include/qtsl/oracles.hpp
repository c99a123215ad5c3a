#pragma once

// Random-oracle realizations: a fixed truth table (Exact), the purified
// standard oracle over all tables (Standard), the phase oracle reached by
// Fourier conjugation of the output register (Phase), and the compressed
// standard oracle over sparse databases (Compressed).

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtsl/qcore.hpp"
#include "qtsl/random.hpp"

namespace qtsl {

enum class OracleMode { Exact, Standard, Phase, Compressed };

std::string to_string(OracleMode mode);
/// Accepts exact, standard, phase, compressed. Throws std::invalid_argument.
OracleMode parse_mode(std::string_view text);

/// M^N, throwing std::overflow_error past 2^62.
std::uint64_t table_count(std::size_t N, std::size_t M);

struct TruthTable {
  std::size_t N = 1;
  std::size_t M = 1;
  std::vector<std::size_t> values;

  TruthTable() : values(1, 0) {}
  TruthTable(std::size_t n, std::size_t m, std::vector<std::size_t> vals);

  /// Table number `index` with values[0] as the most significant base-M digit.
  static TruthTable from_index(std::size_t n, std::size_t m, std::uint64_t index);
  static TruthTable sample(std::size_t n, std::size_t m, Rng& rng);

  std::uint64_t index() const;
  std::size_t operator()(std::size_t x) const { return values.at(x); }

  nlohmann::json to_json() const;
  static TruthTable from_json(std::size_t m, const nlohmann::json& j);

  bool operator==(const TruthTable&) const = default;
};

class Database {
 public:
  Database(std::size_t n, std::size_t m) : N_(n), M_(m), cells_(n, m) {}
  Database(std::size_t n, std::size_t m, std::vector<std::size_t> cells);

  std::size_t N() const { return N_; }
  std::size_t M() const { return M_; }
  std::size_t bottom() const { return M_; }
  std::optional<std::size_t> get(std::size_t x) const;
  std::size_t size() const;
  /// Throws std::logic_error when cell x is already set.
  void insert(std::size_t x, std::size_t y);
  const std::vector<std::size_t>& cells() const { return cells_; }

  /// "{(0,1),(3,0)}"
  std::string to_string() const;

 private:
  std::size_t N_;
  std::size_t M_;
  std::vector<std::size_t> cells_;
};

/// What the game's query interface returns at one point: the oracle value at
/// that point, a constant, or nothing at all.
struct QueryResponse {
  enum class Kind { Oracle, Fixed, Bottom };
  Kind kind = Kind::Oracle;
  std::size_t value = 0;

  static QueryResponse oracle(std::size_t point) { return {Kind::Oracle, point}; }
  static QueryResponse fixed(std::size_t v) { return {Kind::Fixed, v}; }
  static QueryResponse bottom() { return {Kind::Bottom, 0}; }
};
using QueryFilter = std::function<QueryResponse(std::size_t x)>;

/// Name of the oracle register holding point x ("H3" or "D3").
std::string table_register(std::size_t x);
std::string database_register(std::size_t x);

PureState exact_query(const TruthTable& table, const PureState& state, std::string_view in, std::string_view out,
                      int sign = 1, const QueryFilter* filter = nullptr);
/// Standard oracle on a joint state carrying registers H0..H{N-1}.
PureState sto_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign = 1,
                    const QueryFilter* filter = nullptr);
/// Phase oracle: |x,u>|H> -> w_M^{sign u H(x)} |x,u>|H>.
PureState pho_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign = 1,
                    const QueryFilter* filter = nullptr);
/// A standard query realized as QFT(u), phase oracle, inverse QFT(u).
PureState phase_emulated_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N,
                               int sign = 1, const QueryFilter* filter = nullptr);

/// StdDecomp on database cell x (registers D0..D{N-1}, alphabet M+1, bottom = M).
PureState std_decomp(const PureState& state, std::size_t x);
/// StdDecomp on the cell named by the input register, for points where the
/// filter (if any) answers with the oracle.
PureState std_decomp_controlled(const PureState& state, std::string_view in, std::size_t N,
                                const QueryFilter* filter = nullptr);
/// u += sign * D(x); identity where D(x) is bottom, counting such hits.
PureState csto_prime(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign = 1,
                     const QueryFilter* filter = nullptr, std::size_t* bottom_hits = nullptr);
PureState csto_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign = 1,
                     const QueryFilter* filter = nullptr, std::size_t* bottom_hits = nullptr);

/// Database encoded in `label` of a layout carrying D0..D{N-1}.
Database database_of(const RegisterLayout& layout, Label label, std::size_t N);
/// Squared-amplitude mass on databases with more than `bound` entries.
double database_mass_above(const PureState& state, std::size_t N, std::size_t bound);

namespace fault {
/// Test-only mutation hook: StdDecomp acts on cell (x + offset) mod N.
inline std::atomic<std::size_t> std_decomp_offset{0};
}  // namespace fault

class OracleSession {
 public:
  /// The adversary state is extended with the oracle registers of `mode`.
  /// Exact mode requires a table.
  OracleSession(OracleMode mode, std::size_t N, std::size_t M, const PureState& adversary,
                std::optional<TruthTable> table = std::nullopt);

  OracleMode mode() const { return mode_; }
  std::size_t N() const { return N_; }
  std::size_t M() const { return M_; }
  const PureState& state() const { return state_; }
  /// Replaces the joint state. The oracle registers must be preserved.
  void set_state(PureState state);
  const std::optional<TruthTable>& table() const { return table_; }

  /// Oracle registers in the joint layout.
  std::vector<std::string> oracle_registers() const;
  /// Every register that is not part of the oracle.
  std::vector<std::string> adversary_registers() const;

  /// One counted query. Throws BudgetExceeded past the declared budget.
  void query(std::string_view in, std::string_view out, int sign = 1, const QueryFilter* filter = nullptr);
  /// Same operation without touching the counters (challenger work).
  void query_uncounted(std::string_view in, std::string_view out, int sign = 1, const QueryFilter* filter = nullptr);

  std::size_t query_count() const { return query_count_; }
  std::size_t window_count() const { return window_count_; }
  /// Opens a new counting window with the given budget (none when empty).
  void begin_window(std::optional<std::size_t> budget);
  std::size_t bottom_hits() const { return bottom_hits_; }

 private:
  void apply(std::string_view in, std::string_view out, int sign, const QueryFilter* filter);

  OracleMode mode_;
  std::size_t N_;
  std::size_t M_;
  std::optional<TruthTable> table_;
  PureState state_;
  std::size_t query_count_ = 0;
  std::size_t window_count_ = 0;
  std::optional<std::size_t> budget_;
  std::size_t bottom_hits_ = 0;
};

struct SessionBranch {
  std::size_t value;
  double probability;
  OracleSession session;
};

/// Classical challenger query at x: query into a scratch register, measure,
/// uncompute, discard. One branch per observed value; not counted.
std::vector<SessionBranch> classical_query(const OracleSession& session, std::size_t x);

}  // namespace qtsl
