#include "qtsl/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qtsl {

std::string to_string(OracleMode mode) {
  switch (mode) {
    case OracleMode::Exact: return "exact";
    case OracleMode::Standard: return "standard";
    case OracleMode::Phase: return "phase";
    case OracleMode::Compressed: return "compressed";
  }
  return "?";
}

OracleMode parse_mode(std::string_view text) {
  if (text == "exact") return OracleMode::Exact;
  if (text == "standard") return OracleMode::Standard;
  if (text == "phase") return OracleMode::Phase;
  if (text == "compressed") return OracleMode::Compressed;
  throw std::invalid_argument("unknown oracle mode '" + std::string(text) + "'");
}

std::uint64_t table_count(std::size_t N, std::size_t M) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < N; ++i) {
    if (count > (std::uint64_t{1} << 62) / std::max<std::size_t>(M, 1)) throw std::overflow_error("M^N overflows");
    count *= M;
  }
  return count;
}

// ---------------------------------------------------------------------------

TruthTable::TruthTable(std::size_t n, std::size_t m, std::vector<std::size_t> vals)
    : N(n), M(m), values(std::move(vals)) {
  if (N < 1 || M < 1) throw std::invalid_argument("truth table needs N, M >= 1");
  if (values.size() != N) throw std::invalid_argument("truth table length differs from N");
  for (auto v : values) {
    if (v >= M) throw std::invalid_argument("truth table value outside [0, M)");
  }
}

TruthTable TruthTable::from_index(std::size_t n, std::size_t m, std::uint64_t index) {
  std::vector<std::size_t> vals(n);
  for (std::size_t i = n; i-- > 0;) {
    vals[i] = static_cast<std::size_t>(index % m);
    index /= m;
  }
  return TruthTable(n, m, std::move(vals));
}

TruthTable TruthTable::sample(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> vals(n);
  for (auto& v : vals) v = uniform_index(rng, m);
  return TruthTable(n, m, std::move(vals));
}

std::uint64_t TruthTable::index() const {
  std::uint64_t idx = 0;
  for (auto v : values) idx = idx * M + v;
  return idx;
}

nlohmann::json TruthTable::to_json() const { return nlohmann::json(values); }

TruthTable TruthTable::from_json(std::size_t m, const nlohmann::json& j) {
  auto vals = j.get<std::vector<std::size_t>>();
  return TruthTable(vals.size(), m, std::move(vals));
}

// ---------------------------------------------------------------------------

Database::Database(std::size_t n, std::size_t m, std::vector<std::size_t> cells)
    : N_(n), M_(m), cells_(std::move(cells)) {
  if (cells_.size() != N_) throw std::invalid_argument("database length differs from N");
  for (auto c : cells_) {
    if (c > M_) throw std::invalid_argument("database cell outside [0, M] (M is bottom)");
  }
}

std::optional<std::size_t> Database::get(std::size_t x) const {
  const std::size_t c = cells_.at(x);
  if (c == M_) return std::nullopt;
  return c;
}

std::size_t Database::size() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [&](auto c) { return c != M_; }));
}

void Database::insert(std::size_t x, std::size_t y) {
  if (y >= M_) throw std::invalid_argument("database value outside [0, M)");
  if (cells_.at(x) != M_) throw std::logic_error("database cell " + std::to_string(x) + " is already set");
  cells_[x] = y;
}

std::string Database::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (std::size_t x = 0; x < N_; ++x) {
    if (cells_[x] == M_) continue;
    if (!first) out << ',';
    out << '(' << x << ',' << cells_[x] << ')';
    first = false;
  }
  out << '}';
  return out.str();
}

std::string table_register(std::size_t x) { return "H" + std::to_string(x); }
std::string database_register(std::size_t x) { return "D" + std::to_string(x); }

// ---------------------------------------------------------------------------
// Query kernels

namespace {

struct QuerySetup {
  std::size_t in;
  std::size_t out;
  std::size_t M;
  std::vector<QueryResponse> responses;  // per input value
};

QuerySetup setup_query(const RegisterLayout& layout, std::string_view in, std::string_view out, std::size_t N,
                       const QueryFilter* filter, bool point_must_match) {
  QuerySetup s{layout.index(in), layout.index(out), layout[layout.index(out)].size, {}};
  if (s.in == s.out) throw std::invalid_argument("query input and output registers must differ");
  if (layout[s.in].size != N) {
    throw std::invalid_argument("query input register '" + std::string(in) + "' must range over the oracle domain");
  }
  s.responses.resize(N);
  for (std::size_t x = 0; x < N; ++x) {
    s.responses[x] = filter ? (*filter)(x) : QueryResponse::oracle(x);
    if (s.responses[x].kind == QueryResponse::Kind::Oracle) {
      if (s.responses[x].value >= N) throw std::invalid_argument("query response points outside the domain");
      if (point_must_match && s.responses[x].value != x) {
        throw std::invalid_argument("superposed oracle modes require responses at the queried point");
      }
    }
  }
  return s;
}

std::size_t signed_add(std::size_t u, std::size_t v, int sign, std::size_t M) {
  v %= M;
  return sign >= 0 ? (u + v) % M : (u + M - v) % M;
}

std::vector<std::size_t> register_indices(const RegisterLayout& layout, std::size_t N, bool database) {
  std::vector<std::size_t> idx(N);
  for (std::size_t x = 0; x < N; ++x) idx[x] = layout.index(database ? database_register(x) : table_register(x));
  return idx;
}

}  // namespace

PureState exact_query(const TruthTable& table, const PureState& state, std::string_view in, std::string_view out,
                      int sign, const QueryFilter* filter) {
  const auto s = setup_query(state.layout(), in, out, table.N, filter, false);
  if (s.M != table.M) throw std::invalid_argument("query output register must range over Z/M");
  return apply_classical(
      state, in, out,
      [&](std::size_t x) -> std::size_t {
        const auto& r = s.responses[x];
        switch (r.kind) {
          case QueryResponse::Kind::Oracle: return table(r.value);
          case QueryResponse::Kind::Fixed: return r.value % s.M;
          case QueryResponse::Kind::Bottom: return 0;
        }
        return 0;
      },
      sign);
}

PureState sto_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign,
                    const QueryFilter* filter) {
  const auto& layout = state.layout();
  const auto s = setup_query(layout, in, out, N, filter, true);
  const auto h = register_indices(layout, N, false);
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) {
    const std::size_t x = layout.digit(label, s.in);
    const auto& r = s.responses[x];
    std::size_t add = 0;
    if (r.kind == QueryResponse::Kind::Oracle) add = layout.digit(label, h[x]);
    if (r.kind == QueryResponse::Kind::Fixed) add = r.value;
    const std::size_t u = layout.digit(label, s.out);
    entries.emplace_back(layout.with_digit(label, s.out, signed_add(u, add, sign, s.M)), amp);
  }
  return finish_state(layout, std::move(entries));
}

PureState pho_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign,
                    const QueryFilter* filter) {
  const auto& layout = state.layout();
  const auto s = setup_query(layout, in, out, N, filter, true);
  const auto h = register_indices(layout, N, false);
  const double base = 2.0 * std::numbers::pi / static_cast<double>(s.M);
  return apply_diagonal(state, [&](Label label) {
    const std::size_t x = layout.digit(label, s.in);
    const auto& r = s.responses[x];
    std::size_t value = 0;
    if (r.kind == QueryResponse::Kind::Oracle) value = layout.digit(label, h[x]);
    if (r.kind == QueryResponse::Kind::Fixed) value = r.value % s.M;
    const std::size_t u = layout.digit(label, s.out);
    const double angle = (sign >= 0 ? 1.0 : -1.0) * base * static_cast<double>((u * value) % s.M);
    return std::polar(1.0, angle);
  });
}

PureState phase_emulated_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N,
                               int sign, const QueryFilter* filter) {
  return inverse_qft(pho_query(qft(state, out), in, out, N, sign, filter), out);
}

namespace {

// Entries of the per-cell StdDecomp matrix, with `bottom` = M.
double std_decomp_coefficient(std::size_t row, std::size_t col, std::size_t M) {
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(M));
  if (row == M && col == M) return 0.0;
  if (row == M || col == M) return inv_sqrt;
  return (row == col ? 1.0 : 0.0) - 1.0 / static_cast<double>(M);
}

void std_decomp_entry(const RegisterLayout& layout, Label label, Complex amp, std::size_t cell_reg, std::size_t M,
                      std::vector<PureState::Entry>& out) {
  const std::size_t c = layout.digit(label, cell_reg);
  for (std::size_t row = 0; row <= M; ++row) {
    const double coeff = std_decomp_coefficient(row, c, M);
    if (coeff == 0.0) continue;
    out.emplace_back(layout.with_digit(label, cell_reg, row), amp * coeff);
  }
}

}  // namespace

PureState std_decomp(const PureState& state, std::size_t x) {
  const auto& layout = state.layout();
  const std::size_t reg = layout.index(database_register(x));
  const std::size_t M = layout[reg].size - 1;
  if (M < 1) throw std::invalid_argument("database cell alphabet must be M+1 with M >= 1");
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support() * (M + 1));
  for (const auto& [label, amp] : state.entries()) std_decomp_entry(layout, label, amp, reg, M, entries);
  return finish_state(layout, std::move(entries));
}

PureState std_decomp_controlled(const PureState& state, std::string_view in, std::size_t N, const QueryFilter* filter) {
  const auto& layout = state.layout();
  const std::size_t in_reg = layout.index(in);
  if (layout[in_reg].size != N) throw std::invalid_argument("StdDecomp control register must range over the domain");
  const auto d = register_indices(layout, N, true);
  const std::size_t M = layout[d[0]].size - 1;
  const std::size_t offset = fault::std_decomp_offset.load() % N;
  std::vector<bool> active(N, true);
  if (filter) {
    for (std::size_t x = 0; x < N; ++x) active[x] = (*filter)(x).kind == QueryResponse::Kind::Oracle;
  }
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support() * (M + 1));
  for (const auto& [label, amp] : state.entries()) {
    const std::size_t x = layout.digit(label, in_reg);
    if (!active[x]) {
      entries.emplace_back(label, amp);
      continue;
    }
    std_decomp_entry(layout, label, amp, d[(x + offset) % N], M, entries);
  }
  return finish_state(layout, std::move(entries));
}

PureState csto_prime(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign,
                     const QueryFilter* filter, std::size_t* bottom_hits) {
  const auto& layout = state.layout();
  const auto s = setup_query(layout, in, out, N, filter, true);
  const auto d = register_indices(layout, N, true);
  const std::size_t bottom = layout[d[0]].size - 1;
  std::vector<PureState::Entry> entries;
  entries.reserve(state.support());
  for (const auto& [label, amp] : state.entries()) {
    const std::size_t x = layout.digit(label, s.in);
    const auto& r = s.responses[x];
    std::size_t add = 0;
    if (r.kind == QueryResponse::Kind::Oracle) {
      const std::size_t cell = layout.digit(label, d[x]);
      if (cell == bottom) {
        if (bottom_hits) ++*bottom_hits;
      } else {
        add = cell;
      }
    } else if (r.kind == QueryResponse::Kind::Fixed) {
      add = r.value;
    }
    const std::size_t u = layout.digit(label, s.out);
    entries.emplace_back(layout.with_digit(label, s.out, signed_add(u, add, sign, s.M)), amp);
  }
  return finish_state(layout, std::move(entries));
}

PureState csto_query(const PureState& state, std::string_view in, std::string_view out, std::size_t N, int sign,
                     const QueryFilter* filter, std::size_t* bottom_hits) {
  auto s = std_decomp_controlled(state, in, N, filter);
  s = csto_prime(s, in, out, N, sign, filter, bottom_hits);
  return std_decomp_controlled(s, in, N, filter);
}

Database database_of(const RegisterLayout& layout, Label label, std::size_t N) {
  const auto d = register_indices(layout, N, true);
  const std::size_t M = layout[d[0]].size - 1;
  std::vector<std::size_t> cells(N);
  for (std::size_t x = 0; x < N; ++x) cells[x] = layout.digit(label, d[x]);
  return Database(N, M, std::move(cells));
}

double database_mass_above(const PureState& state, std::size_t N, std::size_t bound) {
  const auto& layout = state.layout();
  const auto d = register_indices(layout, N, true);
  const std::size_t bottom = layout[d[0]].size - 1;
  double mass = 0.0;
  for (const auto& [label, amp] : state.entries()) {
    std::size_t size = 0;
    for (auto reg : d) size += layout.digit(label, reg) != bottom ? 1 : 0;
    if (size > bound) mass += std::norm(amp);
  }
  return mass;
}

// ---------------------------------------------------------------------------
// OracleSession

OracleSession::OracleSession(OracleMode mode, std::size_t N, std::size_t M, const PureState& adversary,
                             std::optional<TruthTable> table)
    : mode_(mode), N_(N), M_(M), table_(std::move(table)) {
  if (N < 1 || M < 1) throw std::invalid_argument("oracle needs N, M >= 1");
  switch (mode) {
    case OracleMode::Exact: {
      if (!table_) throw std::invalid_argument("exact mode needs a truth table");
      if (table_->N != N || table_->M != M) throw std::invalid_argument("truth table shape differs from the session");
      state_ = adversary;
      break;
    }
    case OracleMode::Standard:
    case OracleMode::Phase: {
      const std::uint64_t tables = table_count(N, M);
      if (tables > dimension_guard()) {
        throw GuardExceeded("purified oracle needs " + std::to_string(tables) + " table configurations, guard is " +
                            std::to_string(dimension_guard()));
      }
      auto regs = adversary.layout().registers();
      for (std::size_t x = 0; x < N; ++x) regs.push_back({table_register(x), Role::Oracle, M});
      RegisterLayout layout(std::move(regs));
      const double scale = 1.0 / std::sqrt(static_cast<double>(tables));
      std::vector<PureState::Entry> entries;
      entries.reserve(adversary.support() * tables);
      for (const auto& [label, amp] : adversary.entries()) {
        for (std::uint64_t t = 0; t < tables; ++t) entries.emplace_back(label * tables + t, amp * scale);
      }
      state_ = finish_state(std::move(layout), std::move(entries));
      break;
    }
    case OracleMode::Compressed: {
      auto regs = adversary.layout().registers();
      for (std::size_t x = 0; x < N; ++x) regs.push_back({database_register(x), Role::Oracle, M + 1});
      RegisterLayout layout(std::move(regs));
      Label empty = 0;
      for (std::size_t x = 0; x < N; ++x) empty = empty * (M + 1) + M;
      const Label block = layout.dimension() / adversary.layout().dimension();
      std::vector<PureState::Entry> entries;
      entries.reserve(adversary.support());
      for (const auto& [label, amp] : adversary.entries()) entries.emplace_back(label * block + empty, amp);
      state_ = finish_state(std::move(layout), std::move(entries));
      break;
    }
  }
}

void OracleSession::set_state(PureState state) {
  for (const auto& name : oracle_registers()) {
    if (!state.layout().contains(name)) throw std::invalid_argument("set_state dropped oracle register " + name);
  }
  state_ = std::move(state);
}

std::vector<std::string> OracleSession::oracle_registers() const {
  std::vector<std::string> names;
  if (mode_ == OracleMode::Exact) return names;
  for (std::size_t x = 0; x < N_; ++x) {
    names.push_back(mode_ == OracleMode::Compressed ? database_register(x) : table_register(x));
  }
  return names;
}

std::vector<std::string> OracleSession::adversary_registers() const {
  std::vector<std::string> names;
  for (const auto& reg : state_.layout().registers()) {
    if (reg.role != Role::Oracle) names.push_back(reg.name);
  }
  return names;
}

void OracleSession::begin_window(std::optional<std::size_t> budget) {
  window_count_ = 0;
  budget_ = budget;
}

void OracleSession::apply(std::string_view in, std::string_view out, int sign, const QueryFilter* filter) {
  if (state_.layout()[state_.layout().index(out)].size != M_) {
    throw std::invalid_argument("query output register must range over Z/M");
  }
  switch (mode_) {
    case OracleMode::Exact: state_ = exact_query(*table_, state_, in, out, sign, filter); break;
    case OracleMode::Standard: state_ = sto_query(state_, in, out, N_, sign, filter); break;
    case OracleMode::Phase: state_ = phase_emulated_query(state_, in, out, N_, sign, filter); break;
    case OracleMode::Compressed: state_ = csto_query(state_, in, out, N_, sign, filter, &bottom_hits_); break;
  }
}

void OracleSession::query(std::string_view in, std::string_view out, int sign, const QueryFilter* filter) {
  if (budget_ && window_count_ + 1 > *budget_) {
    throw BudgetExceeded("query budget of " + std::to_string(*budget_) + " exhausted");
  }
  apply(in, out, sign, filter);
  ++query_count_;
  ++window_count_;
}

void OracleSession::query_uncounted(std::string_view in, std::string_view out, int sign, const QueryFilter* filter) {
  apply(in, out, sign, filter);
}

std::vector<SessionBranch> classical_query(const OracleSession& session, std::size_t x) {
  if (x >= session.N()) throw std::invalid_argument("classical query outside the domain");
  if (session.mode() == OracleMode::Exact) return {{(*session.table())(x), 1.0, session}};
  const std::string in = "_cq_x";
  const std::string out = "_cq_u";
  OracleSession work = session;
  work.set_state(extend(extend(session.state(), {in, Role::Workspace, session.N()}, x),
                        {out, Role::Workspace, session.M()}, 0));
  work.query_uncounted(in, out);
  std::vector<SessionBranch> branches;
  for (auto& rec : measure_register(work.state(), out)) {
    OracleSession b = work;
    b.set_state(std::move(rec.post_state));
    b.query_uncounted(in, out, -1);
    b.set_state(discard(discard(b.state(), out), in));
    branches.push_back({static_cast<std::size_t>(rec.outcome), rec.probability, std::move(b)});
  }
  return branches;
}

}  // namespace qtsl
