#pragma once

// Sparse pure-state simulation over composite registers with modular
// alphabets. Every register holds residues 0..size-1; a basis label is the
// mixed-radix index of the digit tuple with the first register most
// significant, so numeric label order is lexicographic digit order.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qtsl {

using Complex = std::complex<double>;
using Label = std::uint64_t;

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;
/// Tolerance on the unit-norm invariant of a PureState.
inline constexpr double kNormTolerance = 1e-9;

/// A dense operation would exceed the configured dimension guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An adversary or verifier used more oracle queries than it declared.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension guard for dense work (4096 unless QTSL_GUARD_OVERRIDE is set).
/// A dense complex matrix at the guard costs guard^2 * 16 bytes.
std::size_t dimension_guard();

enum class Role { Input, Output, Answer, Decision, Workspace, Oracle, Advice };

struct Register {
  std::string name;
  Role role = Role::Workspace;
  std::size_t size = 1;

  bool operator==(const Register&) const = default;
};

class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> registers);

  std::size_t count() const { return registers_.size(); }
  const std::vector<Register>& registers() const { return registers_; }
  const Register& operator[](std::size_t i) const { return registers_.at(i); }

  /// Throws std::invalid_argument for an unknown name.
  std::size_t index(std::string_view name) const;
  bool contains(std::string_view name) const;

  Label dimension() const { return dimension_; }
  Label stride(std::size_t reg) const { return strides_[reg]; }
  std::size_t digit(Label label, std::size_t reg) const {
    return static_cast<std::size_t>((label / strides_[reg]) % registers_[reg].size);
  }
  Label with_digit(Label label, std::size_t reg, std::size_t value) const {
    return label - digit(label, reg) * strides_[reg] + value * strides_[reg];
  }

  Label encode(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decode(Label label) const;

  RegisterLayout append(Register reg) const;
  RegisterLayout remove(std::string_view name) const;

  /// Human-readable label, e.g. "x=1,u=0".
  std::string describe(Label label) const;

  bool operator==(const RegisterLayout& other) const { return registers_ == other.registers_; }

 private:
  std::vector<Register> registers_;
  std::vector<Label> strides_;
  Label dimension_ = 1;
};

/// Normalized sparse vector over a layout's basis, stored sorted by label.
class PureState {
 public:
  using Entry = std::pair<Label, Complex>;

  PureState() = default;
  /// Merges duplicate labels, prunes dust and validates the unit norm.
  PureState(RegisterLayout layout, std::vector<Entry> entries);

  /// Rescales to unit norm; throws std::domain_error on the zero vector.
  static PureState normalized(RegisterLayout layout, std::vector<Entry> entries);
  static PureState basis(RegisterLayout layout, std::span<const std::size_t> digits);
  /// All registers zero.
  static PureState zero(RegisterLayout layout);

  const RegisterLayout& layout() const { return layout_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Complex amplitude(Label label) const;
  double norm_squared() const;

 private:
  struct Unchecked {};
  PureState(Unchecked, RegisterLayout layout, std::vector<Entry> entries)
      : layout_(std::move(layout)), entries_(std::move(entries)) {}
  friend PureState finish_state(RegisterLayout, std::vector<Entry>, bool);

  RegisterLayout layout_;
  std::vector<Entry> entries_;
};

/// Sorts, merges, prunes. With `check_norm` the result must be unit norm.
PureState finish_state(RegisterLayout layout, std::vector<PureState::Entry> entries, bool check_norm = true);

struct MeasurementRecord {
  std::int64_t outcome = 0;
  double probability = 0.0;
  PureState post_state;
};

/// Maps |x, u> to |x, u + sign * f(x) mod M> where M is the alphabet of `out`.
PureState apply_classical(const PureState& state, std::string_view in, std::string_view out,
                          const std::function<std::size_t(std::size_t)>& f, int sign = 1);

/// Applies a reversible classical map on labels. Throws if it is not injective
/// on the support.
PureState apply_permutation(const PureState& state, const std::function<Label(Label)>& map);

/// Applies a dense unitary to the listed registers (first listed is most
/// significant in the matrix index).
PureState apply_unitary(const PureState& state, std::span<const std::string> regs, const Eigen::MatrixXcd& matrix);
PureState apply_unitary(const PureState& state, std::string_view reg, const Eigen::MatrixXcd& matrix);

PureState apply_diagonal(const PureState& state, const std::function<Complex(Label)>& phase);

Eigen::MatrixXcd qft_matrix(std::size_t n, bool inverse = false);
PureState qft(const PureState& state, std::string_view reg);
PureState inverse_qft(const PureState& state, std::string_view reg);

/// Branches ordered by outcome id; zero-probability outcomes are omitted.
std::vector<MeasurementRecord> measure(const PureState& state, const std::function<std::int64_t(Label)>& partition);
std::vector<MeasurementRecord> measure_register(const PureState& state, std::string_view reg);

/// Throws std::domain_error when the outcome has zero probability.
const MeasurementRecord& select_outcome(const std::vector<MeasurementRecord>& records, std::int64_t outcome);

Complex inner_product(const PureState& a, const PureState& b);
double trace_distance_pure(const PureState& a, const PureState& b);
/// |<a|b>| == 1 within kNormTolerance.
bool equal_up_to_phase(const PureState& a, const PureState& b);

/// Tensor a new register in basis state `value` onto the state.
PureState extend(const PureState& state, Register reg, std::size_t value = 0);
/// Drops a register that is in a definite basis value; throws std::logic_error
/// when it is still entangled or in superposition.
PureState discard(const PureState& state, std::string_view reg);
/// The definite value of a register, if it has one.
std::optional<std::size_t> definite_value(const PureState& state, std::string_view reg);

struct WeightedState {
  double weight = 0.0;
  PureState state;
};
using Ensemble = std::vector<WeightedState>;

/// Density operator restricted to the support it was built from.
struct DensityMatrix {
  std::vector<Label> basis;  // sub-labels over the kept registers, sorted
  Eigen::MatrixXcd rho;
};

/// Partial trace onto `keep` (in the given order).
DensityMatrix reduced_density(const Ensemble& ensemble, std::span<const std::string> keep);
DensityMatrix reduced_density(const PureState& state, std::span<const std::string> keep);
/// Half the trace norm of the difference, by eigen-decomposition.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance_mixed(const Ensemble& a, const Ensemble& b);

}  // namespace qtsl
