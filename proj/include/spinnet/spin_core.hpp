#pragma once

// Dense operator algebra for small spin-1/2 registers.
//
// Conventions shared by every module:
//   * hbar = 1, frequencies in rad/s, times in seconds.
//   * s^z = diag(+1/2, -1/2); basis state |0> is the m = +1/2 eigenstate and
//     |1> is the flipped (m = -1/2) state.
//   * site 1 is the leftmost (most significant) tensor factor, so the bit of
//     site k inside a basis index is (index >> (n - k)) & 1.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spinnet {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Amplitudes = Eigen::VectorXcd;

inline constexpr int kMaxSpins = 14;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Raised when a computed result violates a conservation or unitarity
// tolerance. The CLI maps it to exit code 3.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws NumericFailure if |U^dagger U - I| exceeds tol.
void require_unitary(const Operator& u, double tol, const char* what);

enum class Axis { x, y, z, plus, minus };

Axis parse_axis(std::string_view name);

// Dimension 2^n, after checking 1 <= n <= kMaxSpins.
std::size_t hilbert_dim(int n);

// Bit of `site` (1-based) in basis index `index` of an n-spin register.
inline int site_bit(std::size_t index, int n, int site) {
  return static_cast<int>((index >> (n - site)) & 1u);
}
inline std::size_t site_mask(int n, int site) { return std::size_t{1} << (n - site); }

// Number of flipped spins (set bits) in a basis index.
int excitation_count(std::size_t index);

// Basis index of a bit string such as "010101" (leftmost character = site 1).
std::size_t basis_index(std::string_view bits);

// 2x2 single-spin operator for the given axis.
Operator single_spin(Axis axis);

// I (x) ... (x) s (x) ... (x) I with s at position `site`.
Operator spin_operator(int n, int site, Axis axis);

Operator commutator(const Operator& a, const Operator& b);

// max_ij |a_ij|
double max_abs(const Operator& a);
// max_ij |H - H^dagger|
double hermiticity_error(const Operator& h);
// max_ij |U^dagger U - I|
double unitarity_error(const Operator& u);

// |Tr(u^dagger v)| / d. Both operands must be unitary within 1e-8.
double gate_fidelity(const Operator& u, const Operator& v);

/// Normalized pure state in the computational basis.
///
/// Construction normalizes nothing: the amplitudes must already have unit
/// 2-norm (within 1e-12), otherwise std::invalid_argument is thrown. Use
/// PureState::normalized() to rescale arbitrary input.
class PureState {
 public:
  explicit PureState(Amplitudes amplitudes);

  static PureState normalized(Amplitudes amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);
  static PureState basis(std::string_view bits);
  // Single qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static PureState bloch(double theta, double phi);
  // Tensor product, leftmost factor first.
  static PureState product(const std::vector<PureState>& factors);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Amplitudes& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  Amplitudes amps_;
};

// Common single-qubit states.
PureState ket0();
PureState ket1();
PureState ket_plus();
PureState ket_minus();

Complex inner(const PureState& a, const PureState& b);

// |<a|b>|, the trace-distance fidelity specialised to pure states.
double state_fidelity(const PureState& a, const PureState& b);

struct Coupling {
  int i;
  int j;
  double strength;  // rad/s
};

/// Undirected weighted graph of n spins with per-site Zeeman fields.
class SpinNetwork {
 public:
  explicit SpinNetwork(int n);

  // Adds the unordered edge {i, j}. Throws on i == j, out-of-range sites,
  // duplicates, or a non-finite coupling.
  SpinNetwork& add_edge(int i, int j, double strength);
  SpinNetwork& set_field(int site, double value);
  SpinNetwork& set_fields(const std::vector<double>& values);

  int size() const { return n_; }
  const std::vector<Coupling>& edges() const { return edges_; }
  const std::vector<double>& fields() const { return fields_; }
  double field(int site) const;
  bool has_edge(int i, int j) const;

  // Same graph with every coupling replaced by `strength`.
  SpinNetwork with_uniform_coupling(double strength) const;
  // Subgraph keeping only edges accepted by the predicate; fields are kept.
  template <class Pred>
  SpinNetwork filter_edges(Pred keep) const {
    SpinNetwork out(n_);
    out.fields_ = fields_;
    for (const auto& e : edges_)
      if (keep(e)) out.add_edge(e.i, e.j, e.strength);
    return out;
  }

 private:
  void check_site(int site) const;

  int n_;
  std::vector<Coupling> edges_;
  std::vector<double> fields_;
};

}  // namespace spinnet
