#include "spinnet/spin_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace spinnet {

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  if (name == "plus" || name == "+") return Axis::plus;
  if (name == "minus" || name == "-") return Axis::minus;
  throw std::invalid_argument("unknown spin axis: " + std::string(name));
}

std::size_t hilbert_dim(int n) {
  if (n < 1) throw std::invalid_argument("spin count must be >= 1");
  if (n > kMaxSpins)
    throw std::invalid_argument("spin count " + std::to_string(n) + " exceeds limit " +
                                std::to_string(kMaxSpins));
  return std::size_t{1} << n;
}

int excitation_count(std::size_t index) { return std::popcount(index); }

std::size_t basis_index(std::string_view bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxSpins))
    throw std::invalid_argument("bit string length out of range");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0/1");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return index;
}

Operator single_spin(Axis axis) {
  const Complex i{0.0, 1.0};
  Operator s = Operator::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      s(0, 1) = 0.5;
      s(1, 0) = 0.5;
      break;
    case Axis::y:
      s(0, 1) = -0.5 * i;
      s(1, 0) = 0.5 * i;
      break;
    case Axis::z:
      s(0, 0) = 0.5;
      s(1, 1) = -0.5;
      break;
    case Axis::plus:  // |1> (m=-1/2) -> |0> (m=+1/2)
      s(0, 1) = 1.0;
      break;
    case Axis::minus:
      s(1, 0) = 1.0;
      break;
  }
  return s;
}

Operator spin_operator(int n, int site, Axis axis) {
  const std::size_t dim = hilbert_dim(n);
  if (site < 1 || site > n) throw std::out_of_range("site index out of range");
  const Operator s = single_spin(axis);
  // I_left (x) s (x) I_right, filled blockwise without a Kronecker routine.
  const std::size_t right = std::size_t{1} << (n - site);
  const std::size_t left = dim / (2 * right);
  Operator out = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t l = 0; l < left; ++l)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (s(a, b) == Complex{}) continue;
        for (std::size_t r = 0; r < right; ++r) {
          const auto row = static_cast<Eigen::Index>((l * 2 + a) * right + r);
          const auto col = static_cast<Eigen::Index>((l * 2 + b) * right + r);
          out(row, col) = s(a, b);
        }
      }
  return out;
}

Operator commutator(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("commutator: dimension mismatch");
  return a * b - b * a;
}

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Operator& h) { return max_abs(h - h.adjoint()); }

double unitarity_error(const Operator& u) {
  return max_abs(u.adjoint() * u - Operator::Identity(u.rows(), u.cols()));
}

void require_unitary(const Operator& u, double tol, const char* what) {
  const double err = unitarity_error(u);
  if (!(err <= tol))
    throw NumericFailure(std::string(what) + ": unitarity error " + std::to_string(err) + " exceeds tolerance");
}

double gate_fidelity(const Operator& u, const Operator& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw std::invalid_argument("gate_fidelity: dimension mismatch");
  if (unitarity_error(u) > 1e-8 || unitarity_error(v) > 1e-8)
    throw std::invalid_argument("gate_fidelity: operand is not unitary");
  // Tr(u^dagger v) = sum_ij conj(u_ij) v_ij
  const Complex tr = (u.conjugate().cwiseProduct(v)).sum();
  return std::min(1.0, std::abs(tr) / static_cast<double>(u.rows()));
}

PureState::PureState(Amplitudes amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("empty state");
  if (std::abs(amps_.norm() - 1.0) > 1e-12) throw std::invalid_argument("state is not normalized");
}

PureState PureState::normalized(Amplitudes amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("cannot normalize state");
  return PureState(amplitudes / norm);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("basis index out of range");
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(a));
}

PureState PureState::basis(std::string_view bits) {
  return basis(std::size_t{1} << bits.size(), basis_index(bits));
}

PureState PureState::bloch(double theta, double phi) {
  Amplitudes a(2);
  a(0) = std::cos(theta / 2.0);
  a(1) = std::polar(std::sin(theta / 2.0), phi);
  return normalized(std::move(a));
}

PureState PureState::product(const std::vector<PureState>& factors) {
  if (factors.empty()) throw std::invalid_argument("product of no factors");
  Amplitudes acc = factors.front().amplitudes();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const Amplitudes& f = factors[k].amplitudes();
    Amplitudes next(acc.size() * f.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * f.size(), f.size()) = acc(i) * f;
    acc = std::move(next);
  }
  return normalized(std::move(acc));
}

PureState ket0() { return PureState::basis(2, 0); }
PureState ket1() { return PureState::basis(2, 1); }
PureState ket_plus() {
  Amplitudes a(2);
  a << 1.0, 1.0;
  return PureState::normalized(a);
}
PureState ket_minus() {
  Amplitudes a(2);
  a << 1.0, -1.0;
  return PureState::normalized(a);
}

Complex inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

double state_fidelity(const PureState& a, const PureState& b) {
  return std::min(1.0, std::abs(inner(a, b)));
}

SpinNetwork::SpinNetwork(int n) : n_(n), fields_(static_cast<std::size_t>(n), 0.0) {
  hilbert_dim(n);
}

void SpinNetwork::check_site(int site) const {
  if (site < 1 || site > n_) throw std::out_of_range("site " + std::to_string(site) + " out of range");
}

SpinNetwork& SpinNetwork::add_edge(int i, int j, double strength) {
  check_site(i);
  check_site(j);
  if (i == j) throw std::invalid_argument("self-coupling is not allowed");
  if (!std::isfinite(strength)) throw std::invalid_argument("coupling must be finite");
  if (has_edge(i, j))
    throw std::invalid_argument("duplicate edge " + std::to_string(i) + "-" + std::to_string(j));
  edges_.push_back({std::min(i, j), std::max(i, j), strength});
  return *this;
}

SpinNetwork& SpinNetwork::set_field(int site, double value) {
  check_site(site);
  if (!std::isfinite(value)) throw std::invalid_argument("field must be finite");
  fields_[static_cast<std::size_t>(site - 1)] = value;
  return *this;
}

SpinNetwork& SpinNetwork::set_fields(const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("field count mismatch");
  for (int s = 1; s <= n_; ++s) set_field(s, values[static_cast<std::size_t>(s - 1)]);
  return *this;
}

double SpinNetwork::field(int site) const {
  check_site(site);
  return fields_[static_cast<std::size_t>(site - 1)];
}

bool SpinNetwork::has_edge(int i, int j) const {
  const int a = std::min(i, j), b = std::max(i, j);
  return std::any_of(edges_.begin(), edges_.end(), [&](const Coupling& e) { return e.i == a && e.j == b; });
}

SpinNetwork SpinNetwork::with_uniform_coupling(double strength) const {
  SpinNetwork out(n_);
  out.fields_ = fields_;
  for (const auto& e : edges_) out.add_edge(e.i, e.j, strength);
  return out;
}

}  // namespace spinnet
