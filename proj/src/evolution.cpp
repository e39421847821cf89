#include "spinnet/evolution.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace spinnet {

namespace {

void require_hermitian(const Operator& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("generator must be square");
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_error(h) > 1e-9 * scale) throw std::invalid_argument("generator is not Hermitian");
}

}  // namespace

SpectralPropagator::SpectralPropagator(const Operator& h) {
  require_hermitian(h);
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Operator sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Operator SpectralPropagator::at(double t) const {
  Eigen::VectorXcd phases(energies_.size());
  for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

Amplitudes SpectralPropagator::apply(double t, const Amplitudes& psi) const {
  if (psi.size() != energies_.size()) throw std::invalid_argument("apply: dimension mismatch");
  Amplitudes c = vectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -energies_(k) * t);
  return vectors_ * c;
}

Operator propagator(const Operator& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("propagator: time must be finite");
  if (t == 0.0) {
    require_hermitian(h);
    return Operator::Identity(h.rows(), h.cols());
  }
  return SpectralPropagator(h).at(t);
}

Schedule& Schedule::add(Operator hamiltonian, double duration) {
  if (!std::isfinite(duration) || duration < 0.0)
    throw std::invalid_argument("segment duration must be finite and >= 0");
  if (hamiltonian.rows() != hamiltonian.cols()) throw std::invalid_argument("segment generator must be square");
  if (!segments_.empty() && hamiltonian.rows() != dim())
    throw std::invalid_argument("segment dimension mismatch");
  segments_.push_back({std::move(hamiltonian), duration});
  return *this;
}

double Schedule::total_time() const {
  double t = 0.0;
  for (const auto& s : segments_) t += s.duration;
  return t;
}

Operator Schedule::propagator() const {
  if (segments_.empty()) throw std::logic_error("propagator of an empty schedule");
  Operator u = Operator::Identity(dim(), dim());
  for (const auto& s : segments_) u = spinnet::propagator(s.hamiltonian, s.duration) * u;
  return u;
}

PureState evolve(const Schedule& schedule, const PureState& start) {
  if (schedule.empty()) return start;
  if (static_cast<Eigen::Index>(start.dim()) != schedule.dim())
    throw std::invalid_argument("evolve: dimension mismatch");
  Amplitudes psi = start.amplitudes();
  for (const auto& s : schedule.segments()) {
    if (s.duration == 0.0) continue;
    psi = SpectralPropagator(s.hamiltonian).apply(s.duration, psi);
  }
  // Renormalize away round-off; the drift is far below the 1e-12 state check.
  return PureState::normalized(std::move(psi));
}

SubspaceBasis::SubspaceBasis(std::size_t parent_dim, std::vector<std::size_t> indices)
    : parent_dim_(parent_dim), indices_(std::move(indices)) {
  std::unordered_set<std::size_t> seen;
  for (auto idx : indices_) {
    if (idx >= parent_dim_) throw std::out_of_range("subspace index outside parent space");
    if (!seen.insert(idx).second) throw std::invalid_argument("subspace indices must be distinct");
  }
}

std::size_t SubspaceBasis::position(std::size_t parent_index) const {
  auto it = std::find(indices_.begin(), indices_.end(), parent_index);
  return static_cast<std::size_t>(it - indices_.begin());
}

SubspaceBasis excitation_sector(int n, int k) {
  const std::size_t dim = hilbert_dim(n);
  if (k < 0 || k > n) throw std::invalid_argument("excitation number out of range");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dim; ++i)
    if (excitation_count(i) == k) idx.push_back(i);
  return SubspaceBasis(dim, std::move(idx));
}

SubspaceBasis single_flip_by_site(int n) {
  const std::size_t dim = hilbert_dim(n);
  std::vector<std::size_t> idx;
  for (int s = 1; s <= n; ++s) idx.push_back(site_mask(n, s));
  return SubspaceBasis(dim, std::move(idx));
}

Operator restrict(const Operator& h, const SubspaceBasis& basis, double tol) {
  if (static_cast<std::size_t>(h.rows()) != basis.parent_dim() || h.rows() != h.cols())
    throw std::invalid_argument("restrict: dimension mismatch");
  std::vector<char> inside(basis.parent_dim(), 0);
  for (auto idx : basis.indices()) inside[idx] = 1;
  for (auto b : basis.indices())
    for (std::size_t c = 0; c < basis.parent_dim(); ++c)
      if (!inside[c] && std::abs(h(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(b))) >= tol)
        throw std::domain_error("restrict: subspace is not invariant under the operator");
  const auto m = static_cast<Eigen::Index>(basis.size());
  Operator out(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      out(r, c) = h(static_cast<Eigen::Index>(basis[static_cast<std::size_t>(r)]),
                    static_cast<Eigen::Index>(basis[static_cast<std::size_t>(c)]));
  return out;
}

Amplitudes embed(const SubspaceBasis& basis, const Amplitudes& sub) {
  if (static_cast<std::size_t>(sub.size()) != basis.size()) throw std::invalid_argument("embed: size mismatch");
  Amplitudes full = Amplitudes::Zero(static_cast<Eigen::Index>(basis.parent_dim()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    full(static_cast<Eigen::Index>(basis[k])) = sub(static_cast<Eigen::Index>(k));
  return full;
}

Amplitudes project(const SubspaceBasis& basis, const Amplitudes& full) {
  if (static_cast<std::size_t>(full.size()) != basis.parent_dim())
    throw std::invalid_argument("project: size mismatch");
  Amplitudes sub(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    sub(static_cast<Eigen::Index>(k)) = full(static_cast<Eigen::Index>(basis[k]));
  return sub;
}

double leakage(const SubspaceBasis& basis, const Amplitudes& full) {
  return std::max(0.0, full.squaredNorm() - project(basis, full).squaredNorm());
}

std::vector<double> sector_populations(int n, const Amplitudes& full) {
  const std::size_t dim = hilbert_dim(n);
  if (static_cast<std::size_t>(full.size()) != dim) throw std::invalid_argument("sector_populations: size mismatch");
  std::vector<double> pops(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    pops[static_cast<std::size_t>(excitation_count(i))] += std::norm(full(static_cast<Eigen::Index>(i)));
  return pops;
}

}  // namespace spinnet
