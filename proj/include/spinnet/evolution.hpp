#pragma once

#include "spinnet/spin_core.hpp"

#include <cstddef>
#include <vector>

namespace spinnet {

// exp(-i h t) by Hermitian eigendecomposition. Throws std::invalid_argument
// if h is not Hermitian (relative tolerance 1e-9).
Operator propagator(const Operator& h, double t);

/// Eigendecomposition of a fixed Hermitian generator, reused for many times.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Operator& h);

  Eigen::Index dim() const { return energies_.size(); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Operator& eigenvectors() const { return vectors_; }

  Operator at(double t) const;
  Amplitudes apply(double t, const Amplitudes& psi) const;

 private:
  Eigen::VectorXd energies_;
  Operator vectors_;
};

struct Segment {
  Operator hamiltonian;
  double duration;
};

/// Piecewise-constant evolution: segments applied in time order.
class Schedule {
 public:
  Schedule() = default;

  Schedule& add(Operator hamiltonian, double duration);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  // 0 for an empty schedule.
  Eigen::Index dim() const { return segments_.empty() ? 0 : segments_.front().hamiltonian.rows(); }
  double total_time() const;

  // U_k ... U_2 U_1 (first segment rightmost).
  Operator propagator() const;

 private:
  std::vector<Segment> segments_;
};

PureState evolve(const Schedule& schedule, const PureState& start);

/// Ordered list of computational basis indices spanning a subspace.
class SubspaceBasis {
 public:
  SubspaceBasis(std::size_t parent_dim, std::vector<std::size_t> indices);

  std::size_t parent_dim() const { return parent_dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  // Position of a parent index inside the basis, or size() if absent.
  std::size_t position(std::size_t parent_index) const;

 private:
  std::size_t parent_dim_;
  std::vector<std::size_t> indices_;
};

// All basis states of n spins with exactly k flipped spins, ascending index.
// For n = 3, k = 1 this is (|001>, |010>, |100>).
SubspaceBasis excitation_sector(int n, int k);

// (|10..0>, |010..0>, ..., |0..01>): one flip, ordered by flipped site.
SubspaceBasis single_flip_by_site(int n);

// The sub-block of h in the given basis order. Throws std::domain_error if
// the subspace is not invariant (|h_cb| >= tol for c outside, b inside).
Operator restrict(const Operator& h, const SubspaceBasis& basis, double tol = 1e-10);

Amplitudes embed(const SubspaceBasis& basis, const Amplitudes& sub);
Amplitudes project(const SubspaceBasis& basis, const Amplitudes& full);

// Probability outside the subspace, 1 - sum_b |psi_b|^2 (clamped at 0).
double leakage(const SubspaceBasis& basis, const Amplitudes& full);

// Probability of finding k flipped spins, for k = 0..n.
std::vector<double> sector_populations(int n, const Amplitudes& full);

}  // namespace spinnet
