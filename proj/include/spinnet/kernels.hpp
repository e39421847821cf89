#pragma once

// Hot loops with a serial reference and an OpenMP variant. The two paths
// perform identical arithmetic per element, so results agree bit for bit.

#include "spinnet/evolution.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace spinnet {

enum class Exec { serial, parallel };

// Sets the OpenMP thread count; values < 1 keep the runtime default.
void set_thread_count(int threads);
int thread_count();

// out[i] = fn(i) for i in [0, count).
template <class T, class F>
std::vector<T> map_index(std::size_t count, Exec exec, F&& fn) {
  std::vector<T> out(count);
  const auto n = static_cast<long long>(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  }
  return out;
}

/// <target_j| exp(-i H t) |psi0> for many times and a few targets, from a
/// single eigendecomposition: sum_k <target_j|v_k><v_k|psi0> e^{-i w_k t}.
class OverlapSeries {
 public:
  OverlapSeries(const SpectralPropagator& prop, const Amplitudes& psi0, const std::vector<Amplitudes>& targets);

  std::size_t target_count() const { return weights_.size(); }
  Complex at(std::size_t target, double t) const;

  // result[i * target_count() + j] = overlap of target j at times[i].
  std::vector<Complex> scan(std::span<const double> times, Exec exec) const;

 private:
  Eigen::VectorXd energies_;
  std::vector<Amplitudes> weights_;
};

// Uniform grid t0, t0 + dt, ... up to t1 (inclusive within round-off).
std::vector<double> time_grid(double t0, double t1, double dt);

struct Peak {
  std::size_t index;
  double t;
  double value;
};

// Largest value (first occurrence). Throws on empty or mismatched input.
Peak global_max(std::span<const double> times, std::span<const double> values);

// First interior point that is >= both neighbours and above threshold;
// nullopt if none.
std::optional<Peak> first_peak_above(std::span<const double> times, std::span<const double> values,
                                     double threshold);

}  // namespace spinnet
