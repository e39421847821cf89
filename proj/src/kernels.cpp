#include "spinnet/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace spinnet {

void set_thread_count(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

OverlapSeries::OverlapSeries(const SpectralPropagator& prop, const Amplitudes& psi0,
                             const std::vector<Amplitudes>& targets)
    : energies_(prop.energies()) {
  if (psi0.size() != prop.dim()) throw std::invalid_argument("overlap series: state dimension mismatch");
  const Amplitudes c0 = prop.eigenvectors().adjoint() * psi0;
  for (const auto& t : targets) {
    if (t.size() != prop.dim()) throw std::invalid_argument("overlap series: target dimension mismatch");
    const Amplitudes ct = prop.eigenvectors().adjoint() * t;
    weights_.push_back(ct.conjugate().cwiseProduct(c0));
  }
}

Complex OverlapSeries::at(std::size_t target, double t) const {
  const Amplitudes& w = weights_.at(target);
  Complex acc{};
  for (Eigen::Index k = 0; k < w.size(); ++k) acc += w(k) * std::polar(1.0, -energies_(k) * t);
  return acc;
}

std::vector<Complex> OverlapSeries::scan(std::span<const double> times, Exec exec) const {
  const std::size_t m = target_count();
  std::vector<Complex> out(times.size() * m);
  const auto n = static_cast<long long>(times.size());
  auto fill = [&](long long i) {
    const double t = times[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < m; ++j) out[static_cast<std::size_t>(i) * m + j] = at(j, t);
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) fill(i);
  } else {
    for (long long i = 0; i < n; ++i) fill(i);
  }
  return out;
}

std::vector<double> time_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
  if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0) throw std::invalid_argument("invalid time window");
  const auto count = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = t0 + static_cast<double>(i) * dt;
  return grid;
}

Peak global_max(std::span<const double> times, std::span<const double> values) {
  if (values.empty() || times.size() != values.size()) throw std::invalid_argument("global_max: bad series");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return {best, times[best], values[best]};
}

std::optional<Peak> first_peak_above(std::span<const double> times, std::span<const double> values,
                                     double threshold) {
  if (times.size() != values.size()) throw std::invalid_argument("first_peak_above: bad series");
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] > threshold && values[i] >= values[i - 1] && values[i] >= values[i + 1])
      return Peak{i, times[i], values[i]};
  return std::nullopt;
}

}  // namespace spinnet
