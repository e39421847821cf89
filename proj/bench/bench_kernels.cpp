// Serial versus OpenMP timings for the parallel kernels. Each case also
// reports the largest difference between the two results, which should be 0.

#include "spinnet/gate_synthesis.hpp"
#include "spinnet/hamiltonians.hpp"
#include "spinnet/modular_network.hpp"
#include "spinnet/transport_chain.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

namespace {

using namespace spinnet;

template <class F>
double time_ms(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

template <class T>
double max_diff(const std::vector<T>& a, const std::vector<T>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, static_cast<double>(std::abs(a[i] - b[i])));
  return d;
}

void report(const char* name, double serial, double parallel, double diff) {
  std::printf("%-28s %12.2f %12.2f %9.2fx %12.3g\n", name, serial, parallel, serial / parallel, diff);
}

template <class T>
void compare(const char* name, int repeats, const std::function<std::vector<T>(Exec)>& run) {
  std::vector<T> s, p;
  const double ts = time_ms(repeats, [&] { s = run(Exec::serial); });
  const double tp = time_ms(repeats, [&] { p = run(Exec::parallel); });
  report(name, ts, tp, max_diff(s, p));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) set_thread_count(std::atoi(argv[1]));
  std::printf("threads: %d\n", thread_count());
  std::printf("%-28s %12s %12s %10s %12s\n", "kernel", "serial ms", "parallel ms", "speedup", "max diff");

  const CompositeSpec composite{kTwoPi * 100.0, kTwoPi * 10.0, kTwoPi * 10.0};
  const SpectralPropagator prop(build_total(composite.network(), HamiltonianKind(CouplingType::xy)));
  Amplitudes psi0 = Amplitudes::Zero(64), target = Amplitudes::Zero(64);
  psi0(32) = 1.0;
  target(1) = 1.0;
  const OverlapSeries series(prop, psi0, {target});
  const auto times = time_grid(0.0, 20.0, 1e-4);
  compare<Complex>("overlap scan (64 dim)", 3, [&](Exec e) { return series.scan(times, e); });

  const ChainSpec chain;
  compare<double>("bloch grid 300x300", 3,
                  [&](Exec e) { return bloch_grid_fidelities(chain, 1.005, 300, 300, 0.0, e); });

  compare<double>("modular composite", 3, [&](Exec e) {
    return simulate_naive_composite(composite, ket_plus(), 2.5, 1e-4, e).site_fidelity[5];
  });

  compare<double>("cnot differential evolution", 1, [&](Exec e) {
    OptimizerOptions o;
    o.budget = 6400;
    o.exec = e;
    return optimize_cnot(o).history;
  });
  return 0;
}
