#pragma once

// Composite chain + router experiments with switched barrier fields, and
// resonant transport on general graphs.

#include "spinnet/router.hpp"
#include "spinnet/transport_chain.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spinnet {

/// 3-spin chain (1,2,3) fused with a 4-spin router whose input is site 3:
/// edges (1,2),(2,3),(3,4),(4,5),(4,6); fields h on 1 and 3, -h on 5, +h on 6.
struct CompositeSpec {
  double h = kTwoPi * 100.0;
  double J = kTwoPi * 10.0;
  // Couples the chain end (3) to the router centre (4).
  double bridge_J = kTwoPi * 10.0;

  SpinNetwork network() const;
};

struct BarrierPhase {
  double duration;
  std::optional<int> site;  // extra field on this site during the phase
  double field = 0.0;
};

class BarrierSchedule {
 public:
  BarrierSchedule() = default;
  explicit BarrierSchedule(std::vector<BarrierPhase> phases);

  const std::vector<BarrierPhase>& phases() const { return phases_; }
  double total_duration() const;
  // Throws std::invalid_argument for durations <= 0 or sites outside 1..n.
  void validate(int n) const;

 private:
  std::vector<BarrierPhase> phases_;
};

struct BlockTimes {
  double chain_tau;    // best |+> transfer time of the isolated 3-chain near 1
  double router_tau;   // best |1> transfer time of the isolated 4-router
};

// Optimal times of the isolated blocks, found by scanning with dt.
BlockTimes isolated_block_times(const CompositeSpec& spec, double dt = 1e-4);

// Phase 1: barrier on site 4 for the chain time. Phase 2: barrier on site 2
// for 1.5 router times. Both use barrier_multiplier * h.
BarrierSchedule default_barrier_schedule(const CompositeSpec& spec, double barrier_multiplier = 10.0);

// Single phase without barriers covering t_max.
BarrierSchedule naive_schedule(double t_max);

struct CompositeRun {
  std::vector<double> times;
  // site_fidelity[s-1][k]: fidelity at times[k] against the input on site s.
  std::vector<std::vector<double>> site_fidelity;
  // site_population[s-1][k]: probability of the single flip sitting on s.
  std::vector<std::vector<double>> site_population;
  // Largest probability outside the vacuum + one-flip sectors.
  double max_leakage = 0.0;
};

// Piecewise evolution of site 1 prepared in `input`. Phases must cover t_max.
CompositeRun simulate_barrier_composite(const CompositeSpec& spec, const BarrierSchedule& schedule,
                                        const PureState& input, double t_max, double dt,
                                        Exec exec = Exec::parallel);
CompositeRun simulate_naive_composite(const CompositeSpec& spec, const PureState& input, double t_max, double dt,
                                      Exec exec = Exec::parallel);

// Hub site 1, ring sites 2..n_peripheral+1, uniform coupling J.
SpinNetwork wheel_network(int n_peripheral, double J = kTwoPi * 10.0);

// Nine-spin tree: (1,2),(2,3),(2,4),(4,5),(4,6),(4,7),(7,8),(7,9).
SpinNetwork arbitrary_network(double J = kTwoPi * 10.0);

struct NetworkScan {
  std::vector<double> times;
  std::vector<double> fidelity;
  Peak best;
  std::optional<Peak> first_qualifying;  // first local maximum above threshold
};

// Couplings of `network` replaced by J, field h on the input and output
// sites only. Evolution runs in the vacuum + one-flip subspace.
NetworkScan network_transport_scan(const SpinNetwork& network, int input_site, int output_site, double h, double J,
                                   double t_max, double dt, const PureState& input = ket1(),
                                   double threshold = 0.8, Exec exec = Exec::parallel);

// Text format, one statement per line, '#' starts a comment:
//   spins <n>                 optional; otherwise n = largest site index
//   <i> <j> <coupling>        undirected edge, rad/s
//   field <i> <value>         Zeeman field, rad/s
SpinNetwork read_network(std::istream& in);
SpinNetwork read_network_file(const std::string& path);
void write_network(std::ostream& out, const SpinNetwork& network);

}  // namespace spinnet
