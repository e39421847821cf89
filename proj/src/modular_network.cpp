#include "spinnet/modular_network.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spinnet {

SpinNetwork CompositeSpec::network() const {
  SpinNetwork net(6);
  net.add_edge(1, 2, J).add_edge(2, 3, J).add_edge(3, 4, bridge_J).add_edge(4, 5, J).add_edge(4, 6, J);
  net.set_fields({h, 0.0, h, 0.0, -h, h});
  return net;
}

BarrierSchedule::BarrierSchedule(std::vector<BarrierPhase> phases) : phases_(std::move(phases)) {
  for (const auto& p : phases_)
    if (!(p.duration > 0.0) || !std::isfinite(p.duration) || !std::isfinite(p.field))
      throw std::invalid_argument("barrier phases need finite positive durations and finite fields");
}

double BarrierSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& p : phases_) t += p.duration;
  return t;
}

void BarrierSchedule::validate(int n) const {
  if (phases_.empty()) throw std::invalid_argument("barrier schedule has no phases");
  for (const auto& p : phases_) {
    if (!(p.duration > 0.0)) throw std::invalid_argument("barrier phase duration must be positive");
    if (p.site && (*p.site < 1 || *p.site > n)) throw std::invalid_argument("barrier site out of range");
  }
}

BlockTimes isolated_block_times(const CompositeSpec& spec, double dt) {
  const ChainSpec chain{3, spec.J, spec.h};
  const auto tc = time_grid(0.9, 1.1, dt);
  const auto fc = transport_scan(chain, ket_plus(), tc);
  const RouterSpec router{RouterVariant::four, 0.0, spec.J, spec.h, false};
  const auto tr = time_grid(0.0, 3.0, dt);
  const auto run = simulate_router(router, ket1(), tr);
  return {global_max(tc, fc).t, global_max(tr, run.ports[0].fidelity).t};
}

BarrierSchedule default_barrier_schedule(const CompositeSpec& spec, double barrier_multiplier) {
  const BlockTimes bt = isolated_block_times(spec);
  const double b = barrier_multiplier * spec.h;
  return BarrierSchedule({{bt.chain_tau, 4, b}, {1.5 * bt.router_tau, 2, b}});
}

BarrierSchedule naive_schedule(double t_max) { return BarrierSchedule({{t_max, std::nullopt, 0.0}}); }

CompositeRun simulate_barrier_composite(const CompositeSpec& spec, const BarrierSchedule& schedule,
                                        const PureState& input, double t_max, double dt, Exec exec) {
  const SpinNetwork base = spec.network();
  const int n = base.size();
  schedule.validate(n);
  if (input.dim() != 2) throw std::invalid_argument("composite input must be a single-qubit state");
  if (schedule.total_duration() < t_max * (1.0 - 1e-12))
    throw std::invalid_argument("barrier phases do not cover t_max");

  std::vector<SpectralPropagator> props;
  std::vector<double> starts;
  double start = 0.0;
  for (const auto& p : schedule.phases()) {
    SpinNetwork net = base;
    if (p.site) net.set_field(*p.site, base.field(*p.site) + p.field);
    const Operator h = build_total(net, HamiltonianKind(CouplingType::xy));
    require_conserving(h);
    props.emplace_back(h);
    starts.push_back(start);
    start += p.duration;
  }

  const std::size_t dim = hilbert_dim(n);
  Amplitudes psi0 = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  psi0(0) = input[0];
  psi0(static_cast<Eigen::Index>(site_mask(n, 1))) = input[1];
  std::vector<Amplitudes> boundary{psi0};
  for (std::size_t k = 0; k + 1 < props.size(); ++k)
    boundary.push_back(props[k].apply(schedule.phases()[k].duration, boundary[k]));

  CompositeRun run;
  run.times = time_grid(0.0, t_max, dt);
  const auto states = map_index<Amplitudes>(run.times.size(), exec, [&](std::size_t i) {
    const double t = run.times[i];
    std::size_t k = 0;
    while (k + 1 < starts.size() && t >= starts[k + 1]) ++k;
    return props[k].apply(t - starts[k], boundary[k]);
  });

  run.site_fidelity.assign(static_cast<std::size_t>(n), std::vector<double>(run.times.size()));
  run.site_population.assign(static_cast<std::size_t>(n), std::vector<double>(run.times.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Amplitudes& psi = states[i];
    double inside = std::norm(psi(0));
    for (int s = 1; s <= n; ++s) {
      const Complex amp = psi(static_cast<Eigen::Index>(site_mask(n, s)));
      const auto si = static_cast<std::size_t>(s - 1);
      run.site_fidelity[si][i] = std::min(1.0, std::abs(std::conj(input[0]) * psi(0) + std::conj(input[1]) * amp));
      run.site_population[si][i] = std::norm(amp);
      inside += std::norm(amp);
    }
    run.max_leakage = std::max(run.max_leakage, std::abs(1.0 - inside));
  }
  if (!(run.max_leakage < 1e-10)) throw NumericFailure("composite evolution left the one-flip sector");
  return run;
}

CompositeRun simulate_naive_composite(const CompositeSpec& spec, const PureState& input, double t_max, double dt,
                                      Exec exec) {
  return simulate_barrier_composite(spec, naive_schedule(t_max), input, t_max, dt, exec);
}

SpinNetwork wheel_network(int n_peripheral, double J) {
  if (n_peripheral < 3) throw std::invalid_argument("a wheel needs at least 3 peripheral spins");
  SpinNetwork net(n_peripheral + 1);
  for (int k = 2; k <= n_peripheral + 1; ++k) net.add_edge(1, k, J);
  for (int k = 2; k <= n_peripheral + 1; ++k) net.add_edge(k, k == n_peripheral + 1 ? 2 : k + 1, J);
  return net;
}

SpinNetwork arbitrary_network(double J) {
  SpinNetwork net(9);
  const int edges[][2] = {{1, 2}, {2, 3}, {2, 4}, {4, 5}, {4, 6}, {4, 7}, {7, 8}, {7, 9}};
  for (const auto& e : edges) net.add_edge(e[0], e[1], J);
  return net;
}

NetworkScan network_transport_scan(const SpinNetwork& network, int input_site, int output_site, double h, double J,
                                   double t_max, double dt, const PureState& input, double threshold, Exec exec) {
  const int n = network.size();
  if (input_site < 1 || input_site > n || output_site < 1 || output_site > n)
    throw std::out_of_range("network site out of range");
  if (input_site == output_site) throw std::invalid_argument("input and output sites must differ");
  if (input.dim() != 2) throw std::invalid_argument("network input must be a single-qubit state");

  SpinNetwork net = network.with_uniform_coupling(J);
  net.set_fields(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  net.set_field(input_site, h);
  net.set_field(output_site, h);
  const Operator full = build_total(net, HamiltonianKind(CouplingType::xy));

  // Basis: vacuum first, then one flip on sites 1..n.
  std::vector<std::size_t> idx{0};
  for (int s = 1; s <= n; ++s) idx.push_back(site_mask(n, s));
  const SubspaceBasis basis(hilbert_dim(n), idx);
  const Operator reduced = restrict(full, basis);

  Amplitudes psi0 = Amplitudes::Zero(n + 1), target = Amplitudes::Zero(n + 1);
  psi0(0) = input[0];
  psi0(input_site) = input[1];
  target(0) = input[0];
  target(output_site) = input[1];
  const OverlapSeries series(SpectralPropagator(reduced), psi0, {target});

  NetworkScan scan;
  scan.times = time_grid(0.0, t_max, dt);
  const auto amps = series.scan(scan.times, exec);
  scan.fidelity.resize(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) scan.fidelity[i] = std::min(1.0, std::abs(amps[i]));
  scan.best = global_max(scan.times, scan.fidelity);
  scan.first_qualifying = first_peak_above(scan.times, scan.fidelity, threshold);
  return scan;
}

namespace {

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw std::invalid_argument("network file line " + std::to_string(line) + ": " + what);
}

}  // namespace

SpinNetwork read_network(std::istream& in) {
  struct Edge {
    int i, j;
    double b;
  };
  std::vector<Edge> edges;
  std::vector<std::pair<int, double>> fields;
  int declared = 0, largest = 0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string head;
    if (!(ss >> head)) continue;
    std::string extra;
    if (head == "spins") {
      if (!(ss >> declared) || declared < 1 || (ss >> extra)) parse_error(line, "expected 'spins <n>'");
    } else if (head == "field") {
      int i;
      double v;
      if (!(ss >> i >> v) || (ss >> extra)) parse_error(line, "expected 'field <site> <value>'");
      fields.emplace_back(i, v);
      largest = std::max(largest, i);
    } else {
      int i, j;
      double b;
      std::istringstream es(raw);
      if (!(es >> i >> j >> b) || (es >> extra)) parse_error(line, "expected '<i> <j> <coupling>'");
      edges.push_back({i, j, b});
      largest = std::max({largest, i, j});
    }
  }
  const int n = declared > 0 ? declared : largest;
  if (n < 1) throw std::invalid_argument("network file declares no spins");
  if (largest > n) throw std::invalid_argument("network file uses a site beyond the declared spin count");
  SpinNetwork net(n);
  for (const auto& e : edges) net.add_edge(e.i, e.j, e.b);
  for (const auto& [i, v] : fields) net.set_field(i, v);
  return net;
}

SpinNetwork read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open network file: " + path);
  return read_network(in);
}

void write_network(std::ostream& out, const SpinNetwork& network) {
  std::ostringstream s;
  s.precision(17);
  s << "spins " << network.size() << '\n';
  for (const auto& e : network.edges()) s << e.i << ' ' << e.j << ' ' << e.strength << '\n';
  for (int i = 1; i <= network.size(); ++i)
    if (network.field(i) != 0.0) s << "field " << i << ' ' << network.field(i) << '\n';
  out << s.str();
}

}  // namespace spinnet
