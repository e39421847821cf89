#include "spinnet/filtered_star.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spinnet {

void FilteredSequenceSpec::validate() const {
  if (L < 1) throw std::invalid_argument("stage count L must be >= 1");
  if (N < 1) throw std::invalid_argument("cycle count N must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  const auto l = static_cast<std::size_t>(L);
  if (omega.size() != l || Omega.size() != l || time_array.size() != l)
    throw std::invalid_argument("omega, Omega and time_array must each have L entries");
  for (std::size_t i = 0; i < l; ++i) {
    if (!std::isfinite(omega[i]) || !std::isfinite(Omega[i])) throw std::invalid_argument("frequencies must be finite");
    if (!(time_array[i] >= 0.0) || !std::isfinite(time_array[i]))
      throw std::invalid_argument("DQ times must be finite and >= 0");
  }
}

double FilteredSequenceSpec::elapsed_dq_time(int cycles) const {
  double sum = 0.0;
  for (double t : time_array) sum += t / N;
  return cycles * sum;
}

StarNetwork::StarNetwork(SpinNetwork network) : net_(std::move(network)) {
  if (net_.size() < 3) throw std::invalid_argument("a star needs at least 3 spins");
}

SpinNetwork StarNetwork::radial_subgraph() const {
  return net_.filter_edges([](const Coupling& e) { return e.i == 1; });
}

std::vector<double> StarNetwork::stage_fields(double central, double peripheral) const {
  std::vector<double> f(static_cast<std::size_t>(net_.size()), peripheral);
  f[0] = central;
  return f;
}

StarNetwork random_star(int n, double b_radial, std::uint64_t seed) {
  SpinNetwork net(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.5, 1.5);
  for (int j = 2; j <= n; ++j) net.add_edge(1, j, b_radial);
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) net.add_edge(i, j, b_radial * scale(rng));
  return StarNetwork(std::move(net));
}

StageFrequencies default_parameters(int L) {
  if (L < 1) throw std::invalid_argument("stage count L must be >= 1");
  const double w = (2.0 * L + 1.0) * kPi / (2.0 * L);
  return {std::vector<double>(static_cast<std::size_t>(L), w), std::vector<double>(static_cast<std::size_t>(L), -w)};
}

FilteredSequenceSpec make_default_spec(int L, int N, double tau, std::vector<double> time_array) {
  auto f = default_parameters(L);
  FilteredSequenceSpec spec{L, N, tau, std::move(f.omega), std::move(f.Omega), std::move(time_array)};
  spec.validate();
  return spec;
}

std::vector<double> random_time_array(int L, double upper, std::uint64_t seed) {
  if (L < 1 || !(upper > 0.0)) throw std::invalid_argument("random_time_array: bad arguments");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(static_cast<std::size_t>(L));
  // 1 - u lies in (0, 1], so every draw is strictly positive.
  for (auto& v : t) v = upper * (1.0 - u(rng));
  return t;
}

Complex filter_function(int N, double x) {
  if (N < 1) throw std::invalid_argument("filter function needs N >= 1");
  const double r = std::remainder(x, kTwoPi);
  if (r == 0.0) return Complex(N, 0.0);
  // (1 - e^{iNr}) / (1 - e^{ir}) = e^{i(N-1)r/2} sin(Nr/2) / sin(r/2)
  return std::polar(std::sin(N * r / 2.0) / std::sin(r / 2.0), (N - 1) * r / 2.0);
}

Operator toggling_frame_hamiltonian(const SpinNetwork& network, const std::vector<double>& stage_fields, double tau) {
  const int n = network.size();
  if (stage_fields.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("stage field count mismatch");
  const std::size_t dim = hilbert_dim(n);
  Operator h = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& e : network.edges()) {
    const std::size_t mask = site_mask(n, e.i) | site_mask(n, e.j);
    const double d = stage_fields[static_cast<std::size_t>(e.i - 1)] + stage_fields[static_cast<std::size_t>(e.j - 1)];
    const Complex up = std::polar(0.5 * e.strength, d * tau);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      if ((idx & mask) != mask) continue;
      // S+S+ lowers both flipped bits: |..1..1..> -> |..0..0..>
      const auto hi = static_cast<Eigen::Index>(idx);
      const auto lo = static_cast<Eigen::Index>(idx ^ mask);
      h(lo, hi) += up;
      h(hi, lo) += std::conj(up);
    }
  }
  return h;
}

bool ConditionReport::pass() const {
  if (!peripheral_ok()) return false;
  for (double r : central_residuals)
    if (!(r < tolerance)) return false;
  return true;
}

ConditionReport check_conditions(const FilteredSequenceSpec& spec) {
  spec.validate();
  ConditionReport rep;
  double sum_w = 0.0;
  for (double w : spec.omega) sum_w += w;
  rep.peripheral_residual = std::abs(std::remainder(2.0 * sum_w * spec.tau - kPi, kTwoPi));
  for (int i = 0; i < spec.L; ++i) {
    const auto s = static_cast<std::size_t>(i);
    rep.central_residuals.push_back(std::abs(std::remainder((spec.Omega[s] + spec.omega[s]) * spec.tau, kTwoPi)));
  }
  return rep;
}

std::vector<int> accumulated_coefficients(int L, int cycle, int stage) {
  if (L < 1 || cycle < 1 || stage < 1 || stage > L) throw std::invalid_argument("accumulated_coefficients: bad index");
  std::vector<int> c(static_cast<std::size_t>(L));
  for (int s = 1; s <= L; ++s) c[static_cast<std::size_t>(s - 1)] = s <= stage ? cycle : cycle - 1;
  return c;
}

double stage_weight(const FilteredSequenceSpec& spec, int stage, Interaction kind) {
  const auto s = static_cast<std::size_t>(stage - 1);
  if (stage < 1 || stage > spec.L) throw std::out_of_range("stage out of range");
  return kind == Interaction::central_peripheral ? spec.Omega[s] + spec.omega[s] : 2.0 * spec.omega[s];
}

double multiplicative_term(const FilteredSequenceSpec& spec, int stage, Interaction kind) {
  double x = 0.0;
  for (int s = 1; s <= stage; ++s) x += stage_weight(spec, s, kind);
  return x;
}

Complex series_sum_direct(const FilteredSequenceSpec& spec, int stage, Interaction kind) {
  spec.validate();
  Complex acc{};
  for (int k = 1; k <= spec.N; ++k) {
    const auto c = accumulated_coefficients(spec.L, k, stage);
    double x = 0.0;
    for (int s = 1; s <= spec.L; ++s) x += c[static_cast<std::size_t>(s - 1)] * stage_weight(spec, s, kind);
    acc += std::polar(1.0, spec.tau * x);
  }
  return acc;
}

Complex series_sum_closed(const FilteredSequenceSpec& spec, int stage, Interaction kind) {
  spec.validate();
  const double lead = multiplicative_term(spec, stage, kind);
  const double total = multiplicative_term(spec, spec.L, kind);
  return std::polar(1.0, spec.tau * lead) * filter_function(spec.N, spec.tau * total);
}

namespace {

struct StagePropagators {
  std::vector<Operator> zeeman;
  std::vector<Operator> dq;
};

StagePropagators stage_propagators(const FilteredSequenceSpec& spec, const StarNetwork& star) {
  spec.validate();
  StagePropagators out;
  const Operator h_dq = build_coupling(star.network(), HamiltonianKind(CouplingType::double_quantum));
  for (int i = 0; i < spec.L; ++i) {
    const auto s = static_cast<std::size_t>(i);
    SpinNetwork fields(star.size());
    fields.set_fields(star.stage_fields(spec.Omega[s], spec.omega[s]));
    out.zeeman.push_back(propagator(build_zeeman(fields), spec.tau));
    out.dq.push_back(propagator(h_dq, spec.time_array[s] / spec.N));
  }
  return out;
}

}  // namespace

Operator sequence_propagator(const FilteredSequenceSpec& spec, const StarNetwork& star, int cycles) {
  if (cycles < 0 || cycles > spec.N) throw std::invalid_argument("cycles must lie in [0, N]");
  const auto p = stage_propagators(spec, star);
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(star.size()));
  Operator u = Operator::Identity(dim, dim);
  for (int k = 0; k < cycles; ++k)
    for (int i = 0; i < spec.L; ++i) u = p.dq[static_cast<std::size_t>(i)] * p.zeeman[static_cast<std::size_t>(i)] * u;
  return u;
}

Operator star_target(const StarNetwork& star, double elapsed_dq_time) {
  return propagator(build_coupling(star.radial_subgraph(), HamiltonianKind(CouplingType::double_quantum)),
                    elapsed_dq_time);
}

std::vector<ProfilePoint> fidelity_profile(const FilteredSequenceSpec& spec, const StarNetwork& star,
                                           const ProfileOptions& options, int max_cycles) {
  const int cycles = max_cycles < 0 ? spec.N : max_cycles;
  if (cycles > spec.N) throw std::invalid_argument("max_cycles exceeds N");
  const auto p = stage_propagators(spec, star);
  const int n = star.size();
  const auto dim = static_cast<Eigen::Index>(hilbert_dim(n));

  Amplitudes psi0;
  if (options.metric == FidelityMetric::state) {
    const PureState init = options.initial ? *options.initial : PureState::basis(hilbert_dim(n), site_mask(n, 1));
    if (init.dim() != static_cast<std::size_t>(dim)) throw std::invalid_argument("initial state dimension mismatch");
    psi0 = init.amplitudes();
  }

  const Operator h0 = build_coupling(star.radial_subgraph(), HamiltonianKind(CouplingType::double_quantum));
  const SpectralPropagator target(h0);
  Operator cycle_zeeman = Operator::Identity(dim, dim);
  for (int i = 0; i < spec.L; ++i) cycle_zeeman = p.zeeman[static_cast<std::size_t>(i)] * cycle_zeeman;

  Operator u = Operator::Identity(dim, dim);
  Operator frame = Operator::Identity(dim, dim);
  std::vector<ProfilePoint> out;
  for (int k = 1; k <= cycles; ++k) {
    for (int i = 0; i < spec.L; ++i) u = p.dq[static_cast<std::size_t>(i)] * p.zeeman[static_cast<std::size_t>(i)] * u;
    require_unitary(u, 1e-9, "sequence propagator");
    frame = cycle_zeeman * frame;
    const Operator achieved = options.frame == Frame::rotating ? Operator(frame.adjoint() * u) : u;
    const Operator wanted = target.at(spec.elapsed_dq_time(k));
    double f;
    if (options.metric == FidelityMetric::gate) {
      f = gate_fidelity(wanted, achieved);
    } else {
      const Amplitudes a = wanted * psi0;
      const Amplitudes b = achieved * psi0;
      f = std::min(1.0, std::abs(a.dot(b)));
    }
    out.push_back({k, f});
  }
  return out;
}

std::vector<int> local_maxima(const std::vector<ProfilePoint>& profile, double cycle0) {
  std::vector<int> peaks;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double left = k == 0 ? cycle0 : profile[k - 1].fidelity;
    const double here = profile[k].fidelity;
    const bool right_ok = k + 1 == profile.size() || here > profile[k + 1].fidelity;
    if (here > left && right_ok) peaks.push_back(profile[k].cycle);
  }
  return peaks;
}

std::vector<RobustnessPoint> time_robustness(const FilteredSequenceSpec& spec_template, const StarNetwork& star,
                                             const std::vector<double>& t_values, int cycle,
                                             const ProfileOptions& options) {
  if (cycle < 1 || cycle > spec_template.N) throw std::invalid_argument("robustness cycle must lie in [1, N]");
  std::vector<RobustnessPoint> out;
  for (double t : t_values) {
    FilteredSequenceSpec spec = spec_template;
    spec.time_array.assign(static_cast<std::size_t>(spec.L), t);
    const auto prof = fidelity_profile(spec, star, options, cycle);
    out.push_back({t, prof.back().fidelity});
  }
  return out;
}

}  // namespace spinnet
