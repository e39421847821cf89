#include "spinnet/transport_chain.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spinnet {

double excitation_mixing(const Operator& h) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < h.cols(); ++c)
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      if (excitation_count(static_cast<std::size_t>(r)) != excitation_count(static_cast<std::size_t>(c)))
        worst = std::max(worst, std::abs(h(r, c)));
  return worst;
}

void require_conserving(const Operator& h, double tol) {
  const double m = excitation_mixing(h);
  if (!(m < tol)) throw NumericFailure("Hamiltonian mixes excitation sectors (" + std::to_string(m) + ")");
}

double transfer_fidelity(const TransferAmplitudes& a, const PureState& input, const PureState& target,
                         bool phase_fix) {
  if (input.dim() != 2 || target.dim() != 2) throw std::invalid_argument("transfer states must be single-qubit");
  const Complex al = input[0], be = input[1];
  const Complex ta = std::conj(target[0]), tb = std::conj(target[1]);
  // target component on |0..0> and on e_to
  const Complex p = ta * (al * a.vac_vac + be * a.vac_in);
  const Complex q = tb * (al * a.out_vac + be * a.out_in);
  const double f = phase_fix ? std::abs(p) + std::abs(q) : std::abs(p + q);
  return std::min(1.0, f);
}

namespace {

Amplitudes unit(std::size_t dim, std::size_t idx) {
  Amplitudes v = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(idx)) = 1.0;
  return v;
}

int checked_site(int n, int site) {
  if (site < 1 || site > n) throw std::out_of_range("site out of range");
  return site;
}

}  // namespace

SiteTransfer::SiteTransfer(const Operator& h, int n, int from, int to)
    : n_(n),
      from_(checked_site(n, from)),
      to_(checked_site(n, to)),
      prop_(h),
      from_vac_(prop_, unit(hilbert_dim(n), 0), {unit(hilbert_dim(n), 0), unit(hilbert_dim(n), site_mask(n, to))}),
      from_in_(prop_, unit(hilbert_dim(n), site_mask(n, from)),
               {unit(hilbert_dim(n), 0), unit(hilbert_dim(n), site_mask(n, to))}) {
  if (from == to) throw std::invalid_argument("input and output sites must differ");
}

TransferAmplitudes SiteTransfer::at(double t) const {
  return {from_vac_.at(0, t), from_in_.at(0, t), from_vac_.at(1, t), from_in_.at(1, t)};
}

std::vector<TransferAmplitudes> SiteTransfer::scan(std::span<const double> times, Exec exec) const {
  const auto v = from_vac_.scan(times, exec);
  const auto e = from_in_.scan(times, exec);
  std::vector<TransferAmplitudes> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = {v[2 * i], e[2 * i], v[2 * i + 1], e[2 * i + 1]};
  return out;
}

double SiteTransfer::population(int site, double t) const {
  checked_site(n_, site);
  const Amplitudes psi = prop_.apply(t, unit(hilbert_dim(n_), site_mask(n_, from_)));
  return std::norm(psi(static_cast<Eigen::Index>(site_mask(n_, site))));
}

void ChainSpec::validate() const {
  if (n < 3) throw std::invalid_argument("chain length must be >= 3");
  hilbert_dim(n);
  if (J == 0.0 || !std::isfinite(J)) throw std::invalid_argument("chain coupling J must be finite and nonzero");
  if (!std::isfinite(h)) throw std::invalid_argument("end field h must be finite");
}

SpinNetwork ChainSpec::network() const {
  validate();
  SpinNetwork net(n);
  for (int i = 1; i < n; ++i) net.add_edge(i, i + 1, J);
  net.set_field(1, h);
  net.set_field(n, h);
  return net;
}

Operator ChainSpec::hamiltonian() const { return build_total(network(), HamiltonianKind(CouplingType::xy)); }

Chain3Eigensystem chain3_eigensystem(double h, double J) {
  if (J == 0.0) throw std::invalid_argument("chain3_eigensystem needs J != 0");
  const double r = std::sqrt(h * h + 2.0 * J * J);
  Chain3Eigensystem es;
  es.lambda = {0.0, 0.5 * (h - r), 0.5 * (h + r)};
  es.vectors[0] = Eigen::Vector3d(-1.0, 0.0, 1.0);
  es.vectors[1] = Eigen::Vector3d(1.0, (h - r) / J, 1.0);
  es.vectors[2] = Eigen::Vector3d(1.0, (h + r) / J, 1.0);
  es.coeffs = {0.5, (h + r) / (4.0 * r), (r - h) / (4.0 * r)};
  return es;
}

Eigen::Matrix3d chain3_restricted(double h, double J) {
  Eigen::Matrix3d m;
  m << 0.0, J, 0.0, J, 2.0 * h, J, 0.0, J, 0.0;
  return 0.5 * m;
}

std::vector<ResonanceCandidate> resonance_time_scan(double h, double J, double t_max, double dt, double eps) {
  if (!(t_max > 0.0) || !(dt > 0.0)) throw std::invalid_argument("scan window and step must be positive");
  const double r = std::sqrt(h * h + 2.0 * J * J);
  const double l2 = 0.5 * (h - r), l3 = 0.5 * (h + r);
  const double fast = std::max(std::abs(l2), std::abs(l3));
  if (fast > 0.0 && dt > kPi / (10.0 * fast))
    throw std::invalid_argument("scan step too coarse for the fast eigenfrequency");
  std::vector<ResonanceCandidate> out;
  bool in_run = false;
  ResonanceCandidate best{};
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double c2 = std::cos(l2 * t), c3 = std::cos(l3 * t);
    const bool hit = c2 < -1.0 + eps && c3 < -1.0 + eps;
    if (hit) {
      if (!in_run || c2 + c3 < best.cos2 + best.cos3) best = {t, c2, c3};
      in_run = true;
    } else if (in_run) {
      out.push_back(best);
      in_run = false;
    }
  }
  if (in_run) out.push_back(best);
  return out;
}

double transport_fidelity(const ChainSpec& spec, const PureState& input, double t, bool phase_fix, bool reverse) {
  const int from = reverse ? spec.n : 1, to = reverse ? 1 : spec.n;
  const Operator h = spec.hamiltonian();
  require_conserving(h);
  return transfer_fidelity(SiteTransfer(h, spec.n, from, to).at(t), input, input, phase_fix);
}

std::vector<double> transport_scan(const ChainSpec& spec, const PureState& input, std::span<const double> times,
                                   Exec exec, bool phase_fix) {
  const Operator h = spec.hamiltonian();
  require_conserving(h);
  const auto amps = SiteTransfer(h, spec.n, 1, spec.n).scan(times, exec);
  std::vector<double> out(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) out[i] = transfer_fidelity(amps[i], input, input, phase_fix);
  return out;
}

std::vector<double> bloch_grid_fidelities(const ChainSpec& spec, double t, int n_theta, int n_phi, double phi_offset,
                                          Exec exec) {
  if (n_theta < 2 || n_phi < 2) throw std::invalid_argument("Bloch grids need at least 2 points per axis");
  const Operator h = spec.hamiltonian();
  require_conserving(h);
  const TransferAmplitudes a = SiteTransfer(h, spec.n, 1, spec.n).at(t);
  const auto nt = static_cast<std::size_t>(n_theta), np = static_cast<std::size_t>(n_phi);
  return map_index<double>(nt * np, exec, [&](std::size_t k) {
    const double theta = kPi * static_cast<double>(k / np) / static_cast<double>(nt - 1);
    const double phi = phi_offset + kTwoPi * static_cast<double>(k % np) / static_cast<double>(np);
    const PureState s = PureState::bloch(theta, phi);
    return transfer_fidelity(a, s, s);
  });
}

SweepStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  SweepStats s{0.0, 0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               values.size()};
  for (double v : values) {
    s.mean += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

SweepStats bloch_sweep(const ChainSpec& spec, double t, int n_theta, int n_phi, double phi_offset, Exec exec) {
  return summarize(bloch_grid_fidelities(spec, t, n_theta, n_phi, phi_offset, exec));
}

ChainParameter parse_chain_parameter(std::string_view name) {
  if (name == "h1") return ChainParameter::h1;
  if (name == "h2") return ChainParameter::h2;
  if (name == "J12") return ChainParameter::J12;
  throw std::invalid_argument("unknown robustness parameter: " + std::string(name));
}

const char* to_string(ChainParameter p) {
  switch (p) {
    case ChainParameter::h1: return "h1";
    case ChainParameter::h2: return "h2";
    case ChainParameter::J12: return "J12";
  }
  return "?";
}

std::vector<SweepPoint> robustness_sweep(const ChainSpec& spec, ChainParameter parameter,
                                         const std::vector<double>& values, const PureState& input, double t) {
  spec.validate();
  std::vector<SweepPoint> out;
  for (double v : values) {
    SpinNetwork net(spec.n);
    for (int i = 1; i < spec.n; ++i) net.add_edge(i, i + 1, (i == 1 && parameter == ChainParameter::J12) ? v : spec.J);
    net.set_field(1, parameter == ChainParameter::h1 ? v : spec.h);
    net.set_field(spec.n, spec.h);
    if (parameter == ChainParameter::h2) net.set_field(2, v);
    const Operator h = build_total(net, HamiltonianKind(CouplingType::xy));
    require_conserving(h);
    out.push_back({v, transfer_fidelity(SiteTransfer(h, spec.n, 1, spec.n).at(t), input, input)});
  }
  return out;
}

std::vector<double> default_sweep_values(const ChainSpec& spec, ChainParameter parameter, int count) {
  if (count < 2) throw std::invalid_argument("sweep needs at least 2 values");
  double lo = 0.0, hi = 0.0;
  switch (parameter) {
    case ChainParameter::h1: lo = 0.8 * spec.h; hi = 1.2 * spec.h; break;
    case ChainParameter::J12: lo = 0.8 * spec.J; hi = 1.2 * spec.J; break;
    case ChainParameter::h2: lo = -std::abs(spec.J); hi = std::abs(spec.J); break;
  }
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return v;
}

}  // namespace spinnet
