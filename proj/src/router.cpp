#include "spinnet/router.hpp"

#include <cmath>
#include <stdexcept>

namespace spinnet {

Router5Parameters router5_parameters(double G, double J, OutputPort target) {
  const double h1 = target == OutputPort::O1 ? -G / 2.0 : G / 2.0;
  return {{h1, 0.0, 0.0, -G / 2.0, G / 2.0}, J, G, J, J};
}

std::array<double, 2> router5_condition_residuals(const Router5Parameters& p, OutputPort target) {
  const auto& h = p.h;
  if (target == OutputPort::O1) return {h[0] - h[3], (h[1] - h[0]) - p.J23 / 2.0};
  return {h[0] - h[4], (h[0] - h[1]) - p.J23 / 2.0};
}

SpinNetwork router5_network(const Router5Parameters& p) {
  SpinNetwork net(5);
  net.add_edge(1, 2, p.J12).add_edge(2, 3, p.J23).add_edge(3, 4, p.J34).add_edge(3, 5, p.J35);
  net.set_fields({p.h.begin(), p.h.end()});
  return net;
}

Operator router5_hamiltonian(const Router5Parameters& p) {
  return build_total(router5_network(p), HamiltonianKind(CouplingType::xy, -1));
}

EffectiveEigenvalues effective_eigenvalues(const Router5Parameters& p) {
  const auto& h = p.h;
  if (h[1] != h[2]) throw std::invalid_argument("effective eigenvalues need h2 == h3");
  return {0.5 * (h[0] - h[1] - h[2] - h[3] - h[4]), 0.5 * (-h[0] - h[3] - h[4] - p.J23),
          0.5 * (-h[0] - h[3] - h[4] + p.J23), 0.5 * (-h[0] - h[1] - h[2] + h[3] - h[4]),
          0.5 * (-h[0] - h[1] - h[2] - h[3] + h[4])};
}

SubspaceBasis router5_hole_basis() {
  std::vector<std::size_t> idx;
  for (int s = 1; s <= 5; ++s) idx.push_back(31u ^ site_mask(5, s));
  return SubspaceBasis(32, std::move(idx));
}

Operator router5_rotation() {
  const double r = 1.0 / std::sqrt(2.0);
  Operator v = Operator::Zero(5, 5);
  v(0, 0) = 1.0;
  v(1, 1) = r;  // |+> = (hole at 2 + hole at 3) / sqrt2
  v(2, 1) = r;
  v(1, 2) = r;  // |-> = (hole at 2 - hole at 3) / sqrt2
  v(2, 2) = -r;
  v(3, 3) = 1.0;
  v(4, 4) = 1.0;
  return v;
}

Operator basis_change_check(const Router5Parameters& p) {
  const Operator hole = restrict(router5_hamiltonian(p), router5_hole_basis());
  const Operator v = router5_rotation();
  return v.adjoint() * hole * v;
}

Operator basis_change_closed_form(const Router5Parameters& p) {
  const auto& h = p.h;
  const double s = std::sqrt(2.0);
  const double a = p.J12 / s, b = p.J34 / s, c = p.J35 / s;
  const double lam1 = h[0] - h[1] - h[2] - h[3] - h[4];
  const double lam4 = -h[0] - h[1] - h[2] + h[3] - h[4];
  const double lam5 = -h[0] - h[1] - h[2] - h[3] + h[4];
  const double mid = -h[0] - h[3] - h[4];
  Eigen::Matrix<double, 5, 5> m;
  m << lam1, -a, -a, 0, 0,
       -a, mid - p.J23, h[1] - h[2], -b, -c,
       -a, h[1] - h[2], mid + p.J23, b, c,
       0, -b, b, lam4, 0,
       0, -c, c, 0, lam5;
  return (0.5 * m).cast<Complex>();
}

RoutingTime routing_time(double G, double J, long m1_bound, int count) {
  const double denom = G + 2.0 * J;
  if (denom == 0.0) throw std::invalid_argument("routing time needs G + 2J != 0");
  if (count < 1 || m1_bound < 1) throw std::invalid_argument("routing_time: bad count or bound");
  const double ratio = (G - 2.0 * J) / denom;
  long m1 = 0;
  for (long k = 1; k <= m1_bound; ++k) {
    const double m2 = ratio * static_cast<double>(k);
    if (std::abs(m2 - std::round(m2)) < 1e-9 * std::max(1.0, std::abs(m2))) {
      m1 = k;
      break;
    }
  }
  if (m1 == 0) throw std::domain_error("no admissible m1 within the search bound");
  RoutingTime rt{};
  rt.m1_min = m1;
  for (int k = 1; k <= count; ++k) {
    const long a = m1 * k;
    const auto b = static_cast<long>(std::llround(ratio * static_cast<double>(a)));
    const double tau = 8.0 * static_cast<double>(a) * kPi / denom;
    rt.admissible.push_back({a, b, tau, ((a + b) % 2) != 0});
  }
  rt.tau_min = rt.admissible.front().tau;
  return rt;
}

Eigen::Matrix3d router5_reduced_hamiltonian(double G, double J) {
  const double x = G / 4.0, y = J / (2.0 * std::sqrt(2.0));
  Eigen::Matrix3d m;
  m << -x, -y, 0, -y, -x, -y, 0, -y, -x;
  return m;
}

void RouterSpec::validate() const {
  if (J == 0.0 || !std::isfinite(J)) throw std::invalid_argument("router coupling J must be finite and nonzero");
  if (variant == RouterVariant::five && (G == 0.0 || !std::isfinite(G)))
    throw std::invalid_argument("router gate coupling G must be finite and nonzero");
  if (variant == RouterVariant::four && !std::isfinite(h)) throw std::invalid_argument("router field must be finite");
}

SpinNetwork router_network(const RouterSpec& spec) {
  spec.validate();
  if (spec.variant == RouterVariant::five)
    return router5_network(router5_parameters(spec.G, spec.J, spec.switched ? OutputPort::O2 : OutputPort::O1));
  SpinNetwork net(4);
  net.add_edge(1, 2, spec.J).add_edge(2, 3, spec.J).add_edge(2, 4, spec.J);
  net.set_fields({spec.switched ? -spec.h : spec.h, 0.0, spec.h, -spec.h});
  return net;
}

Operator router_hamiltonian(const RouterSpec& spec) {
  const int sign = spec.variant == RouterVariant::five ? -1 : +1;
  return build_total(router_network(spec), HamiltonianKind(CouplingType::xy, sign));
}

std::array<int, 2> output_ports(const RouterSpec& spec) {
  return spec.variant == RouterVariant::five ? std::array<int, 2>{4, 5} : std::array<int, 2>{3, 4};
}

RouterRun simulate_router(const RouterSpec& spec, const PureState& input, std::span<const double> times,
                          const std::optional<PureState>& target, bool z_fix, Exec exec) {
  const Operator h = router_hamiltonian(spec);
  require_conserving(h);
  const int n = spec.variant == RouterVariant::five ? 5 : 4;
  const PureState& want = target ? *target : input;
  RouterRun run;
  run.times.assign(times.begin(), times.end());
  for (int port : output_ports(spec)) {
    const auto amps = SiteTransfer(h, n, 1, port).scan(times, exec);
    PortSeries ps{port, std::vector<double>(amps.size())};
    for (std::size_t i = 0; i < amps.size(); ++i) ps.fidelity[i] = transfer_fidelity(amps[i], input, want, z_fix);
    run.ports.push_back(std::move(ps));
  }
  return run;
}

}  // namespace spinnet
