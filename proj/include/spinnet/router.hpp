#pragma once

// Field-controlled routers. The 4-spin router is a star (centre 2, input 1,
// outputs 3 and 4); the 5-spin router is the chain 1-2-3 with outputs 4 and
// 5 on site 3, where the (2,3) pair acts as a gate of coupling G.

#include "spinnet/transport_chain.hpp"

#include <array>
#include <optional>
#include <vector>

namespace spinnet {

enum class RouterVariant { four, five };
enum class OutputPort { O1, O2 };

/// Five-spin fields and couplings for one routing target.
struct Router5Parameters {
  std::array<double, 5> h;  // h_1 .. h_5
  double J12, J23, J34, J35;
};

// O1 -> h = (-G/2, 0, 0, -G/2, G/2); O2 -> h_1 = +G/2. Couplings (J, G, J, J).
Router5Parameters router5_parameters(double G, double J, OutputPort target);

// Residuals of the energy matching conditions for a target port:
// O1: h1 - h4 and (h2 - h1) - J23/2; O2: h1 - h5 and (h1 - h2) - J23/2.
std::array<double, 2> router5_condition_residuals(const Router5Parameters& p, OutputPort target);

SpinNetwork router5_network(const Router5Parameters& p);
// sum h_i S^z_i - sum J_lm (S^x S^x + S^y S^y)
Operator router5_hamiltonian(const Router5Parameters& p);

struct EffectiveEigenvalues {
  double E_I, E_plus, E_minus, E_O1, E_O2;
};

// Diagonal of the rotated one-hole Hamiltonian. Requires h2 == h3.
EffectiveEigenvalues effective_eigenvalues(const Router5Parameters& p);

// One-hole basis (|01111>, |10111>, |11011>, |11101>, |11110>).
SubspaceBasis router5_hole_basis();

// Hole block of the full Hamiltonian rotated to (I, +, -, O1, O2) with
// |+-> = (|10111> +- |11011>)/sqrt2, computed numerically as V^dagger H V.
Operator basis_change_check(const Router5Parameters& p);
// The same matrix from its closed form entries.
Operator basis_change_closed_form(const Router5Parameters& p);
// The rotation V, columns in (I, +, -, O1, O2) order.
Operator router5_rotation();

struct RoutingCandidate {
  long m1;
  long m2;
  double tau;
  bool transfers;  // m1 + m2 odd, so exp(-i lambda_1 tau) = -1
};

struct RoutingTime {
  double tau_min;
  long m1_min;
  std::vector<RoutingCandidate> admissible;
};

// tau = 8 m1 pi / (G + 2J) with m2 = (G - 2J)/(G + 2J) m1 integral. The
// admissible list holds the first `count` multiples of the smallest m1.
// Throws if G + 2J == 0 or no m1 <= m1_bound works.
RoutingTime routing_time(double G, double J, long m1_bound = 100000, int count = 5);

// Reduced (I, +, O1) Hamiltonian with x = G/4, y = J/(2 sqrt2).
Eigen::Matrix3d router5_reduced_hamiltonian(double G, double J);

struct RouterSpec {
  RouterVariant variant = RouterVariant::five;
  double G = kTwoPi * 100.0;  // five only
  double J = kTwoPi * 10.0;
  double h = kTwoPi * 100.0;  // four only
  bool switched = false;

  void validate() const;
};

SpinNetwork router_network(const RouterSpec& spec);
Operator router_hamiltonian(const RouterSpec& spec);
// Output sites: five -> (4, 5), four -> (3, 4). The input is site 1.
std::array<int, 2> output_ports(const RouterSpec& spec);

struct PortSeries {
  int site;
  std::vector<double> fidelity;
};

struct RouterRun {
  std::vector<double> times;
  std::vector<PortSeries> ports;
};

// Site 1 prepared in `input`; per output port the fidelity against
// `target` (default: the input) placed on that port.
RouterRun simulate_router(const RouterSpec& spec, const PureState& input, std::span<const double> times,
                          const std::optional<PureState>& target = std::nullopt, bool z_fix = false,
                          Exec exec = Exec::parallel);

}  // namespace spinnet
