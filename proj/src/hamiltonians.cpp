#include "spinnet/hamiltonians.hpp"

#include <stdexcept>
#include <string>

namespace spinnet {

CouplingType parse_coupling_type(std::string_view name) {
  if (name == "dipolar") return CouplingType::dipolar;
  if (name == "double_quantum" || name == "dq") return CouplingType::double_quantum;
  if (name == "xy") return CouplingType::xy;
  if (name == "zeeman") return CouplingType::zeeman;
  throw std::invalid_argument("unknown Hamiltonian kind: " + std::string(name));
}

HamiltonianKind::HamiltonianKind(CouplingType t, int s) : type(t), sign(s) {
  if (s != 1 && s != -1) throw std::invalid_argument("Hamiltonian sign must be +1 or -1");
}

Operator build_zeeman(const SpinNetwork& network) {
  const int n = network.size();
  const std::size_t dim = hilbert_dim(n);
  Operator h = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double e = 0.0;
    for (int s = 1; s <= n; ++s) e += network.field(s) * (site_bit(idx, n, s) ? -0.5 : 0.5);
    h(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = e;
  }
  return h;
}

// Matrix elements in the computational basis, per edge (i,j):
//   S^zS^z           diagonal, +1/4 if the bits agree and -1/4 otherwise
//   S^xS^x + S^yS^y  1/2 between |..0..1..> and |..1..0..>  (flip-flop)
//   S^xS^x - S^yS^y  1/2 between |..0..0..> and |..1..1..>  (double flip)
Operator build_coupling(const SpinNetwork& network, HamiltonianKind kind) {
  if (kind.type == CouplingType::zeeman)
    throw std::invalid_argument("build_coupling: zeeman has no coupling terms");
  const int n = network.size();
  const std::size_t dim = hilbert_dim(n);
  Operator h = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& e : network.edges()) {
    const std::size_t mask = site_mask(n, e.i) | site_mask(n, e.j);
    const double b = kind.sign * e.strength;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      const bool same = site_bit(idx, n, e.i) == site_bit(idx, n, e.j);
      const auto r = static_cast<Eigen::Index>(idx);
      const auto c = static_cast<Eigen::Index>(idx ^ mask);
      switch (kind.type) {
        case CouplingType::xy:
          if (!same) h(r, c) += 0.5 * b;
          break;
        case CouplingType::double_quantum:
          if (same) h(r, c) += 0.5 * b;
          break;
        case CouplingType::dipolar:
          // 3 S^zS^z - S.S = 2 S^zS^z - (S^xS^x + S^yS^y)
          h(r, r) += b * (same ? 0.5 : -0.5);
          if (!same) h(r, c) -= 0.5 * b;
          break;
        case CouplingType::zeeman:
          break;
      }
    }
  }
  return h;
}

Operator build_total(const SpinNetwork& network, HamiltonianKind kind) {
  return build_zeeman(network) + build_coupling(network, kind);
}

}  // namespace spinnet
