#pragma once

#include "spinnet/spin_core.hpp"

#include <string_view>

namespace spinnet {

enum class CouplingType { dipolar, double_quantum, xy, zeeman };

CouplingType parse_coupling_type(std::string_view name);

// Pairwise terms per edge (i<j, each unordered pair once):
//   dipolar         b (3 S^z S^z - S.S)
//   double_quantum  b (S^x S^x - S^y S^y)
//   xy              b (S^x S^x + S^y S^y)
// `sign` multiplies the whole coupling sum, so the 5-spin router's
// "- sum J (...)" can be entered with positive table couplings.
struct HamiltonianKind {
  CouplingType type = CouplingType::xy;
  int sign = +1;

  HamiltonianKind() = default;
  HamiltonianKind(CouplingType t, int s = +1);
};

// sum_i h_i S_i^z (diagonal).
Operator build_zeeman(const SpinNetwork& network);

Operator build_coupling(const SpinNetwork& network, HamiltonianKind kind);

// build_zeeman + build_coupling.
Operator build_total(const SpinNetwork& network, HamiltonianKind kind);

}  // namespace spinnet
