#pragma once

// CNOT on logical qubits (|0> -> |01>, |1> -> |10>) realised by the natural
// XY evolution of a 6-spin network, found by differential evolution.

#include "spinnet/kernels.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace spinnet {

struct CnotParams {
  double J = 0.0;
  std::array<double, 6> h{};
  double t = 0.0;

  std::array<double, 8> to_vector() const;
  static CnotParams from_vector(const std::array<double, 8>& v);
};

// J = -78.2278, h = (304.2089, 58.5906, -749.6377, 196.3780, 64.4191,
// 61.9356), t = 30.9105.
CnotParams published_cnot_optimum();

// Edges (1,3),(2,3),(3,4),(4,5),(4,6) with coupling J and fields h.
SpinNetwork cnot_architecture(const CnotParams& params);

struct TruthRow {
  std::string input;
  std::string output;
};

// Logical |ab> encoded on six spins; leftmost character is site 1.
std::array<TruthRow, 4> cnot_truth_table();

// magnitude: (1/4) sum_i (1 - |<O_i|U|I_i>|)
// coherent:  (1/4) |sum_i (1 - <O_i|U|I_i>)|
enum class CostForm { magnitude, coherent };

struct CnotEvaluation {
  std::array<Complex, 4> overlaps;  // <O_i|U|I_i>
  double cost_magnitude;
  double cost_coherent;
  double superposition_overlap;
  double leakage;  // probability outside the three-flip sector, worst row
};

// Full 64-dimensional evolution. `sign` multiplies the coupling sum.
CnotEvaluation evaluate_cnot(const CnotParams& params, int sign = +1);

// Fast path in the 20-dimensional three-flip sector; same value as
// evaluate_cnot up to round-off.
double cnot_cost(const CnotParams& params, CostForm form = CostForm::magnitude, int sign = +1);

// |<target superposition| U |input superposition>| over the four rows.
double verify_cnot(const CnotParams& params, int sign = +1);

struct Bounds {
  std::array<double, 8> lower;
  std::array<double, 8> upper;
};

// |J| <= 1000, |h_i| <= 1000, t in (0, 50].
Bounds default_cnot_bounds();

struct OptimizerOptions {
  std::uint64_t seed = 1;
  long budget = 20000;  // cost evaluations, >= population
  int population = 64;
  double crossover = 0.9;
  double weight = 0.7;
  Bounds bounds = default_cnot_bounds();
  std::vector<CnotParams> initial;  // replaces the first random members
  CostForm form = CostForm::magnitude;
  int sign = +1;
  Exec exec = Exec::parallel;
};

struct OptimizerResult {
  CnotParams best;
  double cost;
  long evaluations;
  std::vector<double> history;  // best cost after each generation, gen 0 first
};

// rand/1/bin differential evolution. Identical options give identical
// results for any thread count.
OptimizerResult optimize_cnot(const OptimizerOptions& options);

// JSON artifact: seed, bounds, hyperparameters, history, final params.
std::string optimizer_artifact(const OptimizerOptions& options, const OptimizerResult& result);

}  // namespace spinnet
