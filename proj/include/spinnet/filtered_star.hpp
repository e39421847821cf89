#pragma once

// Filtered engineering of a star topology: alternating Zeeman and
// double-quantum evolutions whose phases average away the
// peripheral-peripheral couplings while keeping the radial ones.

#include "spinnet/evolution.hpp"
#include "spinnet/hamiltonians.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spinnet {

/// L stages repeated for N cycles. Stage i evolves under the Zeeman
/// Hamiltonian (Omega[i] on the central spin, omega[i] on every peripheral)
/// for tau, then under the DQ Hamiltonian for time_array[i] / N.
struct FilteredSequenceSpec {
  int L = 3;
  int N = 20;
  double tau = 1.0;
  std::vector<double> omega;
  std::vector<double> Omega;
  std::vector<double> time_array;

  // Throws std::invalid_argument on inconsistent lengths or bad values.
  void validate() const;
  // Sum over stages of time_array[i] / N times `cycles`.
  double elapsed_dq_time(int cycles) const;
};

/// Star graph view: site 1 is central, sites 2..n peripheral. Peripheral
/// couplings are allowed; suppressing them is the point of the sequence.
class StarNetwork {
 public:
  explicit StarNetwork(SpinNetwork network);

  const SpinNetwork& network() const { return net_; }
  int size() const { return net_.size(); }
  // Only the (1, j) edges.
  SpinNetwork radial_subgraph() const;
  // Fields for one stage: central on site 1, peripheral on the rest.
  std::vector<double> stage_fields(double central, double peripheral) const;

 private:
  SpinNetwork net_;
};

// Radial couplings b_radial, all peripheral pairs coupled with strengths
// uniform in [0.5, 1.5] * b_radial drawn from std::mt19937_64(seed).
StarNetwork random_star(int n, double b_radial, std::uint64_t seed);

struct StageFrequencies {
  std::vector<double> omega;
  std::vector<double> Omega;
};

// omega_i = (2L+1) pi / (2L), Omega_i = -omega_i for every stage.
StageFrequencies default_parameters(int L);

// Spec with default frequencies and the given DQ time array (size L).
FilteredSequenceSpec make_default_spec(int L, int N, double tau, std::vector<double> time_array);

// L uniform draws in (0, upper].
std::vector<double> random_time_array(int L, double upper, std::uint64_t seed);

// (1 - e^{iNx}) / (1 - e^{ix}); exactly N at x = 0 mod 2 pi.
Complex filter_function(int N, double x);

// sum_{l<m} b_lm / 2 (S+_l S+_m e^{i d tau} + S-_l S-_m e^{-i d tau}),
// d = f_l + f_m. Conjugating exp(-i H_DQ t) by U_Z(tau) = exp(-i H_Z tau)
// gives exp(-i t H_m).
Operator toggling_frame_hamiltonian(const SpinNetwork& network, const std::vector<double>& stage_fields, double tau);

/// Decoupling conditions, each reported as a residual modulo its period:
/// 2 tau sum_i omega_i = (2l+1) pi and (Omega_i + omega_i) tau = 2 m_i pi.
struct ConditionReport {
  double peripheral_residual = 0.0;
  std::vector<double> central_residuals;
  double tolerance = 1e-9;
  bool peripheral_ok() const { return peripheral_residual < tolerance; }
  bool pass() const;
};

ConditionReport check_conditions(const FilteredSequenceSpec& spec);

enum class Interaction { central_peripheral, peripheral_peripheral };

// Number of Zeeman periods of each stage applied before the DQ segment of
// `stage` (1-based) in `cycle` (1-based): cycle for s <= stage, cycle-1 after.
std::vector<int> accumulated_coefficients(int L, int cycle, int stage);

// Per-stage frequency weight of an interaction: Omega_s + omega_s for a
// radial pair, 2 omega_s for a peripheral pair.
double stage_weight(const FilteredSequenceSpec& spec, int stage, Interaction kind);

// Phase x of the leading factor exp(i tau x) in the stage series.
double multiplicative_term(const FilteredSequenceSpec& spec, int stage, Interaction kind);

// sum_{k=1..N} exp(i tau sum_s c_s(k) w_s), summed term by term.
Complex series_sum_direct(const FilteredSequenceSpec& spec, int stage, Interaction kind);
// exp(i tau x_stage) F_N(tau sum_s w_s).
Complex series_sum_closed(const FilteredSequenceSpec& spec, int stage, Interaction kind);

// Propagator after `cycles` full cycles, by direct multiplication of the
// segment propagators. 0 <= cycles <= spec.N.
Operator sequence_propagator(const FilteredSequenceSpec& spec, const StarNetwork& star, int cycles);

// exp(-i H0 T) with H0 the DQ Hamiltonian of the radial subgraph.
Operator star_target(const StarNetwork& star, double elapsed_dq_time);

enum class FidelityMetric { gate, state };
// rotating: the accumulated Zeeman propagator is removed before comparing.
enum class Frame { lab, rotating };

struct ProfileOptions {
  FidelityMetric metric = FidelityMetric::gate;
  Frame frame = Frame::lab;
  // Initial state for the state metric; defaults to the central spin flipped.
  std::optional<PureState> initial;
};

struct ProfilePoint {
  int cycle;
  double fidelity;
};

// Fidelity against star_target at cycles 1..N (or 1..max_cycles if given).
std::vector<ProfilePoint> fidelity_profile(const FilteredSequenceSpec& spec, const StarNetwork& star,
                                           const ProfileOptions& options = {}, int max_cycles = -1);

// Cycles whose fidelity is strictly above both neighbours. Cycle 0 is the
// identity (fidelity `cycle0`); the last cycle is compared to its left only.
std::vector<int> local_maxima(const std::vector<ProfilePoint>& profile, double cycle0 = 1.0);

struct RobustnessPoint {
  double t;
  double fidelity;
};

// Fidelity at `cycle` with a uniform time array [t, ..., t] per t value.
std::vector<RobustnessPoint> time_robustness(const FilteredSequenceSpec& spec_template, const StarNetwork& star,
                                             const std::vector<double>& t_values, int cycle = 8,
                                             const ProfileOptions& options = {});

}  // namespace spinnet
