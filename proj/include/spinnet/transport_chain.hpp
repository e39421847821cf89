#pragma once

// Resonant end-to-end transfer in a uniformly coupled XY chain with fields
// on the two end sites, plus the generic site-to-site transfer scorer that
// the router and network modules reuse.

#include "spinnet/evolution.hpp"
#include "spinnet/hamiltonians.hpp"
#include "spinnet/kernels.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace spinnet {

// Largest |h_rc| between basis states with different excitation numbers.
// Zero for any Hamiltonian that conserves total S^z.
double excitation_mixing(const Operator& h);

// Throws NumericFailure if excitation_mixing(h) >= tol.
void require_conserving(const Operator& h, double tol = 1e-10);

/// Amplitudes of U(t) between the vacuum |0..0>, the input flip e_from and
/// the output flip e_to. Any single-site state a|0> + b|1> placed on `from`
/// (other sites |0>) is scored against a target on `to` from these four.
struct TransferAmplitudes {
  Complex vac_vac;  // <0|U|0>
  Complex vac_in;   // <0|U|e_from>
  Complex out_vac;  // <e_to|U|0>
  Complex out_in;   // <e_to|U|e_from>
};

// |<target on `to`| U |input on `from`>|. With phase_fix the best Z rotation
// of the output site is applied first.
double transfer_fidelity(const TransferAmplitudes& a, const PureState& input, const PureState& target,
                         bool phase_fix = false);

class SiteTransfer {
 public:
  SiteTransfer(const Operator& h, int n, int from, int to);

  TransferAmplitudes at(double t) const;
  std::vector<TransferAmplitudes> scan(std::span<const double> times, Exec exec) const;
  // Probability that the excitation from `from` sits on `site` at time t.
  double population(int site, double t) const;

 private:
  int n_, from_, to_;
  SpectralPropagator prop_;
  OverlapSeries from_vac_;
  OverlapSeries from_in_;
};

struct ChainSpec {
  int n = 3;
  double J = kTwoPi * 10.0;
  double h = kTwoPi * 100.0;

  void validate() const;
  // Fields h on sites 1 and n, coupling J on (i, i+1).
  SpinNetwork network() const;
  Operator hamiltonian() const;
};

/// Closed-form 3-spin solution in the basis (|001>, |010>, |100>).
/// Eigenvectors are in the unnormalized form (-1,0,1), (1,(h -+ r)/J,1) with
/// r = sqrt(h^2 + 2 J^2), and c_i expand |100> = (0,0,1) in them.
struct Chain3Eigensystem {
  std::array<double, 3> lambda;
  std::array<Eigen::Vector3d, 3> vectors;
  std::array<double, 3> coeffs;
};

Chain3Eigensystem chain3_eigensystem(double h, double J);

// The literal 1-excitation block 1/2 [[0,J,0],[J,2h,J],[0,J,0]].
Eigen::Matrix3d chain3_restricted(double h, double J);

struct ResonanceCandidate {
  double t;
  double cos2;  // cos(lambda_2 t)
  double cos3;  // cos(lambda_3 t)
};

// Grid times with cos(lambda_2 t) < -1 + eps and cos(lambda_3 t) < -1 + eps.
// Each contiguous run of such points is one candidate, represented by its
// point of smallest cos2 + cos3. Throws if dt > pi / (10 |lambda_3|).
std::vector<ResonanceCandidate> resonance_time_scan(double h, double J, double t_max, double dt, double eps = 1e-3);

// Site 1 prepared in `input`, the rest |0>; fidelity of the state at time t
// against `input` on site n (or the reverse direction).
double transport_fidelity(const ChainSpec& spec, const PureState& input, double t, bool phase_fix = false,
                          bool reverse = false);

std::vector<double> transport_scan(const ChainSpec& spec, const PureState& input, std::span<const double> times,
                                   Exec exec = Exec::parallel, bool phase_fix = false);

struct SweepStats {
  double mean;
  double std;  // population standard deviation
  double min;
  double max;
  std::size_t count;
};

// Uniform grid theta in [0, pi] (inclusive), phi = phi_offset + [0, 2 pi).
std::vector<double> bloch_grid_fidelities(const ChainSpec& spec, double t, int n_theta, int n_phi,
                                          double phi_offset = 0.0, Exec exec = Exec::parallel);
SweepStats summarize(const std::vector<double>& values);
SweepStats bloch_sweep(const ChainSpec& spec, double t, int n_theta = 100, int n_phi = 100, double phi_offset = 0.0,
                       Exec exec = Exec::parallel);

enum class ChainParameter { h1, h2, J12 };
ChainParameter parse_chain_parameter(std::string_view name);
const char* to_string(ChainParameter p);

struct SweepPoint {
  double value;
  double fidelity;
};

// Transport fidelity with one parameter replaced by each absolute value.
std::vector<SweepPoint> robustness_sweep(const ChainSpec& spec, ChainParameter parameter,
                                         const std::vector<double>& values, const PureState& input, double t);

// Default ranges: h1 in h [0.8, 1.2], J12 in J [0.8, 1.2], h2 in [-J, J].
std::vector<double> default_sweep_values(const ChainSpec& spec, ChainParameter parameter, int count = 81);

}  // namespace spinnet
