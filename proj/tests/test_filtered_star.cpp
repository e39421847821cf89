#include "oracles.hpp"

#include "spinnet/filtered_star.hpp"

#include "doctest.h"

#include <random>

using namespace spinnet;

namespace {

Complex filter_direct(int N, double x) {
  Complex s{};
  for (int k = 0; k < N; ++k) s += std::polar(1.0, k * x);
  return s;
}

std::vector<oracle::Edge> edges_of(const SpinNetwork& net) {
  std::vector<oracle::Edge> e;
  for (const auto& c : net.edges()) e.push_back({c.i, c.j, c.strength});
  return e;
}

// Stage by stage product with every factor from the Taylor oracle.
Operator sequence_oracle(const FilteredSequenceSpec& spec, const StarNetwork& star, int cycles) {
  const int n = star.size();
  const Operator hdq = oracle::dq(n, edges_of(star.network()));
  Operator u = Operator::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int k = 0; k < cycles; ++k)
    for (int s = 0; s < spec.L; ++s) {
      const auto i = static_cast<std::size_t>(s);
      const Operator hz = oracle::zeeman(n, star.stage_fields(spec.Omega[i], spec.omega[i]));
      u = oracle::evolve_op(hdq, spec.time_array[i] / spec.N) * oracle::evolve_op(hz, spec.tau) * u;
    }
  return u;
}

// Fields equivalent to the Zeeman periods accumulated before a DQ segment.
std::vector<double> accumulated_fields(const FilteredSequenceSpec& spec, const StarNetwork& star, int cycle, int stage) {
  const auto c = accumulated_coefficients(spec.L, cycle, stage);
  std::vector<double> f(static_cast<std::size_t>(star.size()), 0.0);
  for (int s = 0; s < spec.L; ++s) {
    const auto sf = star.stage_fields(spec.Omega[static_cast<std::size_t>(s)], spec.omega[static_cast<std::size_t>(s)]);
    for (std::size_t q = 0; q < f.size(); ++q) f[q] += c[static_cast<std::size_t>(s)] * sf[q];
  }
  return f;
}

}  // namespace

TEST_SUITE("filtered_star") {
  TEST_CASE("filter function equals the direct geometric sum") {
    for (int N = 1; N <= 24; ++N)
      for (double x : {0.0, 0.3, 1.0, kPi, 2.5, kTwoPi, -4.1, 7.0 * kPi / 6.0, 11.0})
        CHECK(std::abs(filter_function(N, x) - filter_direct(N, x)) < 1e-11);
    CHECK_THROWS_AS(filter_function(0, 1.0), std::invalid_argument);
  }

  TEST_CASE("filter function parity at pi") {
    for (int N = 1; N <= 20; ++N) {
      CHECK(std::abs(filter_function(N, kPi) - Complex(N % 2 ? 1.0 : 0.0, 0.0)) < 1e-12);
      CHECK(std::abs(filter_function(N, kTwoPi) - Complex(N, 0.0)) < 1e-12);
    }
  }

  TEST_CASE("toggling frame identity on random networks") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-10.0, 10.0), ut(0.0, 0.2);
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 3 + trial % 3;
      SpinNetwork net(n);
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) net.add_edge(i, j, u(rng));
      std::vector<double> f;
      for (int i = 0; i < n; ++i) f.push_back(u(rng));
      const double tau = std::abs(u(rng)) / 10.0, t = ut(rng);
      const Operator uz = oracle::evolve_op(oracle::zeeman(n, f), tau);
      const Operator udq = oracle::evolve_op(oracle::dq(n, edges_of(net)), t);
      const Operator lhs = uz.adjoint() * udq * uz;
      const Operator rhs = oracle::evolve_op(toggling_frame_hamiltonian(net, f, tau), t);
      CHECK(oracle::max_diff(lhs, rhs) < 1e-9);
    }
  }

  TEST_CASE("default parameters satisfy the decoupling conditions") {
    for (int L = 1; L <= 6; ++L) {
      const auto spec = make_default_spec(L, 20, 1.0, std::vector<double>(static_cast<std::size_t>(L), 0.05));
      CHECK(check_conditions(spec).pass());
      auto broken = spec;
      broken.omega[0] += 0.1;
      CHECK_FALSE(check_conditions(broken).pass());
    }
    const auto p = default_parameters(3);
    CHECK(p.omega[0] == doctest::Approx(7.0 * kPi / 6.0));
    CHECK(p.Omega[2] == doctest::Approx(-7.0 * kPi / 6.0));
  }

  TEST_CASE("accumulated coefficients") {
    CHECK(accumulated_coefficients(3, 2, 2) == std::vector<int>{2, 2, 1});
    CHECK(accumulated_coefficients(3, 1, 3) == std::vector<int>{1, 1, 1});
    CHECK(accumulated_coefficients(2, 1, 1) == std::vector<int>{1, 0});
    CHECK_THROWS(accumulated_coefficients(3, 1, 4));
  }

  TEST_CASE("series closed forms equal direct summation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int L = 1; L <= 4; ++L)
      for (int N : {1, 2, 7, 20}) {
        FilteredSequenceSpec spec{L, N, 0.3 + 0.2 * L, {}, {}, {}};
        for (int s = 0; s < L; ++s) {
          spec.omega.push_back(u(rng));
          spec.Omega.push_back(u(rng));
          spec.time_array.push_back(0.05);
        }
        for (int stage = 1; stage <= L; ++stage)
          for (auto kind : {Interaction::central_peripheral, Interaction::peripheral_peripheral})
            CHECK(std::abs(series_sum_direct(spec, stage, kind) - series_sum_closed(spec, stage, kind)) < 1e-12);
      }
  }

  TEST_CASE("sequence propagator matches the stage-by-stage oracle") {
    const StarNetwork star = random_star(4, 3.0, 7);
    const auto spec = make_default_spec(3, 6, 1.0, {0.05, 0.08, 0.02});
    for (int c : {0, 1, 4})
      CHECK(oracle::max_diff(sequence_propagator(spec, star, c), sequence_oracle(spec, star, c)) < 1e-10);
    CHECK_THROWS(sequence_propagator(spec, star, 7));
  }

  TEST_CASE("L=2 rewrite as total Zeeman times toggled DQ evolutions") {
    const StarNetwork star = random_star(4, 2.0, 9);
    FilteredSequenceSpec spec{2, 5, 0.7, {1.3, -0.4}, {0.2, 2.2}, {0.06, 0.03}};
    const int n = star.size();
    const int cycles = 3;
    Operator rewritten = Operator::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int k = 1; k <= cycles; ++k)
      for (int s = 1; s <= spec.L; ++s) {
        const Operator hm = toggling_frame_hamiltonian(star.network(), accumulated_fields(spec, star, k, s), spec.tau);
        rewritten = oracle::evolve_op(hm, spec.time_array[static_cast<std::size_t>(s - 1)] / spec.N) * rewritten;
      }
    Operator total_z = Operator::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int s = 0; s < spec.L; ++s) {
      const auto i = static_cast<std::size_t>(s);
      total_z = oracle::evolve_op(oracle::zeeman(n, star.stage_fields(spec.Omega[i], spec.omega[i])), cycles * spec.tau) *
                total_z;
    }
    CHECK(oracle::max_diff(total_z * rewritten, sequence_propagator(spec, star, cycles)) < 1e-10);
  }

  TEST_CASE("first order average Hamiltonian follows the series sums") {
    const StarNetwork star = random_star(4, 1.0, 2);
    const auto spec = make_default_spec(3, 20, 1.0, {0.05, 0.05, 0.05});
    const int n = star.size();
    Operator avg = Operator::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (int k = 1; k <= spec.N; ++k)
      for (int s = 1; s <= spec.L; ++s)
        avg += (spec.time_array[static_cast<std::size_t>(s - 1)] / spec.N) *
               toggling_frame_hamiltonian(star.network(), accumulated_fields(spec, star, k, s), spec.tau);
    for (const auto& e : star.network().edges()) {
      const auto lo = Eigen::Index{0};
      const auto hi = static_cast<Eigen::Index>(site_mask(n, e.i) | site_mask(n, e.j));
      const auto kind = e.i == 1 ? Interaction::central_peripheral : Interaction::peripheral_peripheral;
      Complex expect{};
      for (int s = 1; s <= spec.L; ++s)
        expect += 0.5 * e.strength * (spec.time_array[static_cast<std::size_t>(s - 1)] / spec.N) *
                  series_sum_closed(spec, s, kind);
      CHECK(std::abs(avg(lo, hi) - expect) < 1e-12);
      // Radial pairs keep their full weight, peripheral pairs average out for even N.
      CHECK(std::abs(expect) == doctest::Approx(e.i == 1 ? 0.5 * e.strength * 0.15 : 0.0).epsilon(1e-9));
    }
  }

  TEST_CASE("random star structure and determinism") {
    const StarNetwork a = random_star(5, 20.0, 1), b = random_star(5, 20.0, 1), c = random_star(5, 20.0, 2);
    CHECK(a.network().edges().size() == 10);
    for (std::size_t k = 0; k < 10; ++k) CHECK(a.network().edges()[k].strength == b.network().edges()[k].strength);
    CHECK(a.network().edges().back().strength != c.network().edges().back().strength);
    for (const auto& e : a.network().edges()) {
      if (e.i == 1) CHECK(e.strength == 20.0);
      else CHECK((e.strength >= 10.0 && e.strength <= 30.0));
    }
    CHECK(a.radial_subgraph().edges().size() == 4);
    CHECK_THROWS_AS(StarNetwork(SpinNetwork(2)), std::invalid_argument);
  }

  TEST_CASE("random time arrays lie in (0, upper]") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
      for (double t : random_time_array(3, 0.1, seed)) CHECK((t > 0.0 && t <= 0.1));
    CHECK(random_time_array(3, 0.1, 4) == random_time_array(3, 0.1, 4));
  }

  TEST_CASE("zero couplings give unit rotating-frame fidelity at every cycle") {
    SpinNetwork net(4);
    StarNetwork star(net);
    const auto spec = make_default_spec(3, 8, 1.0, {0.05, 0.05, 0.05});
    ProfileOptions o;
    o.frame = Frame::rotating;
    for (const auto& p : fidelity_profile(spec, star, o)) CHECK(p.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    o.metric = FidelityMetric::state;
    for (const auto& p : fidelity_profile(spec, star, o)) CHECK(p.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("profile and gate fidelity agree with the oracle") {
    const StarNetwork star = random_star(4, 5.0, 3);
    const auto spec = make_default_spec(3, 6, 1.0, {0.04, 0.04, 0.04});
    const auto prof = fidelity_profile(spec, star);
    const Operator target_dq = oracle::dq(4, edges_of(star.radial_subgraph()));
    for (const auto& p : prof) {
      const Operator want = oracle::evolve_op(target_dq, spec.elapsed_dq_time(p.cycle));
      const Operator got = sequence_oracle(spec, star, p.cycle);
      const double f = std::abs((want.adjoint() * got).trace()) / 16.0;
      CHECK(p.fidelity == doctest::Approx(f).epsilon(1e-9));
    }
  }

  TEST_CASE("local maxima detection") {
    const std::vector<ProfilePoint> prof{{1, 0.2}, {2, 0.5}, {3, 0.4}, {4, 0.9}, {5, 0.95}};
    CHECK(local_maxima(prof) == std::vector<int>{2, 5});
    CHECK(local_maxima(prof, 0.1) == std::vector<int>{2, 5});
    CHECK(local_maxima({{1, 0.3}, {2, 0.1}}, 0.1) == std::vector<int>{1});
  }

  TEST_CASE("spec validation") {
    auto spec = make_default_spec(3, 20, 1.0, {0.05, 0.05, 0.05});
    spec.time_array.pop_back();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_default_spec(3, 0, 1.0, {0.05, 0.05, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(make_default_spec(3, 20, -1.0, {0.05, 0.05, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(make_default_spec(2, 20, 1.0, {0.05, -0.01}), std::invalid_argument);
    CHECK(make_default_spec(3, 20, 1.0, {0.05, 0.05, 0.05}).elapsed_dq_time(20) == doctest::Approx(0.15));
  }
}
