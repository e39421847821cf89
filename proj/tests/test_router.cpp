#include "oracles.hpp"

#include "spinnet/router.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <random>

using namespace spinnet;

namespace {

Router5Parameters random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  return {{u(rng), u(rng), u(rng), u(rng), u(rng)}, u(rng), u(rng), u(rng), u(rng)};
}

Operator global_flip(int n) {
  Operator x = Operator::Identity(1, 1);
  for (int k = 0; k < n; ++k) x = oracle::kron(x, 2.0 * oracle::pauli_half('x'));
  return x;
}

}  // namespace

TEST_SUITE("router") {
  TEST_CASE("parameter rows satisfy their energy matching conditions") {
    for (auto port : {OutputPort::O1, OutputPort::O2}) {
      const auto p = router5_parameters(kTwoPi * 100.0, kTwoPi * 10.0, port);
      const auto r = router5_condition_residuals(p, port);
      CHECK(std::abs(r[0]) < 1e-12);
      CHECK(std::abs(r[1]) < 1e-12);
      const auto other = router5_condition_residuals(p, port == OutputPort::O1 ? OutputPort::O2 : OutputPort::O1);
      CHECK(std::abs(other[0]) + std::abs(other[1]) > 1.0);
    }
  }

  TEST_CASE("router Hamiltonian uses the negative coupling sign") {
    const auto p = router5_parameters(3.0, 1.0, OutputPort::O1);
    std::vector<oracle::Edge> e{{1, 2, p.J12}, {2, 3, p.J23}, {3, 4, p.J34}, {3, 5, p.J35}};
    CHECK(oracle::max_diff(router5_hamiltonian(p), oracle::xy(5, e, {p.h.begin(), p.h.end()}, -1)) < 1e-14);
  }

  TEST_CASE("hole basis is the global spin flip of the single-flip basis") {
    // X^{(x)5} H(h) X^{(x)5} = H(-h): the hole block at h equals the flip block at -h.
    std::mt19937_64 rng(4);
    const Operator x = global_flip(5);
    for (int trial = 0; trial < 5; ++trial) {
      auto p = random_params(rng);
      auto q = p;
      for (auto& v : q.h) v = -v;
      CHECK(oracle::max_diff(x * router5_hamiltonian(p) * x, router5_hamiltonian(q)) < 1e-13);
      const SubspaceBasis hole = router5_hole_basis(), flip = single_flip_by_site(5);
      CHECK(oracle::max_diff(restrict(router5_hamiltonian(p), hole), restrict(router5_hamiltonian(q), flip)) < 1e-13);
    }
  }

  TEST_CASE("rotated hole block matches its closed form") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_params(rng);
      CHECK(oracle::max_diff(basis_change_check(p), basis_change_closed_form(p)) < 1e-12);
    }
    const Operator v = router5_rotation();
    CHECK(unitarity_error(v) < 1e-15);
  }

  TEST_CASE("effective eigenvalues are the rotated diagonal") {
    auto p = router5_parameters(7.0, 2.0, OutputPort::O2);
    const auto e = effective_eigenvalues(p);
    const Operator m = basis_change_closed_form(p);
    const std::array<double, 5> d{e.E_I, e.E_plus, e.E_minus, e.E_O1, e.E_O2};
    for (int k = 0; k < 5; ++k) CHECK(m(k, k).real() == doctest::Approx(d[static_cast<std::size_t>(k)]));
    p.h[1] += 1.0;
    CHECK_THROWS_AS(effective_eigenvalues(p), std::invalid_argument);
  }

  TEST_CASE("routing time for the thesis parameters") {
    const auto rt = routing_time(kTwoPi * 100.0, kTwoPi * 10.0);
    CHECK(rt.m1_min == 3);
    CHECK(rt.tau_min == doctest::Approx(0.1).epsilon(1e-12));
    for (std::size_t k = 0; k < rt.admissible.size(); ++k) {
      CHECK(rt.admissible[k].m1 == 3 * static_cast<long>(k + 1));
      CHECK(rt.admissible[k].m2 == 2 * static_cast<long>(k + 1));
      CHECK(rt.admissible[k].transfers == (k % 2 == 0));
    }
  }

  TEST_CASE("routing time for other ratios") {
    const auto rt = routing_time(6.0, 1.0);  // (G-2J)/(G+2J) = 1/2
    CHECK(rt.m1_min == 2);
    CHECK(rt.tau_min == doctest::Approx(16.0 * kPi / 8.0));
    CHECK_THROWS_AS(routing_time(1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(routing_time(std::sqrt(2.0), 1.0, 50), std::domain_error);
  }

  TEST_CASE("reduced three-level dynamics reach O1 exactly at tau_min") {
    const double G = kTwoPi * 100.0, J = kTwoPi * 10.0;
    const Eigen::Matrix3d m = router5_reduced_hamiltonian(G, J);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> s(m);
    const double tau = routing_time(G, J).tau_min;
    Complex a{};
    for (int k = 0; k < 3; ++k) a += s.eigenvectors()(2, k) * s.eigenvectors()(0, k) * std::polar(1.0, -s.eigenvalues()(k) * tau);
    CHECK(std::abs(a) == doctest::Approx(1.0).epsilon(1e-12));
    // End-to-end amplitude of a uniform 3-level chain: (cos(J t / 2) - 1) / 2 up to phase.
    for (double t : {0.02, 0.05, 0.13}) {
      Complex b{};
      for (int k = 0; k < 3; ++k) b += s.eigenvectors()(2, k) * s.eigenvectors()(0, k) * std::polar(1.0, -s.eigenvalues()(k) * t);
      CHECK(std::abs(b) == doctest::Approx(std::abs(std::cos(J * t / 2.0) - 1.0) / 2.0).epsilon(1e-10));
    }
  }

  TEST_CASE("four-spin router delivers to one port at a time") {
    const auto times = time_grid(0.0, 3.0, 1e-3);
    for (bool switched : {false, true}) {
      const RouterSpec spec{RouterVariant::four, 0.0, kTwoPi * 10.0, kTwoPi * 100.0, switched};
      const auto run = simulate_router(spec, ket1(), times);
      REQUIRE(run.ports.size() == 2);
      const auto& on = run.ports[switched ? 1 : 0];
      const auto& off = run.ports[switched ? 0 : 1];
      const Peak pk = global_max(times, on.fidelity);
      CHECK(pk.value > 0.95);
      CHECK(off.fidelity[pk.index] < 0.1);
    }
  }

  TEST_CASE("router scans are identical serial and parallel") {
    const RouterSpec spec;
    const auto times = time_grid(0.0, 0.3, 1e-3);
    const auto a = simulate_router(spec, ket_plus(), times, std::nullopt, false, Exec::serial);
    const auto b = simulate_router(spec, ket_plus(), times, std::nullopt, false, Exec::parallel);
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.ports[k].fidelity == b.ports[k].fidelity);
    CHECK(output_ports(spec) == std::array<int, 2>{4, 5});
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS((RouterSpec{RouterVariant::five, 0.0, 1.0, 1.0, false}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((RouterSpec{RouterVariant::four, 1.0, 0.0, 1.0, false}.validate()), std::invalid_argument);
  }
}
