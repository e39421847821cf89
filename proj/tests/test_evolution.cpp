#include "oracles.hpp"

#include "spinnet/hamiltonians.hpp"
#include "spinnet/kernels.hpp"

#include "doctest.h"

#include <random>

using namespace spinnet;

namespace {

SpinNetwork random_xy(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SpinNetwork net(n);
  for (int i = 1; i < n; ++i) net.add_edge(i, i + 1, u(rng));
  if (n > 2) net.add_edge(1, n, u(rng));
  std::vector<double> f;
  for (int i = 0; i < n; ++i) f.push_back(u(rng));
  net.set_fields(f);
  return net;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("propagator matches the Taylor oracle and is unitary") {
    for (int n = 2; n <= 5; ++n) {
      const Operator h = build_total(random_xy(n, static_cast<std::uint64_t>(n)), HamiltonianKind(CouplingType::xy));
      for (double t : {0.0, 0.013, 0.7, 3.1}) {
        const Operator u = propagator(h, t);
        CHECK(oracle::max_diff(u, oracle::evolve_op(h, t)) < 1e-10);
        CHECK(unitarity_error(u) < 1e-12);
      }
    }
  }

  TEST_CASE("propagator rejects non-Hermitian input") {
    Operator h = Operator::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(propagator(h, 1.0), std::invalid_argument);
  }

  TEST_CASE("spectral propagator group property") {
    const Operator h = build_total(random_xy(4, 9), HamiltonianKind(CouplingType::xy));
    const SpectralPropagator p(h);
    CHECK(oracle::max_diff(p.at(0.3) * p.at(0.45), p.at(0.75)) < 1e-12);
    CHECK(oracle::max_diff(p.at(-0.2), p.at(0.2).adjoint()) < 1e-12);
    const Amplitudes psi = PureState::basis("1010").amplitudes();
    CHECK((p.apply(0.6, psi) - p.at(0.6) * psi).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("schedule order: the first segment acts first") {
    const Operator a = oracle::op(1, 1, 'x'), b = oracle::op(1, 1, 'z');
    Schedule s;
    s.add(a, 0.4).add(b, 1.1);
    CHECK(s.total_time() == doctest::Approx(1.5));
    CHECK(oracle::max_diff(s.propagator(), oracle::evolve_op(b, 1.1) * oracle::evolve_op(a, 0.4)) < 1e-12);
    const PureState out = evolve(s, ket0());
    CHECK((out.amplitudes() - s.propagator() * ket0().amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
    Schedule bad;
    bad.add(a, 1.0);
    CHECK_THROWS(bad.add(oracle::op(2, 1, 'x'), 1.0));
  }

  TEST_CASE("restricted evolution equals full evolution in every excitation sector") {
    for (int n = 3; n <= 6; ++n) {
      const Operator h = build_total(random_xy(n, 100 + static_cast<std::uint64_t>(n)), HamiltonianKind(CouplingType::xy));
      for (int k = 0; k <= n; ++k) {
        const SubspaceBasis basis = excitation_sector(n, k);
        const Operator hr = restrict(h, basis);
        Amplitudes sub = Amplitudes::Zero(static_cast<Eigen::Index>(basis.size()));
        for (Eigen::Index i = 0; i < sub.size(); ++i) sub(i) = Complex(std::cos(0.3 * i + k), std::sin(1.7 * i));
        sub.normalize();
        const double t = 0.37 * n;
        const Amplitudes full = oracle::evolve_op(h, t) * embed(basis, sub);
        const Amplitudes reduced = propagator(hr, t) * sub;
        CHECK((embed(basis, reduced) - full).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(leakage(basis, full) < 1e-10);
      }
    }
  }

  TEST_CASE("restrict detects a non-invariant subspace") {
    SpinNetwork n(2);
    n.add_edge(1, 2, 1.0);
    const Operator hdq = build_coupling(n, HamiltonianKind(CouplingType::double_quantum));
    CHECK_THROWS_AS(restrict(hdq, excitation_sector(2, 0)), std::domain_error);
    CHECK_NOTHROW(restrict(hdq, SubspaceBasis(4, {0, 3})));
  }

  TEST_CASE("sector bases") {
    const SubspaceBasis s = excitation_sector(6, 3);
    CHECK(s.size() == 20);
    CHECK(std::is_sorted(s.indices().begin(), s.indices().end()));
    for (auto idx : s.indices()) CHECK(excitation_count(idx) == 3);
    const SubspaceBasis f = single_flip_by_site(4);
    CHECK(f[0] == basis_index("1000"));
    CHECK(f[3] == basis_index("0001"));
    CHECK(f.position(basis_index("0010")) == 2);
    CHECK(f.position(0) == f.size());
    CHECK_THROWS_AS(SubspaceBasis(4, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SubspaceBasis(4, {5}), std::out_of_range);
  }

  TEST_CASE("sector populations sum to one") {
    const PureState p = PureState::product({ket_plus(), ket_plus(), ket1()});
    const auto pop = sector_populations(3, p.amplitudes());
    REQUIRE(pop.size() == 4);
    CHECK(pop[0] == doctest::Approx(0.0));
    CHECK(pop[1] == doctest::Approx(0.25));
    CHECK(pop[2] == doctest::Approx(0.5));
    CHECK(pop[3] == doctest::Approx(0.25));
    const Amplitudes v = PureState::basis("011").amplitudes();
    CHECK((project(excitation_sector(3, 2), v)).norm() == doctest::Approx(1.0));
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("map_index parallel equals serial") {
    auto f = [](std::size_t i) { return std::sin(0.1 * static_cast<double>(i)) * static_cast<double>(i); };
    CHECK(map_index<double>(10001, Exec::serial, f) == map_index<double>(10001, Exec::parallel, f));
    CHECK(map_index<double>(0, Exec::parallel, f).empty());
  }

  TEST_CASE("overlap series equals direct propagation") {
    const Operator h = build_total(random_xy(4, 3), HamiltonianKind(CouplingType::xy));
    const SpectralPropagator p(h);
    const Amplitudes psi0 = PureState::basis("1000").amplitudes();
    const Amplitudes t1 = PureState::basis("0001").amplitudes();
    const Amplitudes t2 = PureState::normalized(PureState::basis("0100").amplitudes() + t1).amplitudes();
    const OverlapSeries series(p, psi0, {t1, t2});
    const auto times = time_grid(0.0, 2.0, 0.01);
    const auto serial = series.scan(times, Exec::serial);
    const auto parallel = series.scan(times, Exec::parallel);
    CHECK(serial == parallel);
    REQUIRE(serial.size() == 2 * times.size());
    for (std::size_t i = 0; i < times.size(); i += 37) {
      const Amplitudes psi = oracle::evolve_op(h, times[i]) * psi0;
      CHECK(std::abs(serial[2 * i] - t1.dot(psi)) < 1e-11);
      CHECK(std::abs(serial[2 * i + 1] - t2.dot(psi)) < 1e-11);
      CHECK(std::abs(series.at(1, times[i]) - serial[2 * i + 1]) < 1e-14);
    }
  }

  TEST_CASE("time grid is inclusive") {
    const auto g = time_grid(0.0, 2.0, 1e-4);
    CHECK(g.size() == 20001);
    CHECK(g.back() == doctest::Approx(2.0));
    CHECK(time_grid(1.0, 1.0, 0.1).size() == 1);
    CHECK_THROWS_AS(time_grid(0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(time_grid(1.0, 0.0, 0.1), std::invalid_argument);
  }

  TEST_CASE("peak helpers") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5}, v{0.1, 0.5, 0.3, 0.9, 0.85, 0.95};
    const Peak g = global_max(t, v);
    CHECK(g.index == 5);
    CHECK(g.value == 0.95);
    const auto first = first_peak_above(t, v, 0.4);
    REQUIRE(first);
    CHECK(first->t == 1.0);
    CHECK(first_peak_above(t, v, 0.6)->t == 3.0);
    CHECK_FALSE(first_peak_above(t, v, 0.95));
    CHECK_THROWS(global_max(std::vector<double>{}, std::vector<double>{}));
  }

  TEST_CASE("thread count control") {
    const int before = thread_count();
    set_thread_count(2);
    CHECK(thread_count() == 2);
    set_thread_count(before);
  }
}
