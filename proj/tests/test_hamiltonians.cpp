#include "oracles.hpp"

#include "spinnet/hamiltonians.hpp"

#include "doctest.h"

#include <random>

using namespace spinnet;

namespace {

struct RandomNet {
  SpinNetwork net;
  std::vector<oracle::Edge> edges;
  std::vector<double> fields;
};

RandomNet random_network(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution keep(0.6);
  RandomNet r{SpinNetwork(n), {}, {}};
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (keep(rng)) {
        const double b = u(rng);
        r.net.add_edge(i, j, b);
        r.edges.push_back({i, j, b});
      }
  for (int i = 1; i <= n; ++i) r.fields.push_back(u(rng));
  r.net.set_fields(r.fields);
  return r;
}

Operator total_sz(int n) {
  Operator s = Operator::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int k = 1; k <= n; ++k) s += oracle::op(n, k, 'z');
  return s;
}

}  // namespace

TEST_SUITE("hamiltonians") {
  TEST_CASE("builders agree with Kronecker oracles on random networks") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + trial % 4;
      const auto r = random_network(n, rng);
      CHECK(oracle::max_diff(build_zeeman(r.net), oracle::zeeman(n, r.fields)) < 1e-14);
      CHECK(oracle::max_diff(build_total(r.net, HamiltonianKind(CouplingType::xy)), oracle::xy(n, r.edges, r.fields)) <
            1e-14);
      CHECK(oracle::max_diff(build_total(r.net, HamiltonianKind(CouplingType::xy, -1)),
                             oracle::xy(n, r.edges, r.fields, -1)) < 1e-14);
      CHECK(oracle::max_diff(build_coupling(r.net, HamiltonianKind(CouplingType::double_quantum)),
                             oracle::dq(n, r.edges)) < 1e-14);
      CHECK(oracle::max_diff(build_coupling(r.net, HamiltonianKind(CouplingType::dipolar)),
                             oracle::dipolar(n, r.edges)) < 1e-14);
    }
  }

  TEST_CASE("hermiticity and excitation structure") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + trial % 3;
      const auto r = random_network(n, rng);
      const Operator sz = total_sz(n);
      const Operator hxy = build_total(r.net, HamiltonianKind(CouplingType::xy));
      const Operator hdq = build_coupling(r.net, HamiltonianKind(CouplingType::double_quantum));
      const Operator hdip = build_total(r.net, HamiltonianKind(CouplingType::dipolar));
      CHECK(hermiticity_error(hxy) == 0.0);
      CHECK(hermiticity_error(hdq) == 0.0);
      CHECK(max_abs(commutator(hxy, sz)) < 1e-13);
      CHECK(max_abs(commutator(hdip, sz)) < 1e-13);
      for (Eigen::Index a = 0; a < hdq.rows(); ++a)
        for (Eigen::Index b = 0; b < hdq.cols(); ++b)
          if (hdq(a, b) != Complex{})
            CHECK(std::abs(excitation_count(static_cast<std::size_t>(a)) -
                           excitation_count(static_cast<std::size_t>(b))) == 2);
    }
  }

  TEST_CASE("single edge flip-flop element") {
    SpinNetwork n(2);
    n.add_edge(1, 2, 4.0);
    const Operator h = build_coupling(n, HamiltonianKind(CouplingType::xy));
    CHECK(h(1, 2).real() == doctest::Approx(2.0));
    CHECK(h(0, 3) == Complex{});
    const Operator d = build_coupling(n, HamiltonianKind(CouplingType::double_quantum));
    CHECK(d(0, 3).real() == doctest::Approx(2.0));
  }

  TEST_CASE("kind parsing and validation") {
    CHECK(parse_coupling_type("dq") == CouplingType::double_quantum);
    CHECK(parse_coupling_type("xy") == CouplingType::xy);
    CHECK_THROWS_AS(parse_coupling_type("heisenberg"), std::invalid_argument);
    CHECK_THROWS_AS(HamiltonianKind(CouplingType::xy, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_coupling(SpinNetwork(2), HamiltonianKind(CouplingType::zeeman)), std::invalid_argument);
  }
}
