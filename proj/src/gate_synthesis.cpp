#include "spinnet/gate_synthesis.hpp"

#include "spinnet/hamiltonians.hpp"

#include "json.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace spinnet {

std::array<double, 8> CnotParams::to_vector() const { return {J, h[0], h[1], h[2], h[3], h[4], h[5], t}; }

CnotParams CnotParams::from_vector(const std::array<double, 8>& v) {
  return {v[0], {v[1], v[2], v[3], v[4], v[5], v[6]}, v[7]};
}

CnotParams published_cnot_optimum() {
  return {-78.2278, {304.2089, 58.5906, -749.6377, 196.3780, 64.4191, 61.9356}, 30.9105};
}

namespace {

constexpr int kEdges[5][2] = {{1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}};
constexpr int kSpins = 6;

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("coupling sign must be +1 or -1");
}

// Three-flip sector of six spins with the flip-flop pairs of every edge.
struct Sector {
  SubspaceBasis basis = excitation_sector(kSpins, 3);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> hops;
  std::array<std::size_t, 4> in{}, out{};

  Sector() {
    for (const auto& e : kEdges) {
      const std::size_t mask = site_mask(kSpins, e[0]) | site_mask(kSpins, e[1]);
      for (std::size_t r = 0; r < basis.size(); ++r) {
        const std::size_t idx = basis[r];
        if (site_bit(idx, kSpins, e[0]) == site_bit(idx, kSpins, e[1])) continue;
        const std::size_t c = basis.position(idx ^ mask);
        if (r < c) hops.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
    const auto rows = cnot_truth_table();
    for (std::size_t k = 0; k < 4; ++k) {
      in[k] = basis.position(basis_index(rows[k].input));
      out[k] = basis.position(basis_index(rows[k].output));
    }
  }
};

const Sector& sector() {
  static const Sector s;
  return s;
}

struct SectorOverlaps {
  std::array<Complex, 4> diag;
  Complex superposition;
};

SectorOverlaps sector_overlaps(const CnotParams& p, int sign) {
  check_sign(sign);
  const Sector& s = sector();
  const auto m = static_cast<Eigen::Index>(s.basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    double e = 0.0;
    for (int site = 1; site <= kSpins; ++site)
      e += p.h[static_cast<std::size_t>(site - 1)] * (site_bit(s.basis[static_cast<std::size_t>(r)], kSpins, site) ? -0.5 : 0.5);
    h(r, r) = e;
  }
  for (const auto& [r, c] : s.hops) {
    h(r, c) += 0.5 * sign * p.J;
    h(c, r) += 0.5 * sign * p.J;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  const Eigen::VectorXd& w = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::VectorXcd phase(m);
  for (Eigen::Index k = 0; k < m; ++k) phase(k) = std::polar(1.0, -w(k) * p.t);
  auto element = [&](std::size_t o, std::size_t i) {
    Complex acc{};
    for (Eigen::Index k = 0; k < m; ++k)
      acc += v(static_cast<Eigen::Index>(o), k) * v(static_cast<Eigen::Index>(i), k) * phase(k);
    return acc;
  };
  SectorOverlaps out{};
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const Complex x = element(s.out[a], s.in[b]);
      out.superposition += x;
      if (a == b) out.diag[a] = x;
    }
  }
  out.superposition /= 4.0;
  return out;
}

double cost_from(const std::array<Complex, 4>& ov, CostForm form) {
  if (form == CostForm::magnitude) {
    double c = 0.0;
    for (const auto& x : ov) c += 1.0 - std::abs(x);
    return std::max(0.0, c / 4.0);
  }
  Complex c{};
  for (const auto& x : ov) c += 1.0 - x;
  return std::abs(c) / 4.0;
}

}  // namespace

SpinNetwork cnot_architecture(const CnotParams& params) {
  SpinNetwork net(kSpins);
  for (const auto& e : kEdges) net.add_edge(e[0], e[1], params.J);
  net.set_fields({params.h.begin(), params.h.end()});
  return net;
}

std::array<TruthRow, 4> cnot_truth_table() {
  return {{{"010101", "010101"}, {"011001", "011010"}, {"100101", "100110"}, {"101001", "101001"}}};
}

CnotEvaluation evaluate_cnot(const CnotParams& params, int sign) {
  check_sign(sign);
  if (!std::isfinite(params.t) || params.t < 0.0) throw std::invalid_argument("gate time must be finite and >= 0");
  const SpectralPropagator prop(build_total(cnot_architecture(params), HamiltonianKind(CouplingType::xy, sign)));
  const SubspaceBasis three = excitation_sector(kSpins, 3);
  const auto rows = cnot_truth_table();
  CnotEvaluation ev{};
  Amplitudes sup_in = Amplitudes::Zero(64), sup_out = Amplitudes::Zero(64);
  for (std::size_t k = 0; k < 4; ++k) {
    const PureState in = PureState::basis(rows[k].input);
    const Amplitudes psi = prop.apply(params.t, in.amplitudes());
    ev.overlaps[k] = psi(static_cast<Eigen::Index>(basis_index(rows[k].output)));
    ev.leakage = std::max(ev.leakage, leakage(three, psi));
    sup_in += 0.5 * in.amplitudes();
    sup_out(static_cast<Eigen::Index>(basis_index(rows[k].output))) += 0.5;
  }
  ev.cost_magnitude = cost_from(ev.overlaps, CostForm::magnitude);
  ev.cost_coherent = cost_from(ev.overlaps, CostForm::coherent);
  ev.superposition_overlap = std::min(1.0, std::abs(sup_out.dot(prop.apply(params.t, sup_in))));
  return ev;
}

double cnot_cost(const CnotParams& params, CostForm form, int sign) {
  return cost_from(sector_overlaps(params, sign).diag, form);
}

double verify_cnot(const CnotParams& params, int sign) {
  return std::min(1.0, std::abs(sector_overlaps(params, sign).superposition));
}

Bounds default_cnot_bounds() {
  Bounds b;
  b.lower = {-1000, -1000, -1000, -1000, -1000, -1000, -1000, 1e-9};
  b.upper = {1000, 1000, 1000, 1000, 1000, 1000, 1000, 50};
  return b;
}

OptimizerResult optimize_cnot(const OptimizerOptions& o) {
  const int np = o.population;
  if (np < 4) throw std::invalid_argument("population must be at least 4");
  if (o.budget < np) throw std::invalid_argument("budget must be at least the population size");
  if (!(o.crossover >= 0.0 && o.crossover <= 1.0) || !(o.weight > 0.0 && o.weight <= 2.0))
    throw std::invalid_argument("crossover must lie in [0,1] and weight in (0,2]");
  for (int d = 0; d < 8; ++d)
    if (!(o.bounds.lower[static_cast<std::size_t>(d)] < o.bounds.upper[static_cast<std::size_t>(d)]))
      throw std::invalid_argument("every lower bound must be below its upper bound");
  if (static_cast<int>(o.initial.size()) > np) throw std::invalid_argument("more initial members than population");

  using Vec = std::array<double, 8>;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto clamp = [&](Vec v) {
    for (std::size_t d = 0; d < 8; ++d) v[d] = std::clamp(v[d], o.bounds.lower[d], o.bounds.upper[d]);
    return v;
  };

  std::vector<Vec> pop(static_cast<std::size_t>(np));
  for (auto& x : pop)
    for (std::size_t d = 0; d < 8; ++d)
      x[d] = o.bounds.upper[d] - (o.bounds.upper[d] - o.bounds.lower[d]) * unit(rng);
  for (std::size_t k = 0; k < o.initial.size(); ++k) pop[k] = clamp(o.initial[k].to_vector());

  auto evaluate = [&](const std::vector<Vec>& xs, std::size_t count) {
    return map_index<double>(count, o.exec, [&](std::size_t i) {
      const double c = cnot_cost(CnotParams::from_vector(xs[i]), o.form, o.sign);
      return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    });
  };

  std::vector<double> cost = evaluate(pop, pop.size());
  long evaluations = np;
  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
  };
  OptimizerResult res;
  res.history.push_back(cost[best_index()]);

  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<int> dim(0, 7);
  while (evaluations < o.budget) {
    std::vector<Vec> trial(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
      int a, b, c;
      do a = pick(rng); while (a == i);
      do b = pick(rng); while (b == i || b == a);
      do c = pick(rng); while (c == i || c == a || c == b);
      const int jr = dim(rng);
      const Vec& xi = pop[static_cast<std::size_t>(i)];
      Vec y = xi;
      for (int d = 0; d < 8; ++d) {
        const auto ud = static_cast<std::size_t>(d);
        if (d == jr || unit(rng) < o.crossover)
          y[ud] = pop[static_cast<std::size_t>(a)][ud] +
                  o.weight * (pop[static_cast<std::size_t>(b)][ud] - pop[static_cast<std::size_t>(c)][ud]);
      }
      trial[static_cast<std::size_t>(i)] = clamp(y);
    }
    const auto count = static_cast<std::size_t>(std::min<long>(np, o.budget - evaluations));
    const auto tc = evaluate(trial, count);
    evaluations += static_cast<long>(count);
    for (std::size_t i = 0; i < count; ++i)
      if (tc[i] <= cost[i]) {
        pop[i] = trial[i];
        cost[i] = tc[i];
      }
    res.history.push_back(cost[best_index()]);
  }
  const std::size_t bi = best_index();
  res.best = CnotParams::from_vector(pop[bi]);
  res.cost = cost[bi];
  res.evaluations = evaluations;
  return res;
}

std::string optimizer_artifact(const OptimizerOptions& o, const OptimizerResult& r) {
  nlohmann::json j;
  j["seed"] = o.seed;
  j["budget"] = o.budget;
  j["population"] = o.population;
  j["crossover"] = o.crossover;
  j["weight"] = o.weight;
  j["cost_form"] = o.form == CostForm::magnitude ? "magnitude" : "coherent";
  j["sign"] = o.sign;
  j["bounds"] = {{"lower", o.bounds.lower}, {"upper", o.bounds.upper}, {"order", {"J", "h1", "h2", "h3", "h4", "h5", "h6", "t"}}};
  j["history"] = r.history;
  j["evaluations"] = r.evaluations;
  j["best"] = {{"J", r.best.J}, {"h", r.best.h}, {"t", r.best.t}, {"cost", r.cost}};
  return j.dump(2);
}

}  // namespace spinnet
