#include "spinnet/cli.hpp"

#include "spinnet/filtered_star.hpp"
#include "spinnet/gate_synthesis.hpp"
#include "spinnet/modular_network.hpp"
#include "spinnet/router.hpp"
#include "spinnet/transport_chain.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#ifndef SPINNET_VERSION
#define SPINNET_VERSION "dev"
#endif

namespace spinnet::cli {

namespace {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { number, integer, boolean, text, list };

struct Param {
  std::string key;  // JSON key; the flag is --key with '_' shown as '-'
  Kind kind;
  json def;
  std::string help;
};

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Collects one result (CSV table or JSON document) plus provenance lines.
class Sink {
 public:
  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }
  void columns(std::vector<std::string> names) { header_ = std::move(names); }
  void row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("row width does not match header");
    rows_.push_back(std::move(cells));
  }
  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(num(v));
    row(std::move(cells));
  }
  void document(json doc) { doc_ = std::move(doc); }

  std::string render(const std::string& experiment, const json& config, std::uint64_t seed) const {
    std::ostringstream out;
    if (!doc_.is_null()) {
      json d = doc_;
      d["tool"] = {{"name", "spinnet"}, {"version", SPINNET_VERSION}};
      d["experiment"] = experiment;
      d["config"] = config;
      d["seed"] = seed;
      for (const auto& [k, v] : notes_) d["notes"][k] = v;
      out << d.dump(2) << '\n';
      return out.str();
    }
    out << "# spinnet " << SPINNET_VERSION << '\n';
    out << "# experiment: " << experiment << '\n';
    out << "# seed: " << seed << '\n';
    out << "# config: " << config.dump() << '\n';
    for (const auto& [k, v] : notes_) out << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  json doc_;
};

struct Context {
  const json& cfg;
  std::uint64_t seed;
  Sink& out;

  double number(const std::string& k) const { return cfg.at(k).get<double>(); }
  int integer(const std::string& k) const { return cfg.at(k).get<int>(); }
  bool flag(const std::string& k) const { return cfg.at(k).get<bool>(); }
  std::string text(const std::string& k) const { return cfg.at(k).get<std::string>(); }
  std::vector<double> list(const std::string& k) const { return cfg.at(k).get<std::vector<double>>(); }
};

struct Experiment {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<void(const Context&)> body;
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

json parse_value(const Param& p, const std::string& raw) {
  switch (p.kind) {
    case Kind::number: return parse_double(raw);
    case Kind::integer: {
      const double v = parse_double(raw);
      if (v != std::floor(v)) throw ConfigError(p.key + " must be an integer");
      return static_cast<long long>(v);
    }
    case Kind::boolean:
      if (raw == "true" || raw == "1") return true;
      if (raw == "false" || raw == "0") return false;
      throw ConfigError(p.key + " must be true or false");
    case Kind::text: return raw;
    case Kind::list: {
      json arr = json::array();
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) arr.push_back(parse_double(item));
      return arr;
    }
  }
  return nullptr;
}

void check_type(const Param& p, const json& v) {
  bool ok = false;
  switch (p.kind) {
    case Kind::number: ok = v.is_number(); break;
    case Kind::integer: ok = v.is_number_integer(); break;
    case Kind::boolean: ok = v.is_boolean(); break;
    case Kind::text: ok = v.is_string(); break;
    case Kind::list:
      ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
      break;
  }
  if (!ok) throw ConfigError("config value for '" + p.key + "' has the wrong type");
}

// "a:b:step" grid or a comma separated list of values.
std::vector<double> parse_times(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_double(item));
    if (parts.size() != 3) throw ConfigError("time grid must be start:stop:step");
    try {
      return time_grid(parts[0], parts[1], parts[2]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad time grid: ") + e.what());
    }
  }
  std::vector<double> out;
  for (const auto& v : parse_value({"times", Kind::list, json::array(), ""}, spec)) out.push_back(v.get<double>());
  if (out.empty()) throw ConfigError("empty time list");
  return out;
}

PureState parse_state(const std::string& s) {
  if (s == "0") return ket0();
  if (s == "1") return ket1();
  if (s == "+" || s == "plus") return ket_plus();
  if (s == "-" || s == "minus") return ket_minus();
  throw ConfigError("unknown single-qubit state '" + s + "' (use 0, 1, plus, minus)");
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

const double kH = kTwoPi * 100.0;
const double kJ = kTwoPi * 10.0;

// ---------------------------------------------------------------- star

std::vector<Param> star_common() {
  return {{"n", Kind::integer, 5, "spins in the random star (central + peripheral)"},
          {"b_radial", Kind::number, 20.0, "radial coupling, rad/s"},
          {"network", Kind::text, "", "network file replacing the random star"},
          {"L", Kind::integer, 3, "stages per cycle"},
          {"N", Kind::integer, 20, "cycles"},
          {"tau", Kind::number, 1.0, "Zeeman period, s"},
          {"metric", Kind::text, "gate", "gate | state"},
          {"frame", Kind::text, "lab", "lab | rotating"}};
}

StarNetwork star_from(const Context& c) {
  const std::string file = c.text("network");
  if (!file.empty()) return StarNetwork(read_network_file(file));
  return random_star(c.integer("n"), c.number("b_radial"), c.seed);
}

ProfileOptions profile_options(const Context& c) {
  ProfileOptions o;
  const auto m = c.text("metric"), f = c.text("frame");
  if (m == "gate") o.metric = FidelityMetric::gate;
  else if (m == "state") o.metric = FidelityMetric::state;
  else throw ConfigError("metric must be gate or state");
  if (f == "lab") o.frame = Frame::lab;
  else if (f == "rotating") o.frame = Frame::rotating;
  else throw ConfigError("frame must be lab or rotating");
  return o;
}

void run_star(const Context& c) {
  const int L = c.integer("L");
  std::vector<double> times = c.list("time_array");
  if (c.flag("random_times")) times = random_time_array(L, c.number("t_upper"), c.seed + 1);
  else if (times.empty()) times.assign(static_cast<std::size_t>(std::max(L, 0)), c.number("t"));
  const auto spec = make_default_spec(L, c.integer("N"), c.number("tau"), times);
  const StarNetwork star = star_from(c);
  const auto prof = fidelity_profile(spec, star, profile_options(c));
  std::string ts;
  for (double t : times) ts += (ts.empty() ? "" : " ") + num(t);
  c.out.note("time_array", ts);
  c.out.note("conditions_pass", check_conditions(spec).pass() ? "true" : "false");
  c.out.note("local_maxima", join(local_maxima(prof)));
  c.out.columns({"cycle", "fidelity"});
  for (const auto& p : prof) c.out.row({static_cast<double>(p.cycle), p.fidelity});
}

void run_star_robustness(const Context& c) {
  const int L = c.integer("L");
  const auto spec = make_default_spec(L, c.integer("N"), c.number("tau"), std::vector<double>(static_cast<std::size_t>(std::max(L, 0)), 0.0));
  const auto pts = time_robustness(spec, star_from(c), parse_times(c.text("t_values")), c.integer("cycle"), profile_options(c));
  c.out.columns({"t", "fidelity"});
  for (const auto& p : pts) c.out.row({p.t, p.fidelity});
}

// --------------------------------------------------------------- chain

std::vector<Param> chain_common() {
  return {{"n", Kind::integer, 3, "chain length"},
          {"h", Kind::number, kH, "end field, rad/s"},
          {"J", Kind::number, kJ, "coupling, rad/s"}};
}

ChainSpec chain_from(const Context& c) {
  ChainSpec s{c.integer("n"), c.number("J"), c.number("h")};
  s.validate();
  return s;
}

void run_chain(const Context& c) {
  const ChainSpec spec = chain_from(c);
  const auto times = parse_times(c.text("scan"));
  if (spec.n == 3) {
    // The resonance scan runs on its own grid, fine enough for the fast eigenfrequency.
    const double fast = 0.5 * (std::abs(spec.h) + std::sqrt(spec.h * spec.h + 2.0 * spec.J * spec.J));
    const double step = std::min(1e-4, kPi / (20.0 * fast));
    std::string cands;
    for (const auto& r : resonance_time_scan(spec.h, spec.J, std::max(times.back(), step), step, c.number("eps")))
      cands += (cands.empty() ? "" : " ") + num(r.t);
    c.out.note("resonance_candidates", cands);
  }
  const bool fix = c.flag("phase_fix");
  const auto f1 = transport_scan(spec, ket1(), times, Exec::parallel, fix);
  const auto fp = transport_scan(spec, ket_plus(), times, Exec::parallel, fix);
  c.out.columns({"t", "fid_1state", "fid_plusstate"});
  for (std::size_t i = 0; i < times.size(); ++i) c.out.row({times[i], f1[i], fp[i]});
}

void run_chain_bloch(const Context& c) {
  const auto st = bloch_sweep(chain_from(c), c.number("t"), c.integer("n_theta"), c.integer("n_phi"),
                              c.number("phi_offset"));
  c.out.columns({"mean", "std", "min", "max", "count"});
  c.out.row({st.mean, st.std, st.min, st.max, static_cast<double>(st.count)});
}

void run_chain_robustness(const Context& c) {
  const ChainSpec spec = chain_from(c);
  const std::string which = c.text("parameter");
  std::vector<ChainParameter> params;
  if (which == "all") params = {ChainParameter::h1, ChainParameter::h2, ChainParameter::J12};
  else params = {parse_chain_parameter(which)};
  const auto given = c.list("values");
  if (!given.empty() && params.size() != 1) throw ConfigError("explicit values need a single parameter");
  c.out.columns({"parameter", "value", "fidelity"});
  for (auto p : params) {
    const auto values = given.empty() ? default_sweep_values(spec, p, c.integer("count")) : given;
    for (const auto& pt : robustness_sweep(spec, p, values, parse_state(c.text("input")), c.number("t")))
      c.out.row({std::string(to_string(p)), num(pt.value), num(pt.fidelity)});
  }
}

// -------------------------------------------------------------- router

void router_table(const Context& c, const RouterSpec& spec, const std::vector<double>& times) {
  const std::string tgt = c.text("target");
  std::optional<PureState> target;
  if (!tgt.empty()) target = parse_state(tgt);
  const auto run = simulate_router(spec, parse_state(c.text("input")), times, target, c.flag("z_fix"));
  std::vector<std::string> cols{"t"};
  for (const auto& p : run.ports) {
    cols.push_back("fid_site" + std::to_string(p.site));
    const Peak pk = global_max(run.times, p.fidelity);
    c.out.note("peak_site" + std::to_string(p.site), num(pk.value) + " at t=" + num(pk.t));
  }
  c.out.columns(cols);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> r{times[i]};
    for (const auto& p : run.ports) r.push_back(p.fidelity[i]);
    c.out.row(r);
  }
}

std::vector<Param> router_common(const char* scan) {
  return {{"J", Kind::number, kJ, "non-gate coupling, rad/s"},
          {"scan", Kind::text, scan, "time grid start:stop:step or list"},
          {"switched", Kind::boolean, false, "use the switched input field"},
          {"input", Kind::text, "1", "input state: 0, 1, plus, minus"},
          {"target", Kind::text, "", "compare ports against this state instead of the input"},
          {"z_fix", Kind::boolean, false, "apply the best Z rotation on each port"}};
}

void run_router4(const Context& c) {
  RouterSpec spec{RouterVariant::four, 0.0, c.number("J"), c.number("h"), c.flag("switched")};
  router_table(c, spec, parse_times(c.text("scan")));
}

void run_router5(const Context& c) {
  RouterSpec spec{RouterVariant::five, c.number("G"), c.number("J"), 0.0, c.flag("switched")};
  const auto rt = routing_time(spec.G, spec.J);
  std::string m1;
  for (const auto& a : rt.admissible) m1 += (m1.empty() ? "" : " ") + std::to_string(a.m1);
  c.out.note("routing_tau_min", num(rt.tau_min));
  c.out.note("admissible_m1", m1);
  router_table(c, spec, parse_times(c.text("scan")));
}

// ------------------------------------------------------------- modular

void run_modular(const Context& c) {
  CompositeSpec spec{c.number("h"), c.number("J"), c.number("J")};
  const double t_max = c.number("t_max"), dt = c.number("dt");
  const PureState input = parse_state(c.text("input"));
  const auto schedule = default_barrier_schedule(spec, c.number("barrier_multiplier"));
  if (schedule.total_duration() < t_max)
    throw ConfigError("t_max exceeds the barrier schedule (" + num(schedule.total_duration()) + " s)");
  const auto naive = simulate_naive_composite(spec, input, t_max, dt);
  const auto barrier = simulate_barrier_composite(spec, schedule, input, t_max, dt);
  const double phase1 = schedule.phases()[0].duration;
  double leak = 0.0;
  for (std::size_t i = 0; i < barrier.times.size(); ++i)
    if (barrier.times[i] <= phase1)
      leak = std::max(leak, barrier.site_population[4][i] + barrier.site_population[5][i]);
  c.out.note("phase_durations", num(schedule.phases()[0].duration) + " " + num(schedule.phases()[1].duration));
  c.out.note("naive_peak_site6", num(global_max(naive.times, naive.site_fidelity[5]).value));
  c.out.note("barrier_peak_site6", num(global_max(barrier.times, barrier.site_fidelity[5]).value));
  c.out.note("phase1_router_population", num(leak));
  c.out.columns({"t", "naive_fid6", "barrier_fid6", "barrier_pop5", "barrier_pop6"});
  for (std::size_t i = 0; i < naive.times.size(); ++i)
    c.out.row({naive.times[i], naive.site_fidelity[5][i], barrier.site_fidelity[5][i], barrier.site_population[4][i],
               barrier.site_population[5][i]});
}

// ------------------------------------------------------------- network

void run_network(const Context& c) {
  const std::string topo = c.text("topology");
  SpinNetwork net(1);
  int in = c.integer("input_site"), out = c.integer("output_site");
  double t_max = c.number("t_max");
  if (topo == "wheel") {
    net = wheel_network(c.integer("n_peripheral"));
    if (in == 0) in = 2;
    if (out == 0) out = 2 + c.integer("n_peripheral") / 2;
    if (t_max == 0.0) t_max = 5.0;
  } else if (topo == "arbitrary") {
    net = arbitrary_network();
    if (in == 0) in = 1;
    if (out == 0) out = 9;
    if (t_max == 0.0) t_max = 500.0;
  } else if (topo == "file") {
    if (c.text("file").empty()) throw ConfigError("topology 'file' needs --file");
    net = read_network_file(c.text("file"));
    if (in == 0 || out == 0 || t_max == 0.0) throw ConfigError("file topology needs input/output sites and t_max");
  } else {
    throw ConfigError("topology must be wheel, arbitrary or file");
  }
  const auto scan = network_transport_scan(net, in, out, c.number("h"), c.number("J"), t_max, c.number("dt"),
                                           parse_state(c.text("input")), c.number("threshold"));
  c.out.note("sites", std::to_string(in) + " -> " + std::to_string(out));
  c.out.note("best", num(scan.best.value) + " at t=" + num(scan.best.t));
  c.out.note("first_qualifying",
             scan.first_qualifying ? num(scan.first_qualifying->value) + " at t=" + num(scan.first_qualifying->t)
                                   : "none");
  c.out.columns({"t", "fidelity"});
  for (std::size_t i = 0; i < scan.times.size(); ++i) c.out.row({scan.times[i], scan.fidelity[i]});
}

// ---------------------------------------------------------------- cnot

CostForm cost_form(const Context& c) {
  const auto f = c.text("cost_form");
  if (f == "magnitude") return CostForm::magnitude;
  if (f == "coherent") return CostForm::coherent;
  throw ConfigError("cost_form must be magnitude or coherent");
}

json params_json(const CnotParams& p) { return {{"J", p.J}, {"h", p.h}, {"t", p.t}}; }

void run_cnot(const Context& c) {
  CnotParams p = published_cnot_optimum();
  if (!c.flag("verify_paper_optimum")) {
    const auto h = c.list("h");
    if (h.size() != 6) throw ConfigError("h must list six fields");
    p.J = c.number("J");
    std::copy(h.begin(), h.end(), p.h.begin());
    p.t = c.number("t");
  }
  const int sign = c.integer("sign");
  const auto ev = evaluate_cnot(p, sign);
  if (!(ev.leakage < 1e-10)) throw NumericFailure("CNOT evolution left the three-flip sector");
  json ov = json::array();
  for (const auto& z : ev.overlaps) ov.push_back({{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}});
  const double cost = cost_form(c) == CostForm::magnitude ? ev.cost_magnitude : ev.cost_coherent;
  c.out.document({{"cost", cost},
                  {"cost_magnitude", ev.cost_magnitude},
                  {"cost_coherent", ev.cost_coherent},
                  {"overlap", ev.superposition_overlap},
                  {"row_overlaps", ov},
                  {"leakage", ev.leakage},
                  {"params", params_json(p)}});
}

void run_cnot_optimize(const Context& c) {
  OptimizerOptions o;
  o.seed = c.seed;
  o.budget = c.integer("budget");
  o.population = c.integer("population");
  o.crossover = c.number("crossover");
  o.weight = c.number("weight");
  o.form = cost_form(c);
  o.sign = c.integer("sign");
  if (c.flag("seed_with_paper")) o.initial.push_back(published_cnot_optimum());
  const auto res = optimize_cnot(o);
  json doc = json::parse(optimizer_artifact(o, res));
  doc["verification_overlap"] = verify_cnot(res.best, o.sign);
  c.out.document(doc);
}

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> reg = [] {
    std::vector<Experiment> r;
    auto star = star_common();
    star.push_back({"t", Kind::number, 0.05, "uniform DQ time per stage, s"});
    star.push_back({"time_array", Kind::list, json::array(), "explicit DQ times t_1..t_L"});
    star.push_back({"random_times", Kind::boolean, false, "draw the DQ times uniformly from (0, t_upper]"});
    star.push_back({"t_upper", Kind::number, 0.1, "upper bound for random DQ times"});
    r.push_back({"star", "fidelity profile of the filtered star sequence", star, run_star});

    auto rob = star_common();
    rob.push_back({"cycle", Kind::integer, 8, "cycle at which fidelity is recorded"});
    rob.push_back({"t_values", Kind::text, "0.01:1:0.01", "DQ times start:stop:step or list"});
    r.push_back({"star-time-robustness", "star fidelity at a fixed cycle versus DQ time", rob, run_star_robustness});

    auto chain = chain_common();
    chain.push_back({"scan", Kind::text, "0:2:1e-4", "time grid start:stop:step or list"});
    chain.push_back({"eps", Kind::number, 1e-3, "resonance tolerance on the cosines"});
    chain.push_back({"phase_fix", Kind::boolean, false, "apply the best Z rotation on the output"});
    r.push_back({"chain", "end-to-end transport in a chain", chain, run_chain});

    auto bloch = chain_common();
    bloch.push_back({"t", Kind::number, 1.005, "transfer time, s"});
    bloch.push_back({"n_theta", Kind::integer, 100, "theta grid points"});
    bloch.push_back({"n_phi", Kind::integer, 100, "phi grid points"});
    bloch.push_back({"phi_offset", Kind::number, 0.0, "phi grid offset, rad"});
    r.push_back({"chain-bloch", "transport statistics over the Bloch sphere", bloch, run_chain_bloch});

    auto crob = chain_common();
    crob.push_back({"parameter", Kind::text, "all", "h1 | h2 | J12 | all"});
    crob.push_back({"values", Kind::list, json::array(), "explicit absolute parameter values"});
    crob.push_back({"count", Kind::integer, 81, "points in the default range"});
    crob.push_back({"input", Kind::text, "1", "input state: 0, 1, plus, minus"});
    crob.push_back({"t", Kind::number, 1.005, "transfer time, s"});
    r.push_back({"chain-robustness", "transport fidelity under parameter perturbation", crob, run_chain_robustness});

    auto r4 = router_common("0:3:1e-4");
    r4.insert(r4.begin(), {"h", Kind::number, kH, "field magnitude, rad/s"});
    r.push_back({"router4", "4-spin router simulation", r4, run_router4});

    auto r5 = router_common("0:0.3:1e-4");
    r5.insert(r5.begin(), {"G", Kind::number, kH, "gate coupling, rad/s"});
    r.push_back({"router5", "5-spin router simulation", r5, run_router5});

    r.push_back({"modular",
                 "chain + router composite with and without barrier fields",
                 {{"h", Kind::number, kH, "field, rad/s"},
                  {"J", Kind::number, kJ, "coupling, rad/s"},
                  {"barrier_multiplier", Kind::number, 10.0, "barrier field in units of h"},
                  {"t_max", Kind::number, 2.5, "simulated time, s"},
                  {"dt", Kind::number, 1e-3, "time step, s"},
                  {"input", Kind::text, "1", "input state: 0, 1, plus, minus"}},
                 run_modular});

    r.push_back({"network",
                 "resonant transport on a wheel, the 9-spin tree, or a network file",
                 {{"topology", Kind::text, "wheel", "wheel | arbitrary | file"},
                  {"file", Kind::text, "", "network file for topology=file"},
                  {"n_peripheral", Kind::integer, 6, "ring size of the wheel"},
                  {"input_site", Kind::integer, 0, "input site (0: topology default)"},
                  {"output_site", Kind::integer, 0, "output site (0: topology default)"},
                  {"h", Kind::number, kH, "field on input and output, rad/s"},
                  {"J", Kind::number, kJ, "uniform coupling, rad/s"},
                  {"t_max", Kind::number, 0.0, "scan window, s (0: topology default)"},
                  {"dt", Kind::number, 1e-3, "time step, s"},
                  {"threshold", Kind::number, 0.8, "qualifying peak threshold"},
                  {"input", Kind::text, "1", "input state: 0, 1, plus, minus"}},
                 run_network});

    const auto opt = published_cnot_optimum();
    r.push_back({"cnot",
                 "evaluate CNOT parameters (cost and superposition overlap)",
                 {{"verify_paper_optimum", Kind::boolean, false, "use the published optimum"},
                  {"J", Kind::number, opt.J, "uniform coupling, rad/s"},
                  {"h", Kind::list, opt.h, "six fields, rad/s"},
                  {"t", Kind::number, opt.t, "gate time, s"},
                  {"sign", Kind::integer, 1, "coupling sign, +1 or -1"},
                  {"cost_form", Kind::text, "magnitude", "magnitude | coherent"}},
                 run_cnot});

    r.push_back({"cnot-optimize",
                 "differential evolution search for CNOT parameters",
                 {{"budget", Kind::integer, 20000, "cost evaluations"},
                  {"population", Kind::integer, 64, "population size"},
                  {"crossover", Kind::number, 0.9, "crossover rate"},
                  {"weight", Kind::number, 0.7, "differential weight"},
                  {"seed_with_paper", Kind::boolean, false, "include the published optimum in the population"},
                  {"sign", Kind::integer, 1, "coupling sign, +1 or -1"},
                  {"cost_form", Kind::text, "magnitude", "magnitude | coherent"}},
                 run_cnot_optimize});
    return r;
  }();
  return reg;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in config: ") + e.what());
  }
}

}  // namespace

std::vector<std::string> experiments() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"spinnet: spin-network dynamics reproduction driver", "spinnet"};
  app.set_version_flag("--version", SPINNET_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_path;
  int threads = 0;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON file with parameter values")->capture_default_str();
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  const auto& reg = registry();
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, CLI::App*> subs;
  for (const auto& e : reg) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->fallthrough();
    sub->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    subs[e.name] = sub;
    for (const auto& p : e.params) {
      const std::string desc = p.help + " [default: " + (p.def.is_string() ? p.def.get<std::string>() : p.def.dump()) + "]";
      if (p.kind == Kind::boolean) sub->add_flag(flag_name(p.key), desc);
      else sub->add_option(flag_name(p.key), raw[e.name][p.key], desc);
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, std::cout, std::cerr) == 0 ? kOk : kConfigError;
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, std::cout, std::cerr) == 0 ? kOk : kConfigError;
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cout, std::cerr);
    return kConfigError;
  }

  try {
    const Experiment* exp = nullptr;
    for (const auto& e : reg)
      if (subs[e.name]->parsed()) exp = &e;
    if (!exp) throw ConfigError("no experiment selected");
    CLI::App* sub = subs[exp->name];

    json cfg = json::object();
    for (const auto& p : exp->params) cfg[p.key] = p.def;
    if (!config_path.empty()) {
      const json file = load_config(config_path);
      for (const auto& [k, v] : file.items()) {
        if (k == "experiment") {
          if (v != exp->name) throw ConfigError("config is for experiment " + v.dump());
          continue;
        }
        if (k == "seed") {
          if (!v.is_number_unsigned() && !v.is_number_integer()) throw ConfigError("seed must be an integer");
          if (app.count("--seed") == 0) seed = v.get<std::uint64_t>();
          continue;
        }
        if (k == "threads") {
          if (!v.is_number_integer()) throw ConfigError("threads must be an integer");
          if (app.count("--threads") == 0) threads = v.get<int>();
          continue;
        }
        auto it = std::find_if(exp->params.begin(), exp->params.end(), [&](const Param& p) { return p.key == k; });
        if (it == exp->params.end()) throw ConfigError("unknown config key '" + k + "' for " + exp->name);
        check_type(*it, v);
        cfg[k] = v;
      }
    }
    for (const auto& p : exp->params) {
      if (sub->count(flag_name(p.key)) == 0) continue;
      cfg[p.key] = p.kind == Kind::boolean ? json(true) : parse_value(p, raw[exp->name][p.key]);
    }

    set_thread_count(threads);
    Sink sink;
    exp->body(Context{cfg, seed, sink});
    const std::string text = sink.render(exp->name, cfg, seed);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path);
      if (!f) throw ConfigError("cannot write " + out_path);
      f << text;
    }
    return kOk;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace spinnet::cli
