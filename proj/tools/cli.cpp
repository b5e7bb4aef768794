#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "dynroute/format.hpp"
#include "dynroute/infinite.hpp"
#include "dynroute/linear_oracle.hpp"
#include "dynroute/sim.hpp"
#include "dynroute/two_stage.hpp"

namespace dynroute::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Input problems that map to the usage exit code.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rounds to the 12 significant digits used for every emitted number, so JSON
// and CSV outputs agree.
double r12(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_number(v);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

struct Options {
  std::string params_path;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string beta_grid;
  std::string delta_grid;

  std::optional<int> n;
  std::optional<double> s0, s1, l, h, gamma_l, gamma_h, delta, beta;

  // simulate / oracle
  long trials = 10000;
  int horizon = 0;
  std::optional<int> c, d;
  std::string trigger;
  int agent = 0;
  std::string trajectory;
  std::string model = "infinite";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open params file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GameParams load_params(const Options& o) {
  GameParams p;
  if (!o.params_path.empty()) p = params_from_json(read_file(o.params_path));
  if (o.n) p.n = *o.n;
  if (o.s0) p.s0 = *o.s0;
  if (o.s1) p.s1 = *o.s1;
  if (o.l) p.l = *o.l;
  if (o.h) p.h = *o.h;
  if (o.gamma_l) p.gamma_l = *o.gamma_l;
  if (o.gamma_h) p.gamma_h = *o.gamma_h;
  if (o.delta) p.delta = *o.delta;
  if (o.beta) p.beta = *o.beta;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid parameters: ") + e.what());
  }
  return p;
}

std::vector<double> grid_or(const std::string& text, double fallback) {
  if (text.empty()) return {fallback};
  try {
    return parse_grid(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

json params_json(const GameParams& p) {
  return {{"n", p.n},         {"s0", r12(p.s0)}, {"s1", r12(p.s1)},          {"l", r12(p.l)},
          {"h", r12(p.h)},    {"gamma_l", r12(p.gamma_l)}, {"gamma_h", r12(p.gamma_h)},
          {"delta", r12(p.delta)}, {"beta", r12(p.beta)}};
}

std::string fmt(double v) { return format_number(v); }

// ---------------------------------------------------------------------------

int cmd_two_stage(const Options& o, std::ostream& out, std::ostream& err) {
  const GameParams p = load_params(o);
  const auto grid = grid_or(o.beta_grid, p.beta);
  const auto t = two_stage::thresholds(p);

  json rows = json::array();
  json gated = json::array();
  std::vector<two_stage::Row> kept;
  for (double b : grid) {
    try {
      kept.push_back(two_stage::evaluate(Belief(b), p, t));
    } catch (const GateError&) {
      gated.push_back(r12(b));
    }
  }
  if (kept.empty()) {
    err << "every prior on the grid fails the two-stage gate\n"
        << check_assumption_two_stage(p, Belief(grid.front())).describe();
    return kFailed;
  }
  if (t.beta_so_discrepancy) {
    err << "note: planner threshold from indifference " << fmt(t.beta_so) << " differs from printed grouping "
        << fmt(t.beta_so_printed) << '\n';
  }

  if (o.format == "csv") {
    out << "beta,region,v_full,v_private,v_partial,v_so,pi1,pi2_l,pi2_h\n";
    for (const auto& r : kept) {
      out << fmt(r.beta) << ',' << two_stage::to_string(r.region) << ',' << fmt(r.v_full) << ','
          << fmt(r.v_private) << ',' << fmt(r.v_partial) << ',' << fmt(r.v_so) << ',' << r.scheme.pi1 << ','
          << r.scheme.pi2_l << ',' << r.scheme.pi2_h << '\n';
    }
    return kOk;
  }
  for (const auto& r : kept) {
    rows.push_back({{"beta", r12(r.beta)},
                    {"v_full", r12(r.v_full)},
                    {"v_private", r12(r.v_private)},
                    {"v_partial", r12(r.v_partial)},
                    {"v_so", r12(r.v_so)},
                    {"scheme", {{"pi1", r.scheme.pi1}, {"pi2_l", r.scheme.pi2_l}, {"pi2_h", r.scheme.pi2_h}}},
                    {"region", two_stage::to_string(r.region)}});
  }
  json doc = {{"params", params_json(p)},
              {"thresholds",
               {{"beta_p", r12(t.beta_p)},
                {"beta_f", r12(t.beta_f)},
                {"beta_so", r12(t.beta_so)},
                {"beta_so_printed", r12(t.beta_so_printed)},
                {"beta_so_discrepancy", t.beta_so_discrepancy},
                {"x_eq_l", t.x_eq_l},
                {"x_so_l", t.x_so_l},
                {"x_so_h", t.x_so_h}}},
              {"rows", rows},
              {"gated_betas", gated}};
  out << doc.dump(2) << '\n';
  return kOk;
}

json ic_json(const infinite::ICReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"state", e.state},
                       {"follow", r12(e.follow)},
                       {"deviate", r12(e.deviate)},
                       {"slack", r12(e.slack)},
                       {"boundary", e.boundary}});
  }
  return {{"scheme", {{"c", r.scheme.c}, {"d", r.scheme.d}}},
          {"verdict", r.pass ? "pass" : "fail"},
          {"preconditions",
           {{"flows_in_range", r.flows_in_range}, {"cost_cap", r.cost_cap}, {"cutoff", r.cutoff}}},
          {"entries", entries},
          {"reasons", r.reasons},
          {"warnings", r.warnings}};
}

json scheme_json(const infinite::SchemeCD& s) { return {{"c", s.c}, {"d", s.d}}; }

void require_gate_or_report(const GameParams& p) {
  const auto g = check_assumption_infinite(p);
  if (!g.pass()) throw GateError(g.describe());
}

int cmd_infinite(const Options& o, std::ostream& out, std::ostream&) {
  const GameParams p = load_params(o);
  require_gate_or_report(p);

  const auto xll = infinite::compute_x_ll(p);
  const auto star = infinite::pi_star(p);
  const auto tilde = infinite::pi_tilde_star(p);
  const int so = std::max(2, infinite::x_so(p));
  const auto ic = infinite::check_ic(star, p);
  const auto search = infinite::optimal_scheme_search(p);
  const double v_star = infinite::scheme_cost(star, p);
  const double v_so = infinite::scheme_cost({so, so}, p);
  const double v_full = p.n * p.s0 / (1.0 - p.delta);

  if (o.format == "csv") {
    out << "c,d,feasible,cost\n";
    for (const auto& row : search.table) {
      out << row.scheme.c << ',' << row.scheme.d << ',' << (row.feasible ? 1 : 0) << ',' << fmt(row.cost) << '\n';
    }
    return ic.pass ? kOk : kFailed;
  }

  json table = json::array();
  for (const auto& row : search.table) {
    table.push_back({{"c", row.scheme.c}, {"d", row.scheme.d}, {"feasible", row.feasible}, {"cost", r12(row.cost)}});
  }
  json winner = nullptr;
  if (search.best) {
    winner = {{"c", search.best->c},
              {"d", search.best->d},
              {"cost", r12(search.best_cost)},
              {"is_pi_star", search.is_pi_star},
              {"is_pi_tilde_star", search.is_pi_tilde_star}};
  }
  json doc = {{"params", params_json(p)},
              {"x_l_so", infinite::x_so(p)},
              {"x_l_eq", infinite::x_eq(p)},
              {"x_ll_bar", xll.x_bar_ll},
              {"x_ll", xll.x_ll},
              {"pi_star", scheme_json(star)},
              {"pi_tilde_star", tilde ? scheme_json(*tilde) : json(nullptr)},
              {"v_pi_star", r12(v_star)},
              {"v_so", r12(v_so)},
              {"v_full_info", r12(v_full)},
              {"ic_report", ic_json(ic)},
              {"search_winner", winner},
              {"search_warnings", search.warnings},
              {"scheme_table", table}};
  out << doc.dump(2) << '\n';
  return ic.pass ? kOk : kFailed;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const GameParams p = load_params(o);
  if (o.delta_grid.empty()) throw InputError("sweep requires --delta-grid");
  const auto grid = grid_or(o.delta_grid, p.delta);
  for (double dl : grid) {
    if (!(dl >= 0.0 && dl < 1.0)) throw InputError("discount factors must lie in [0, 1)");
  }
  const auto rows = infinite::delta_sweep(p, grid);
  long skipped = 0;
  for (const auto& r : rows) skipped += r.gate_passed ? 0 : 1;
  if (skipped > 0) err << "note: " << skipped << " grid point(s) fail the gate and are flagged\n";

  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = {{"delta", r12(r.delta)}, {"feasible", r.gate_passed}};
      if (r.gate_passed) {
        row["x_ll"] = r.x_ll;
        row["v_star"] = r12(r.v_star);
        row["v_so"] = r12(r.v_so);
        row["ratio"] = r12(r.ratio);
      }
      arr.push_back(row);
    }
    out << json{{"params", params_json(p)}, {"sweep", arr}}.dump(2) << '\n';
    return kOk;
  }
  out << "delta,feasible,x_ll,v_star,v_so,ratio\n";
  for (const auto& r : rows) {
    out << fmt(r.delta) << ',' << (r.gate_passed ? 1 : 0);
    if (r.gate_passed) {
      out << ',' << r.x_ll << ',' << fmt(r.v_star) << ',' << fmt(r.v_so) << ',' << fmt(r.ratio);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return kOk;
}

json estimate_json(const sim::Estimate& e) {
  return {{"mean", r12(e.mean)},
          {"se", r12(e.se)},
          {"trials", e.trials},
          {"horizon", e.horizon},
          {"tail_bound", r12(e.tail_bound)}};
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const GameParams p = load_params(o);
  if (o.trials < 1) throw InputError("--trials must be positive");
  if (o.horizon < 0) throw InputError("--horizon must be non-negative");

  if (o.model == "two-stage") {
    const auto s = two_stage::solve_optimal_scheme(Belief(p.beta), p);
    const auto e = sim::run_two_stage(s, p, sim::SimConfig{2, o.trials, o.seed});
    const bool close = std::abs(e.mean - s.cost) <= 3.0 * e.se;
    out << json{{"model", "two-stage"},
                {"scheme", {{"pi1", s.pi1}, {"pi2_l", s.pi2_l}, {"pi2_h", s.pi2_h}}},
                {"analytic", r12(s.cost)},
                {"estimate", estimate_json(e)},
                {"within_3se", close}}
               .dump(2)
        << '\n';
    return kOk;
  }
  if (o.model != "infinite") throw InputError("--model must be infinite or two-stage");

  require_gate_or_report(p);
  infinite::SchemeCD s = infinite::pi_star(p);
  if (o.c) s.c = *o.c;
  if (o.d) s.d = *o.d;
  if (!(1 < s.c && s.c <= s.d && s.d <= p.n)) throw InputError("scheme requires 1 < c <= d <= n");

  const double analytic = infinite::scheme_cost(s, p);
  sim::SimConfig cfg{o.horizon > 0 ? o.horizon : sim::horizon_for_tail(p, analytic, 1e-3), o.trials, o.seed};

  if (!o.trajectory.empty()) {
    std::ofstream f(o.trajectory);
    if (!f) throw InputError("cannot write trajectory file: " + o.trajectory);
    sim::write_trajectory_csv(f, sim::run_scheme_trial(s, p, cfg, 0), true);
  }

  if (!o.trigger.empty()) {
    sim::RolloutConfig rc;
    rc.sim = cfg;
    rc.agent = o.agent;
    try {
      rc.trigger = sim::Trigger::parse(o.trigger);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    const auto r = sim::deviation_rollout(s, p, rc);
    if (!r.reachable) {
      err << "trigger state " << rc.trigger.str() << " was not reached in any trial\n";
      return kFailed;
    }
    const bool ic_ok = r.difference.mean >= -3.0 * r.difference.se;
    out << json{{"model", "infinite"},
                {"scheme", scheme_json(s)},
                {"trigger", rc.trigger.str()},
                {"agent", rc.agent},
                {"matched_trials", r.matched_trials},
                {"follow", estimate_json(r.follow)},
                {"deviate", estimate_json(r.deviate)},
                {"difference", estimate_json(r.difference)},
                {"deviation_unprofitable", ic_ok}}
               .dump(2)
        << '\n';
    return kOk;
  }

  const auto st = sim::run_scheme(s, p, cfg);
  const double vb = infinite::v_bar(s, p);
  const bool close = std::abs(st.social.mean - analytic) <= 3.0 * st.social.se + st.social.tail_bound;
  if (o.format == "csv") {
    out << "quantity,analytic,mean,se,trials,horizon,tail_bound\n";
    auto line = [&](const char* name, double a, const sim::Estimate& e) {
      out << name << ',' << fmt(a) << ',' << fmt(e.mean) << ',' << fmt(e.se) << ',' << e.trials << ','
          << e.horizon << ',' << fmt(e.tail_bound) << '\n';
    };
    line("social", analytic, st.social);
    line("per_agent", vb, st.per_agent);
    line("agent0", vb, st.agent0);
    return kOk;
  }
  out << json{{"model", "infinite"},
              {"scheme", scheme_json(s)},
              {"analytic", r12(analytic)},
              {"v_bar", r12(vb)},
              {"social", estimate_json(st.social)},
              {"per_agent", estimate_json(st.per_agent)},
              {"agent0", estimate_json(st.agent0)},
              {"within_3se", close}}
             .dump(2)
      << '\n';
  return kOk;
}

int oracle_two_stage(const Options& o, std::ostream& out, std::ostream& err) {
  const GameParams p = load_params(o);
  if (p.n > two_stage::kOracleMaxAgents) {
    throw InputError("the equilibrium oracle supports at most " + std::to_string(two_stage::kOracleMaxAgents) +
                     " agents");
  }
  const auto grid = grid_or(o.beta_grid, p.beta);
  json rows = json::array();
  bool all_match = true;
  bool any = false;
  for (double b : grid) {
    if (!check_assumption_two_stage(p, Belief(b)).pass()) continue;
    any = true;
    for (auto regime : {two_stage::InfoRegime::Full, two_stage::InfoRegime::Private}) {
      const auto r = two_stage::brute_force_equilibrium(p, Belief(b), regime);
      const auto expect = two_stage::predicted_outcome(p, Belief(b), regime);
      json outcomes = json::array();
      bool match = !r.outcomes.empty();
      for (const auto& x : r.outcomes) {
        outcomes.push_back({x.experimenters, x.second_round_flow_l, x.second_round_flow_h});
        match = match && x == expect;
      }
      all_match = all_match && match;
      rows.push_back({{"beta", r12(b)},
                      {"regime", two_stage::to_string(regime)},
                      {"equilibria", r.equilibria},
                      {"outcomes", outcomes},
                      {"predicted", {expect.experimenters, expect.second_round_flow_l, expect.second_round_flow_h}},
                      {"match", match}});
    }
  }
  if (!any) {
    err << "every prior on the grid fails the two-stage gate\n";
    return kFailed;
  }
  out << json{{"model", "two-stage"}, {"params", params_json(p)}, {"rows", rows}, {"all_match", all_match}}.dump(2)
      << '\n';
  if (!all_match) err << "equilibrium oracle disagrees with the closed form\n";
  return all_match ? kOk : kFailed;
}

int oracle_infinite(const Options& o, std::ostream& out, std::ostream& err) {
  const GameParams p = load_params(o);
  require_gate_or_report(p);
  constexpr double tol = 1e-9;
  double worst = 0.0;
  json rows = json::array();
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
  for (int c = 2; c <= p.n; ++c) {
    for (int d = c; d <= p.n; ++d) {
      if ((o.c && *o.c != c) || (o.d && *o.d != d)) continue;
      const infinite::SchemeCD s{c, d};
      const auto t = infinite::state_costs(s, p);
      const auto v = linear_oracle::agent_values(s, p);
      const auto u = linear_oracle::uninformed_values(s, p);
      double e = 0.0;
      for (auto [a, b] : {std::pair{t.v_bar, v.period_start(p.n)}, {t.u_HrR, v.experimenter},
                          {t.u_HrS, v.bystander}, {t.u_1LrR, v.risky_at_c}, {t.u_1LrS, v.safe_at_c},
                          {t.u_dLrR, v.risky_at_d}, {t.u_dLrS, v.safe_at_d}, {t.u_dUrS, u.safe_after_d},
                          {t.u_cUrS, u.safe_after_c}, {t.u_1UrS, u.safe_after_1},
                          {infinite::scheme_cost(s, p), linear_oracle::total_cost(s, p)}}) {
        e = std::max(e, rel(a, b));
      }
      worst = std::max(worst, e);
      rows.push_back({{"c", c}, {"d", d}, {"max_rel_error", r12(e)}});
    }
  }
  const bool ok = worst <= tol;
  out << json{{"model", "infinite"}, {"params", params_json(p)}, {"schemes", rows},
              {"max_rel_error", r12(worst)}, {"tolerance", tol}, {"match", ok}}
             .dump(2)
      << '\n';
  if (!ok) err << "closed forms disagree with the linear solve\n";
  return ok ? kOk : kFailed;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.model == "two-stage") return oracle_two_stage(o, out, err);
  if (o.model == "infinite") return oracle_infinite(o, out, err);
  throw InputError("--model must be infinite or two-stage");
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--params", o.params_path, "JSON parameter file");
  app->add_option("--output", o.output, "write results to this file instead of stdout");
  app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--beta-grid", o.beta_grid, "priors: start:stop:step or a,b,c");
  app->add_option("--delta-grid", o.delta_grid, "discount factors: start:stop:step or a,b,c");
  app->add_option("--n", o.n, "number of agents");
  app->add_option("--s0", o.s0, "safe-road intercept");
  app->add_option("--s1", o.s1, "safe-road slope");
  app->add_option("--l", o.l, "low congestion coefficient");
  app->add_option("--h", o.h, "high congestion coefficient");
  app->add_option("--gamma-l", o.gamma_l, "P(H | L)");
  app->add_option("--gamma-h", o.gamma_h, "P(L | H)");
  app->add_option("--delta", o.delta, "discount factor");
  app->add_option("--beta", o.beta, "prior P(theta = L)");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  auto number = [](const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw std::invalid_argument("bad number in grid: '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw std::invalid_argument("range grid must be start:stop:step");
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || !(b >= a)) throw std::invalid_argument("range grid needs step > 0 and stop >= start");
    const long count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1000000) throw std::invalid_argument("grid too large");
    for (long i = 0; i < count; ++i) out.push_back(r12(a + i * step));
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(number(part));
  }
  if (out.empty()) throw std::invalid_argument("grid is empty");
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
  return out;
}

GameParams params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed params JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("params JSON must be an object");
  GameParams p;
  for (const auto& [key, value] : j.items()) {
    const bool is_n = key == "n";
    if (is_n ? !value.is_number_integer() : !value.is_number()) {
      throw InputError("params field '" + key + "' must be " + (is_n ? "an integer" : "a number"));
    }
    if (is_n) p.n = value.get<int>();
    else if (key == "s0") p.s0 = value.get<double>();
    else if (key == "s1") p.s1 = value.get<double>();
    else if (key == "l") p.l = value.get<double>();
    else if (key == "h") p.h = value.get<double>();
    else if (key == "gamma_l") p.gamma_l = value.get<double>();
    else if (key == "gamma_h") p.gamma_h = value.get<double>();
    else if (key == "delta") p.delta = value.get<double>();
    else if (key == "beta") p.beta = value.get<double>();
    else throw InputError("unknown params field '" + key + "'");
  }
  return p;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic information provision for two-road routing games", "dynroute"};
  // "-h" is taken by the high coefficient, so help is long-form only.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* two = app.add_subcommand("two-stage", "two-stage costs, thresholds and optimal scheme over a prior grid");
  auto* inf = app.add_subcommand("infinite", "infinite-horizon scheme analysis");
  auto* sweep = app.add_subcommand("sweep", "compare the proposed scheme to the social optimum over discount factors");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a scheme or of a single-agent deviation");
  auto* oracle = app.add_subcommand("oracle", "cross-check closed forms against independent oracles");
  for (auto* sub : {two, inf, sweep, simulate, oracle}) add_common(sub, o);

  for (auto* sub : {simulate, oracle}) {
    sub->add_option("--model", o.model, "infinite or two-stage")->check(CLI::IsMember({"infinite", "two-stage"}));
    sub->add_option("--c", o.c, "flow after the first L");
    sub->add_option("--d", o.d, "flow after repeated L");
  }
  simulate->add_option("--trials", o.trials, "number of trials");
  simulate->add_option("--horizon", o.horizon, "steps per trial (0 picks one from the tail bound)");
  simulate->add_option("--trigger", o.trigger, "deviation trigger state, e.g. [d,U,r_S]");
  simulate->add_option("--agent", o.agent, "index of the deviating agent");
  simulate->add_option("--trajectory", o.trajectory, "write the first trial's trajectory as CSV");

  std::vector<std::string> argv_storage{"dynroute"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file = std::make_unique<std::ofstream>(o.output);
    if (!*file) {
      err << "cannot write output file: " << o.output << '\n';
      return kUsage;
    }
    sink = file.get();
  }

  try {
    if (two->parsed()) return cmd_two_stage(o, *sink, err);
    if (inf->parsed()) return cmd_infinite(o, *sink, err);
    if (sweep->parsed()) return cmd_sweep(o, *sink, err);
    if (simulate->parsed()) return cmd_simulate(o, *sink, err);
    if (oracle->parsed()) return cmd_oracle(o, *sink, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GateError& e) {
    err << e.what();
    return kFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}

}  // namespace dynroute::cli
