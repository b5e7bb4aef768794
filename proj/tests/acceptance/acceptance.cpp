// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dynroute/infinite.hpp"
#include "dynroute/linear_oracle.hpp"
#include "dynroute/sim.hpp"
#include "dynroute/two_stage.hpp"
#include "support/draws.hpp"
#include "support/fixtures.hpp"
#include "support/oracle_cases.hpp"

namespace {

using namespace dynroute;
using dynroute::testing::Draws;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* name;
  double limit_seconds;  ///< 0 means no runtime limit
  std::function<Verdict()> run;
};

std::string str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Draws shared by the closed-form, incentive and decomposition criteria.
const std::vector<GameParams>& infinite_draws() {
  static const std::vector<GameParams> draws = [] {
    Draws d(2024);
    std::vector<GameParams> out;
    for (int i = 0; i < 200; ++i) out.push_back(d.infinite());
    return out;
  }();
  return draws;
}

Verdict thresholds_reproduced() {
  const auto t = two_stage::thresholds(testing::example_one());
  const bool ok = round2(t.beta_p) == 0.50 && round2(t.beta_f) == 0.57 && round2(t.beta_so) == 0.05;
  return {ok, "beta_p=" + str(t.beta_p) + " beta_f=" + str(t.beta_f) + " beta_so=" + str(t.beta_so)};
}

Verdict partial_scheme_strictly_better() {
  const auto p = testing::example_one();
  const auto t = two_stage::thresholds(p);
  int strict = 0;
  int checked = 0;
  for (int i = 0; i <= 100; ++i) {
    const double b = i / 100.0;
    if (b < t.beta_p || !check_assumption_two_stage(p, Belief(b)).pass()) continue;
    const auto r = two_stage::evaluate(Belief(b), p, t);
    const double best_public = std::min(r.v_full, r.v_private);
    ++checked;
    if (r.v_partial > best_public + 1e-9 * best_public) {
      return {false, "partial scheme worse at beta=" + str(b)};
    }
    if (b < t.beta_f && r.v_partial < best_public - 1e-9 * best_public) ++strict;
  }
  return {strict > 0 && checked > 0,
          std::to_string(strict) + " strict improvement(s) over " + std::to_string(checked) + " priors"};
}

Verdict oracle_matches_equilibrium() {
  const auto cases = testing::small_oracle_cases();
  int mismatches = 0;
  int crowded = 0;
  for (const auto& c : cases) {
    for (auto regime : {two_stage::InfoRegime::Full, two_stage::InfoRegime::Private}) {
      const auto r = two_stage::brute_force_equilibrium(c.p, Belief(c.beta), regime);
      const auto expect = two_stage::predicted_outcome(c.p, Belief(c.beta), regime);
      if (r.outcomes.empty()) ++mismatches;
      for (const auto& o : r.outcomes) {
        if (o.experimenters >= 2) ++crowded;
        if (!(o == expect)) ++mismatches;
      }
    }
  }
  return {cases.size() >= 10 && mismatches == 0 && crowded == 0,
          std::to_string(cases.size()) + " games, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(crowded) + " equilibria with >= 2 experimenters"};
}

double table_error(infinite::SchemeCD s, const GameParams& p) {
  const auto t = infinite::state_costs(s, p);
  const auto v = linear_oracle::agent_values(s, p);
  const auto u = linear_oracle::uninformed_values(s, p);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
  double e = 0.0;
  e = std::max(e, rel(t.v_bar, v.period_start(p.n)));
  e = std::max(e, rel(t.u_HrR, v.experimenter));
  e = std::max(e, rel(t.u_HrS, v.bystander));
  e = std::max(e, rel(t.u_1LrR, v.risky_at_c));
  e = std::max(e, rel(t.u_1LrS, v.safe_at_c));
  e = std::max(e, rel(t.u_dLrR, v.risky_at_d));
  e = std::max(e, rel(t.u_dLrS, v.safe_at_d));
  e = std::max(e, rel(t.u_avg_1L, ((s.c - 1.0) * v.risky_at_c + (p.n - s.c) * v.safe_at_c) / (p.n - 1.0)));
  if (t.u_avg_cL) {
    e = std::max(e, rel(*t.u_avg_cL, ((s.d - s.c) * v.risky_at_d + (p.n - s.d) * v.safe_at_d) / (p.n - s.c)));
  }
  e = std::max(e, rel(t.u_dUrS, u.safe_after_d));
  e = std::max(e, rel(t.u_cUrS, u.safe_after_c));
  e = std::max(e, rel(t.u_1UrS, u.safe_after_1));
  if (t.u_cUrR.has_value() != u.risky_after_c.has_value()) return 1.0;
  if (t.u_1UrR.has_value() != u.risky_after_1.has_value()) return 1.0;
  if (t.u_cUrR) e = std::max(e, rel(*t.u_cUrR, *u.risky_after_c));
  if (t.u_1UrR) e = std::max(e, rel(*t.u_1UrR, *u.risky_after_1));
  e = std::max(e, rel(infinite::scheme_cost(s, p), linear_oracle::total_cost(s, p)));
  return e;
}

Verdict closed_form_matches_linear_solve() {
  Draws pick(7);
  double worst = 0.0;
  long schemes = 0;
  for (const auto& p : infinite_draws()) {
    const int c = pick.integer(2, p.n);
    const int d = pick.integer(c, p.n);
    for (auto s : {infinite::pi_star(p), infinite::SchemeCD{c, d}}) {
      worst = std::max(worst, table_error(s, p));
      ++schemes;
    }
  }
  return {worst <= 1e-9, std::to_string(infinite_draws().size()) + " draws, " + std::to_string(schemes) +
                             " schemes, worst relative error " + str(worst)};
}

Verdict proposed_scheme_incentive_compatible() {
  int failures = 0;
  double min_gap = INFINITY;
  for (const auto& p : infinite_draws()) {
    const auto s = infinite::pi_star(p);
    const auto r = infinite::check_ic(s, p);
    const double full = p.n * p.s0 / (1.0 - p.delta);
    const double cost = infinite::scheme_cost(s, p);
    min_gap = std::min(min_gap, (full - cost) / full);
    if (!r.pass || !(cost < full)) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(infinite_draws().size()) +
                             " draws; smallest relative saving " + str(min_gap)};
}

Verdict social_flow_not_incentive_compatible() {
  const auto p = testing::example_two();
  const int so = infinite::x_so(p);
  const auto r = infinite::check_ic({so, so}, p);
  for (const auto& e : r.entries) {
    if (e.state == "[d,U,r_S]") {
      return {e.slack < 0.0 && !r.pass,
              "follow=" + str(e.follow) + " deviate=" + str(e.deviate) + " slack=" + str(e.slack)};
    }
  }
  return {false, "cutoff state missing from the report"};
}

Verdict long_horizon_reaches_social_optimum() {
  const auto p = testing::reference_set();
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  grid.push_back(0.995);
  grid.push_back(0.999);
  const auto rows = infinite::delta_sweep(p, grid);
  const int so = std::max(2, infinite::x_so(p));
  // delta*: start of the final run of feasible points that all reach the social optimum.
  double star = NAN;
  bool ratio_ok = true;
  int feasible = 0;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (!it->gate_passed) continue;
    if (it->x_ll == so && it->ratio == 1.0) star = it->delta;
    else break;
  }
  for (const auto& r : rows) {
    if (!r.gate_passed) continue;
    ++feasible;
    ratio_ok = ratio_ok && r.ratio >= 1.0;
  }
  return {!std::isnan(star) && ratio_ok,
          std::to_string(feasible) + " feasible discounts, delta*=" + (std::isnan(star) ? "none" : str(star))};
}

Verdict search_picks_proposed_scheme() {
  Draws d(88);
  int checked = 0, outside = 0, small_checked = 0, small_miss = 0;
  for (int i = 0; i < 60; ++i) {
    const auto p = d.infinite(5, 25, 0.01, 0.5);
    const auto r = infinite::optimal_scheme_search(p);
    ++checked;
    if (!r.best || !(r.is_pi_star || r.is_pi_tilde_star)) ++outside;
  }
  for (int i = 0; i < 60; ++i) {
    const auto p = d.infinite(5, 25, 0.001, 0.05);
    const auto r = infinite::optimal_scheme_search(p);
    ++small_checked;
    if (!r.best || !r.is_pi_star) ++small_miss;
  }
  return {outside == 0 && small_miss == 0,
          std::to_string(checked) + " draws with delta<=0.5 (" + std::to_string(outside) + " outside), " +
              std::to_string(small_checked) + " with delta<=0.05 (" + std::to_string(small_miss) + " not proposed)"};
}

Verdict decomposition_sign_agrees() {
  long pairs = 0, disagree = 0, boundary = 0;
  for (const auto& p : infinite_draws()) {
    for (int c = 2; c <= p.n; ++c) {
      for (int d = c; d <= p.n; ++d) {
        const double a = infinite::fc_gd_decomposition({c, d}, p).slack();
        const double b = infinite::cutoff_slack({c, d}, p);
        ++pairs;
        if (std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(b)) && (std::abs(a) < 1e-9 || std::abs(b) < 1e-9)) {
          ++boundary;
          continue;
        }
        if ((a > 0) != (b > 0) || (a < 0) != (b < 0)) ++disagree;
      }
    }
  }
  return {disagree == 0, std::to_string(pairs) + " pairs, " + std::to_string(disagree) + " sign disagreements, " +
                             std::to_string(boundary) + " at the boundary"};
}

Verdict monte_carlo_matches() {
  const auto p = testing::reference_set();
  const auto s = infinite::pi_star(p);
  const double v = infinite::scheme_cost(s, p);
  const double vb = infinite::v_bar(s, p);
  sim::SimConfig cfg{sim::horizon_for_tail(p, v, 1e-3), 10000, 20240601};
  const auto st = sim::run_scheme(s, p, cfg);
  const bool tail_ok = st.social.tail_bound < 1e-3 * st.social.mean;
  const bool social_ok = std::abs(st.social.mean - v) <= 3.0 * st.social.se;
  const bool agent_ok = std::abs(st.per_agent.mean - vb) <= 3.0 * st.per_agent.se;
  return {tail_ok && social_ok && agent_ok,
          "horizon=" + std::to_string(cfg.horizon) + " social " + str(st.social.mean) + " vs " + str(v) +
              " (se " + str(st.social.se) + "), per-agent " + str(st.per_agent.mean) + " vs " + str(vb) +
              " (se " + str(st.per_agent.se) + ")"};
}

Verdict rollouts_incentive_compatible() {
  const auto p = testing::reference_set();
  const auto s = infinite::pi_star(p);
  std::string detail;
  bool ok = true;
  for (const char* state : {"[d,U,r_S]", "[-,H,r_R]", "[d,L,r_R]"}) {
    sim::RolloutConfig cfg;
    cfg.sim = sim::SimConfig{sim::horizon_for_tail(p, infinite::v_bar(s, p), 1e-3), 4000, 31};
    cfg.trigger = sim::Trigger::parse(state);
    const auto r = sim::deviation_rollout(s, p, cfg);
    const bool pass = r.reachable && r.deviate.mean >= r.follow.mean - 3.0 * r.difference.se;
    ok = ok && pass;
    detail += std::string(state) + " gain " + str(r.difference.mean) + " (se " + str(r.difference.se) + ") ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"two-stage thresholds at 0.50 / 0.57 / 0.05", 1.0, thresholds_reproduced},
      {"partial scheme strictly better between thresholds", 5.0, partial_scheme_strictly_better},
      {"brute-force equilibria match the closed form", 60.0, oracle_matches_equilibrium},
      {"state costs match the linear solve", 0.0, closed_form_matches_linear_solve},
      {"proposed scheme incentive compatible and beats full information", 0.0,
       proposed_scheme_incentive_compatible},
      {"social flow without switching is not incentive compatible", 0.0, social_flow_not_incentive_compatible},
      {"patient agents reach the social optimum", 0.0, long_horizon_reaches_social_optimum},
      {"scheme search picks the proposed scheme or its neighbour", 0.0, search_picks_proposed_scheme},
      {"cutoff decomposition agrees in sign", 0.0, decomposition_sign_agrees},
      {"Monte Carlo cost agrees with closed form", 0.0, monte_carlo_matches},
      {"simulated deviations are unprofitable", 0.0, rollouts_incentive_compatible},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      v.pass = false;
      v.detail += " [over the " + str(c.limit_seconds) + " s limit]";
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s (%.3f s)\n", v.pass ? "PASS" : "FAIL", i + 1, c.name, v.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
