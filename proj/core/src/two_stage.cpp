#include "dynroute/two_stage.hpp"

#include <cmath>
#include <limits>

namespace dynroute::two_stage {

namespace {

double full_safe_cost(const GameParams& p) { return p.s0 + p.s1 * p.n; }

void require_gate(const GameParams& p, Belief beta) {
  p.validate();
  const auto gate = check_assumption_two_stage(p, beta);
  if (!gate.pass()) throw GateError(gate.describe());
}

}  // namespace

Thresholds thresholds(const GameParams& p) {
  p.validate();
  if (!(p.l < p.s0 + p.s1)) throw GateError("two-stage gate failed: L < s0 + s1 does not hold");

  Thresholds t;
  t.x_eq_l = myopic_eq_flow(p.l, p);
  t.x_so_l = myopic_so_flow(p.l, p);
  t.x_so_h = myopic_so_flow(p.h, p);

  const double f = full_safe_cost(p);
  const double n = p.n;
  t.beta_p = (p.h - f) / (p.h + f - 2.0 * p.l);
  t.beta_f = (p.h - f) / (p.h - p.l - stage_cost(t.x_eq_l, p.l, p) / n + f);

  const double g_l = stage_cost(t.x_so_l, p.l, p);
  const double g_h = stage_cost(t.x_so_h, p.h, p);
  const double denom = p.h - p.l + g_h - g_l;
  // 2 g(0) - (s0 + s1 (n - 1)) (n - 1), the part of the indifference
  // condition that does not depend on beta.
  const double k = p.s0 * (n + 1.0) + p.s1 * ((2.0 + n) * n - 1.0);
  const double k_printed = p.s0 * (n + 1.0) - p.s1 * ((2.0 + n) * n - 1.0);
  t.beta_so = (p.h + g_h - k) / denom;
  t.beta_so_printed = (p.h + g_h - k_printed) / denom;
  t.beta_so_discrepancy = std::abs(t.beta_so - t.beta_so_printed) > 1e-9;
  return t;
}

double cost_full(Belief beta, const GameParams& p) {
  require_gate(p, beta);
  const auto t = thresholds(p);
  const double b = beta.value();
  const double g0 = stage_cost(0, 0.0, p);
  if (b < t.beta_f) return 2.0 * g0;
  return stage_cost(1, expected_theta(beta, p), p) + b * stage_cost(t.x_eq_l, p.l, p) + (1.0 - b) * g0;
}

double cost_private(Belief beta, const GameParams& p) {
  require_gate(p, beta);
  const auto t = thresholds(p);
  const double b = beta.value();
  const double g0 = stage_cost(0, 0.0, p);
  if (b < t.beta_p) return 2.0 * g0;
  return stage_cost(1, expected_theta(beta, p), p) + b * stage_cost(1, p.l, p) + (1.0 - b) * g0;
}

double cost_social_optimum(Belief beta, const GameParams& p) {
  require_gate(p, beta);
  const auto t = thresholds(p);
  const double b = beta.value();
  if (b < t.beta_so) return 2.0 * stage_cost(0, 0.0, p);
  return stage_cost(1, expected_theta(beta, p), p) + b * stage_cost(t.x_so_l, p.l, p) +
         (1.0 - b) * stage_cost(t.x_so_h, p.h, p);
}

const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::RecSafe: return "rec_safe";
    case Constraint::RecRisky: return "rec_risky";
    case Constraint::Experimenter: return "experimenter";
  }
  return "?";
}

std::vector<ICSlack> ic_constraints_eval(Belief beta, int pi2_l, int pi2_h, const GameParams& p) {
  if (pi2_l < 0 || pi2_l > p.n - 1 || pi2_h < 0 || pi2_h > p.n - 1) {
    throw std::domain_error("second-round recommendations must lie in 0..n-1");
  }
  const double b = beta.value();
  const double n = p.n;
  const double xl = pi2_l + 1;
  const double xh = pi2_h;
  std::vector<ICSlack> out;

  {
    ICSlack c{Constraint::RecSafe};
    const double d = b * (n - xl) + (1.0 - b) * (n - xh - 1.0);
    if (d <= 0.0) {
      c.vacuous = true;
    } else {
      const double pl = b * (n - xl) / d;
      const double ph = 1.0 - pl;
      c.follow = p.s0 + p.s1 * (pl * (n - xl) + ph * (n - xh));
      c.deviate = pl * p.l * (xl + 1.0) + ph * p.h * (xh + 1.0);
      c.slack = c.deviate - c.follow;
    }
    out.push_back(c);
  }
  {
    ICSlack c{Constraint::RecRisky};
    const double d = b * (xl - 1.0) + (1.0 - b) * xh;
    if (d <= 0.0) {
      c.vacuous = true;
    } else {
      const double pl = b * (xl - 1.0) / d;
      const double ph = 1.0 - pl;
      c.follow = pl * p.l * xl + ph * p.h * xh;
      c.deviate = p.s0 + p.s1 * (pl * (n - xl + 1.0) + ph * (n - xh + 1.0));
      c.slack = c.deviate - c.follow;
    }
    out.push_back(c);
  }
  {
    ICSlack c{Constraint::Experimenter};
    c.follow = expected_theta(beta, p) + b * p.l * xl + (1.0 - b) * (p.s0 + p.s1 * (n - xh));
    c.deviate = 2.0 * full_safe_cost(p);
    c.slack = c.deviate - c.follow;
    out.push_back(c);
  }
  return out;
}

bool ic_feasible(const std::vector<ICSlack>& slacks) {
  for (const auto& s : slacks) {
    if (!s.satisfied()) return false;
  }
  return true;
}

Scheme solve_optimal_scheme(Belief beta, const GameParams& p) {
  require_gate(p, beta);
  const auto t = thresholds(p);
  const double b = beta.value();
  if (b < t.beta_p) return Scheme{0, 0, 0, 2.0 * stage_cost(0, 0.0, p)};

  const double first = stage_cost(1, expected_theta(beta, p), p);
  Scheme best{1, 0, 0, std::numeric_limits<double>::infinity()};
  // Row-major scan with strict improvement keeps the lexicographically
  // smallest (pi2_l, pi2_h) among ties.
  for (int a = 0; a <= p.n - 1; ++a) {
    for (int c = 0; c <= p.n - 1; ++c) {
      if (!ic_feasible(ic_constraints_eval(beta, a, c, p))) continue;
      const double cost = first + b * stage_cost(a + 1, p.l, p) + (1.0 - b) * stage_cost(c, p.h, p);
      if (cost < best.cost) best = Scheme{1, a, c, cost};
    }
  }
  if (!std::isfinite(best.cost)) {
    throw std::logic_error("no incentive-compatible scheme found above beta_p");
  }
  return best;
}

const char* to_string(Region r) {
  switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
  }
  return "?";
}

Region classify(Belief beta, const Thresholds& t) {
  const double b = beta.value();
  if (b < t.beta_so) return Region::A;
  if (b < t.beta_p) return Region::B;
  if (b < t.beta_f) return Region::C;
  return Region::D;
}

Row evaluate(Belief beta, const GameParams& p, const Thresholds& t) {
  Row r;
  r.beta = beta.value();
  r.v_full = cost_full(beta, p);
  r.v_private = cost_private(beta, p);
  r.scheme = solve_optimal_scheme(beta, p);
  r.v_partial = r.scheme.cost;
  r.v_so = cost_social_optimum(beta, p);
  r.region = classify(beta, t);
  return r;
}

const char* to_string(InfoRegime r) { return r == InfoRegime::Full ? "full" : "private"; }

Outcome predicted_outcome(const GameParams& p, Belief beta, InfoRegime regime) {
  const auto t = thresholds(p);
  const double b = beta.value();
  if (regime == InfoRegime::Full) {
    if (b < t.beta_f) return {};
    return {1, t.x_eq_l, 0};
  }
  if (b < t.beta_p) return {};
  return {1, 1, 0};
}

}  // namespace dynroute::two_stage
