#include "dynroute/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynroute {

namespace {

constexpr double kBoundaryNote = 1e-12;

GateCondition strict_less(std::string name, double lhs, double rhs, std::vector<std::string>& notes) {
  GateCondition c{std::move(name), lhs < rhs, rhs - lhs};
  if (std::abs(c.slack) < kBoundaryNote) notes.push_back(c.name + ": on the strict boundary");
  return c;
}

GateCondition weak_less(std::string name, double lhs, double rhs, std::vector<std::string>& notes) {
  GateCondition c{std::move(name), lhs <= rhs, rhs - lhs};
  if (std::abs(c.slack) < kBoundaryNote) notes.push_back(c.name + ": on the weak boundary");
  return c;
}

std::string describe_conditions(const std::vector<const GateCondition*>& conds,
                                const std::vector<std::string>& notes) {
  std::ostringstream os;
  for (const auto* c : conds) {
    os << (c->holds ? "  ok   " : "  FAIL ") << c->name << " (slack " << c->slack << ")\n";
  }
  for (const auto& n : notes) os << "  note: " << n << '\n';
  return os.str();
}

}  // namespace

const char* to_string(RoadState s) { return s == RoadState::L ? "L" : "H"; }

Belief::Belief(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("belief must lie in [0, 1]");
  }
}

void GameParams::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(s0 > 0.0)) throw std::invalid_argument("s0 must be positive");
  if (!(s1 >= 0.0)) throw std::invalid_argument("s1 must be non-negative");
  if (!(l > 0.0)) throw std::invalid_argument("l must be positive");
  if (!(l < h)) throw std::invalid_argument("l must be strictly below h");
  if (!(gamma_l >= 0.0 && gamma_l <= 1.0)) throw std::invalid_argument("gamma_l must lie in [0, 1]");
  if (!(gamma_h >= 0.0 && gamma_h <= 1.0)) throw std::invalid_argument("gamma_h must lie in [0, 1]");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
}

double stage_cost(int x, double coefficient, const GameParams& p) {
  if (x < 0 || x > p.n) throw std::domain_error("risky flow outside 0..n");
  const double safe = static_cast<double>(p.n - x);
  const double safe_cost = (p.s0 + p.s1 * safe) * safe;
  if (x == 0) return safe_cost;
  const double xr = static_cast<double>(x);
  return coefficient * xr * xr + safe_cost;
}

double expected_theta(Belief beta, const GameParams& p) {
  return beta.value() * p.l + (1.0 - beta.value()) * p.h;
}

double mu_l(const GameParams& p) { return (1.0 - p.gamma_l) * p.l + p.gamma_l * p.h; }

double mu_h(const GameParams& p) { return p.gamma_h * p.l + (1.0 - p.gamma_h) * p.h; }

Belief belief_step(Belief beta, const GameParams& p) {
  const double b = beta.value();
  // Clamp guards against 1 + ulp from rounding.
  return Belief(std::clamp(b * (1.0 - p.gamma_l) + (1.0 - b) * p.gamma_h, 0.0, 1.0));
}

int myopic_so_flow(double mu, const GameParams& p) {
  int best = 0;
  double best_cost = stage_cost(0, mu, p);
  for (int x = 1; x <= p.n; ++x) {
    const double c = stage_cost(x, mu, p);
    if (c < best_cost) {
      best = x;
      best_cost = c;
    }
  }
  return best;
}

int myopic_eq_flow(double coefficient, const GameParams& p) {
  for (int x = p.n; x >= 0; --x) {
    const bool risky_stays = coefficient * x <= p.s0 + p.s1 * (p.n - x + 1);
    const bool safe_stays = x == p.n || coefficient * (x + 1) >= p.s0 + p.s1 * (p.n - x - 1);
    if (risky_stays && safe_stays) return x;
  }
  return 0;
}

std::string TwoStageGate::describe() const {
  std::ostringstream os;
  os << "two-stage gate " << (pass() ? "passed" : "failed") << '\n'
     << describe_conditions({&low_state_attractive, &experimentation_costly}, notes)
     << "  condition 2 holds for beta < " << beta_limit << '\n';
  return os.str();
}

TwoStageGate check_assumption_two_stage(const GameParams& p, Belief beta) {
  TwoStageGate g;
  const double full_safe = p.s0 + p.s1 * p.n;
  g.low_state_attractive = strict_less("L < s0 + s1", p.l, p.s0 + p.s1, g.notes);
  g.experimentation_costly = strict_less("s0 + s1 n < mu_beta", full_safe, expected_theta(beta, p), g.notes);
  g.beta_limit = (p.h - full_safe) / (p.h - p.l);
  return g;
}

bool InfiniteGate::pass() const {
  for (const auto* c : conditions()) {
    if (!c->holds) return false;
  }
  return true;
}

std::vector<const GateCondition*> InfiniteGate::conditions() const {
  return {&fixed_safe_cost, &switching_gamma_l, &switching_gamma_h, &s0_above_3l,
          &mu_l_lower,      &mu_l_upper,        &mu_h_lower,        &mu_h_upper};
}

std::string InfiniteGate::describe() const {
  std::ostringstream os;
  os << "infinite-horizon gate " << (pass() ? "passed" : "failed") << '\n'
     << describe_conditions(conditions(), notes) << "  mu_l = " << mu_l << ", mu_h = " << mu_h
     << ", mu_h upper bound = " << mu_h_bound << '\n';
  return os.str();
}

InfiniteGate check_assumption_infinite(const GameParams& p) {
  InfiniteGate g;
  g.mu_l = mu_l(p);
  g.mu_h = mu_h(p);
  g.mu_h_bound = p.s0 + p.delta * p.gamma_h * (p.s0 / 3.0 - g.mu_l);

  g.fixed_safe_cost = GateCondition{"s1 = 0", p.s1 == 0.0, -p.s1};
  g.switching_gamma_l = weak_less("gamma_l <= 1/2", p.gamma_l, 0.5, g.notes);
  g.switching_gamma_h = weak_less("gamma_h <= 1/2", p.gamma_h, 0.5, g.notes);
  g.s0_above_3l = strict_less("3 L < s0", 3.0 * p.l, p.s0, g.notes);
  g.mu_l_lower = weak_less("L <= mu_l", p.l, g.mu_l, g.notes);
  g.mu_l_upper = strict_less("mu_l < s0 / 3", g.mu_l, p.s0 / 3.0, g.notes);
  g.mu_h_lower = weak_less("s0 <= mu_h", p.s0, g.mu_h, g.notes);
  g.mu_h_upper = weak_less("mu_h <= s0 + delta gamma_h (s0/3 - mu_l)", g.mu_h, g.mu_h_bound, g.notes);
  return g;
}

void require_infinite_gate(const GameParams& p) {
  p.validate();
  const auto gate = check_assumption_infinite(p);
  if (!gate.pass()) throw GateError(gate.describe());
}

}  // namespace dynroute
