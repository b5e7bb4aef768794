#pragma once

// Infinite-horizon game with a Markov road state and a fixed safe-road cost
// (s1 = 0). A scheme pi_{c,d} sends one experimenter after the road was H,
// c agents after the pair (H, L) and d agents after (L, L).

#include <optional>
#include <string>
#include <vector>

#include "dynroute/model.hpp"

namespace dynroute::infinite {

struct SchemeCD {
  int c = 2;
  int d = 2;

  bool operator==(const SchemeCD&) const = default;
};

/// Discounted continuation costs of a single agent, by information state.
/// Names follow [previous flow, belief, recommendation]; "avg" entries are the
/// expectation before the recommendation is drawn.
struct StateCostTable {
  double v_bar = 0.0;   ///< per-agent cost at the start of an experimentation period
  double u_dLrR = 0.0;  ///< also the cost of [c, L, r_R]
  double u_dLrS = 0.0;  ///< also the cost of [c, L, r_S]
  double u_1LrR = 0.0;
  double u_1LrS = 0.0;
  double u_avg_1L = 0.0;
  std::optional<double> u_avg_cL;  ///< absent when c = n (no safe agents to draw from)
  double u_HrS = 0.0;
  double u_HrR = 0.0;
  double u_dUrS = 0.0;
  double u_cUrS = 0.0;
  double u_1UrS = 0.0;
  std::optional<double> u_cUrR;
  std::optional<double> u_1UrR;
};

struct Posteriors {
  double p_dS = 1.0;
  double p_cS = 1.0;
  double p_1S = 0.0;
  std::optional<double> p_cR;  ///< absent when no agent is recruited at flow c
  std::optional<double> p_1R;  ///< absent when no agent is recruited after an experiment
};

/// Per-agent discounted cost at the start of an experimentation period.
double v_bar(SchemeCD s, const GameParams& p);
StateCostTable state_costs(SchemeCD s, const GameParams& p);
Posteriors posteriors(SchemeCD s, const GameParams& p);

/// Total discounted cost starting from an experimentation period (theta_0 = H).
double scheme_cost(SchemeCD s, const GameParams& p);

struct ICEntry {
  std::string state;
  double follow = 0.0;
  double deviate = 0.0;
  double slack = 0.0;
  bool boundary = false;  ///< slack in (-tol, 0): passed, flagged
  bool ok() const { return slack >= 0.0 || boundary; }
};

struct ICReport {
  SchemeCD scheme;
  bool flows_in_range = false;  ///< x_so <= c <= d <= x_eq(mu_l)
  bool cost_cap = false;        ///< g(c, mu_l) <= g(2, mu_l)
  bool cutoff = false;          ///< safe agents at flow d prefer to follow (vacuous if d = n)
  std::vector<ICEntry> entries;
  std::vector<std::string> reasons;
  std::vector<std::string> warnings;
  bool pass = false;
};

/// Relative tolerance below which a negative slack counts as a boundary pass.
inline constexpr double kSlackTolerance = 1e-12;

ICReport check_ic(SchemeCD s, const GameParams& p);

/// deviate - follow for a safe agent with belief unknown after flow d.
double cutoff_slack(SchemeCD s, const GameParams& p);

struct XLL {
  int x_bar_ll = 0;
  int x_ll = 0;
};

/// Smallest d >= x_so satisfying the cutoff condition with c = x_so. The
/// condition holds vacuously at d = n, where no agent is left on safe.
XLL compute_x_ll(const GameParams& p);

/// The proposed scheme (x_so, x_ll) and its neighbour (x_so + 1, x_ll - 1),
/// the latter absent when it would break c <= d.
SchemeCD pi_star(const GameParams& p);
std::optional<SchemeCD> pi_tilde_star(const GameParams& p);

struct Decomposition {
  double f = 0.0;
  double g = 0.0;
  double tau = 0.0;
  double tau_tilde = 0.0;
  double k = 0.0;
  double slack() const { return g - f; }
};

/// The cutoff condition rewritten as f(c) <= g(d).
Decomposition fc_gd_decomposition(SchemeCD s, const GameParams& p);

struct SchemeRow {
  SchemeCD scheme;
  bool feasible = false;
  double cost = 0.0;
};

struct SearchResult {
  std::optional<SchemeCD> best;
  double best_cost = 0.0;
  bool is_pi_star = false;
  bool is_pi_tilde_star = false;
  std::vector<SchemeRow> table;  ///< every 1 < c <= d <= n, sorted by cost
  std::vector<std::string> warnings;
};

SearchResult optimal_scheme_search(const GameParams& p);

struct SweepRecord {
  double delta = 0.0;
  bool gate_passed = false;
  int x_ll = 0;
  double v_star = 0.0;
  double v_so = 0.0;
  double ratio = 0.0;
};

/// Evaluates pi* against the social optimum over a grid of discount factors.
/// Grid points failing the gate are returned with gate_passed = false.
/// Throws std::invalid_argument if a switching probability is zero and
/// GateError if no grid point passes.
std::vector<SweepRecord> delta_sweep(const GameParams& p, const std::vector<double>& deltas);

/// Socially optimal flow for the belief that the previous state was L.
int social_opt_policy(Belief beta, const GameParams& p);

/// x_so and x_eq for coefficient mu_l.
int x_so(const GameParams& p);
int x_eq(const GameParams& p);

}  // namespace dynroute::infinite
