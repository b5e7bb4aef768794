#pragma once

// Two-stage game with a constant road state and no discounting: equilibrium
// costs under full and private information, the unconstrained social optimum,
// and the optimal incentive-compatible partial-information scheme.
//
// delta, gamma_l and gamma_h in GameParams are ignored here.

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dynroute/model.hpp"

namespace dynroute::two_stage {

struct Thresholds {
  double beta_p = 0.0;   ///< experimentation under private information iff beta >= beta_p
  double beta_f = 0.0;   ///< experimentation under full information iff beta >= beta_f
  double beta_so = 0.0;  ///< planner experiments iff beta >= beta_so (indifference condition)
  /// The same threshold evaluated from the printed closed form with the
  /// "s0 (n + 1) - s1 ((2 + n) n - 1)" grouping. Kept for comparison only.
  double beta_so_printed = 0.0;
  bool beta_so_discrepancy = false;  ///< |beta_so - beta_so_printed| > 1e-9
  int x_eq_l = 0;   ///< myopic equilibrium flow with coefficient L
  int x_so_l = 0;   ///< myopic social-optimum flow with coefficient L
  int x_so_h = 0;   ///< myopic social-optimum flow with coefficient H
};

/// Throws GateError if L >= s0 + s1.
Thresholds thresholds(const GameParams& p);

double cost_full(Belief beta, const GameParams& p);
double cost_private(Belief beta, const GameParams& p);
double cost_social_optimum(Belief beta, const GameParams& p);

/// Recommendation counts for the uninformed (first-round safe) agents.
struct Scheme {
  int pi1 = 0;
  int pi2_l = 0;
  int pi2_h = 0;
  double cost = 0.0;

  int risky_flow_l() const { return pi1 == 1 ? pi2_l + 1 : pi2_l; }
  int risky_flow_h() const { return pi2_h; }
};

enum class Constraint { RecSafe, RecRisky, Experimenter };
const char* to_string(Constraint c);

struct ICSlack {
  Constraint id = Constraint::RecSafe;
  double follow = 0.0;
  double deviate = 0.0;
  /// deviate - follow for RecSafe / RecRisky; rhs - lhs for Experimenter.
  double slack = 0.0;
  /// No agent receives the corresponding signal; the constraint holds trivially.
  bool vacuous = false;

  bool satisfied() const { return vacuous || slack >= 0.0; }
};

/// Evaluates the three incentive constraints for pi1 = 1 with second-round risky
/// flows x_L = pi2_l + 1 and x_H = pi2_h. pi2_l and pi2_h range over 0..n-1
/// (there are n - 1 uninformed agents); throws std::domain_error otherwise.
std::vector<ICSlack> ic_constraints_eval(Belief beta, int pi2_l, int pi2_h, const GameParams& p);

bool ic_feasible(const std::vector<ICSlack>& slacks);

/// Optimal incentive-compatible scheme. Throws GateError if the two-stage gate
/// fails at beta.
Scheme solve_optimal_scheme(Belief beta, const GameParams& p);

/// Prior regions: A no experimentation, B planner only, C private and optimal
/// schemes, D every scheme.
enum class Region { A, B, C, D };
const char* to_string(Region r);
Region classify(Belief beta, const Thresholds& t);

struct Row {
  double beta = 0.0;
  double v_full = 0.0;
  double v_private = 0.0;
  double v_partial = 0.0;
  double v_so = 0.0;
  Scheme scheme;
  Region region = Region::A;
};

/// Evaluates every quantity for one prior. Throws GateError when gated out.
Row evaluate(Belief beta, const GameParams& p, const Thresholds& t);

// ---------------------------------------------------------------------------
// Brute-force pure Nash equilibrium oracle for small n.

enum class InfoRegime { Full, Private };
const char* to_string(InfoRegime r);

/// Aggregate outcome of one equilibrium profile.
struct Outcome {
  int experimenters = 0;
  int second_round_flow_l = 0;
  int second_round_flow_h = 0;

  auto operator<=>(const Outcome&) const = default;
};

struct OracleResult {
  std::set<Outcome> outcomes;
  long profiles_checked = 0;
  long equilibria = 0;
};

inline constexpr int kOracleMaxAgents = 6;

/// Enumerates symmetric-class strategy profiles (first-round action plus a
/// second-round action per information set {L, H, unknown}) and returns the
/// outcomes of every profile that is a Nash equilibrium whose second-round
/// play is also an equilibrium in each subgame reachable by a single
/// deviation. Throws std::invalid_argument if n > kOracleMaxAgents.
OracleResult brute_force_equilibrium(const GameParams& p, Belief beta, InfoRegime regime);

/// Outcome predicted by the closed-form equilibrium characterisation.
Outcome predicted_outcome(const GameParams& p, Belief beta, InfoRegime regime);

}  // namespace dynroute::two_stage
