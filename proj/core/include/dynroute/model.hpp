#pragma once

// Two-road congestion model: parameters, stage costs, beliefs, myopic flows
// and the parameter gates used by the two-stage and infinite-horizon analyses.

#include <stdexcept>
#include <string>
#include <vector>

namespace dynroute {

/// Risky-road congestion state.
enum class RoadState { L, H };

const char* to_string(RoadState s);

/// Thrown when parameters fail a gate (assumption check) required by an analysis.
class GateError : public std::runtime_error {
 public:
  explicit GateError(const std::string& what) : std::runtime_error(what) {}
};

/// Probability that the risky road is in state L at the referenced time.
/// 1 encodes an observed L, 0 an observed H.
class Belief {
 public:
  constexpr Belief() = default;
  explicit Belief(double value);

  static constexpr Belief observed(RoadState s) {
    Belief b;
    b.value_ = s == RoadState::L ? 1.0 : 0.0;
    return b;
  }

  constexpr double value() const { return value_; }

 private:
  double value_ = 0.0;
};

struct GameParams {
  int n = 2;              ///< number of atomic agents
  double s0 = 1.0;        ///< safe-road intercept
  double s1 = 0.0;        ///< safe-road slope per agent
  double l = 0.5;         ///< low congestion coefficient
  double h = 1.0;         ///< high congestion coefficient
  double gamma_l = 0.0;   ///< P(H | L)
  double gamma_h = 0.0;   ///< P(L | H)
  double delta = 0.0;     ///< discount factor in [0, 1)
  double beta = 0.5;      ///< common prior P(theta_0 = L)

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  double coefficient(RoadState s) const { return s == RoadState::L ? l : h; }
};

// Stage cost g(x, theta) = theta x^2 + (s0 + s1 (n - x)) (n - x).
// At x = 0 the coefficient is ignored. Throws std::domain_error if x is outside 0..n.
double stage_cost(int risky_flow, double coefficient, const GameParams& p);

/// mu_beta = beta L + (1 - beta) H.
double expected_theta(Belief beta, const GameParams& p);
/// E[theta_t | theta_{t-1} = L] = (1 - gamma_l) L + gamma_l H.
double mu_l(const GameParams& p);
/// E[theta_t | theta_{t-1} = H] = gamma_h L + (1 - gamma_h) H.
double mu_h(const GameParams& p);

/// One-step Markov propagation of P(theta = L).
Belief belief_step(Belief beta, const GameParams& p);

/// Integer argmin of stage_cost(x, mu) over 0..n, smaller flow on ties.
int myopic_so_flow(double mu, const GameParams& p);

/// Largest x in 0..n at which nobody on risky wants to switch to safe and nobody
/// on safe wants to switch to risky, for a known coefficient.
int myopic_eq_flow(double coefficient, const GameParams& p);

/// One checked predicate of a gate. slack >= 0 means satisfied for weak
/// inequalities, > 0 for strict ones.
struct GateCondition {
  std::string name;
  bool holds = false;
  double slack = 0.0;
};

struct TwoStageGate {
  GateCondition low_state_attractive;   // L < s0 + s1
  GateCondition experimentation_costly; // s0 + s1 n < mu_beta
  /// Condition 2 holds iff beta < beta_limit (when H > s0 + s1 n).
  double beta_limit = 0.0;
  std::vector<std::string> notes;

  bool pass() const { return low_state_attractive.holds && experimentation_costly.holds; }
  std::string describe() const;
};

TwoStageGate check_assumption_two_stage(const GameParams& p, Belief beta);

struct InfiniteGate {
  GateCondition fixed_safe_cost;     // s1 == 0
  GateCondition switching_gamma_l;   // 0 <= gamma_l <= 1/2
  GateCondition switching_gamma_h;   // 0 <= gamma_h <= 1/2
  GateCondition s0_above_3l;         // s0 > 3 L
  GateCondition mu_l_lower;          // mu_l >= L
  GateCondition mu_l_upper;          // mu_l < s0 / 3
  GateCondition mu_h_lower;          // mu_h >= s0
  GateCondition mu_h_upper;          // mu_h <= s0 + delta gamma_h (s0/3 - mu_l)
  double mu_l = 0.0;
  double mu_h = 0.0;
  double mu_h_bound = 0.0;
  std::vector<std::string> notes;

  bool switching_ok() const { return switching_gamma_l.holds && switching_gamma_h.holds; }
  bool pass() const;
  std::vector<const GateCondition*> conditions() const;
  std::string describe() const;
};

InfiniteGate check_assumption_infinite(const GameParams& p);

/// Throws GateError with the report text when the infinite-horizon gate fails.
void require_infinite_gate(const GameParams& p);

}  // namespace dynroute
