#pragma once

// Seeded Monte Carlo execution of recommendation schemes.
//
// Randomness comes from two kinds of streams: one per (seed, trial) for the
// road state, and one per (seed, trial, t) for recommendation draws. Paired
// runs that share a trial index therefore see the same road and the same
// draws regardless of what the agents do.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dynroute/infinite.hpp"
#include "dynroute/two_stage.hpp"

namespace dynroute::sim {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t step);

/// Road states theta_0..theta_horizon with theta_0 = initial.
std::vector<RoadState> simulate_chain(const GameParams& p, int horizon, std::uint64_t seed,
                                      RoadState initial = RoadState::H, std::uint64_t trial = 0);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  long trials = 0;
  int horizon = 0;
  double tail_bound = 0.0;
};

/// Upper bound on the discounted cost beyond the horizon.
double tail_bound(const GameParams& p, int horizon);

/// Smallest horizon whose tail bound is below `fraction * reference`.
int horizon_for_tail(const GameParams& p, double reference, double fraction);

struct Step {
  int t = 0;
  RoadState theta = RoadState::H;
  int risky_flow = 0;
  std::vector<bool> risky;     ///< per-agent action
  std::vector<double> cost;    ///< per-agent realized stage cost
  double total = 0.0;
};

struct Trajectory {
  std::vector<Step> steps;
  std::vector<double> agent_totals;  ///< discounted per-agent totals
  double total = 0.0;                ///< discounted social cost
};

struct SimConfig {
  int horizon = 50;
  long trials = 1000;
  std::uint64_t seed = 1;
};

/// One compliant run of pi_{c,d} from theta_0 = H.
Trajectory run_scheme_trial(infinite::SchemeCD s, const GameParams& p, const SimConfig& cfg, long trial);

struct SchemeStats {
  Estimate social;     ///< total discounted social cost
  Estimate per_agent;  ///< social cost divided by n
  Estimate agent0;     ///< discounted cost of agent 0
};

SchemeStats run_scheme(infinite::SchemeCD s, const GameParams& p, const SimConfig& cfg);

/// Information state that triggers a deviation: the kind of period just
/// finished ('1' experimentation, 'c', 'd', or '-' for any), what the agent
/// knows about the last road state ('L', 'H' or 'U'), and its recommendation
/// ('S' or 'R'). Written as e.g. "[d,U,r_S]".
struct Trigger {
  char prev = '-';
  char belief = 'U';
  char rec = 'S';

  static Trigger parse(const std::string& text);
  std::string str() const;
};

struct RolloutConfig {
  SimConfig sim;
  int agent = 0;
  Trigger trigger;
  int max_wait = 2000;  ///< steps searched for the trigger in each trial
};

struct RolloutResult {
  bool reachable = false;
  long matched_trials = 0;
  Estimate follow;
  Estimate deviate;
  Estimate difference;  ///< deviate - follow, paired per trial
};

/// Discounted cost of the deviant from the first time it is in the trigger
/// state, when following versus taking the other road once and then staying
/// safe under the punishment regime.
RolloutResult deviation_rollout(infinite::SchemeCD s, const GameParams& p, const RolloutConfig& cfg);

/// Two-round run of a two-stage scheme with theta drawn from the prior.
Estimate run_two_stage(const two_stage::Scheme& s, const GameParams& p, const SimConfig& cfg);

/// CSV with columns t,theta,flow_risky,cost_total and, when per_agent is set,
/// one cost column per agent.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr, bool per_agent);

}  // namespace dynroute::sim
