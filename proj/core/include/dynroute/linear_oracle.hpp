#pragma once

// Reference values for the infinite-horizon scheme obtained by solving the
// Bellman equations of the induced Markov chains directly, without any of the
// closed forms in infinite.hpp.

#include <optional>

#include "dynroute/infinite.hpp"

namespace dynroute::linear_oracle {

/// Continuation costs of one agent in each on-path state.
struct AgentValues {
  double experimenter = 0.0;   ///< risky in an experimentation period
  double bystander = 0.0;      ///< safe in an experimentation period
  double risky_at_c = 0.0;     ///< risky at flow c
  double safe_at_c = 0.0;      ///< safe at flow c
  double risky_at_d = 0.0;     ///< risky at flow d
  double safe_at_d = 0.0;      ///< safe at flow d

  /// Expected cost at the start of an experimentation period.
  double period_start(int n) const;
};

AgentValues agent_values(infinite::SchemeCD s, const GameParams& p);

/// Costs of agents that were on safe and so do not know the last road state,
/// obtained by conditioning the road transition on the recommendation received.
struct UninformedValues {
  double safe_after_d = 0.0;   ///< previous flow d, told safe
  double safe_after_c = 0.0;   ///< previous flow c, told safe
  double safe_after_1 = 0.0;   ///< previous flow 1, told safe
  double risky_after_d = 0.0;  ///< previous flow d, told risky
  std::optional<double> risky_after_c;
  std::optional<double> risky_after_1;
};

UninformedValues uninformed_values(infinite::SchemeCD s, const GameParams& p);

/// Total discounted cost from an experimentation period.
double total_cost(infinite::SchemeCD s, const GameParams& p);

}  // namespace dynroute::linear_oracle
