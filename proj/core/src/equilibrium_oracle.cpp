// Exhaustive pure-strategy equilibrium search for the two-stage game.
//
// A strategy is four bits: the first-round action and a second-round action
// for each information set (theta known to be L, known to be H, unknown).
// Agents are interchangeable, so profiles are enumerated as multisets.

#include <array>
#include <cstdint>

#include "dynroute/two_stage.hpp"

namespace dynroute::two_stage {

namespace {

using Strategy = std::uint8_t;
constexpr int kStrategies = 16;

enum Info { kKnowL = 0, kKnowH = 1, kUnknown = 2 };

bool first_risky(Strategy s) { return s & 1u; }
bool second_risky(Strategy s, Info i) { return s & (2u << i); }

struct Game {
  const GameParams& p;
  double beta;
  InfoRegime regime;

  Info info(bool went_risky, int first_flow, RoadState theta) const {
    const bool learns = went_risky || (regime == InfoRegime::Full && first_flow > 0);
    if (!learns) return kUnknown;
    return theta == RoadState::L ? kKnowL : kKnowH;
  }

  double road_cost(bool risky, int flow, double coef) const {
    return risky ? coef * flow : p.s0 + p.s1 * (p.n - flow);
  }

  // Second-round risky flow for the given first-round actions and theta.
  int second_flow(const std::vector<Strategy>& prof, const std::vector<bool>& first, int x1,
                  RoadState theta) const {
    int x = 0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      x += second_risky(prof[i], info(first[i], x1, theta)) ? 1 : 0;
    }
    return x;
  }

  double expected_cost(const std::vector<Strategy>& prof, std::size_t agent) const {
    std::vector<bool> first(prof.size());
    int x1 = 0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      first[i] = first_risky(prof[i]);
      x1 += first[i] ? 1 : 0;
    }
    const double mu = beta * p.l + (1.0 - beta) * p.h;
    double total = road_cost(first[agent], x1, mu);
    for (RoadState theta : {RoadState::L, RoadState::H}) {
      const double w = theta == RoadState::L ? beta : 1.0 - beta;
      if (w == 0.0) continue;
      const int x2 = second_flow(prof, first, x1, theta);
      const bool r = second_risky(prof[agent], info(first[agent], x1, theta));
      total += w * road_cost(r, x2, p.coefficient(theta));
    }
    return total;
  }

  // True if, for these first-round actions, no agent can lower its expected
  // second-round cost by switching action at the information set it holds.
  bool second_round_stable(const std::vector<Strategy>& prof, const std::vector<bool>& first) const {
    int x1 = 0;
    for (bool f : first) x1 += f ? 1 : 0;
    const int xl = second_flow(prof, first, x1, RoadState::L);
    const int xh = second_flow(prof, first, x1, RoadState::H);
    constexpr double eps = 1e-9;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const Info il = info(first[i], x1, RoadState::L);
      const Info ih = info(first[i], x1, RoadState::H);
      const bool rl = second_risky(prof[i], il);
      const bool rh = second_risky(prof[i], ih);
      // Cost of the current action and of switching, given theta.
      auto stay = [&](bool r, int x, double coef) { return road_cost(r, x, coef); };
      auto swap = [&](bool r, int x, double coef) { return road_cost(!r, r ? x - 1 : x + 1, coef); };
      if (il == kUnknown) {
        // Unknown in both states (information sets coincide).
        const double cur = beta * stay(rl, xl, p.l) + (1.0 - beta) * stay(rh, xh, p.h);
        const double alt = beta * swap(rl, xl, p.l) + (1.0 - beta) * swap(rh, xh, p.h);
        if (alt < cur - eps) return false;
      } else {
        if (beta > 0.0 && swap(rl, xl, p.l) < stay(rl, xl, p.l) - eps) return false;
        if (beta < 1.0 && swap(rh, xh, p.h) < stay(rh, xh, p.h) - eps) return false;
      }
    }
    return true;
  }
};

template <typename F>
void for_each_multiset(int n, F&& visit) {
  std::vector<Strategy> prof(n, 0);
  // Non-decreasing sequences over 0..kStrategies-1.
  while (true) {
    visit(prof);
    int i = n - 1;
    while (i >= 0 && prof[i] == kStrategies - 1) --i;
    if (i < 0) return;
    const Strategy v = static_cast<Strategy>(prof[i] + 1);
    for (int j = i; j < n; ++j) prof[j] = v;
  }
}

}  // namespace

OracleResult brute_force_equilibrium(const GameParams& p, Belief beta, InfoRegime regime) {
  p.validate();
  if (p.n > kOracleMaxAgents) {
    throw std::invalid_argument("brute-force oracle supports at most " + std::to_string(kOracleMaxAgents) +
                                " agents");
  }
  const Game game{p, beta.value(), regime};
  OracleResult result;
  constexpr double eps = 1e-9;

  for_each_multiset(p.n, [&](const std::vector<Strategy>& prof) {
    ++result.profiles_checked;

    // Unilateral deviations; agents holding the same strategy are equivalent.
    std::vector<Strategy> trial = prof;
    for (int i = 0; i < p.n; ++i) {
      if (i > 0 && prof[i] == prof[i - 1]) continue;
      const double base = game.expected_cost(prof, i);
      for (int s = 0; s < kStrategies; ++s) {
        if (s == prof[i]) continue;
        trial[i] = static_cast<Strategy>(s);
        const bool better = game.expected_cost(trial, i) < base - eps;
        trial[i] = prof[i];
        if (better) return;
      }
    }

    std::vector<bool> first(p.n);
    for (int i = 0; i < p.n; ++i) first[i] = first_risky(prof[i]);
    if (!game.second_round_stable(prof, first)) return;
    for (int i = 0; i < p.n; ++i) {
      first[i] = !first[i];
      const bool ok = game.second_round_stable(prof, first);
      first[i] = !first[i];
      if (!ok) return;
    }

    ++result.equilibria;
    int x1 = 0;
    for (bool f : first) x1 += f ? 1 : 0;
    result.outcomes.insert(Outcome{x1, game.second_flow(prof, first, x1, RoadState::L),
                                   game.second_flow(prof, first, x1, RoadState::H)});
  });
  return result;
}

}  // namespace dynroute::two_stage
