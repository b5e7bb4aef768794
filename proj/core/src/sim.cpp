#include "dynroute/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "dynroute/format.hpp"

namespace dynroute::sim {

namespace {

constexpr std::uint64_t kChainStream = ~std::uint64_t{0};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Chain {
 public:
  Chain(const GameParams& p, std::uint64_t seed, std::uint64_t trial, RoadState initial)
      : p_(p), gen_(stream_seed(seed, trial, kChainStream)), state_(initial) {}

  RoadState current() const { return state_; }

  RoadState next() {
    std::bernoulli_distribution flip(state_ == RoadState::L ? p_.gamma_l : p_.gamma_h);
    if (flip(gen_)) state_ = state_ == RoadState::L ? RoadState::H : RoadState::L;
    return state_;
  }

 private:
  const GameParams& p_;
  std::mt19937_64 gen_;
  RoadState state_;
};

enum class Period { Experiment, AtC, AtD };

char period_char(Period k) {
  switch (k) {
    case Period::Experiment: return '1';
    case Period::AtC: return 'c';
    case Period::AtD: return 'd';
  }
  return '-';
}

// Agent-level state of the compliant scheme between steps.
struct SchemeState {
  std::vector<bool> risky;
  Period period = Period::Experiment;
  RoadState theta = RoadState::H;  // theta of the step just played (theta_0 initially)
};

int count(const std::vector<bool>& v) { return static_cast<int>(std::count(v.begin(), v.end(), true)); }

// Draws k distinct agents among those with risky[i] == false.
void recruit(std::vector<bool>& risky, int k, std::mt19937_64& gen) {
  std::vector<int> pool;
  for (int i = 0; i < static_cast<int>(risky.size()); ++i) {
    if (!risky[i]) pool.push_back(i);
  }
  if (k > static_cast<int>(pool.size())) throw std::logic_error("not enough safe agents to recruit");
  for (int j = 0; j < k; ++j) {
    std::uniform_int_distribution<int> pick(j, static_cast<int>(pool.size()) - 1);
    std::swap(pool[j], pool[pick(gen)]);
    risky[pool[j]] = true;
  }
}

// Recommendations for the next step and the kind of period they start.
std::pair<std::vector<bool>, Period> dispatch(const SchemeState& st, infinite::SchemeCD s, int n,
                                              std::mt19937_64& gen) {
  if (st.theta == RoadState::H) {
    std::vector<bool> recs(n, false);
    recruit(recs, 1, gen);
    return {recs, Period::Experiment};
  }
  const bool first_l = st.period == Period::Experiment;
  const int target = first_l ? s.c : s.d;
  std::vector<bool> recs = st.risky;
  recruit(recs, target - count(recs), gen);
  return {recs, first_l ? Period::AtC : Period::AtD};
}

std::vector<double> stage_costs(const std::vector<bool>& risky, RoadState theta, const GameParams& p) {
  const int x = count(risky);
  const double coef = p.coefficient(theta);
  std::vector<double> out(risky.size());
  for (std::size_t i = 0; i < risky.size(); ++i) {
    out[i] = risky[i] ? coef * x : p.s0 + p.s1 * (p.n - x);
  }
  return out;
}

class Accumulator {
 public:
  void add(double v) { values_.push_back(v); }
  long size() const { return static_cast<long>(values_.size()); }

  Estimate finish(int horizon, double tail) const {
    Estimate e;
    e.trials = size();
    e.horizon = horizon;
    e.tail_bound = tail;
    if (values_.empty()) return e;
    const double n = static_cast<double>(values_.size());
    e.mean = std::accumulate(values_.begin(), values_.end(), 0.0) / n;
    if (values_.size() > 1) {
      double ss = 0.0;
      for (double v : values_) ss += (v - e.mean) * (v - e.mean);
      e.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return e;
  }

 private:
  std::vector<double> values_;
};

void check_config(const SimConfig& cfg) {
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t step) {
  return splitmix(splitmix(splitmix(seed) ^ trial) ^ step);
}

std::vector<RoadState> simulate_chain(const GameParams& p, int horizon, std::uint64_t seed, RoadState initial,
                                      std::uint64_t trial) {
  p.validate();
  Chain chain(p, seed, trial, initial);
  std::vector<RoadState> out{initial};
  out.reserve(horizon + 1);
  for (int t = 1; t <= horizon; ++t) out.push_back(chain.next());
  return out;
}

double tail_bound(const GameParams& p, int horizon) {
  const double worst = std::max(p.h * p.n, p.s0 + p.s1 * p.n);
  return std::pow(p.delta, horizon) * p.n * worst / (1.0 - p.delta);
}

int horizon_for_tail(const GameParams& p, double reference, double fraction) {
  int t = 1;
  while (tail_bound(p, t) >= fraction * reference) {
    if (++t > 100000) throw std::domain_error("discount factor too close to 1 for a finite horizon");
  }
  return t;
}

Trajectory run_scheme_trial(infinite::SchemeCD s, const GameParams& p, const SimConfig& cfg, long trial) {
  Trajectory tr;
  tr.agent_totals.assign(p.n, 0.0);
  Chain chain(p, cfg.seed, trial, RoadState::H);
  SchemeState st{std::vector<bool>(p.n, false), Period::Experiment, RoadState::H};
  double disc = 1.0;
  for (int t = 1; t <= cfg.horizon; ++t) {
    std::mt19937_64 gen(stream_seed(cfg.seed, trial, t));
    auto [recs, period] = dispatch(st, s, p.n, gen);
    const RoadState theta = chain.next();
    Step step{t, theta, count(recs), recs, stage_costs(recs, theta, p), 0.0};
    step.total = std::accumulate(step.cost.begin(), step.cost.end(), 0.0);
    for (int i = 0; i < p.n; ++i) tr.agent_totals[i] += disc * step.cost[i];
    tr.total += disc * step.total;
    tr.steps.push_back(std::move(step));
    st = SchemeState{std::move(recs), period, theta};
    disc *= p.delta;
  }
  return tr;
}

SchemeStats run_scheme(infinite::SchemeCD s, const GameParams& p, const SimConfig& cfg) {
  require_infinite_gate(p);
  check_config(cfg);
  if (!(1 < s.c && s.c <= s.d && s.d <= p.n)) throw std::domain_error("scheme requires 1 < c <= d <= n");
  Accumulator social, agent0;
  for (long k = 0; k < cfg.trials; ++k) {
    const auto tr = run_scheme_trial(s, p, cfg, k);
    social.add(tr.total);
    agent0.add(tr.agent_totals[0]);
  }
  const double tail = tail_bound(p, cfg.horizon);
  SchemeStats out;
  out.social = social.finish(cfg.horizon, tail);
  out.per_agent = out.social;
  out.per_agent.mean /= p.n;
  out.per_agent.se /= p.n;
  out.per_agent.tail_bound /= p.n;
  out.agent0 = agent0.finish(cfg.horizon, tail / p.n);
  return out;
}

Trigger Trigger::parse(const std::string& text) {
  // Accepts "[d,U,r_S]" and the same without brackets.
  std::string t;
  for (char ch : text) {
    if (ch != '[' && ch != ']' && ch != ' ') t.push_back(ch);
  }
  const auto a = t.find(',');
  const auto b = a == std::string::npos ? a : t.find(',', a + 1);
  if (b == std::string::npos) throw std::invalid_argument("trigger must look like [d,U,r_S]");
  const std::string prev = t.substr(0, a), belief = t.substr(a + 1, b - a - 1), rec = t.substr(b + 1);
  Trigger tr;
  if (prev.size() != 1 || std::string("1cd-").find(prev[0]) == std::string::npos) {
    throw std::invalid_argument("trigger flow must be one of 1, c, d, -");
  }
  if (belief.size() != 1 || std::string("LHU").find(belief[0]) == std::string::npos) {
    throw std::invalid_argument("trigger belief must be one of L, H, U");
  }
  if (rec != "r_S" && rec != "r_R" && rec != "S" && rec != "R") {
    throw std::invalid_argument("trigger recommendation must be r_S or r_R");
  }
  tr.prev = prev[0];
  tr.belief = belief[0];
  tr.rec = rec.back();
  return tr;
}

std::string Trigger::str() const {
  return std::string("[") + prev + "," + belief + ",r_" + rec + "]";
}

RolloutResult deviation_rollout(infinite::SchemeCD s, const GameParams& p, const RolloutConfig& cfg) {
  require_infinite_gate(p);
  check_config(cfg.sim);
  if (cfg.agent < 0 || cfg.agent >= p.n) throw std::invalid_argument("deviant agent index out of range");
  const int a = cfg.agent;
  const int horizon = cfg.sim.horizon;
  const double ml = mu_l(p), mh = mu_h(p);
  Accumulator follow, deviate, diff;

  for (long k = 0; k < cfg.sim.trials; ++k) {
    Chain chain(p, cfg.sim.seed, k, RoadState::H);
    SchemeState st{std::vector<bool>(p.n, false), Period::Experiment, RoadState::H};
    for (int t = 1; t <= cfg.max_wait; ++t) {
      std::mt19937_64 gen(stream_seed(cfg.sim.seed, k, t));
      auto [recs, period] = dispatch(st, s, p.n, gen);
      bool hit = false;
      if (t >= 2) {
        const char prev = period_char(st.period);
        const char belief = st.risky[a] ? (st.theta == RoadState::L ? 'L' : 'H') : 'U';
        const char rec = recs[a] ? 'R' : 'S';
        hit = (cfg.trigger.prev == '-' || cfg.trigger.prev == prev) && cfg.trigger.belief == belief &&
              cfg.trigger.rec == rec;
      }
      if (!hit) {
        const RoadState theta = chain.next();
        st = SchemeState{std::move(recs), period, theta};
        continue;
      }

      // Shared road path for both branches.
      std::vector<RoadState> path(horizon);
      for (auto& th : path) th = chain.next();

      double f = 0.0;
      {
        SchemeState fs = st;
        std::vector<bool> cur = recs;
        Period cur_period = period;
        double disc = 1.0;
        for (int j = 0; j < horizon; ++j) {
          if (j > 0) {
            std::mt19937_64 g(stream_seed(cfg.sim.seed, k, t + j));
            std::tie(cur, cur_period) = dispatch(fs, s, p.n, g);
          }
          f += disc * stage_costs(cur, path[j], p)[a];
          fs = SchemeState{cur, cur_period, path[j]};
          disc *= p.delta;
        }
      }

      double dv = 0.0;
      {
        std::vector<bool> cur = recs;
        cur[a] = !cur[a];
        dv = stage_costs(cur, path[0], p)[a];
        // On path the flow is always positive, so the planner knew theta_{t-1}.
        double belief_l = st.theta == RoadState::L ? 1.0 : 0.0;
        int last_flow = count(cur);
        RoadState last_theta = path[0];
        double disc = p.delta;
        for (int j = 1; j < horizon; ++j) {
          belief_l = last_flow > 0 ? (last_theta == RoadState::L ? 1.0 : 0.0)
                                   : belief_step(Belief(belief_l), p).value();
          const double mu = belief_l * ml + (1.0 - belief_l) * mh;
          const double q = std::min(1.0, p.s0 / (p.n * mu));
          std::mt19937_64 g(stream_seed(cfg.sim.seed, k, t + j));
          std::bernoulli_distribution draw(q);
          for (int i = 0; i < p.n; ++i) cur[i] = i != a && draw(g);
          dv += disc * stage_costs(cur, path[j], p)[a];
          last_flow = count(cur);
          last_theta = path[j];
          disc *= p.delta;
        }
      }
      follow.add(f);
      deviate.add(dv);
      diff.add(dv - f);
      break;
    }
  }

  RolloutResult r;
  r.matched_trials = follow.size();
  r.reachable = r.matched_trials > 0;
  const double tail = tail_bound(p, horizon) / p.n;
  r.follow = follow.finish(horizon, tail);
  r.deviate = deviate.finish(horizon, tail);
  r.difference = diff.finish(horizon, tail);
  return r;
}

Estimate run_two_stage(const two_stage::Scheme& s, const GameParams& p, const SimConfig& cfg) {
  p.validate();
  check_config(cfg);
  Accumulator acc;
  auto realized = [&](int x, RoadState theta) { return stage_cost(x, p.coefficient(theta), p); };
  for (long k = 0; k < cfg.trials; ++k) {
    std::mt19937_64 gen(stream_seed(cfg.seed, k, 0));
    std::bernoulli_distribution is_l(p.beta);
    const RoadState theta = is_l(gen) ? RoadState::L : RoadState::H;
    double cost = realized(s.pi1, theta);
    if (s.pi1 == 0) {
      cost += realized(0, theta);
    } else {
      cost += realized(theta == RoadState::L ? s.risky_flow_l() : s.risky_flow_h(), theta);
    }
    acc.add(cost);
  }
  return acc.finish(2, 0.0);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, bool per_agent) {
  os << "t,theta,flow_risky,cost_total";
  const std::size_t n = tr.steps.empty() ? 0 : tr.steps.front().cost.size();
  if (per_agent) {
    for (std::size_t i = 0; i < n; ++i) os << ",cost_agent" << i;
  }
  os << '\n';
  for (const auto& s : tr.steps) {
    os << s.t << ',' << to_string(s.theta) << ',' << s.risky_flow << ',' << format_number(s.total);
    if (per_agent) {
      for (double c : s.cost) os << ',' << format_number(c);
    }
    os << '\n';
  }
}

}  // namespace dynroute::sim
