#include "dynroute/linear_oracle.hpp"

#include <Eigen/Dense>

namespace dynroute::linear_oracle {

namespace {

enum State { kExp, kBystander, kRiskyC, kSafeC, kRiskyD, kSafeD, kStates };

}  // namespace

double AgentValues::period_start(int n) const {
  return experimenter / n + bystander * (n - 1.0) / n;
}

AgentValues agent_values(infinite::SchemeCD s, const GameParams& p) {
  p.validate();
  const double n = p.n, c = s.c, d = s.d;
  const double ml = mu_l(p), mh = mu_h(p);
  const double gl = p.gamma_l, gh = p.gamma_h;

  Eigen::Matrix<double, kStates, kStates> P = Eigen::Matrix<double, kStates, kStates>::Zero();
  Eigen::Matrix<double, kStates, 1> cost;
  cost << mh, p.s0, ml * c, p.s0, ml * d, p.s0;

  // The road turning (or staying) H restarts experimentation with a fresh draw.
  auto restart = [&](int from, double w) {
    P(from, kExp) += w / n;
    P(from, kBystander) += w * (n - 1.0) / n;
  };

  restart(kExp, 1.0 - gh);
  P(kExp, kRiskyC) += gh;
  restart(kBystander, 1.0 - gh);
  P(kBystander, kRiskyC) += gh * (c - 1.0) / (n - 1.0);
  P(kBystander, kSafeC) += gh * (n - c) / (n - 1.0);

  restart(kRiskyC, gl);
  P(kRiskyC, kRiskyD) += 1.0 - gl;
  restart(kSafeC, gl);
  if (s.c < p.n) {
    P(kSafeC, kRiskyD) += (1.0 - gl) * (d - c) / (n - c);
    P(kSafeC, kSafeD) += (1.0 - gl) * (n - d) / (n - c);
  } else {
    P(kSafeC, kSafeD) += 1.0 - gl;  // unreachable
  }

  restart(kRiskyD, gl);
  P(kRiskyD, kRiskyD) += 1.0 - gl;
  restart(kSafeD, gl);
  P(kSafeD, kSafeD) += 1.0 - gl;

  const Eigen::Matrix<double, kStates, kStates> A =
      Eigen::Matrix<double, kStates, kStates>::Identity() - p.delta * P;
  const Eigen::Matrix<double, kStates, 1> u = A.partialPivLu().solve(cost);
  return AgentValues{u(kExp), u(kBystander), u(kRiskyC), u(kSafeC), u(kRiskyD), u(kSafeD)};
}

UninformedValues uninformed_values(infinite::SchemeCD s, const GameParams& p) {
  const auto v = agent_values(s, p);
  const double n = p.n, c = s.c, d = s.d;
  const double gl = p.gamma_l, gh = p.gamma_h;

  // Joint weight of (last road state, recommendation) for a safe agent, and
  // the value of each outcome.
  struct Branch {
    double weight;
    double value;
  };
  auto mix = [](Branch a, Branch b) -> std::optional<double> {
    const double w = a.weight + b.weight;
    if (w <= 0.0) return std::nullopt;
    return (a.weight * a.value + b.weight * b.value) / w;
  };
  const double told_safe_in_exp = (n - 1.0) / n;
  const double told_risky_in_exp = 1.0 / n;

  UninformedValues u;
  // After flow d: L keeps everyone in place, H restarts experimentation.
  u.safe_after_d = mix({1.0 - gl, v.safe_at_d}, {gl * told_safe_in_exp, v.bystander}).value_or(v.safe_at_d);
  u.risky_after_d = v.experimenter;
  // After flow c: L recruits d - c of the n - c safe agents.
  const double stay_safe_c = s.c < p.n ? (n - d) / (n - c) : 0.0;
  u.safe_after_c =
      mix({(1.0 - gl) * stay_safe_c, v.safe_at_d}, {gl * told_safe_in_exp, v.bystander}).value_or(v.bystander);
  if (s.c < p.n) {
    u.risky_after_c = mix({(1.0 - gl) * (d - c) / (n - c), v.risky_at_d}, {gl * told_risky_in_exp, v.experimenter});
  }
  // After an experiment: L recruits c - 1 of the n - 1 safe agents.
  u.safe_after_1 =
      mix({gh * (n - c) / (n - 1.0), v.safe_at_c}, {(1.0 - gh) * told_safe_in_exp, v.bystander}).value_or(v.safe_at_c);
  u.risky_after_1 = mix({gh * (c - 1.0) / (n - 1.0), v.risky_at_c}, {(1.0 - gh) * told_risky_in_exp, v.experimenter});
  return u;
}

double total_cost(infinite::SchemeCD s, const GameParams& p) {
  p.validate();
  const double ml = mu_l(p), mh = mu_h(p);
  const double gl = p.gamma_l, gh = p.gamma_h;
  // Aggregate chain over period types: experiment, flow c, flow d.
  Eigen::Matrix3d P;
  P << 1.0 - gh, gh, 0.0,
       gl, 0.0, 1.0 - gl,
       gl, 0.0, 1.0 - gl;
  const Eigen::Vector3d cost(stage_cost(1, mh, p), stage_cost(s.c, ml, p), stage_cost(s.d, ml, p));
  const Eigen::Vector3d v = (Eigen::Matrix3d::Identity() - p.delta * P).partialPivLu().solve(cost);
  return v(0);
}

}  // namespace dynroute::linear_oracle
