#include "dynroute/infinite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynroute::infinite {

namespace {

void require_scheme(SchemeCD s, const GameParams& p) {
  if (!(1 < s.c && s.c <= s.d && s.d <= p.n)) {
    throw std::domain_error("scheme requires 1 < c <= d <= n");
  }
}

double tau_tilde(const GameParams& p) {
  const double dl = p.delta, gl = p.gamma_l, gh = p.gamma_h;
  return (1.0 - dl * (1.0 - gl)) / ((1.0 - dl) * (1.0 - dl * (1.0 - gh - gl)));
}

// Discounted weight of staying in the (L, L) regime.
double stay_l(const GameParams& p) { return 1.0 / (1.0 - p.delta * (1.0 - p.gamma_l)); }

double punishment(const GameParams& p) { return p.delta * p.s0 / (1.0 - p.delta); }

std::string state_name(const char* prev, const char* belief, const char* rec) {
  return std::string("[") + prev + "," + belief + "," + rec + "]";
}

}  // namespace

int x_so(const GameParams& p) { return myopic_so_flow(mu_l(p), p); }
int x_eq(const GameParams& p) { return myopic_eq_flow(mu_l(p), p); }

double v_bar(SchemeCD s, const GameParams& p) {
  require_infinite_gate(p);
  require_scheme(s, p);
  const double ml = mu_l(p), mh = mu_h(p);
  const double dl = p.delta;
  return tau_tilde(p) / p.n *
         (stage_cost(1, mh, p) + dl * p.gamma_h *
                                     (stage_cost(s.c, ml, p) +
                                      dl * (1.0 - p.gamma_l) * stay_l(p) * stage_cost(s.d, ml, p)));
}

double scheme_cost(SchemeCD s, const GameParams& p) {
  require_infinite_gate(p);
  require_scheme(s, p);
  const double ml = mu_l(p), mh = mu_h(p);
  const double dl = p.delta, gh = p.gamma_h;
  const double v = tau_tilde(p) * (stage_cost(1, mh, p) + dl * gh * stage_cost(s.c, ml, p) +
                                   dl * dl * (1.0 - p.gamma_l) * stay_l(p) * gh * stage_cost(s.d, ml, p));
  const double nv = p.n * v_bar(s, p);
  if (std::abs(v - nv) > 1e-9 * std::max(1.0, std::abs(v))) {
    throw std::logic_error("scheme cost and per-agent cost disagree");
  }
  return v;
}

Posteriors posteriors(SchemeCD s, const GameParams& p) {
  require_scheme(s, p);
  const double n = p.n, c = s.c, d = s.d;
  const double gl = p.gamma_l, gh = p.gamma_h;
  Posteriors q;

  auto ratio = [](double num, double other) {
    const double den = num + other;
    return den > 0.0 ? std::optional<double>(num / den) : std::nullopt;
  };

  // A zero denominator only arises in degenerate corners; the limits below
  // follow from the recommendation that cannot be received in that case.
  q.p_dS = ratio(1.0 - gl, gl * (n - 1.0) / n).value_or(1.0);
  q.p_cS = ratio((1.0 - gl) * (n - d) / (n - c == 0 ? 1.0 : n - c), gl * (n - 1.0) / n).value_or(0.0);
  q.p_1S = ratio(gh * (n - c) / (n - 1.0), (1.0 - gh) * (n - 1.0) / n).value_or(1.0);
  if (s.c < p.n) q.p_cR = ratio((1.0 - gl) * (d - c) / (n - c), gl / n);
  q.p_1R = ratio(gh * (c - 1.0) / (n - 1.0), (1.0 - gh) / n);
  return q;
}

StateCostTable state_costs(SchemeCD s, const GameParams& p) {
  require_infinite_gate(p);
  require_scheme(s, p);
  const double n = p.n, c = s.c, d = s.d;
  const double dl = p.delta, gl = p.gamma_l, gh = p.gamma_h;
  const double ml = mu_l(p), mh = mu_h(p);

  StateCostTable t;
  t.v_bar = v_bar(s, p);
  t.u_dLrR = (ml * d + dl * gl * t.v_bar) * stay_l(p);
  t.u_dLrS = (p.s0 + dl * gl * t.v_bar) * stay_l(p);
  t.u_1LrR = ml * c + dl * ((1.0 - gl) * t.u_dLrR + gl * t.v_bar);
  if (s.c < p.n) {
    t.u_avg_cL = ((d - c) / (n - c)) * t.u_dLrR + ((n - d) / (n - c)) * t.u_dLrS;
  }
  // With c = n nobody is on safe at flow c; the value below is never weighted.
  t.u_1LrS = p.s0 + dl * ((1.0 - gl) * t.u_avg_cL.value_or(t.u_dLrS) + gl * t.v_bar);
  t.u_avg_1L = ((c - 1.0) / (n - 1.0)) * t.u_1LrR + ((n - c) / (n - 1.0)) * t.u_1LrS;
  t.u_HrS = p.s0 + dl * (gh * t.u_avg_1L + (1.0 - gh) * t.v_bar);
  t.u_HrR = mh + dl * (gh * t.u_1LrR + (1.0 - gh) * t.v_bar);

  const auto q = posteriors(s, p);
  t.u_dUrS = q.p_dS * t.u_dLrS + (1.0 - q.p_dS) * t.u_HrS;
  t.u_cUrS = q.p_cS * t.u_dLrS + (1.0 - q.p_cS) * t.u_HrS;
  t.u_1UrS = q.p_1S * t.u_1LrS + (1.0 - q.p_1S) * t.u_HrS;
  if (q.p_cR) t.u_cUrR = *q.p_cR * t.u_dLrR + (1.0 - *q.p_cR) * t.u_HrR;
  if (q.p_1R) t.u_1UrR = *q.p_1R * t.u_1LrR + (1.0 - *q.p_1R) * t.u_HrR;
  return t;
}

double cutoff_slack(SchemeCD s, const GameParams& p) {
  const auto t = state_costs(s, p);
  const auto q = posteriors(s, p);
  const double follow = t.u_dUrS;
  const double deviate =
      q.p_dS * mu_l(p) * (s.d + 1) + (1.0 - q.p_dS) * 2.0 * mu_h(p) + punishment(p);
  return deviate - follow;
}

ICReport check_ic(SchemeCD s, const GameParams& p) {
  require_infinite_gate(p);
  require_scheme(s, p);
  ICReport r;
  r.scheme = s;
  const int lo = x_so(p), hi = x_eq(p);
  const double ml = mu_l(p), mh = mu_h(p);
  const double pun = punishment(p);
  const double safe_forever = p.s0 / (1.0 - p.delta);

  r.flows_in_range = lo <= s.c && s.c <= s.d && s.d <= hi;
  if (!r.flows_in_range) {
    std::ostringstream os;
    os << "flows outside " << lo << " <= c <= d <= " << hi;
    r.reasons.push_back(os.str());
  }
  r.cost_cap = stage_cost(s.c, ml, p) <= stage_cost(2, ml, p);
  if (!r.cost_cap) r.reasons.push_back("g(c, mu_l) exceeds g(2, mu_l)");

  const auto t = state_costs(s, p);
  const auto q = posteriors(s, p);

  auto add = [&](std::string name, double follow, double deviate) {
    ICEntry e{std::move(name), follow, deviate, deviate - follow};
    const double scale = std::max({1.0, std::abs(follow), std::abs(deviate)});
    if (e.slack < 0.0 && e.slack > -kSlackTolerance * scale) {
      e.boundary = true;
      r.warnings.push_back(e.state + " passes on the boundary (slack " + std::to_string(e.slack) + ")");
    }
    if (!e.ok()) r.reasons.push_back(e.state + " violated");
    r.entries.push_back(std::move(e));
  };

  // Informed agents on risky, told to stay.
  add(state_name("d", "L", "r_R"), t.u_dLrR, p.s0 + pun);
  add(state_name("c", "L", "r_R"), t.u_dLrR, p.s0 + pun);
  add(state_name("1", "L", "r_R"), t.u_1LrR, p.s0 + pun);
  // Experimentation period.
  add(state_name("-", "H", "r_S"), t.u_HrS, 2.0 * mh + pun);
  add(state_name("-", "H", "r_R"), t.u_HrR, safe_forever);
  // Uninformed agents told safe. Nobody is on safe at a flow of n.
  if (s.d < p.n) {
    add(state_name("d", "U", "r_S"), t.u_dUrS, q.p_dS * ml * (s.d + 1) + (1.0 - q.p_dS) * 2.0 * mh + pun);
  }
  if (s.c < p.n) {
    add(state_name("c", "U", "r_S"), t.u_cUrS, q.p_cS * ml * (s.d + 1) + (1.0 - q.p_cS) * 2.0 * mh + pun);
  }
  add(state_name("1", "U", "r_S"), t.u_1UrS, q.p_1S * ml * (s.c + 1) + (1.0 - q.p_1S) * 2.0 * mh + pun);
  // Uninformed agents told risky.
  add(state_name("d", "U", "r_R"), t.u_HrR, safe_forever);
  if (t.u_cUrR) add(state_name("c", "U", "r_R"), *t.u_cUrR, safe_forever);
  if (t.u_1UrR) add(state_name("1", "U", "r_R"), *t.u_1UrR, safe_forever);

  r.cutoff = s.d == p.n || cutoff_slack(s, p) >= 0.0 ||
             std::any_of(r.entries.begin(), r.entries.end(),
                         [](const ICEntry& e) { return e.state == "[d,U,r_S]" && e.boundary; });
  bool all_ok = true;
  for (const auto& e : r.entries) all_ok = all_ok && e.ok();
  r.pass = r.flows_in_range && r.cost_cap && all_ok;
  return r;
}

XLL compute_x_ll(const GameParams& p) {
  require_infinite_gate(p);
  const int c = std::max(2, x_so(p));
  for (int d = c; d <= p.n; ++d) {
    if (d == p.n || cutoff_slack({c, d}, p) >= 0.0) return XLL{d, d};
  }
  throw std::logic_error("scheme flows exceed n");
}

SchemeCD pi_star(const GameParams& p) {
  const auto x = compute_x_ll(p);
  return {std::max(2, x_so(p)), x.x_ll};
}

std::optional<SchemeCD> pi_tilde_star(const GameParams& p) {
  const auto s = pi_star(p);
  const SchemeCD t{s.c + 1, s.d - 1};
  if (t.c > t.d) return std::nullopt;
  return t;
}

Decomposition fc_gd_decomposition(SchemeCD s, const GameParams& p) {
  require_infinite_gate(p);
  require_scheme(s, p);
  const double n = p.n, c = s.c, d = s.d;
  const double dl = p.delta, gl = p.gamma_l, gh = p.gamma_h;
  const double ml = mu_l(p), mh = mu_h(p);
  const double ps = posteriors(s, p).p_dS;
  const double stay = stay_l(p);

  Decomposition r;
  r.tau_tilde = tau_tilde(p);
  r.tau = ps * dl * gl * stay + (1.0 - ps) * dl * ((1.0 - gh) + gh * dl * gl * stay);
  const double tt = r.tau * r.tau_tilde / n;
  r.k = ps * p.s0 * stay + (1.0 - ps) * p.s0 + tt * stage_cost(1, mh, p) - (1.0 - ps) * 2.0 * mh -
        dl * p.s0 / (1.0 - dl);
  r.f = dl * (1.0 - ps) * gh / (n - 1.0) * ((c - 1.0) * ml * c + (n - c) * p.s0) +
        tt * dl * gh * stage_cost(s.c, ml, p) + r.k;
  r.g = ps * ml * (d + 1.0) -
        dl * (1.0 - ps) * gh * dl * (1.0 - gl) * stay * ((d - 1.0) * ml * d + (n - d) * p.s0) / (n - 1.0) -
        tt * dl * dl * (1.0 - gl) * stay * gh * stage_cost(s.d, ml, p);
  return r;
}

SearchResult optimal_scheme_search(const GameParams& p) {
  require_infinite_gate(p);
  SearchResult r;
  if (p.delta > 0.5) {
    r.warnings.push_back("delta > 1/2: result is family-optimal among schemes with one experimenter");
  }
  for (int c = 2; c <= p.n; ++c) {
    for (int d = c; d <= p.n; ++d) {
      const SchemeCD s{c, d};
      r.table.push_back({s, check_ic(s, p).pass, scheme_cost(s, p)});
    }
  }
  std::stable_sort(r.table.begin(), r.table.end(),
                   [](const SchemeRow& a, const SchemeRow& b) { return a.cost < b.cost; });
  for (const auto& row : r.table) {
    if (row.feasible) {
      r.best = row.scheme;
      r.best_cost = row.cost;
      break;
    }
  }
  if (!r.best) {
    r.warnings.push_back("no incentive-compatible scheme found");
    return r;
  }
  r.is_pi_star = *r.best == pi_star(p);
  const auto tilde = pi_tilde_star(p);
  r.is_pi_tilde_star = tilde && *r.best == *tilde;
  return r;
}

std::vector<SweepRecord> delta_sweep(const GameParams& p, const std::vector<double>& deltas) {
  if (!(p.gamma_l > 0.0 && p.gamma_h > 0.0)) {
    throw std::invalid_argument("delta sweep requires both switching probabilities to be positive");
  }
  std::vector<SweepRecord> out;
  bool any = false;
  for (double dl : deltas) {
    GameParams q = p;
    q.delta = dl;
    SweepRecord rec;
    rec.delta = dl;
    q.validate();
    rec.gate_passed = check_assumption_infinite(q).pass();
    if (rec.gate_passed) {
      any = true;
      const auto star = pi_star(q);
      const int so = std::max(2, x_so(q));
      rec.x_ll = star.d;
      rec.v_star = scheme_cost(star, q);
      rec.v_so = scheme_cost({so, so}, q);
      rec.ratio = rec.v_star / rec.v_so;
    }
    out.push_back(rec);
  }
  if (!any) throw GateError("no discount factor in the grid passes the infinite-horizon gate");
  return out;
}

int social_opt_policy(Belief beta, const GameParams& p) {
  require_infinite_gate(p);
  const double b = beta.value();
  return std::max(1, myopic_so_flow(b * mu_l(p) + (1.0 - b) * mu_h(p), p));
}

}  // namespace dynroute::infinite
