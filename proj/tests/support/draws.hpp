#pragma once

// Random parameter generators for property tests. Every draw is rejected
// and redrawn until it passes the relevant gate, so callers can assume it.

#include <cstdint>
#include <random>
#include <utility>

#include "dynroute/model.hpp"

namespace dynroute::testing {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  /// Two-stage parameters and a prior for which the two-stage gate passes.
  std::pair<GameParams, Belief> two_stage(int n_lo = 2, int n_hi = 40) {
    while (true) {
      GameParams p;
      p.n = integer(n_lo, n_hi);
      p.s0 = uniform(1.0, 20.0);
      p.s1 = uniform(0.0, 2.0);
      p.l = uniform(0.05, 0.999) * (p.s0 + p.s1);
      const double full = p.s0 + p.s1 * p.n;
      p.h = full * uniform(1.05, 6.0);
      const double limit = (p.h - full) / (p.h - p.l);
      const Belief beta(uniform(0.0, limit));
      p.beta = beta.value();
      if (check_assumption_two_stage(p, beta).pass()) return {p, beta};
    }
  }

  /// Infinite-horizon parameters passing the gate, with the high coefficient
  /// placed at a random point of its admissible interval.
  GameParams infinite(int n_lo = 3, int n_hi = 30, double delta_lo = 0.01, double delta_hi = 0.95) {
    while (true) {
      GameParams p;
      p.n = integer(n_lo, n_hi);
      p.s0 = uniform(3.0, 30.0);
      p.s1 = 0.0;
      p.l = uniform(0.02, 0.99) * p.s0 / 3.0;
      p.gamma_l = uniform(0.0, 0.5);
      p.gamma_h = uniform(0.02, 0.5);
      p.delta = uniform(delta_lo, delta_hi);
      // mu_h is affine in H, so solve mu_h = s0 + u * delta * gamma_h * (s0/3 - mu_l) for H.
      const double k = uniform(0.0, 1.0) * p.delta * p.gamma_h;
      p.h = (p.s0 + k * p.s0 / 3.0 - k * (1.0 - p.gamma_l) * p.l - p.gamma_h * p.l) /
            (1.0 - p.gamma_h + k * p.gamma_l);
      if (!(p.h > p.l)) continue;
      if (check_assumption_infinite(p).pass()) return p;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dynroute::testing
