#pragma once

#include "dynroute/model.hpp"

namespace dynroute::testing {

inline GameParams example_one() {
  GameParams p;
  p.n = 40;
  p.s0 = 10;
  p.s1 = 1;
  p.l = 0.9;
  p.h = 150;
  return p;
}

inline GameParams reference_set() {
  GameParams p;
  p.n = 10;
  p.s0 = 10;
  p.s1 = 0;
  p.l = 1;
  p.h = 19;
  p.gamma_l = 0.1;
  p.gamma_h = 0.5;
  p.delta = 0.5;
  return p;
}

// Same road as the reference set but the low state never switches away.
inline GameParams example_two() {
  GameParams p = reference_set();
  p.gamma_l = 0.0;
  return p;
}

// Small instance for the equilibrium oracle. The equilibrium flow under L is
// n, so every agent strictly prefers risky once L is known.
inline GameParams oracle_small() {
  GameParams p;
  p.n = 4;
  p.s0 = 10;
  p.s1 = 1;
  p.l = 0.9;
  p.h = 200;
  return p;
}

}  // namespace dynroute::testing
