#pragma once

#include <cmath>

#include "avstress/simulator.hpp"

namespace avstress {

struct RewardParams {
  double miss_penalty = -1.0e4;  // flat penalty for reaching the horizon eventless
  double dist_scale = -1.0e3;    // scales the closest-approach distance at a miss
  int horizon = 100;             // step count T at which an episode is cut off
};

// Per-step reward, emitted for the step that causes the transition:
//   0 when the failure event occurs on this step;
//   miss_penalty + dist_scale * dist at the horizon without an event
//     (replaces, not augments, the per-step likelihood term);
//   -log(1 + mahalanobis) otherwise.
// `t` is the 1-based index of the step that produced `out`.
inline double reward(const TransitionOutcome& out, const RewardParams& p, int t) {
  if (out.event) return 0.0;
  if (out.terminal || t >= p.horizon) return p.miss_penalty + p.dist_scale * out.dist;
  return -std::log1p(out.mahalanobis);
}

}  // namespace avstress
