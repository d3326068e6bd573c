#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "avstress/env_action.hpp"

namespace avstress {

enum class Outcome { kCollision, kHorizonMiss };

// One complete (or truncated) episode. states[i] is the solver-visible state
// observed before actions[i]; rewards[i] is the reward for taking it.
struct Trajectory {
  std::vector<Eigen::VectorXd> states;
  std::vector<EnvAction> actions;
  std::vector<double> rewards;
  Outcome outcome = Outcome::kHorizonMiss;
  double total_reward = 0.0;

  int length() const { return static_cast<int>(actions.size()); }
};

// Counts simulator step invocations across a search and remembers the count
// at which the first collision was seen.
struct StepMeter {
  std::uint64_t count = 0;
  std::optional<std::uint64_t> count_at_first_collision;

  void record(bool event) {
    ++count;
    if (event && !count_at_first_collision) count_at_first_collision = count;
  }

  // Commutative aggregation: counts add, first-collision marks take the
  // minimum across the merged streams.
  void merge(const StepMeter& other) {
    count += other.count;
    if (other.count_at_first_collision) {
      if (!count_at_first_collision ||
          *other.count_at_first_collision < *count_at_first_collision) {
        count_at_first_collision = other.count_at_first_collision;
      }
    }
  }
};

}  // namespace avstress
