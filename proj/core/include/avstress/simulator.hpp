#pragma once

#include <Eigen/Core>

#include "avstress/env_action.hpp"

namespace avstress {

// Result of advancing the simulation by one step.
struct TransitionOutcome {
  double mahalanobis = 0.0;  // likelihood proxy of the applied action
  bool event = false;        // the failure event (collision) occurred
  double dist = 0.0;         // distance from the vehicle to the nearest pedestrian
  bool terminal = false;     // event occurred or horizon reached
};

// Sequential decision-problem view of a simulator: all stochasticity is fixed
// by the EnvAction, so transitions are deterministic and a state is fully
// identified by the action history since initialize().
class Simulator {
 public:
  virtual ~Simulator() = default;

  // Reset to the scenario's initial state.
  virtual void initialize() = 0;

  // Advance one step. Requires !is_terminal() (throws std::logic_error) and
  // an action of dimension action_dimension() (throws std::invalid_argument).
  virtual TransitionOutcome step(const EnvAction& action) = 0;

  virtual bool is_terminal() const = 0;

  // Solver-visible state vector for the current simulation state.
  virtual Eigen::VectorXd observe() const = 0;

  virtual int action_dimension() const = 0;
  virtual int state_dimension() const = 0;

  // Likelihood proxy for applying `action` from the current state, identical
  // to the mahalanobis field step() would report for it.
  virtual double action_mahalanobis(const EnvAction& action) const = 0;
};

}  // namespace avstress
