#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "avstress/simulator.hpp"

namespace avstress {

struct PedestrianState {
  double vx = 0.0;
  double vy = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct VehicleState {
  double x = 0.0;      // geometric center
  double y = 0.0;
  double v = 0.0;      // forward speed along +x, never negative
  double length = 4.5;
  double width = 1.8;

  double front() const { return x + 0.5 * length; }
};

// Constant-gain alpha-beta filter per pedestrian, one instance per axis pair.
struct TrackerState {
  double xhat = 0.0;
  double yhat = 0.0;
  double vxhat = 0.0;
  double vyhat = 0.0;
  double alpha = 0.85;
  double beta = 0.005;
};

// Noisy view of one pedestrian handed to the tracking stage.
struct Measurement {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;  // recorded but not consumed by the filter
  double vy = 0.0;
};

// What the vehicle's controller sees each step.
struct SutObservation {
  double v = 0.0;           // own forward speed
  bool has_target = false;
  double v_oth = 0.0;       // closing speed: own v minus target x-velocity estimate
  double s_headway = 0.0;   // target x estimate minus own front bumper
};

struct IdmParams {
  double v0 = 11.17;       // desired speed (25 mph)
  double T_headway = 1.5;  // desired time headway
  double s0 = 2.0;         // minimum gap
  double a_max = 2.0;      // comfortable acceleration limit
  double b = 2.0;          // comfortable braking
  double delta = 4.0;      // free-road exponent
  double b_max = 9.0;      // emergency braking limit
};

struct RoadGeometry {
  double lane_width = 3.7;
  double crosswalk_half_width = 1.5;  // crosswalk spans x in [-1.5, 1.5]
  double y_min = -1.85;               // road extent: two lanes, bottom lane centered at y=0
  double y_max = 5.55;
};

struct ScenarioConfig {
  std::vector<PedestrianState> pedestrians;
  VehicleState vehicle{-25.0, 0.0, 11.17, 4.5, 1.8};
  double dt = 0.1;
  int horizon = 100;
  // Variances of the disturbance model, per action block
  // [a_x, a_y, eps_vx, eps_vy, eps_x, eps_y]:
  double sigma_a_lat = 0.01;  // a_x
  double sigma_a_lon = 0.1;   // a_y
  double sigma_noise = 0.1;   // all four eps components
  RoadGeometry road;
  IdmParams idm;
  double pedestrian_radius = 0.3;
  double tracker_alpha = 0.85;
  double tracker_beta = 0.005;

  int pedestrian_count() const { return static_cast<int>(pedestrians.size()); }
  // Diagonal of the action covariance, 6 entries per pedestrian.
  Eigen::VectorXd action_variance() const;
};

// Built-in scenarios 1..3.
ScenarioConfig scenario_preset(int id);

// --- dynamics stages, in per-step order ---

// Semi-implicit Euler: velocity first, position with the new velocity.
void pedestrian_step(PedestrianState& p, double ax, double ay, double dt);

// Measurement = true state plus noise; noise perturbs what is sensed, only.
Measurement sense(const PedestrianState& p, double eps_vx, double eps_vy, double eps_x,
                  double eps_y);

// Alpha-beta update per axis from the position measurement.
void tracker_step(TrackerState& t, double meas_x, double meas_y, double dt);

// Closest tracked pedestrian estimated inside the road y-extent and ahead of
// the front bumper; nullopt when none qualifies.
std::optional<int> select_target(const std::vector<TrackerState>& trackers,
                                 const VehicleState& veh, const RoadGeometry& road);

// Modified intelligent-driver acceleration: free-road term, minus the squared
// approach term when a target exists, clamped to [-b_max, a_max]. A
// non-positive headway with a target forces emergency braking.
double idm_accel(const SutObservation& obs, const IdmParams& p);

// Forward-only vehicle: speed clamps at zero, position integrates the new speed.
void vehicle_step(VehicleState& v, double accel, double dt);

// Axis-aligned footprint test, inflated by the pedestrian radius (inclusive).
bool collision_check(const VehicleState& v, const PedestrianState& p, double radius);

// sqrt of the quadratic form of `a` under the diagonal covariance (zero mean).
double mahalanobis(const EnvAction& a, const Eigen::VectorXd& variance_diag);

// --- the simulator ---

class CrosswalkSim final : public Simulator {
 public:
  explicit CrosswalkSim(ScenarioConfig cfg);

  void initialize() override;
  TransitionOutcome step(const EnvAction& action) override;
  bool is_terminal() const override;
  Eigen::VectorXd observe() const override;
  int action_dimension() const override;
  int state_dimension() const override;
  double action_mahalanobis(const EnvAction& action) const override;

  const ScenarioConfig& config() const { return cfg_; }
  const std::vector<PedestrianState>& pedestrians() const { return peds_; }
  const std::vector<TrackerState>& trackers() const { return trackers_; }
  const VehicleState& vehicle() const { return veh_; }
  int elapsed() const { return elapsed_; }

 private:
  ScenarioConfig cfg_;
  Eigen::VectorXd variance_;
  std::vector<PedestrianState> peds_;
  std::vector<TrackerState> trackers_;
  VehicleState veh_;
  int elapsed_ = 0;
  bool event_ = false;
};

}  // namespace avstress
