#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "avstress/crosswalk.hpp"
#include "avstress/rollout.hpp"
#include "avstress/scenario_io.hpp"

using namespace avstress;

namespace {

const ActionSource kZeroSource = [](const Simulator& s) {
  return EnvAction(Eigen::VectorXd::Zero(s.action_dimension()));
};

Trajectory run_zero(int scenario, RewardParams rp = {}) {
  CrosswalkSim sim(scenario_preset(scenario));
  sim.initialize();
  StepMeter meter;
  return rollout(sim, kZeroSource, rp, meter);
}

}  // namespace

TEST_CASE("pedestrian integrator: velocity first, then position") {
  PedestrianState p{0.0, 0.0, 1.0, 2.0};
  pedestrian_step(p, 1.0, 0.0, 0.1);
  CHECK(p.vx == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p.vy == 0.0);
  CHECK(p.x == doctest::Approx(1.01).epsilon(1e-15));  // moves by the *new* velocity
  CHECK(p.y == 2.0);
}

TEST_CASE("tracker update from a unit position residual") {
  TrackerState t;  // estimates zero, alpha 0.85, beta 0.005
  tracker_step(t, 1.0, 0.0, 0.1);
  CHECK(t.xhat == doctest::Approx(0.85).epsilon(1e-15));
  CHECK(t.vxhat == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(t.yhat == 0.0);
  CHECK(t.vyhat == 0.0);
}

TEST_CASE("tracker follows a constant-velocity pedestrian exactly under zero noise") {
  ScenarioConfig cfg = scenario_preset(1);
  CrosswalkSim sim(cfg);
  sim.initialize();
  for (int k = 0; k < 30; ++k) {
    sim.step(EnvAction::zeros(1));
    const PedestrianState& p = sim.pedestrians()[0];
    const TrackerState& t = sim.trackers()[0];
    CHECK(t.xhat == doctest::Approx(p.x).epsilon(1e-13));
    CHECK(t.yhat == doctest::Approx(p.y).epsilon(1e-13));
    CHECK(t.vxhat == doctest::Approx(p.vx).epsilon(1e-13));
    CHECK(t.vyhat == doctest::Approx(p.vy).epsilon(1e-13));
  }
}

TEST_CASE("idm acceleration") {
  IdmParams p;

  SUBCASE("free road at the desired speed is exactly zero") {
    SutObservation obs;
    obs.v = p.v0;
    CHECK(idm_accel(obs, p) == 0.0);
  }

  SUBCASE("free road below the desired speed accelerates, capped at a_max") {
    SutObservation obs;
    obs.v = 0.0;
    CHECK(idm_accel(obs, p) == 2.0);
  }

  SUBCASE("stationary at the minimum gap holds position") {
    SutObservation obs;
    obs.v = 0.0;
    obs.has_target = true;
    obs.v_oth = 0.0;
    obs.s_headway = p.s0;
    CHECK(idm_accel(obs, p) == 0.0);
  }

  SUBCASE("non-positive headway forces emergency braking") {
    SutObservation obs;
    obs.v = 5.0;
    obs.has_target = true;
    obs.v_oth = 5.0;
    obs.s_headway = 0.0;
    CHECK(idm_accel(obs, p) == -9.0);
    obs.s_headway = -1.0;
    CHECK(idm_accel(obs, p) == -9.0);
  }

  SUBCASE("close fast approach clamps at the emergency limit") {
    SutObservation obs;
    obs.v = 11.17;
    obs.has_target = true;
    obs.v_oth = 11.17;
    obs.s_headway = 5.0;
    CHECK(idm_accel(obs, p) == -9.0);
  }

  SUBCASE("interaction term matches the closed form") {
    SutObservation obs;
    obs.v = 8.0;
    obs.has_target = true;
    obs.v_oth = 3.0;
    obs.s_headway = 40.0;
    const double s_star = 2.0 + 8.0 * 1.5 + 8.0 * 3.0 / (2.0 * std::sqrt(4.0));
    const double want =
        2.0 * (1.0 - std::pow(8.0 / 11.17, 4.0)) - 2.0 * std::pow(s_star / 40.0, 2.0);
    CHECK(idm_accel(obs, p) == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("vehicle speed clamps at zero and position integrates the new speed") {
  VehicleState v;
  v.x = 0.0;
  v.v = 0.1;
  vehicle_step(v, -2.0, 0.1);
  CHECK(v.v == 0.0);
  CHECK(v.x == 0.0);

  v.v = 1.0;
  vehicle_step(v, 1.0, 0.1);
  CHECK(v.v == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(v.x == doctest::Approx(0.11).epsilon(1e-15));
}

TEST_CASE("collision footprint is the vehicle box inflated by the radius") {
  VehicleState v;
  v.x = 0.0;
  v.y = 0.0;
  PedestrianState p;

  p.x = 0.0;
  p.y = 0.0;
  CHECK(collision_check(v, p, 0.3));  // dead center

  p.y = 0.9 + 0.3 + 0.01;
  CHECK_FALSE(collision_check(v, p, 0.3));  // just beyond the inflated side

  p.y = 0.9 + 0.3;
  CHECK(collision_check(v, p, 0.3));  // boundary contact counts

  p.y = 0.0;
  p.x = 2.25 + 0.3 + 0.01;
  CHECK_FALSE(collision_check(v, p, 0.3));
  p.x = -(2.25 + 0.3);
  CHECK(collision_check(v, p, 0.3));
}

TEST_CASE("target selection ignores pedestrians off the road or behind the bumper") {
  VehicleState veh;
  veh.x = -10.0;
  veh.v = 10.0;
  RoadGeometry road;

  std::vector<TrackerState> trackers(1);
  trackers[0].xhat = 0.0;
  trackers[0].yhat = -2.0;  // south of the road edge at -1.85
  CHECK_FALSE(select_target(trackers, veh, road).has_value());

  trackers[0].yhat = -1.85;  // on the edge counts as in the road
  auto t = select_target(trackers, veh, road);
  REQUIRE(t.has_value());
  CHECK(*t == 0);

  trackers[0].xhat = veh.front() - 0.1;  // behind the front bumper
  CHECK_FALSE(select_target(trackers, veh, road).has_value());

  // Two candidates: the nearer one wins.
  trackers.resize(2);
  trackers[0].xhat = 5.0;
  trackers[0].yhat = 0.0;
  trackers[1].xhat = 2.0;
  trackers[1].yhat = 1.0;
  t = select_target(trackers, veh, road);
  REQUIRE(t.has_value());
  CHECK(*t == 1);
}

TEST_CASE("mahalanobis matches a dense quadratic-form oracle") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> uvar(0.01, 2.0);
  for (int iter = 0; iter < 200; ++iter) {
    const int peds = 1 + (iter % 3);
    const int dim = 6 * peds;
    Eigen::VectorXd var(dim);
    Eigen::VectorXd a(dim);
    for (int i = 0; i < dim; ++i) {
      var[i] = uvar(gen);
      a[i] = n01(gen);
    }
    const double got = mahalanobis(EnvAction(a), var);
    Eigen::MatrixXd sigma = var.asDiagonal();
    const double quad = a.dot(sigma.ldlt().solve(a));
    CHECK(got == doctest::Approx(std::sqrt(quad)).epsilon(1e-10));
  }

  // Single unit-sigma component has distance exactly one.
  Eigen::VectorXd var = Eigen::VectorXd::Constant(6, 0.1);
  Eigen::VectorXd a = Eigen::VectorXd::Zero(6);
  a[1] = std::sqrt(0.1);
  CHECK(mahalanobis(EnvAction(a), var) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mahalanobis(EnvAction(Eigen::VectorXd::Zero(6)), var) == 0.0);
}

TEST_CASE("scenario presets") {
  ScenarioConfig s1 = scenario_preset(1);
  REQUIRE(s1.pedestrian_count() == 1);
  CHECK(s1.pedestrians[0].y == -2.0);
  CHECK(s1.pedestrians[0].vy == 1.4);
  CHECK(s1.vehicle.v == 11.17);

  ScenarioConfig s2 = scenario_preset(2);
  CHECK(s2.pedestrians[0].y == -4.0);

  ScenarioConfig s3 = scenario_preset(3);
  REQUIRE(s3.pedestrian_count() == 2);
  CHECK(s3.pedestrians[1].y == 5.0);
  CHECK(s3.pedestrians[1].vy == -1.4);

  CHECK_THROWS_AS(scenario_preset(4), std::invalid_argument);

  const Eigen::VectorXd var = s3.action_variance();
  REQUIRE(var.size() == 12);
  CHECK(var[0] == 0.01);
  CHECK(var[1] == 0.1);
  CHECK(var[2] == 0.1);
  CHECK(var[5] == 0.1);
  CHECK(var[6] == 0.01);
}

TEST_CASE("nominal scenario 1: vehicle yields and never enters the crosswalk") {
  Trajectory traj = run_zero(1);
  CHECK(traj.outcome == Outcome::kHorizonMiss);
  CHECK(traj.length() == 100);

  // Re-run manually to inspect vehicle state per step.
  CrosswalkSim sim(scenario_preset(1));
  sim.initialize();
  double min_v = 1e9;
  double front_at_min_v = 0.0;
  double max_front_while_ped_on_road = -1e9;
  while (!sim.is_terminal()) {
    sim.step(EnvAction::zeros(1));
    const VehicleState& veh = sim.vehicle();
    if (veh.v < min_v) {
      min_v = veh.v;
      front_at_min_v = veh.front();
    }
    const PedestrianState& p = sim.pedestrians()[0];
    if (p.y >= -1.85 && p.y <= 5.55) {
      max_front_while_ped_on_road = std::max(max_front_while_ped_on_road, veh.front());
    }
  }
  CHECK(min_v < 1.0);                          // comes to a crawl
  CHECK(front_at_min_v < -1.5);                // behind the crosswalk near edge
  CHECK(max_front_while_ped_on_road < -1.5);   // never encroaches while the pedestrian crosses
}

TEST_CASE("nominal scenario 2: blindsided vehicle hits the pedestrian") {
  Trajectory traj = run_zero(2);
  CHECK(traj.outcome == Outcome::kCollision);
  CHECK(traj.length() == 23);  // frozen from the dynamics desk-check
  CHECK(traj.rewards.back() == 0.0);

  CrosswalkSim sim(scenario_preset(2));
  sim.initialize();
  for (int k = 0; k < 23; ++k) sim.step(EnvAction::zeros(1));
  CHECK(sim.is_terminal());
  CHECK(sim.pedestrians()[0].y == doctest::Approx(-0.78).epsilon(1e-9));
  CHECK(sim.vehicle().v > 0.0);  // still moving at impact
}

TEST_CASE("nominal scenario 3: no collision") {
  Trajectory traj = run_zero(3);
  CHECK(traj.outcome == Outcome::kHorizonMiss);
  CHECK(traj.length() == 100);
}

TEST_CASE("initialize resets the simulation bitwise") {
  CrosswalkSim sim(scenario_preset(3));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  std::vector<EnvAction> actions;
  for (int k = 0; k < 40; ++k) {
    Eigen::VectorXd v(12);
    for (int i = 0; i < 12; ++i) v[i] = 0.2 * n01(gen);
    actions.emplace_back(v);
  }
  RewardParams rp;
  Trajectory a = replay(sim, actions, rp);
  Trajectory b = replay(sim, actions, rp);
  REQUIRE(a.length() == b.length());
  for (int t = 0; t < a.length(); ++t) {
    CHECK(a.rewards[t] == b.rewards[t]);
    CHECK(a.states[t] == b.states[t]);
  }
}

TEST_CASE("measurement noise never moves the pedestrians") {
  CrosswalkSim sim(scenario_preset(1));
  sim.initialize();
  Eigen::VectorXd clean = Eigen::VectorXd::Zero(6);
  clean[0] = 0.05;
  clean[1] = -0.02;
  Eigen::VectorXd noisy = clean;
  noisy[2] = 1.0;
  noisy[3] = -2.0;
  noisy[4] = 3.0;
  noisy[5] = -4.0;

  sim.step(EnvAction(clean));
  const PedestrianState after_clean = sim.pedestrians()[0];

  sim.initialize();
  sim.step(EnvAction(noisy));
  const PedestrianState after_noisy = sim.pedestrians()[0];

  CHECK(after_clean.x == after_noisy.x);
  CHECK(after_clean.y == after_noisy.y);
  CHECK(after_clean.vx == after_noisy.vx);
  CHECK(after_clean.vy == after_noisy.vy);
  // ...but it does move the tracker.
  CrosswalkSim sim2(scenario_preset(1));
  sim2.initialize();
  sim2.step(EnvAction(clean));
  const double clean_xhat = sim2.trackers()[0].xhat;
  sim2.initialize();
  sim2.step(EnvAction(noisy));
  CHECK(sim2.trackers()[0].xhat != clean_xhat);
}

TEST_CASE("simulator contract violations throw") {
  CrosswalkSim sim(scenario_preset(2));
  sim.initialize();
  CHECK_THROWS_AS(sim.step(EnvAction::zeros(2)), std::invalid_argument);
  while (!sim.is_terminal()) sim.step(EnvAction::zeros(1));
  CHECK_THROWS_AS(sim.step(EnvAction::zeros(1)), std::logic_error);
}

TEST_CASE("observe returns pedestrian state relative to the vehicle") {
  CrosswalkSim sim(scenario_preset(3));
  sim.initialize();
  const Eigen::VectorXd s = sim.observe();
  REQUIRE(s.size() == 8);
  CHECK(s[0] == 0.0 - 11.17);
  CHECK(s[1] == 1.4);
  CHECK(s[2] == 0.0 - (-25.0));
  CHECK(s[3] == -2.0 - 0.0);
  CHECK(s[7] == 5.0);
}

TEST_CASE("scenario JSON round trip and validation") {
  ScenarioConfig cfg = scenario_preset(3);
  cfg.sigma_noise = 0.25;
  cfg.idm.v0 = 9.0;
  const std::string text = scenario_to_json(cfg);
  ScenarioConfig back = scenario_from_json(text);
  CHECK(back.pedestrian_count() == 2);
  CHECK(back.sigma_noise == 0.25);
  CHECK(back.idm.v0 == 9.0);
  CHECK(back.vehicle.x == cfg.vehicle.x);
  CHECK(back.road.y_max == cfg.road.y_max);
  CHECK(back.tracker_beta == cfg.tracker_beta);

  CHECK_THROWS(scenario_from_json("{\"pedestrains\": []}"));  // typo'd key
  CHECK_THROWS(scenario_from_json("{\"pedestrians\": []}"));  // no pedestrians
  CHECK_THROWS(scenario_from_json("not json"));

  // Partial configs keep defaults.
  ScenarioConfig partial =
      scenario_from_json("{\"pedestrians\": [{\"y\": -3.0, \"vy\": 1.4}]}");
  CHECK(partial.pedestrians[0].y == -3.0);
  CHECK(partial.vehicle.x == -25.0);
  CHECK(partial.idm.b_max == 9.0);
}
