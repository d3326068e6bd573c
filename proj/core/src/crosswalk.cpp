#include "avstress/crosswalk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace avstress {

Eigen::VectorXd ScenarioConfig::action_variance() const {
  const int n = pedestrian_count();
  Eigen::VectorXd var(EnvAction::kBlock * n);
  for (int i = 0; i < n; ++i) {
    var[EnvAction::kBlock * i + 0] = sigma_a_lat;
    var[EnvAction::kBlock * i + 1] = sigma_a_lon;
    for (int j = 2; j < EnvAction::kBlock; ++j) {
      var[EnvAction::kBlock * i + j] = sigma_noise;
    }
  }
  return var;
}

ScenarioConfig scenario_preset(int id) {
  ScenarioConfig cfg;
  switch (id) {
    case 1:
      cfg.pedestrians = {{0.0, 1.4, 0.0, -2.0}};
      break;
    case 2:
      cfg.pedestrians = {{0.0, 1.4, 0.0, -4.0}};
      break;
    case 3:
      cfg.pedestrians = {{0.0, 1.4, 0.0, -2.0}, {0.0, -1.4, 0.0, 5.0}};
      break;
    default:
      throw std::invalid_argument("unknown scenario preset: " + std::to_string(id));
  }
  return cfg;
}

void pedestrian_step(PedestrianState& p, double ax, double ay, double dt) {
  p.vx += ax * dt;
  p.vy += ay * dt;
  p.x += p.vx * dt;
  p.y += p.vy * dt;
}

Measurement sense(const PedestrianState& p, double eps_vx, double eps_vy, double eps_x,
                  double eps_y) {
  return {p.x + eps_x, p.y + eps_y, p.vx + eps_vx, p.vy + eps_vy};
}

void tracker_step(TrackerState& t, double meas_x, double meas_y, double dt) {
  const double xp = t.xhat + t.vxhat * dt;
  const double yp = t.yhat + t.vyhat * dt;
  const double rx = meas_x - xp;
  const double ry = meas_y - yp;
  t.xhat = xp + t.alpha * rx;
  t.yhat = yp + t.alpha * ry;
  t.vxhat += (t.beta / dt) * rx;
  t.vyhat += (t.beta / dt) * ry;
}

std::optional<int> select_target(const std::vector<TrackerState>& trackers,
                                 const VehicleState& veh, const RoadGeometry& road) {
  std::optional<int> best;
  double best_gap = std::numeric_limits<double>::infinity();
  const double front = veh.front();
  for (int i = 0; i < static_cast<int>(trackers.size()); ++i) {
    const TrackerState& t = trackers[i];
    if (t.yhat < road.y_min || t.yhat > road.y_max) continue;  // outside the roadway
    const double gap = t.xhat - front;
    if (gap <= 0.0) continue;  // behind or alongside the front bumper
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

double idm_accel(const SutObservation& obs, const IdmParams& p) {
  double a = p.a_max * (1.0 - std::pow(obs.v / p.v0, p.delta));
  if (obs.has_target) {
    if (obs.s_headway <= 0.0) return -p.b_max;
    const double s_star =
        p.s0 + obs.v * p.T_headway + obs.v * obs.v_oth / (2.0 * std::sqrt(p.a_max * p.b));
    const double ratio = s_star / obs.s_headway;
    a -= p.a_max * ratio * ratio;
  }
  return std::clamp(a, -p.b_max, p.a_max);
}

void vehicle_step(VehicleState& v, double accel, double dt) {
  v.v = std::max(0.0, v.v + accel * dt);
  v.x += v.v * dt;
}

bool collision_check(const VehicleState& v, const PedestrianState& p, double radius) {
  return std::abs(p.x - v.x) <= 0.5 * v.length + radius &&
         std::abs(p.y - v.y) <= 0.5 * v.width + radius;
}

double mahalanobis(const EnvAction& a, const Eigen::VectorXd& variance_diag) {
  if (a.dimension() != variance_diag.size()) {
    throw std::invalid_argument("action/covariance dimension mismatch");
  }
  return std::sqrt((a.vector().array().square() / variance_diag.array()).sum());
}

CrosswalkSim::CrosswalkSim(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.pedestrians.empty()) {
    throw std::invalid_argument("scenario requires at least one pedestrian");
  }
  variance_ = cfg_.action_variance();
  initialize();
}

void CrosswalkSim::initialize() {
  peds_ = cfg_.pedestrians;
  veh_ = cfg_.vehicle;
  trackers_.assign(peds_.size(), TrackerState{});
  for (std::size_t i = 0; i < peds_.size(); ++i) {
    // First measurement is noiseless: the filter starts on the true state.
    trackers_[i].xhat = peds_[i].x;
    trackers_[i].yhat = peds_[i].y;
    trackers_[i].vxhat = peds_[i].vx;
    trackers_[i].vyhat = peds_[i].vy;
    trackers_[i].alpha = cfg_.tracker_alpha;
    trackers_[i].beta = cfg_.tracker_beta;
  }
  elapsed_ = 0;
  event_ = false;
}

TransitionOutcome CrosswalkSim::step(const EnvAction& action) {
  if (is_terminal()) throw std::logic_error("step() called on a terminal simulator");
  if (action.dimension() != action_dimension()) {
    throw std::invalid_argument("EnvAction dimension does not match pedestrian count");
  }
  const double dt = cfg_.dt;

  for (int i = 0; i < cfg_.pedestrian_count(); ++i) {
    pedestrian_step(peds_[i], action.ax(i), action.ay(i), dt);
  }
  for (int i = 0; i < cfg_.pedestrian_count(); ++i) {
    const Measurement m =
        sense(peds_[i], action.eps_vx(i), action.eps_vy(i), action.eps_x(i), action.eps_y(i));
    tracker_step(trackers_[i], m.x, m.y, dt);
  }

  SutObservation obs;
  obs.v = veh_.v;
  if (auto target = select_target(trackers_, veh_, cfg_.road)) {
    obs.has_target = true;
    obs.v_oth = veh_.v - trackers_[*target].vxhat;
    obs.s_headway = trackers_[*target].xhat - veh_.front();
  }
  vehicle_step(veh_, idm_accel(obs, cfg_.idm), dt);

  ++elapsed_;

  TransitionOutcome out;
  double nearest = std::numeric_limits<double>::infinity();
  for (const PedestrianState& p : peds_) {
    out.event = out.event || collision_check(veh_, p, cfg_.pedestrian_radius);
    nearest = std::min(nearest, std::hypot(p.x - veh_.x, p.y - veh_.y));
  }
  out.dist = nearest;
  event_ = out.event;
  out.terminal = event_ || elapsed_ >= cfg_.horizon;
  out.mahalanobis = mahalanobis(action, variance_);
  return out;
}

bool CrosswalkSim::is_terminal() const { return event_ || elapsed_ >= cfg_.horizon; }

Eigen::VectorXd CrosswalkSim::observe() const {
  // Per pedestrian, relative to the vehicle: [vx - v_veh, vy, x - x_veh, y - y_veh].
  Eigen::VectorXd s(state_dimension());
  for (int i = 0; i < cfg_.pedestrian_count(); ++i) {
    const PedestrianState& p = peds_[i];
    s[4 * i + 0] = p.vx - veh_.v;
    s[4 * i + 1] = p.vy;
    s[4 * i + 2] = p.x - veh_.x;
    s[4 * i + 3] = p.y - veh_.y;
  }
  return s;
}

int CrosswalkSim::action_dimension() const { return EnvAction::kBlock * cfg_.pedestrian_count(); }

int CrosswalkSim::state_dimension() const { return 4 * cfg_.pedestrian_count(); }

double CrosswalkSim::action_mahalanobis(const EnvAction& action) const {
  return mahalanobis(action, variance_);
}

}  // namespace avstress
