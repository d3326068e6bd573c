#include "avstress_cli/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace avstress::cli {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

constexpr const char* kTrajectoryHeader =
    "t,ped_id,x,y,vx,vy,ax,ay,eps_x,eps_y,eps_vx,eps_vy,veh_x,veh_v,reward";

}  // namespace

ReplayTrace trace_trajectory(CrosswalkSim& sim, const std::vector<EnvAction>& actions,
                             const RewardParams& rp) {
  ReplayTrace trace;
  sim.initialize();
  trace.initial_peds = sim.pedestrians();
  trace.initial_vehicle = sim.vehicle();
  int t = 0;
  for (const EnvAction& a : actions) {
    if (sim.is_terminal()) break;
    const TransitionOutcome out = sim.step(a);
    ++t;
    trace.peds.push_back(sim.pedestrians());
    trace.vehicle.push_back(sim.vehicle());
    trace.rewards.push_back(reward(out, rp, t));
    if (out.event && !trace.collision_step.has_value()) {
      trace.collision_step = t;
      for (int i = 0; i < static_cast<int>(sim.pedestrians().size()); ++i) {
        if (collision_check(sim.vehicle(), sim.pedestrians()[i],
                            sim.config().pedestrian_radius)) {
          trace.collision_ped = i;
          break;
        }
      }
    }
  }
  return trace;
}

void write_trajectory_csv(const std::string& path, const ReplayTrace& trace,
                          const std::vector<EnvAction>& actions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kTrajectoryHeader << "\n";
  for (std::size_t k = 0; k < trace.peds.size(); ++k) {
    const EnvAction& a = actions.at(k);
    const VehicleState& veh = trace.vehicle[k];
    for (std::size_t i = 0; i < trace.peds[k].size(); ++i) {
      const PedestrianState& p = trace.peds[k][i];
      const int pi = static_cast<int>(i);
      out << (k + 1) << ',' << i << ',' << num(p.x) << ',' << num(p.y) << ',' << num(p.vx)
          << ',' << num(p.vy) << ',' << num(a.ax(pi)) << ',' << num(a.ay(pi)) << ','
          << num(a.eps_x(pi)) << ',' << num(a.eps_y(pi)) << ',' << num(a.eps_vx(pi)) << ','
          << num(a.eps_vy(pi)) << ',' << num(veh.x) << ',' << num(veh.v) << ','
          << num(trace.rewards[k]) << "\n";
    }
  }
}

ParsedTrajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::runtime_error("unexpected trajectory header in " + path);
  }

  // Rows arrive grouped by timestep, one row per pedestrian.
  struct Row {
    int t;
    int ped;
    std::vector<double> cols;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != 15) throw std::runtime_error("malformed trajectory row: " + line);
    Row row;
    row.t = std::stoi(cells[0]);
    row.ped = std::stoi(cells[1]);
    row.cols.reserve(13);
    for (std::size_t c = 2; c < cells.size(); ++c) row.cols.push_back(std::stod(cells[c]));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};

  int peds = 0;
  while (peds < static_cast<int>(rows.size()) && rows[static_cast<std::size_t>(peds)].t == 1) {
    ++peds;
  }
  if (peds == 0 || rows.size() % static_cast<std::size_t>(peds) != 0) {
    throw std::runtime_error("inconsistent pedestrian rows in " + path);
  }

  ParsedTrajectory parsed;
  const std::size_t steps = rows.size() / static_cast<std::size_t>(peds);
  for (std::size_t k = 0; k < steps; ++k) {
    Eigen::VectorXd v(6 * peds);
    double reward_value = 0.0;
    for (int i = 0; i < peds; ++i) {
      const Row& row = rows[k * static_cast<std::size_t>(peds) + static_cast<std::size_t>(i)];
      if (row.t != static_cast<int>(k + 1) || row.ped != i) {
        throw std::runtime_error("rows out of order in " + path);
      }
      // Columns (after t, ped_id): x y vx vy ax ay eps_x eps_y eps_vx eps_vy ...
      v[6 * i + 0] = row.cols[4];   // a_x
      v[6 * i + 1] = row.cols[5];   // a_y
      v[6 * i + 2] = row.cols[8];   // eps_vx
      v[6 * i + 3] = row.cols[9];   // eps_vy
      v[6 * i + 4] = row.cols[6];   // eps_x
      v[6 * i + 5] = row.cols[7];   // eps_y
      reward_value = row.cols[12];
    }
    parsed.actions.emplace_back(std::move(v));
    parsed.rewards.push_back(reward_value);
  }
  return parsed;
}

void write_learning_curve_csv(const std::string& path,
                              const std::vector<IterationRecord>& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "iteration,mean_return,best_collision_reward,cumulative_step_calls\n";
  for (const IterationRecord& rec : curve) {
    out << rec.iteration << ',' << num(rec.mean_return) << ','
        << num(rec.best_collision_reward) << ',' << rec.cumulative_steps << "\n";
  }
}

void write_trajectory_svg(const std::string& path, const ScenarioConfig& cfg,
                          const ReplayTrace& trace) {
  // World bounds: the road extent plus everything that moved.
  double x_min = -cfg.road.crosswalk_half_width, x_max = cfg.road.crosswalk_half_width;
  double y_min = cfg.road.y_min, y_max = cfg.road.y_max;
  auto include = [&](double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  include(trace.initial_vehicle.x - 0.5 * trace.initial_vehicle.length,
          trace.initial_vehicle.y);
  for (const PedestrianState& p : trace.initial_peds) include(p.x, p.y);
  for (std::size_t k = 0; k < trace.peds.size(); ++k) {
    include(trace.vehicle[k].front(), trace.vehicle[k].y);
    for (const PedestrianState& p : trace.peds[k]) include(p.x, p.y);
  }
  const double margin = 2.0;
  x_min -= margin;
  x_max += margin;
  y_min -= margin;
  y_max += margin;

  const double width = 900.0;
  const double scale = width / (x_max - x_min);
  const double height = std::max(160.0, (y_max - y_min) * scale);
  auto sx = [&](double x) { return (x - x_min) * scale; };
  auto sy = [&](double y) { return height - (y - y_min) * scale; };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(width) << ' '
      << fmt(height) << "\">\n";
  out << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\"/>\n";

  // Road band and crosswalk.
  out << "<rect x=\"0\" y=\"" << fmt(sy(cfg.road.y_max)) << "\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(sy(cfg.road.y_min) - sy(cfg.road.y_max))
      << "\" fill=\"#d8d8d8\"/>\n";
  out << "<rect x=\"" << fmt(sx(-cfg.road.crosswalk_half_width)) << "\" y=\""
      << fmt(sy(cfg.road.y_max)) << "\" width=\""
      << fmt(sx(cfg.road.crosswalk_half_width) - sx(-cfg.road.crosswalk_half_width))
      << "\" height=\"" << fmt(sy(cfg.road.y_min) - sy(cfg.road.y_max))
      << "\" fill=\"#efefef\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
  // Lane separator.
  const double lane_sep = cfg.road.y_min + cfg.road.lane_width;
  out << "<line x1=\"0\" y1=\"" << fmt(sy(lane_sep)) << "\" x2=\"" << fmt(width) << "\" y2=\""
      << fmt(sy(lane_sep)) << "\" stroke=\"#ffffff\" stroke-width=\"2\" "
      << "stroke-dasharray=\"12 10\"/>\n";

  // Vehicle track along its lane, plus its final footprint.
  if (!trace.vehicle.empty()) {
    out << "<line x1=\"" << fmt(sx(trace.initial_vehicle.x)) << "\" y1=\""
        << fmt(sy(trace.initial_vehicle.y)) << "\" x2=\"" << fmt(sx(trace.vehicle.back().x))
        << "\" y2=\"" << fmt(sy(trace.vehicle.back().y))
        << "\" stroke=\"#4878a8\" stroke-width=\"3\" opacity=\"0.8\"/>\n";
    const VehicleState& veh = trace.vehicle.back();
    out << "<rect x=\"" << fmt(sx(veh.x - 0.5 * veh.length)) << "\" y=\""
        << fmt(sy(veh.y + 0.5 * veh.width)) << "\" width=\""
        << fmt(scale * veh.length) << "\" height=\"" << fmt(scale * veh.width)
        << "\" fill=\"none\" stroke=\"#4878a8\" stroke-width=\"2\"/>\n";
  }

  // Pedestrian paths: start marker, sampled polyline, collision marker.
  const char* colors[] = {"#c05020", "#6858a8", "#288868", "#a83868"};
  for (std::size_t i = 0; i < trace.initial_peds.size(); ++i) {
    const char* color = colors[i % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    out << fmt(sx(trace.initial_peds[i].x)) << ',' << fmt(sy(trace.initial_peds[i].y));
    for (std::size_t k = 0; k < trace.peds.size(); ++k) {
      out << ' ' << fmt(sx(trace.peds[k][i].x)) << ',' << fmt(sy(trace.peds[k][i].y));
    }
    out << "\"/>\n";
    out << "<circle cx=\"" << fmt(sx(trace.initial_peds[i].x)) << "\" cy=\""
        << fmt(sy(trace.initial_peds[i].y)) << "\" r=\"5\" fill=\"" << color << "\"/>\n";
  }
  if (trace.collision_step.has_value() && trace.collision_ped.has_value()) {
    const PedestrianState& p =
        trace.peds[static_cast<std::size_t>(*trace.collision_step - 1)]
                  [static_cast<std::size_t>(*trace.collision_ped)];
    out << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
        << "\" r=\"8\" fill=\"none\" stroke=\"#c02020\" stroke-width=\"3\"/>\n";
    out << "<text x=\"" << fmt(sx(p.x) + 12.0) << "\" y=\"" << fmt(sy(p.y) + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#c02020\">collision</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace avstress::cli
