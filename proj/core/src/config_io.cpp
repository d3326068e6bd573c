#include "avstress/scenario_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace avstress {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> known,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::runtime_error("unknown scenario key '" + key + "' in " + where);
  }
}

void get(const json& obj, const char* key, double& out) {
  if (obj.contains(key)) out = obj.at(key).get<double>();
}

void get(const json& obj, const char* key, int& out) {
  if (obj.contains(key)) out = obj.at(key).get<int>();
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
  json root = json::parse(text);
  if (!root.is_object()) throw std::runtime_error("scenario config must be a JSON object");
  check_keys(root,
             {"pedestrians", "vehicle", "dt", "horizon", "sigma_a_lat", "sigma_a_lon",
              "sigma_noise", "road", "idm", "pedestrian_radius", "tracker_alpha",
              "tracker_beta"},
             "scenario");

  ScenarioConfig cfg;
  if (root.contains("pedestrians")) {
    cfg.pedestrians.clear();
    for (const json& p : root.at("pedestrians")) {
      check_keys(p, {"vx", "vy", "x", "y"}, "pedestrians[]");
      PedestrianState ped;
      get(p, "vx", ped.vx);
      get(p, "vy", ped.vy);
      get(p, "x", ped.x);
      get(p, "y", ped.y);
      cfg.pedestrians.push_back(ped);
    }
  }
  if (root.contains("vehicle")) {
    const json& v = root.at("vehicle");
    check_keys(v, {"x", "y", "v", "length", "width"}, "vehicle");
    get(v, "x", cfg.vehicle.x);
    get(v, "y", cfg.vehicle.y);
    get(v, "v", cfg.vehicle.v);
    get(v, "length", cfg.vehicle.length);
    get(v, "width", cfg.vehicle.width);
  }
  get(root, "dt", cfg.dt);
  get(root, "horizon", cfg.horizon);
  get(root, "sigma_a_lat", cfg.sigma_a_lat);
  get(root, "sigma_a_lon", cfg.sigma_a_lon);
  get(root, "sigma_noise", cfg.sigma_noise);
  if (root.contains("road")) {
    const json& r = root.at("road");
    check_keys(r, {"lane_width", "crosswalk_half_width", "y_min", "y_max"}, "road");
    get(r, "lane_width", cfg.road.lane_width);
    get(r, "crosswalk_half_width", cfg.road.crosswalk_half_width);
    get(r, "y_min", cfg.road.y_min);
    get(r, "y_max", cfg.road.y_max);
  }
  if (root.contains("idm")) {
    const json& i = root.at("idm");
    check_keys(i, {"v0", "T_headway", "s0", "a_max", "b", "delta", "b_max"}, "idm");
    get(i, "v0", cfg.idm.v0);
    get(i, "T_headway", cfg.idm.T_headway);
    get(i, "s0", cfg.idm.s0);
    get(i, "a_max", cfg.idm.a_max);
    get(i, "b", cfg.idm.b);
    get(i, "delta", cfg.idm.delta);
    get(i, "b_max", cfg.idm.b_max);
  }
  get(root, "pedestrian_radius", cfg.pedestrian_radius);
  get(root, "tracker_alpha", cfg.tracker_alpha);
  get(root, "tracker_beta", cfg.tracker_beta);
  if (cfg.pedestrians.empty()) throw std::runtime_error("scenario has no pedestrians");
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json peds = json::array();
  for (const PedestrianState& p : cfg.pedestrians) {
    peds.push_back({{"vx", p.vx}, {"vy", p.vy}, {"x", p.x}, {"y", p.y}});
  }
  json root = {
      {"pedestrians", peds},
      {"vehicle",
       {{"x", cfg.vehicle.x},
        {"y", cfg.vehicle.y},
        {"v", cfg.vehicle.v},
        {"length", cfg.vehicle.length},
        {"width", cfg.vehicle.width}}},
      {"dt", cfg.dt},
      {"horizon", cfg.horizon},
      {"sigma_a_lat", cfg.sigma_a_lat},
      {"sigma_a_lon", cfg.sigma_a_lon},
      {"sigma_noise", cfg.sigma_noise},
      {"road",
       {{"lane_width", cfg.road.lane_width},
        {"crosswalk_half_width", cfg.road.crosswalk_half_width},
        {"y_min", cfg.road.y_min},
        {"y_max", cfg.road.y_max}}},
      {"idm",
       {{"v0", cfg.idm.v0},
        {"T_headway", cfg.idm.T_headway},
        {"s0", cfg.idm.s0},
        {"a_max", cfg.idm.a_max},
        {"b", cfg.idm.b},
        {"delta", cfg.idm.delta},
        {"b_max", cfg.idm.b_max}}},
      {"pedestrian_radius", cfg.pedestrian_radius},
      {"tracker_alpha", cfg.tracker_alpha},
      {"tracker_beta", cfg.tracker_beta},
  };
  return root.dump(2);
}

}  // namespace avstress
