#include "avstress_cli/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "avstress/scenario_io.hpp"
#include "avstress_cli/artifacts.hpp"

namespace avstress::cli {
namespace {

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("malformed number: " + text);
  return v;
}

int parse_int(const std::string& text) {
  std::size_t used = 0;
  const int v = std::stoi(text, &used);
  if (used != text.size()) throw std::invalid_argument("malformed integer: " + text);
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("malformed boolean: " + text);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(item));
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

}  // namespace

void apply_override(ScenarioConfig& cfg, SolverOptions& opts, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like key=value: " + assignment);
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  const std::pair<const char*, double*> doubles[] = {
      {"dt", &cfg.dt},
      {"sigma_a_lat", &cfg.sigma_a_lat},
      {"sigma_a_lon", &cfg.sigma_a_lon},
      {"sigma_noise", &cfg.sigma_noise},
      {"pedestrian_radius", &cfg.pedestrian_radius},
      {"tracker_alpha", &cfg.tracker_alpha},
      {"tracker_beta", &cfg.tracker_beta},
      {"vehicle.x", &cfg.vehicle.x},
      {"vehicle.y", &cfg.vehicle.y},
      {"vehicle.v", &cfg.vehicle.v},
      {"vehicle.length", &cfg.vehicle.length},
      {"vehicle.width", &cfg.vehicle.width},
      {"idm.v0", &cfg.idm.v0},
      {"idm.T_headway", &cfg.idm.T_headway},
      {"idm.s0", &cfg.idm.s0},
      {"idm.a_max", &cfg.idm.a_max},
      {"idm.b", &cfg.idm.b},
      {"idm.delta", &cfg.idm.delta},
      {"idm.b_max", &cfg.idm.b_max},
      {"road.lane_width", &cfg.road.lane_width},
      {"road.crosswalk_half_width", &cfg.road.crosswalk_half_width},
      {"road.y_min", &cfg.road.y_min},
      {"road.y_max", &cfg.road.y_max},
      {"mcts.k_action", &opts.mcts.k_action},
      {"mcts.alpha_action", &opts.mcts.alpha_action},
      {"mcts.exploration_c", &opts.mcts.exploration_c},
      {"drl.gae.gamma", &opts.drl.gae.gamma},
      {"drl.gae.lambda", &opts.drl.gae.lambda},
      {"drl.trpo.max_kl", &opts.drl.trpo.max_kl},
      {"drl.trpo.cg_damping", &opts.drl.trpo.cg_damping},
      {"drl.trpo.backtrack_ratio", &opts.drl.trpo.backtrack_ratio},
      {"reward.miss_penalty", &opts.reward.miss_penalty},
      {"reward.dist_scale", &opts.reward.dist_scale},
  };
  for (const auto& [name, slot] : doubles) {
    if (key == name) {
      *slot = parse_double(value);
      return;
    }
  }

  const std::pair<const char*, int*> ints[] = {
      {"horizon", &cfg.horizon},
      {"mcts.iterations", &opts.mcts.iterations},
      {"mcts.max_depth", &opts.mcts.max_depth},
      {"drl.batch_size", &opts.drl.batch_size},
      {"drl.iterations", &opts.drl.iterations},
      {"drl.trpo.cg_iterations", &opts.drl.trpo.cg_iterations},
      {"drl.trpo.max_backtracks", &opts.drl.trpo.max_backtracks},
  };
  for (const auto& [name, slot] : ints) {
    if (key == name) {
      *slot = parse_int(value);
      return;
    }
  }

  if (key == "drl.gae.normalize") {
    opts.drl.gae.normalize = parse_bool(value);
    return;
  }
  if (key == "drl.hidden") {
    opts.drl.hidden = parse_int_list(value);
    return;
  }

  // pedestrians.N.{x,y,vx,vy}
  if (key.rfind("pedestrians.", 0) == 0) {
    const std::string rest = key.substr(12);
    const std::size_t dot = rest.find('.');
    if (dot != std::string::npos) {
      const int idx = parse_int(rest.substr(0, dot));
      if (idx < 0 || idx >= cfg.pedestrian_count()) {
        throw std::invalid_argument("pedestrian index out of range: " + key);
      }
      const std::string field = rest.substr(dot + 1);
      PedestrianState& p = cfg.pedestrians[static_cast<std::size_t>(idx)];
      if (field == "x") { p.x = parse_double(value); return; }
      if (field == "y") { p.y = parse_double(value); return; }
      if (field == "vx") { p.vx = parse_double(value); return; }
      if (field == "vy") { p.vy = parse_double(value); return; }
    }
  }

  throw std::invalid_argument("unknown override key: " + key);
}

ScenarioConfig resolve_scenario(const RunConfig& rc, SolverOptions& opts) {
  ScenarioConfig cfg;
  if (rc.scenario == "1" || rc.scenario == "2" || rc.scenario == "3") {
    cfg = scenario_preset(rc.scenario[0] - '0');
  } else {
    cfg = load_scenario_file(rc.scenario);
  }
  for (const std::string& assignment : rc.overrides) apply_override(cfg, opts, assignment);
  if (rc.horizon > 0) cfg.horizon = rc.horizon;
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  return cfg;
}

RunSummary run(const RunConfig& rc) {
  if (rc.budget == 0) throw std::invalid_argument("budget must be positive");
  if (rc.solver != "mcts" && rc.solver != "drl") {
    throw std::invalid_argument("unknown solver: " + rc.solver);
  }

  RunSummary summary;
  summary.scenario = rc.scenario;
  summary.solver = rc.solver;
  summary.seed = rc.seed;
  summary.budget = rc.budget;

  SolverOptions opts = rc.options;
  const ScenarioConfig cfg = resolve_scenario(rc, opts);
  summary.config = cfg;

  RewardParams rp = opts.reward;
  rp.horizon = cfg.horizon;

  CrosswalkSim sim(cfg);
  StepMeter meter;
  const auto t0 = std::chrono::steady_clock::now();

  if (rc.solver == "mcts") {
    DpwParams mp = opts.mcts;
    mp.meta_seed = rc.seed;
    mp.budget = rc.budget;
    mp.max_depth = cfg.horizon;
    mp.iterations = rc.iterations > 0 ? rc.iterations : std::numeric_limits<int>::max();
    MctsSearch search(mp, cfg.action_variance(), rp);
    MctsResult result = search.search(sim, meter);
    summary.best = std::move(result.best);
  } else {
    DrlParams dp = opts.drl;
    dp.seed = rc.seed;
    dp.budget = rc.budget;
    dp.reward = rp;
    dp.iterations = rc.iterations > 0 ? rc.iterations : std::numeric_limits<int>::max();
    TrainResult result = train(sim, dp, meter);
    summary.best = std::move(result.best);
    summary.curve = std::move(result.curve);
  }

  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  summary.collision = summary.best.outcome == Outcome::kCollision;
  summary.best_reward = summary.best.total_reward;
  summary.best_reward_without_noise = reward_without_noise(sim, summary.best.actions, rp);
  summary.step_calls = meter.count;
  summary.step_calls_at_first_collision = meter.count_at_first_collision;

  if (!rc.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(rc.out_dir);
    const ReplayTrace trace = trace_trajectory(sim, summary.best.actions, rp);
    summary.trajectory_csv = (fs::path(rc.out_dir) / "trajectory.csv").string();
    write_trajectory_csv(summary.trajectory_csv, trace, summary.best.actions);
    summary.plot_svg = (fs::path(rc.out_dir) / "trajectory.svg").string();
    write_trajectory_svg(summary.plot_svg, cfg, trace);
    if (rc.solver == "drl") {
      summary.learning_curve_csv = (fs::path(rc.out_dir) / "learning_curve.csv").string();
      write_learning_curve_csv(summary.learning_curve_csv, summary.curve);
    }
    summary.summary_json = (fs::path(rc.out_dir) / "summary.json").string();
    std::ofstream out(summary.summary_json);
    out << summary_to_json(summary) << "\n";
  }
  return summary;
}

std::string summary_to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["solver"] = s.solver;
  j["seed"] = s.seed;
  j["budget"] = s.budget;
  j["outcome"] = s.collision ? "collision" : "no_collision";
  j["best_reward"] = s.best_reward;
  j["best_reward_without_noise"] = s.best_reward_without_noise;
  j["step_calls"] = s.step_calls;
  if (s.step_calls_at_first_collision.has_value()) {
    j["step_calls_at_first_collision"] = *s.step_calls_at_first_collision;
  } else {
    j["step_calls_at_first_collision"] = nullptr;
  }
  j["trajectory_steps"] = s.best.length();
  j["wall_clock_seconds"] = s.wall_clock_seconds;
  if (!s.trajectory_csv.empty()) {
    nlohmann::ordered_json a;
    a["trajectory_csv"] = s.trajectory_csv;
    a["plot_svg"] = s.plot_svg;
    if (!s.learning_curve_csv.empty()) a["learning_curve_csv"] = s.learning_curve_csv;
    a["summary_json"] = s.summary_json;
    j["artifacts"] = a;
  }
  return j.dump(2);
}

namespace {

struct SummaryRow {
  std::string scenario;
  std::string solver;
  std::string step_calls;
  std::string first_collision;
  std::string best_reward;
  std::string best_reward_without_noise;
  std::string outcome;
};

std::vector<SummaryRow> parse_rows(const std::vector<std::string>& summary_jsons) {
  if (summary_jsons.size() < 2) {
    throw std::invalid_argument("comparison needs at least two summaries");
  }
  std::vector<SummaryRow> rows;
  char buf[64];
  for (const std::string& text : summary_jsons) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SummaryRow row;
    row.scenario = j.at("scenario").get<std::string>();
    row.solver = j.at("solver").get<std::string>();
    row.step_calls = std::to_string(j.at("step_calls").get<std::uint64_t>());
    if (j.at("step_calls_at_first_collision").is_null()) {
      row.first_collision = "-";
    } else {
      row.first_collision =
          std::to_string(j.at("step_calls_at_first_collision").get<std::uint64_t>());
    }
    std::snprintf(buf, sizeof buf, "%.6g", j.at("best_reward").get<double>());
    row.best_reward = buf;
    std::snprintf(buf, sizeof buf, "%.6g", j.at("best_reward_without_noise").get<double>());
    row.best_reward_without_noise = buf;
    row.outcome = j.at("outcome").get<std::string>();
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* const kHeaders[] = {"scenario", "solver",          "step_calls",
                                "first_collision", "best_reward", "best_reward_without_noise",
                                "outcome"};

std::vector<std::string> row_cells(const SummaryRow& r) {
  return {r.scenario,    r.solver,          r.step_calls, r.first_collision,
          r.best_reward, r.best_reward_without_noise, r.outcome};
}

}  // namespace

std::string comparison_table(const std::vector<std::string>& summary_jsons) {
  const std::vector<SummaryRow> rows = parse_rows(summary_jsons);
  constexpr int kCols = 7;
  std::size_t width[kCols];
  for (int c = 0; c < kCols; ++c) width[c] = std::string(kHeaders[c]).size();
  for (const SummaryRow& r : rows) {
    const auto cells = row_cells(r);
    for (int c = 0; c < kCols; ++c) width[c] = std::max(width[c], cells[c].size());
  }

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (int c = 0; c < kCols; ++c) {
      out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
      out << (c + 1 == kCols ? "\n" : "  ");
    }
  };
  emit({kHeaders, kHeaders + kCols});
  for (const SummaryRow& r : rows) emit(row_cells(r));
  return out.str();
}

std::string comparison_csv(const std::vector<std::string>& summary_jsons) {
  const std::vector<SummaryRow> rows = parse_rows(summary_jsons);
  std::ostringstream out;
  out << "scenario,solver,step_calls,first_collision,best_reward,"
         "best_reward_without_noise,outcome\n";
  for (const SummaryRow& r : rows) {
    out << r.scenario << ',' << r.solver << ',' << r.step_calls << ',' << r.first_collision
        << ',' << r.best_reward << ',' << r.best_reward_without_noise << ',' << r.outcome
        << "\n";
  }
  return out.str();
}

}  // namespace avstress::cli
