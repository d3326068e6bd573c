#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "avstress_cli/runner.hpp"

using avstress::cli::RunConfig;
using avstress::cli::RunSummary;

int main(int argc, char** argv) {
  CLI::App app{"stress-search for failure trajectories of a crosswalk driving policy"};
  app.require_subcommand(1);

  RunConfig rc;
  CLI::App* run_cmd = app.add_subcommand("run", "search one scenario with one solver");
  run_cmd->add_option("--scenario", rc.scenario, "preset 1|2|3 or a scenario JSON path");
  run_cmd->add_option("--solver", rc.solver, "mcts | drl")
      ->check(CLI::IsMember({"mcts", "drl"}));
  run_cmd->add_option("--seed", rc.seed, "meta seed for the solver");
  run_cmd->add_option("--budget", rc.budget, "simulator step-call cap (default 1e6)");
  run_cmd->add_option("--horizon", rc.horizon, "episode length override");
  run_cmd->add_option("--iterations", rc.iterations, "solver iteration cap (0: budget only)");
  run_cmd->add_option("--out", rc.out_dir, "directory for trajectory/summary/plot artifacts");
  run_cmd->add_option("--set", rc.overrides,
                      "dotted-path override, e.g. idm.v0=9 or drl.batch_size=2000");

  std::vector<std::string> summary_files;
  std::string csv_out;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "tabulate two or more run summaries");
  cmp_cmd->add_option("summaries", summary_files, "summary JSON files")->required();
  cmp_cmd->add_option("--csv", csv_out, "also write the table as CSV to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) {
      const RunSummary summary = avstress::cli::run(rc);
      std::cout << avstress::cli::summary_to_json(summary) << "\n";
      return summary.collision ? 0 : 2;
    }

    std::vector<std::string> texts;
    for (const std::string& file : summary_files) {
      std::ifstream in(file);
      if (!in) throw std::invalid_argument("cannot read summary: " + file);
      std::ostringstream ss;
      ss << in.rdbuf();
      texts.push_back(ss.str());
    }
    std::cout << avstress::cli::comparison_table(texts);
    if (!csv_out.empty()) {
      std::ofstream out(csv_out);
      if (!out) throw std::invalid_argument("cannot write " + csv_out);
      out << avstress::cli::comparison_csv(texts);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
