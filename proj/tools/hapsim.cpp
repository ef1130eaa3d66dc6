// hapsim: command-line front end for single runs, sweeps, the saturation
// oracle and re-aggregation of existing result files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hapsim/analytics/report.hpp"
#include "hapsim/error.hpp"
#include "hapsim/scenario/config.hpp"
#include "hapsim/scenario/csv.hpp"
#include "hapsim/scenario/experiment.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace hapsim;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  for (const auto& tok : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + tok + "' in list");
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_meta(const fs::path& dir, const std::string& command, const scenario::ScenarioConfig& cfg,
                std::size_t rows) {
  nlohmann::ordered_json meta;
  meta["tool"] = "hapsim";
  meta["version"] = HAPSIM_VERSION;
  meta["command"] = command;
  meta["rows"] = rows;
  meta["config"] = nlohmann::json::parse(scenario::config_to_json(cfg));
  open_out(dir / "results.meta.json") << meta.dump(2) << '\n';
}

void write_results(const fs::path& dir, const std::vector<analytics::ResultRow>& rows) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "results.csv");
    scenario::write_results_csv(out, rows);
  }
  auto out = open_out(dir / "report.csv");
  scenario::write_report_csv(out, analytics::aggregate(rows));
}

scenario::ScenarioConfig load(const std::string& path, const std::string& seeds) {
  auto cfg = scenario::load_config(path);
  if (!seeds.empty()) cfg.seeds = scenario::parse_seed_list(seeds);
  for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << '\n';
  return cfg;
}

void write_traces(const fs::path& dir, const scenario::ScenarioConfig& cfg) {
  for (auto seed : cfg.seeds) {
    scenario::RunOptions opt;
    opt.keep_event_trace = true;
    auto result = scenario::simulate(cfg, seed, opt);
    const std::string stem = std::string(scenario::to_string(cfg.scheme)) + "-" + std::to_string(seed);
    auto events = open_out(dir / (stem + ".events"));
    sim::write_trace(events, result.trace);
    if (!result.signalling.empty()) {
      auto sig = open_out(dir / (stem + ".signalling"));
      fsm::write_signalling_trace(sig, result.signalling);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wi-Fi / LTE-U unlicensed coexistence simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hapsim ") + HAPSIM_VERSION);

  std::string config_path, out_dir, seeds, axis = "N", values, schemes, n_list = "1,5,10,20,30,40",
                                                              mode = "basic";
  std::vector<std::string> inputs;
  int parallel = 1;

  auto* run = app.add_subcommand("run", "simulate every seed of one scenario");
  run->add_option("--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seeds", seeds, "comma-separated seed list overriding the config");
  run->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "sweep N or M across schemes");
  sweep->add_option("--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--axis", axis, "N or M");
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--schemes", schemes, "comma-separated schemes (default: the config's scheme)");
  sweep->add_option("--seeds", seeds, "comma-separated seed list overriding the config");
  sweep->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "analytical saturation throughput table");
  oracle->add_option("--n", n_list, "comma-separated contender counts");
  oracle->add_option("--config", config_path, "scenario JSON supplying MAC timing");
  oracle->add_option("--mode", mode, "basic or rts-cts");
  oracle->add_option("--out", out_dir, "output directory (default: stdout)");

  auto* report = app.add_subcommand("report", "re-aggregate existing results CSV files");
  report->add_option("--in", inputs, "results.csv files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out_dir, "output directory (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(config_path, seeds);
      const auto rows = scenario::run(cfg, parallel);
      write_results(out_dir, rows);
      write_meta(out_dir, "run", cfg, rows.size());
      if (cfg.write_traces) write_traces(out_dir, cfg);
    } else if (*sweep) {
      const auto cfg = load(config_path, seeds);
      std::vector<scenario::Scheme> list;
      if (schemes.empty()) {
        list.push_back(cfg.scheme);
      } else {
        for (const auto& s : split_list(schemes)) list.push_back(scenario::parse_scheme(s));
      }
      const auto rows =
          scenario::sweep(cfg, scenario::parse_axis(axis), parse_int_list(values), list, parallel);
      write_results(out_dir, rows);
      write_meta(out_dir, "sweep", cfg, rows.size());
    } else if (*oracle) {
      scenario::ScenarioConfig cfg;
      if (!config_path.empty()) cfg = scenario::load_config(config_path);
      cfg.mac.validate();
      const auto n_values = parse_int_list(n_list);
      for (int n : n_values) {
        if (n < 1) throw ConfigError("oracle: every n must be >= 1");
      }
      const auto table = scenario::oracle_table(n_values, cfg.mac, wifi::parse_access_mode(mode));
      if (out_dir.empty()) {
        scenario::write_oracle_csv(std::cout, table);
      } else {
        fs::create_directories(out_dir);
        auto out = open_out(fs::path(out_dir) / "oracle.csv");
        scenario::write_oracle_csv(out, table);
      }
    } else if (*report) {
      std::vector<analytics::ResultRow> rows;
      for (const auto& path : inputs) {
        std::ifstream in(path);
        auto part = scenario::read_results_csv(in);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      analytics::sort_rows(rows);
      const auto rep = analytics::aggregate(rows);
      if (out_dir.empty()) {
        scenario::write_report_csv(std::cout, rep);
      } else {
        fs::create_directories(out_dir);
        auto out = open_out(fs::path(out_dir) / "report.csv");
        scenario::write_report_csv(out, rep);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
