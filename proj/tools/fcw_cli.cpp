// Command-line front end: generate synthetic episode suites, evaluate
// warning methods over a directory of episodes, sweep one parameter, or
// dump a per-timestep diagnostic trace for a single episode.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcw/errors.hpp"
#include "fcw/run_config.hpp"
#include "fcw/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonFlags {
  std::string config;
  std::string episodes;
  std::string out;
  std::string method;
  std::optional<std::uint64_t> seed;
};

fcw::RunConfig resolve_config(const CommonFlags& flags) {
  fcw::RunConfig cfg;
  if (!flags.config.empty()) {
    cfg = fcw::load_run_config(flags.config);
  }
  if (!flags.episodes.empty()) {
    cfg.episode_dir = flags.episodes;
  }
  if (!flags.out.empty()) {
    cfg.output = flags.out;
  }
  if (!flags.method.empty()) {
    cfg.method = fcw::method_from_string(flags.method);
  }
  if (flags.seed.has_value()) {
    cfg.seed = *flags.seed;
  }
  if (cfg.episode_dir.empty()) {
    throw fcw::config_error("no episode directory (config episode_dir or --episodes)");
  }
  return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const std::string item =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
          throw std::invalid_argument(item);
        }
        out.push_back(v);
      } catch (const std::exception&) {
        throw fcw::config_error("--values: not a number: " + item);
      }
    }
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-aware forward collision warning toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string param_name;
  std::string values_csv;
  std::string episode_id;

  auto add_common = [&flags](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "Config file (key = value lines)");
    cmd->add_option("--episodes", flags.episodes, "Episode directory");
    cmd->add_option("--out", flags.out, "Output path");
    cmd->add_option("--method", flags.method,
                    "Warning method (sda, attention_aware, attend_gaze, "
                    "attend_gaze_scene, forecast_full_attn, forecast_driver_attn)");
    cmd->add_option("--seed", flags.seed, "Random seed");
  };

  CLI::App* generate = app.add_subcommand(
      "generate", "Write a synthetic episode suite and its manifest");
  add_common(generate);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Evaluate one method over an episode directory");
  add_common(evaluate);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Evaluate across values of one parameter");
  add_common(sweep);
  sweep->add_option("--param", param_name, "FcwParams field name")->required();
  sweep->add_option("--values", values_csv, "Comma-separated values")->required();

  CLI::App* trace = app.add_subcommand(
      "trace", "Per-timestep diagnostic CSV for one episode");
  add_common(trace);
  trace->add_option("--episode-id", episode_id, "Episode id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      fcw::SuiteSpec spec;
      if (!flags.config.empty()) {
        spec = fcw::load_suite_spec(flags.config);
      }
      const std::uint64_t seed = flags.seed.value_or(spec.base.seed);
      if (flags.out.empty()) {
        throw fcw::config_error("generate needs --out <directory>");
      }
      const std::size_t n = fcw::cmd_generate(spec, flags.out, seed);
      std::cout << "wrote " << n << " episodes to " << flags.out << "\n";
    } else if (evaluate->parsed()) {
      const fcw::RunConfig cfg = resolve_config(flags);
      const fcw::EvaluationReport report = fcw::cmd_evaluate(cfg);
      std::cout << fcw::summary_line(report) << "\n";
    } else if (sweep->parsed()) {
      fcw::RunConfig cfg = resolve_config(flags);
      const auto rows = fcw::cmd_sweep(cfg, param_name, parse_values(values_csv));
      if (cfg.output.empty()) {
        fcw::write_sweep_csv(param_name, rows, std::cout);
      } else {
        std::ofstream out(cfg.output);
        if (!out) {
          throw fcw::data_error("cannot write sweep table: " + cfg.output);
        }
        fcw::write_sweep_csv(param_name, rows, out);
      }
      for (const auto& row : rows) {
        std::cout << param_name << "=" << row.value << "  "
                  << fcw::summary_line(row.report) << "\n";
      }
    } else if (trace->parsed()) {
      fcw::RunConfig cfg = resolve_config(flags);
      const std::string csv = fcw::cmd_trace_csv(cfg, episode_id);
      if (cfg.output.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(cfg.output);
        if (!out) {
          throw fcw::data_error("cannot write trace: " + cfg.output);
        }
        out << csv;
      }
    }
  } catch (const fcw::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fcw::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
