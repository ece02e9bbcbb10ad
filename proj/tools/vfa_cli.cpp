// vfa: run blackjack draw experiments and test them for distribution shift.
//
//   vfa baseline  --seed 42 --trials 10000 --out control.jsonl
//   vfa run       --config llm.json --out gpt.jsonl [--resume]
//   vfa analyze   gpt.jsonl control.jsonl --out bundle.json
//   vfa report    bundle.json --format table
//   vfa plot-data gpt.jsonl control.jsonl --kind hand-values --out hands.csv
//   vfa summarize control.jsonl
//
// Exit codes: 0 ok, 2 usage/config error, 3 data-quality abort, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfa/errors.hpp"
#include "vfa/harness.hpp"
#include "vfa/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDataQuality = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<double> fail_threshold;
  std::optional<int> parallelism;
  std::string out;
  bool resume = false;
};

vfa::ExperimentConfig build_config(const CommonFlags& f, bool force_control) {
  vfa::ExperimentConfig config;
  if (!f.config_path.empty()) config = vfa::load_config(f.config_path);
  if (force_control) {
    if (!f.config_path.empty() && config.agent != vfa::AgentKind::Control) {
      throw vfa::ConfigError("baseline requires a control config (agent = \"control\")");
    }
    config.agent = vfa::AgentKind::Control;
    if (f.config_path.empty()) config.experiment_id = "baseline";
  }
  if (f.seed) config.seed = *f.seed;
  if (f.trials) config.trials = *f.trials;
  if (f.fail_threshold) config.fail_threshold = *f.fail_threshold;
  if (f.parallelism) config.parallelism = *f.parallelism;
  if (!f.out.empty()) config.output_path = f.out;
  if (config.output_path.empty()) throw vfa::ConfigError("no output path (--out or \"output\" in the config)");
  config.validate();
  return config;
}

void add_run_flags(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", f.config_path, "experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trials", f.trials, "number of hands");
  cmd->add_option("--fail-threshold", f.fail_threshold, "abort when this fraction of trials fails");
  cmd->add_option("-j,--parallelism", f.parallelism, "concurrent trials (0 = auto)");
  cmd->add_option("-o,--out", f.out, "trial log output path (JSONL)");
  cmd->add_flag("--resume", f.resume, "continue an interrupted log at --out");
}

int run_trials(const CommonFlags& f, bool baseline) {
  const auto config = build_config(f, baseline);
  vfa::RunOptions options;
  options.resume = f.resume;
  const auto log = baseline ? vfa::generate_baseline(config, options) : vfa::run_experiment(config, options);
  std::cerr << "wrote " << log.entries.size() << " trials (" << log.failure_count() << " failed) to "
            << config.output_path.string() << "\n";
  std::cerr << vfa::render_summary(vfa::summarize(log), config.experiment_id);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-shift harness for agent-controlled blackjack draws"};
  app.require_subcommand(1);

  CommonFlags baseline_flags, run_flags;
  auto* baseline = app.add_subcommand("baseline", "generate a control (shuffled deck) trial log");
  add_run_flags(baseline, baseline_flags, false);
  auto* run = app.add_subcommand("run", "run an experiment from a config");
  add_run_flags(run, run_flags, true);

  std::string observed_path, control_path, bundle_out;
  double alpha = vfa::kDefaultSmoothingAlpha;
  auto* analyze = app.add_subcommand("analyze", "compare an observed log against a control log");
  analyze->add_option("observed", observed_path, "observed trial log")->required();
  analyze->add_option("control", control_path, "control trial log")->required();
  analyze->add_option("-o,--out", bundle_out, "analysis bundle output (JSON; default stdout)");
  analyze->add_option("--alpha", alpha, "additive smoothing for KL")->check(CLI::NonNegativeNumber);

  std::string bundle_path, report_format = "table", report_out;
  auto* report = app.add_subcommand("report", "render an analysis bundle");
  report->add_option("bundle", bundle_path, "analysis bundle (JSON)")->required();
  report->add_option("-f,--format", report_format, "table | csv | json");
  report->add_option("-o,--out", report_out, "output path (default stdout)");

  std::vector<std::string> plot_logs;
  std::string plot_kind = "card-frequencies", plot_out;
  auto* plot = app.add_subcommand("plot-data", "normalized histogram series for external plotting");
  plot->add_option("logs", plot_logs, "trial logs")->required();
  plot->add_option("-k,--kind", plot_kind, "card-frequencies | hand-values");
  plot->add_option("-o,--out", plot_out, "output CSV (default stdout)");

  std::string summary_log, summary_format = "table";
  auto* summary = app.add_subcommand("summarize", "win/bust rates and average finals of a log");
  summary->add_option("log", summary_log, "trial log")->required();
  summary->add_option("-f,--format", summary_format, "table | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*baseline) return run_trials(baseline_flags, true);
    if (*run) return run_trials(run_flags, false);
    if (*analyze) {
      const auto observed = vfa::load_log(observed_path);
      const auto control = vfa::load_log(control_path);
      const auto bundle = vfa::analyze(observed, control, alpha, observed_path, control_path);
      if (bundle_out.empty()) {
        vfa::write_text("-", vfa::bundle_to_json(bundle).dump(2) + "\n");
      } else {
        vfa::save_bundle(bundle, bundle_out);
      }
      return 0;
    }
    if (*report) {
      const auto bundle = vfa::load_bundle(bundle_path);
      vfa::write_text(report_out, vfa::render_report(bundle, vfa::report_format_from_key(report_format)));
      return 0;
    }
    if (*plot) {
      std::vector<vfa::TrialLog> logs;
      for (const auto& p : plot_logs) logs.push_back(vfa::load_log(p));
      std::vector<vfa::LabeledLog> labeled;
      for (std::size_t i = 0; i < logs.size(); ++i) labeled.push_back({logs[i].config.experiment_id, &logs[i]});
      vfa::write_text(plot_out, vfa::render_plot_data(labeled, vfa::plot_kind_from_key(plot_kind)));
      return 0;
    }
    if (*summary) {
      const auto log = vfa::load_log(summary_log);
      const auto stats = vfa::summarize(log);
      if (summary_format == "json") {
        vfa::write_text("-", vfa::summary_to_json(stats).dump(2) + "\n");
      } else if (summary_format == "table") {
        vfa::write_text("-", vfa::render_summary(stats, log.config.experiment_id));
      } else {
        throw vfa::UsageError("summary format must be table or json");
      }
      return 0;
    }
  } catch (const vfa::DataQualityError& e) {
    std::cerr << "data-quality abort: " << e.what() << "\n";
    return kExitDataQuality;
  } catch (const vfa::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const vfa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
