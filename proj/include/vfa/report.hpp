#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfa/harness.hpp"
#include "vfa/stats.hpp"

namespace vfa {

struct SummaryStats {
  double player_win_rate = 0.0;
  double dealer_win_rate = 0.0;
  double tie_rate = 0.0;
  double dealer_bust_rate = 0.0;
  double average_player_final = 0.0;
  double average_dealer_final = 0.0;
  std::int64_t successes = 0;
  std::int64_t failed_trials = 0;
};

/// Rates and averages over successful trials. Throws UsageError if there are none.
SummaryStats summarize(const TrialLog& log);

inline constexpr double kDefaultSmoothingAlpha = 0.5;

struct ShiftReport {
  std::string label;
  bool rank_values = false;  // support holds rank ordinals rather than hand totals
  double kl = 0.0;  // D_KL(observed || control), nats, after smoothing
  std::optional<TestResult> chi_squared;
  std::vector<PooledBin> pooling;
  std::optional<TestResult> anderson_darling;
  Verdict verdict = Verdict::NoShift;
  std::optional<std::string> error;  // set when a test was degenerate
};

/// KL (smoothed), chi-squared against the control and the 2-sample AD test
/// on the underlying values. Degenerate tests are reported in `error` with
/// verdict no-shift rather than thrown.
ShiftReport compare_distributions(const EmpiricalDistribution& observed, const EmpiricalDistribution& control,
                                  double smoothing_alpha = kDefaultSmoothingAlpha);

struct LogProvenance {
  std::string path;
  std::string experiment_id;
  std::string config_hash;
  nlohmann::ordered_json config;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t failures = 0;
};

struct AnalysisBundle {
  std::vector<ShiftReport> reports;  // player cards, dealer cards, player totals, dealer totals
  SummaryStats observed;
  SummaryStats control;
  LogProvenance observed_log;
  LogProvenance control_log;
  double smoothing_alpha = kDefaultSmoothingAlpha;
};

AnalysisBundle analyze(const TrialLog& observed, const TrialLog& control,
                       double smoothing_alpha = kDefaultSmoothingAlpha, const std::string& observed_path = {},
                       const std::string& control_path = {});

nlohmann::ordered_json summary_to_json(const SummaryStats& s);
nlohmann::ordered_json bundle_to_json(const AnalysisBundle& bundle);
AnalysisBundle bundle_from_json(const nlohmann::json& j);
void save_bundle(const AnalysisBundle& bundle, const std::filesystem::path& path);
AnalysisBundle load_bundle(const std::filesystem::path& path);

/// "***" for p <= 0.001, "**" for p <= 0.01, "*" for p <= 0.05, else "".
std::string significance_stars(double p);
std::string format_kl(double kl);          // 3 decimals
std::string format_statistic(double x);    // 3 significant figures, no exponent
std::string format_p_value(double p);      // 4 decimals, "<0.0001" floor

enum class ReportFormat { Table, Csv, Json };
ReportFormat report_format_from_key(std::string_view key);

std::string render_report(const AnalysisBundle& bundle, ReportFormat format);
std::string render_summary(const SummaryStats& stats, const std::string& label);

enum class PlotKind { CardFrequencies, HandValues };
PlotKind plot_kind_from_key(std::string_view key);

struct LabeledLog {
  std::string label;
  const TrialLog* log = nullptr;
};

/// One row per (log, actor): normalized frequencies over the shared support
/// (13 ranks or totals 4..26). Throws UsageError on an empty list.
std::string render_plot_data(std::span<const LabeledLog> logs, PlotKind kind);

/// Writes text to path, or to stdout when path is empty or "-". Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vfa
