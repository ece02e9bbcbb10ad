#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vfa/agents.hpp"
#include "vfa/engine.hpp"
#include "vfa/llm.hpp"
#include "vfa/stats.hpp"

namespace vfa {

inline constexpr int kLogSchemaVersion = 1;
inline constexpr std::int64_t kDefaultTrials = 1000;
inline constexpr double kDefaultFailThreshold = 0.2;

enum class AgentKind : std::uint8_t { Control, Biased, Llm };

std::string_view agent_kind_key(AgentKind k) noexcept;
AgentKind agent_kind_from_key(std::string_view key);

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  AgentKind agent = AgentKind::Control;
  RankWeights weights = uniform_weights();  // biased agents only
  LlmSourceConfig llm;                      // llm agents only (shot mode, temperature, ...)
  std::int64_t trials = kDefaultTrials;
  std::uint64_t seed = 0;  // recorded even when the agent does not use it
  double fail_threshold = kDefaultFailThreshold;

  // Runtime options; not part of the experiment's identity or hash.
  int parallelism = 0;  // 0 = hardware concurrency (llm: llm.max_in_flight)
  std::filesystem::path output_path;

  /// Throws ConfigError.
  void validate() const;
};

/// Identity fields only (no runtime options), in a fixed key order.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
/// Accepts identity fields plus optional "parallelism" and "output".
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// 16 hex digits of FNV-1a over the canonical identity JSON.
std::string config_hash(const ExperimentConfig& config);

struct TrialFailure {
  std::int64_t trial_index = 0;
  std::string reason;
  std::vector<std::string> raw_responses;
  friend bool operator==(const TrialFailure&, const TrialFailure&) = default;
};

using TrialEntry = std::variant<HandRecord, TrialFailure>;

std::int64_t trial_index_of(const TrialEntry& e) noexcept;

struct TrialLog {
  int schema_version = kLogSchemaVersion;
  ExperimentConfig config;
  std::string config_hash;
  std::vector<TrialEntry> entries;  // ordered by trial index, contiguous from 0

  std::vector<HandRecord> hands() const;
  std::int64_t success_count() const noexcept;
  std::int64_t failure_count() const noexcept;
  bool complete() const noexcept { return static_cast<std::int64_t>(entries.size()) == config.trials; }

  friend bool operator==(const TrialLog& a, const TrialLog& b) {
    return a.schema_version == b.schema_version && a.config_hash == b.config_hash && a.entries == b.entries &&
           config_to_json(a.config) == config_to_json(b.config);
  }
};

std::string header_line(const TrialLog& log);
std::string entry_line(const TrialEntry& entry);

/// Line-delimited text: header line, then one line per trial.
std::string serialize_log(const TrialLog& log);
/// Strict parse. Throws LoadError naming the line on any defect.
TrialLog parse_log(const std::string& text);

/// Throws IoError.
void save_log(const TrialLog& log, const std::filesystem::path& path);
/// Throws LoadError / IoError.
TrialLog load_log(const std::filesystem::path& path);

struct RunOptions {
  /// Continue an interrupted run at config.output_path from the first missing trial.
  bool resume = false;
  /// Transport for llm agents; defaults to HttpChatTransport.
  std::shared_ptr<ChatTransport> transport;
  /// Called after each trial is committed, in trial order.
  std::function<void(const TrialEntry&)> on_trial;
};

/// Control run: one fresh shuffled deck per hand, seeded from (seed, trial index).
/// Throws UsageError if config.agent is not Control.
TrialLog generate_baseline(const ExperimentConfig& config, const RunOptions& options = {});

/// Runs any agent kind. Records are appended to config.output_path (when set)
/// in trial order as they complete. Throws DataQualityError when failed
/// trials exceed fail_threshold * trials.
TrialLog run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Fresh draw source for one trial of a non-llm experiment.
std::unique_ptr<DrawSource> make_source(const ExperimentConfig& config, std::int64_t trial_index,
                                        const std::shared_ptr<ChatTransport>& transport = nullptr,
                                        const std::shared_ptr<RateLimiter>& limiter = nullptr);

/// Trial indices whose stored finals/outcome differ from an engine replay.
std::vector<std::int64_t> verify_replay(const TrialLog& log);

inline constexpr std::int64_t kHandTotalMin = 4;
inline constexpr std::int64_t kHandTotalMax = 26;

std::vector<std::int64_t> rank_support();        // ordinals 0..12 (2..10, J, Q, K, A)
std::vector<std::int64_t> hand_total_support();  // 4..26

struct OutcomeDistributions {
  EmpiricalDistribution player_cards;
  EmpiricalDistribution dealer_cards;
  EmpiricalDistribution player_totals;
  EmpiricalDistribution dealer_totals;
};

/// Card tallies per actor (every drawn card) and one final total per hand per
/// actor, over successful trials. Throws UsageError when there are none.
OutcomeDistributions extract_distributions(const TrialLog& log);

}  // namespace vfa
