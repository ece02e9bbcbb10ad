#include "vfa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "vfa/errors.hpp"
#include "vfa/random.hpp"

namespace vfa {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---- config ----------------------------------------------------------------

std::string_view agent_kind_key(AgentKind k) noexcept {
  switch (k) {
    case AgentKind::Control: return "control";
    case AgentKind::Biased: return "biased";
    case AgentKind::Llm: return "llm";
  }
  return "control";
}

AgentKind agent_kind_from_key(std::string_view key) {
  if (key == "control") return AgentKind::Control;
  if (key == "biased") return AgentKind::Biased;
  if (key == "llm") return AgentKind::Llm;
  throw ConfigError("agent must be one of control, biased, llm; got \"" + std::string(key) + "\"");
}

void ExperimentConfig::validate() const {
  if (experiment_id.empty()) throw ConfigError("experiment_id is empty");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(fail_threshold >= 0.0 && fail_threshold <= 1.0)) throw ConfigError("fail_threshold must lie in [0, 1]");
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (agent == AgentKind::Biased) normalize_weights(weights);
  if (agent == AgentKind::Llm) llm.validate();
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment_id"] = c.experiment_id;
  j["agent"] = agent_kind_key(c.agent);
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["fail_threshold"] = c.fail_threshold;
  if (c.agent == AgentKind::Biased) {
    ordered_json w;
    for (Rank r : kAllRanks) w[std::string(rank_key(r))] = c.weights[rank_index(r)];
    j["weights"] = w;
  }
  if (c.agent == AgentKind::Llm) {
    const auto& l = c.llm;
    j["llm"] = ordered_json{
        {"base_url", l.base_url},
        {"model", l.model},
        {"temperature", l.temperature},
        {"shot_mode", shot_mode_key(l.shot_mode)},
        {"max_retries", l.max_retries},
        {"requests_per_second", l.requests_per_second},
        {"timeout_seconds", l.timeout_seconds},
        {"api_key_env", l.api_key_env},
        {"max_in_flight", l.max_in_flight},
    };
  }
  return j;
}

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field \"") + key + "\": " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  read_opt(j, "experiment_id", c.experiment_id);
  std::string agent = "control";
  read_opt(j, "agent", agent);
  c.agent = agent_kind_from_key(agent);
  read_opt(j, "trials", c.trials);
  read_opt(j, "seed", c.seed);
  read_opt(j, "fail_threshold", c.fail_threshold);
  read_opt(j, "parallelism", c.parallelism);
  if (j.contains("output")) c.output_path = j.at("output").get<std::string>();
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    RankWeights weights{};
    if (w.is_array()) {
      if (w.size() != kRankCount) throw ConfigError("weights array must have 13 entries");
      for (std::size_t i = 0; i < kRankCount; ++i) weights[i] = w.at(i).get<double>();
    } else if (w.is_object()) {
      for (const auto& [key, value] : w.items()) {
        const auto r = rank_from_key(key);
        if (!r) throw ConfigError("unknown rank in weights: \"" + key + "\"");
        weights[rank_index(*r)] = value.get<double>();
      }
    } else {
      throw ConfigError("weights must be an array or an object keyed by rank");
    }
    c.weights = weights;
  }
  if (j.contains("llm")) {
    const auto& l = j.at("llm");
    read_opt(l, "base_url", c.llm.base_url);
    read_opt(l, "model", c.llm.model);
    read_opt(l, "temperature", c.llm.temperature);
    std::string mode = "zero";
    read_opt(l, "shot_mode", mode);
    c.llm.shot_mode = shot_mode_from_key(mode);
    read_opt(l, "max_retries", c.llm.max_retries);
    read_opt(l, "requests_per_second", c.llm.requests_per_second);
    read_opt(l, "timeout_seconds", c.llm.timeout_seconds);
    read_opt(l, "api_key_env", c.llm.api_key_env);
    read_opt(l, "max_in_flight", c.llm.max_in_flight);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- log model -------------------------------------------------------------

std::int64_t trial_index_of(const TrialEntry& e) noexcept {
  return std::visit([](const auto& v) { return v.trial_index; }, e);
}

std::vector<HandRecord> TrialLog::hands() const {
  std::vector<HandRecord> out;
  for (const auto& e : entries) {
    if (const auto* h = std::get_if<HandRecord>(&e)) out.push_back(*h);
  }
  return out;
}

std::int64_t TrialLog::success_count() const noexcept {
  return std::count_if(entries.begin(), entries.end(),
                       [](const TrialEntry& e) { return std::holds_alternative<HandRecord>(e); });
}

std::int64_t TrialLog::failure_count() const noexcept {
  return static_cast<std::int64_t>(entries.size()) - success_count();
}

// ---- serialization ---------------------------------------------------------

namespace {

ordered_json ranks_to_json(const std::vector<Rank>& cards) {
  auto a = ordered_json::array();
  for (Rank r : cards) a.push_back(rank_key(r));
  return a;
}

std::vector<Rank> ranks_from_json(const json& a) {
  std::vector<Rank> out;
  for (const auto& v : a) {
    const auto key = v.get<std::string>();
    const auto r = rank_from_key(key);
    if (!r) throw UsageError("unknown rank \"" + key + "\"");
    out.push_back(*r);
  }
  return out;
}

ordered_json header_json(const TrialLog& log) {
  return ordered_json{{"schema_version", log.schema_version},
                      {"experiment_id", log.config.experiment_id},
                      {"config", config_to_json(log.config)},
                      {"config_hash", log.config_hash}};
}

TrialLog log_from_header(const json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw UsageError("missing header (no schema_version)");
  TrialLog log;
  log.schema_version = j.at("schema_version").get<int>();
  if (log.schema_version != kLogSchemaVersion) {
    throw UsageError("schema version " + std::to_string(log.schema_version) + " is not supported (expected " +
                     std::to_string(kLogSchemaVersion) + ")");
  }
  log.config = config_from_json(j.at("config"));
  log.config_hash = j.at("config_hash").get<std::string>();
  if (log.config_hash != config_hash(log.config)) {
    throw UsageError("config_hash " + log.config_hash + " does not match embedded config (" +
                     config_hash(log.config) + ")");
  }
  return log;
}

TrialEntry entry_from_json(const json& j) {
  const auto index = j.at("trial_index").get<std::int64_t>();
  if (j.contains("failure")) {
    const auto& f = j.at("failure");
    return TrialFailure{index, f.at("reason").get<std::string>(),
                        f.at("raw_responses").get<std::vector<std::string>>()};
  }
  HandRecord h;
  h.trial_index = index;
  h.player_cards = ranks_from_json(j.at("player_cards"));
  h.dealer_cards = ranks_from_json(j.at("dealer_cards"));
  h.player_final = j.at("player_final").get<int>();
  h.dealer_final = j.at("dealer_final").get<int>();
  h.outcome = outcome_from_key(j.at("outcome").get<std::string>());
  for (const auto& d : j.at("draws")) {
    const auto rank = rank_from_key(d.at("rank").get<std::string>());
    if (!rank) throw UsageError("unknown rank in draws");
    h.draws.push_back({actor_from_key(d.at("actor").get<std::string>()), *rank});
  }
  const auto& agent = j.at("agent");
  h.agent_id = agent.at("id").get<std::string>();
  h.raw_responses = agent.at("raw_responses").get<std::vector<std::string>>();

  if (h.player_cards.empty() || h.dealer_cards.empty()) throw UsageError("empty hand");
  if (hand_value(h.player_cards).total != h.player_final || hand_value(h.dealer_cards).total != h.dealer_final) {
    throw UsageError("final totals do not match the card sequences");
  }
  if (h.draws.size() != h.player_cards.size() + h.dealer_cards.size()) {
    throw UsageError("draw log length does not match the hands");
  }
  return h;
}

}  // namespace

std::string header_line(const TrialLog& log) { return header_json(log).dump(); }

std::string entry_line(const TrialEntry& entry) {
  ordered_json j;
  if (const auto* f = std::get_if<TrialFailure>(&entry)) {
    j["trial_index"] = f->trial_index;
    j["failure"] = ordered_json{{"reason", f->reason}, {"raw_responses", f->raw_responses}};
    return j.dump();
  }
  const auto& h = std::get<HandRecord>(entry);
  j["trial_index"] = h.trial_index;
  j["player_cards"] = ranks_to_json(h.player_cards);
  j["dealer_cards"] = ranks_to_json(h.dealer_cards);
  j["player_final"] = h.player_final;
  j["dealer_final"] = h.dealer_final;
  j["outcome"] = outcome_key(h.outcome);
  auto draws = ordered_json::array();
  for (const auto& d : h.draws) draws.push_back(ordered_json{{"actor", actor_key(d.actor)}, {"rank", rank_key(d.rank)}});
  j["draws"] = std::move(draws);
  j["agent"] = ordered_json{{"id", h.agent_id}, {"raw_responses", h.raw_responses}};
  return j.dump();
}

std::string serialize_log(const TrialLog& log) {
  std::string out = header_line(log);
  out += '\n';
  for (const auto& e : log.entries) {
    out += entry_line(e);
    out += '\n';
  }
  return out;
}

namespace {

struct ParsedLog {
  TrialLog log;
  bool truncated_tail = false;  // last line incomplete (only tolerated when lenient)
  std::size_t valid_bytes = 0;
};

ParsedLog parse_log_impl(const std::string& text, bool lenient_tail) {
  ParsedLog result;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string line = text.substr(pos, (terminated ? nl : text.size()) - pos);
    ++line_no;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    try {
      if (!terminated) throw UsageError("incomplete line (missing newline)");
      const json j = json::parse(line);
      if (!have_header) {
        result.log = log_from_header(j);
        have_header = true;
      } else {
        auto entry = entry_from_json(j);
        const auto expected = static_cast<std::int64_t>(result.log.entries.size());
        if (trial_index_of(entry) != expected) {
          throw UsageError("trial_index " + std::to_string(trial_index_of(entry)) + " out of order (expected " +
                           std::to_string(expected) + ")");
        }
        result.log.entries.push_back(std::move(entry));
      }
    } catch (const std::exception& e) {
      const bool last = !terminated || nl + 1 == text.size();
      if (lenient_tail && last && have_header) {
        result.truncated_tail = true;
        return result;
      }
      throw LoadError(where() + e.what());
    }
    pos = nl + 1;
    result.valid_bytes = pos;
  }
  if (!have_header) throw LoadError("line 1: missing header");
  if (static_cast<std::int64_t>(result.log.entries.size()) > result.log.config.trials) {
    throw LoadError("log holds more trials than configured");
  }
  return result;
}

}  // namespace

TrialLog parse_log(const std::string& text) { return parse_log_impl(text, false).log; }

void save_log(const TrialLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize_log(log);
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TrialLog load_log(const std::filesystem::path& path) {
  try {
    return parse_log(read_file(path));
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

// ---- running ---------------------------------------------------------------

std::unique_ptr<DrawSource> make_source(const ExperimentConfig& config, std::int64_t trial_index,
                                        const std::shared_ptr<ChatTransport>& transport,
                                        const std::shared_ptr<RateLimiter>& limiter) {
  const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial_index));
  switch (config.agent) {
    case AgentKind::Control: return std::make_unique<DeckControlSource>(seed);
    case AgentKind::Biased: return std::make_unique<BiasedSource>(config.weights, seed, config.experiment_id);
    case AgentKind::Llm:
      if (!transport) throw ConfigError("llm agent requires a transport");
      return std::make_unique<LlmSource>(config.llm, transport, limiter, "t" + std::to_string(trial_index));
  }
  throw ConfigError("unknown agent kind");
}

namespace {

class TrialRunner {
 public:
  TrialRunner(const ExperimentConfig& config, const RunOptions& options) : config_(config), options_(options) {
    config_.validate();
    log_.config = config_;
    log_.config_hash = config_hash(config_);
    if (config_.agent == AgentKind::Llm) {
      transport_ = options_.transport ? options_.transport : std::make_shared<HttpChatTransport>(config_.llm);
      limiter_ = std::make_shared<RateLimiter>(config_.llm.requests_per_second);
    }
  }

  TrialLog run() {
    open_output();
    commit_ = static_cast<std::int64_t>(log_.entries.size());
    failures_ = log_.failure_count();
    check_quality();
    next_ = commit_;

    const auto width = worker_count();
    if (width <= 1) {
      work();
    } else {
      std::vector<std::jthread> workers;
      workers.reserve(width);
      for (std::size_t i = 0; i < width; ++i) workers.emplace_back([this] { work(); });
    }
    if (error_) std::rethrow_exception(error_);
    check_quality();
    return std::move(log_);
  }

 private:
  std::size_t worker_count() const {
    std::size_t width = config_.parallelism > 0 ? static_cast<std::size_t>(config_.parallelism) : 0;
    if (width == 0) {
      width = config_.agent == AgentKind::Llm ? static_cast<std::size_t>(config_.llm.max_in_flight)
                                              : std::max(1u, std::thread::hardware_concurrency());
    }
    const auto remaining = static_cast<std::size_t>(config_.trials - commit_);
    return std::min(width, std::max<std::size_t>(remaining, 1));
  }

  void open_output() {
    if (config_.output_path.empty()) return;
    const auto& path = config_.output_path;
    if (options_.resume && std::filesystem::exists(path)) {
      ParsedLog existing;
      try {
        existing = parse_log_impl(read_file(path), true);
      } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
      }
      if (existing.log.config_hash != log_.config_hash) {
        throw ConfigError("cannot resume " + path.string() + ": it was produced by config " +
                          existing.log.config_hash + ", not " + log_.config_hash);
      }
      log_.entries = std::move(existing.log.entries);
    }
    // Rewrite the committed prefix; drops any torn final line.
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << serialize_log(log_);
    out_.flush();
    if (!out_) throw IoError("write failed for " + path.string());
  }

  void check_quality() const {
    const double limit = config_.fail_threshold * static_cast<double>(config_.trials);
    if (static_cast<double>(failures_) > limit) {
      throw DataQualityError(std::to_string(failures_) + " of " + std::to_string(config_.trials) +
                             " trials failed, above the " + std::to_string(config_.fail_threshold) +
                             " threshold; aborting");
    }
  }

  void work() {
    try {
      for (;;) {
        if (stop_.load()) return;
        const std::int64_t i = next_.fetch_add(1);
        if (i >= config_.trials) return;
        auto source = make_source(config_, i, transport_, limiter_);
        TrialEntry entry;
        try {
          entry = play_hand(*source, i);
        } catch (const DrawFailure& f) {
          entry = TrialFailure{i, f.what(), f.raw_responses()};
        }
        commit(i, std::move(entry));
      }
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
      stop_ = true;
    }
  }

  void commit(std::int64_t index, TrialEntry entry) {
    std::lock_guard lock(mutex_);
    if (std::holds_alternative<TrialFailure>(entry)) {
      ++failures_;
      if (static_cast<double>(failures_) > config_.fail_threshold * static_cast<double>(config_.trials)) {
        stop_ = true;
      }
    }
    pending_.emplace(index, std::move(entry));
    for (auto it = pending_.find(commit_); it != pending_.end(); it = pending_.find(commit_)) {
      if (out_.is_open()) {
        out_ << entry_line(it->second) << '\n';
        out_.flush();
        if (!out_) throw IoError("write failed for " + config_.output_path.string());
      }
      if (options_.on_trial) options_.on_trial(it->second);
      log_.entries.push_back(std::move(it->second));
      pending_.erase(it);
      ++commit_;
    }
  }

  ExperimentConfig config_;
  const RunOptions& options_;
  TrialLog log_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  std::ofstream out_;

  std::mutex mutex_;
  std::map<std::int64_t, TrialEntry> pending_;
  std::atomic<std::int64_t> next_{0};
  std::atomic<bool> stop_{false};
  std::int64_t commit_ = 0;
  std::int64_t failures_ = 0;
  std::exception_ptr error_;
};

}  // namespace

TrialLog generate_baseline(const ExperimentConfig& config, const RunOptions& options) {
  if (config.agent != AgentKind::Control) throw UsageError("generate_baseline requires agent kind control");
  return TrialRunner(config, options).run();
}

TrialLog run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  if (config.agent == AgentKind::Control) return generate_baseline(config, options);
  return TrialRunner(config, options).run();
}

std::vector<std::int64_t> verify_replay(const TrialLog& log) {
  std::vector<std::int64_t> bad;
  for (const auto& e : log.entries) {
    const auto* h = std::get_if<HandRecord>(&e);
    if (!h) continue;
    try {
      if (replay_hand(*h) != *h) bad.push_back(h->trial_index);
    } catch (const Error&) {
      bad.push_back(h->trial_index);
    }
  }
  return bad;
}

// ---- distributions ---------------------------------------------------------

std::vector<std::int64_t> rank_support() {
  std::vector<std::int64_t> s(kRankCount);
  for (std::size_t i = 0; i < kRankCount; ++i) s[i] = static_cast<std::int64_t>(i);
  return s;
}

std::vector<std::int64_t> hand_total_support() {
  std::vector<std::int64_t> s;
  for (auto t = kHandTotalMin; t <= kHandTotalMax; ++t) s.push_back(t);
  return s;
}

OutcomeDistributions extract_distributions(const TrialLog& log) {
  std::vector<std::int64_t> player_cards, dealer_cards, player_totals, dealer_totals;
  for (const auto& e : log.entries) {
    const auto* h = std::get_if<HandRecord>(&e);
    if (!h) continue;
    for (Rank r : h->player_cards) player_cards.push_back(static_cast<std::int64_t>(rank_index(r)));
    for (Rank r : h->dealer_cards) dealer_cards.push_back(static_cast<std::int64_t>(rank_index(r)));
    player_totals.push_back(h->player_final);
    dealer_totals.push_back(h->dealer_final);
  }
  if (player_totals.empty()) throw UsageError("extract_distributions: log has no successful trials");
  return {build_distribution(player_cards, rank_support(), "player card frequencies"),
          build_distribution(dealer_cards, rank_support(), "dealer card frequencies"),
          build_distribution(player_totals, hand_total_support(), "player final hand values"),
          build_distribution(dealer_totals, hand_total_support(), "dealer final hand values")};
}

}  // namespace vfa
