#include "vfa/llm.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace vfa {

using json = nlohmann::json;

void LlmSourceConfig::validate() const {
  if (model.empty()) throw ConfigError("llm: model identifier is empty");
  if (base_url.empty()) throw ConfigError("llm: base_url is empty");
  if (!std::isfinite(temperature) || temperature < 0.0) throw ConfigError("llm: temperature must be >= 0");
  if (max_retries < 0) throw ConfigError("llm: max_retries must be >= 0");
  if (!std::isfinite(requests_per_second) || requests_per_second < 0.0) {
    throw ConfigError("llm: requests_per_second must be >= 0");
  }
  if (!(timeout_seconds > 0.0)) throw ConfigError("llm: timeout_seconds must be > 0");
  if (max_in_flight < 1) throw ConfigError("llm: max_in_flight must be >= 1");
}

// ---- HTTP transport --------------------------------------------------------

HttpChatTransport::HttpChatTransport(const LlmSourceConfig& config)
    : timeout_seconds_(config.timeout_seconds) {
  const auto scheme_end = config.base_url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("llm: base_url needs a scheme: " + config.base_url);
  const auto path_start = config.base_url.find('/', scheme_end + 3);
  origin_ = config.base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : config.base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/chat/completions";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (origin_.rfind("https://", 0) == 0) throw ConfigError("llm: built without TLS support; use http://");
#endif
  if (!config.api_key_env.empty()) {
    if (const char* v = std::getenv(config.api_key_env.c_str())) token_ = v;
  }
}

std::string HttpChatTransport::request_body(const ChatRequest& request) {
  json body = {
      {"model", request.model},
      {"temperature", request.temperature},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
  };
  return body.dump();
}

std::string HttpChatTransport::response_text(const std::string& body) {
  try {
    const auto j = json::parse(body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
}

std::string HttpChatTransport::complete(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  const auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers{{"X-Request-Id", request.correlation_id}};
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  auto res = client.Post(path_, headers, request_body(request), "application/json");
  if (!res) throw TransportError("request " + request.correlation_id + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("request " + request.correlation_id + " returned HTTP " + std::to_string(res->status));
  }
  return response_text(res->body);
}

// ---- rate limiter ----------------------------------------------------------

RateLimiter::RateLimiter(double requests_per_second) {
  if (requests_per_second > 0.0) {
    interval_ = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / requests_per_second));
  }
}

void RateLimiter::acquire() {
  if (interval_ == Clock::duration::zero()) return;
  Clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = Clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

// ---- LLM draw source -------------------------------------------------------

LlmSource::LlmSource(LlmSourceConfig config, std::shared_ptr<ChatTransport> transport,
                     std::shared_ptr<RateLimiter> limiter, std::string correlation_prefix)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      limiter_(std::move(limiter)),
      prefix_(std::move(correlation_prefix)) {
  config_.validate();
  if (!transport_) throw ConfigError("llm: no transport");
}

void LlmSource::reset() {
  responses_.clear();
  draw_counter_ = 0;
}

std::string LlmSource::agent_id() const {
  return "llm:" + config_.model + ":" + std::string(shot_mode_key(config_.shot_mode)) + ":t" +
         json(config_.temperature).dump();
}

std::vector<std::string> LlmSource::take_responses() { return std::exchange(responses_, {}); }

Rank LlmSource::draw(const GameState& state) {
  ChatRequest request;
  request.model = config_.model;
  request.temperature = config_.temperature;
  request.prompt = render_prompt(prompt_template(config_.shot_mode), state);

  const auto draw_no = draw_counter_++;
  std::vector<std::string> attempts;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    request.correlation_id = prefix_ + "-d" + std::to_string(draw_no) + "-a" + std::to_string(attempt);
    if (limiter_) limiter_->acquire();
    ++requests_;
    std::string text;
    try {
      text = transport_->complete(request);
    } catch (const TransportError& e) {
      last_error = e.what();
      attempts.push_back("<transport error: " + last_error + ">");
      continue;
    }
    attempts.push_back(text);
    try {
      const Rank r = parse_rank(text);
      responses_.insert(responses_.end(), attempts.begin(), attempts.end());
      return r;
    } catch (const ParseError& e) {
      last_error = e.what();
    }
  }
  responses_.insert(responses_.end(), attempts.begin(), attempts.end());
  throw DrawFailure("llm draw failed after " + std::to_string(attempts.size()) + " attempts: " + last_error,
                    std::move(attempts));
}

}  // namespace vfa
