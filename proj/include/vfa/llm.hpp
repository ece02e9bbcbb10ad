#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "vfa/agents.hpp"
#include "vfa/errors.hpp"

namespace vfa {

struct LlmSourceConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model;
  double temperature = 0.0;
  ShotMode shot_mode = ShotMode::Zero;
  int max_retries = 3;
  double requests_per_second = 0.0;  // 0 = unlimited
  double timeout_seconds = 60.0;
  std::string api_key_env = "OPENAI_API_KEY";  // name of the variable, never the key
  int max_in_flight = 1;

  /// Throws ConfigError.
  void validate() const;
};

struct ChatRequest {
  std::string correlation_id;
  std::string model;
  double temperature = 0.0;
  std::string prompt;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

/// One chat-completion round trip. Implementations must be safe to call from
/// several threads at once.
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  /// Returns the assistant message text. Throws TransportError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

/// OpenAI-compatible `POST {base_url}/chat/completions`.
class HttpChatTransport final : public ChatTransport {
 public:
  /// Reads the bearer token from config.api_key_env (may be unset for local servers).
  explicit HttpChatTransport(const LlmSourceConfig& config);
  std::string complete(const ChatRequest& request) override;

  static std::string request_body(const ChatRequest& request);
  /// Extracts choices[0].message.content. Throws TransportError.
  static std::string response_text(const std::string& body);

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // base path + /chat/completions
  std::string token_;
  double timeout_seconds_;
};

/// Spaces request starts at least 1/rate seconds apart across all callers.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  std::mutex mutex_;
  Clock::duration interval_{};
  Clock::time_point next_{};
};

/// Draws each card by prompting a chat model with the dealer template.
/// Parse and transport errors are retried with the identical prompt up to
/// max_retries times; after that draw() throws DrawFailure carrying every
/// raw response.
class LlmSource final : public DrawSource {
 public:
  LlmSource(LlmSourceConfig config, std::shared_ptr<ChatTransport> transport,
            std::shared_ptr<RateLimiter> limiter = nullptr, std::string correlation_prefix = "draw");

  Rank draw(const GameState& state) override;
  void reset() override;
  std::string agent_id() const override;
  std::vector<std::string> take_responses() override;

  std::int64_t request_count() const noexcept { return requests_; }

 private:
  LlmSourceConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  std::string prefix_;
  std::vector<std::string> responses_;
  std::int64_t requests_ = 0;
  std::int64_t draw_counter_ = 0;
};

}  // namespace vfa
