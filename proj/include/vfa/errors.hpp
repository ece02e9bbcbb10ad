#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vfa {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (empty input, out-of-support value, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or agent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Too many failed trials; the collected data cannot be trusted.
class DataQualityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible trial log / bundle file.
class LoadError : public IoError {
 public:
  using IoError::IoError;
};

/// A statistical test has no meaningful answer for the given input.
class TestDegenerateError : public Error {
 public:
  using Error::Error;
};

/// KL divergence with q_i = 0 where p_i > 0.
class DivergenceUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Agent response did not contain a recognizable rank.
class ParseError : public Error {
 public:
  explicit ParseError(std::string raw)
      : Error("no recognizable rank in response: \"" + raw + "\""), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// A draw source could not produce a card (retries exhausted, transport down).
class DrawFailure : public Error {
 public:
  DrawFailure(const std::string& reason, std::vector<std::string> raw_responses)
      : Error(reason), raw_responses_(std::move(raw_responses)) {}
  const std::vector<std::string>& raw_responses() const noexcept { return raw_responses_; }

 private:
  std::vector<std::string> raw_responses_;
};

}  // namespace vfa
