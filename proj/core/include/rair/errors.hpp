#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rair {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a record or dataset invariant.
class DataError : public Error {
 public:
  DataError(const std::string& message, std::string item = {})
      : Error(item.empty() ? message : item + ": " + message), item_(std::move(item)) {}

  const std::string& item() const noexcept { return item_; }

 private:
  std::string item_;
};

/// Operation invoked on a task kind it does not support.
class TaskError : public Error {
 public:
  using Error::Error;
};

/// Missing or malformed configuration, including template assets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Retryable failure talking to a backend (connection reset, 5xx, 429).
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Non-retryable backend failure, or transient failures that exhausted retries.
class BackendError : public Error {
 public:
  BackendError(const std::string& message, std::size_t calls = 0)
      : Error(message), calls_(calls) {}

  /// Number of backend calls made before giving up.
  std::size_t calls() const noexcept { return calls_; }

 private:
  std::size_t calls_;
};

class EmptyOutputError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Corpus expansion failed for one term or sentence.
class ExpansionError : public Error {
 public:
  ExpansionError(const std::string& message, std::string subject)
      : Error(message + " [" + subject + "]"), subject_(std::move(subject)) {}

  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

}  // namespace rair
