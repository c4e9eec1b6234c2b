#pragma once

#include "rair/task.hpp"
#include "rair/templates.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace rair {

struct RetryPolicy {
  std::size_t max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  /// Delay before retry number `retry` (0-based).
  std::chrono::milliseconds backoff(std::size_t retry) const;
};

/// A chat-completion endpoint. `send` makes exactly one attempt and throws
/// TransportError for failures worth retrying. Implementations must be safe
/// to call from several threads.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string send(const std::string& prompt) = 0;
  virtual RetryPolicy retry_policy() const { return {}; }
};

/// One completion: retries transport failures with exponential backoff and
/// trims surrounding whitespace. Throws BackendError when retries run out and
/// EmptyOutputError for a blank completion.
std::string chat(const std::string& prompt, ChatBackend& backend);

/// Renders the task instruction for `input`. N-best candidates are joined
/// with ｜. A non-empty `context` is prepended as a numbered reference block.
std::string render_prompt(const CorrectionTask& input, std::span<const std::string> context,
                          const TemplateSet& templates = TemplateSet::builtin());

// ---------------------------------------------------------------------------
// Scripted mock

struct MockReply {
  enum class Kind { Text, TransientFailure, EchoInput };

  Kind kind = Kind::Text;
  std::string text;

  static MockReply reply(std::string text) { return {Kind::Text, std::move(text)}; }
  static MockReply failure() { return {Kind::TransientFailure, {}}; }
  /// Replies with the sentence after the instruction's closing marker
  /// (first candidate for N-best prompts).
  static MockReply echo_input() { return {Kind::EchoInput, {}}; }
};

enum class MockExhaustion { RepeatLast, Error };

/// Consumes canned replies strictly in call order.
class MockChatBackend : public ChatBackend {
 public:
  explicit MockChatBackend(std::vector<MockReply> script,
                           MockExhaustion exhaustion = MockExhaustion::Error);
  explicit MockChatBackend(const std::vector<std::string>& replies,
                           MockExhaustion exhaustion = MockExhaustion::Error);

  std::string send(const std::string& prompt) override;
  RetryPolicy retry_policy() const override { return retry_; }
  void set_retry_policy(RetryPolicy policy) { retry_ = policy; }

  std::size_t calls() const;
  std::vector<std::string> prompts() const;

 private:
  std::vector<MockReply> script_;
  MockExhaustion exhaustion_;
  RetryPolicy retry_{3, std::chrono::milliseconds{0}, 1.0, std::chrono::milliseconds{0}};
  mutable std::mutex mutex_;
  std::size_t next_ = 0;
  std::vector<std::string> prompts_;
};

/// Delegates each call to a function; handy for rule-based test doubles.
class CallbackChatBackend : public ChatBackend {
 public:
  using Handler = std::function<std::string(const std::string& prompt)>;
  explicit CallbackChatBackend(Handler handler) : handler_(std::move(handler)) {}

  std::string send(const std::string& prompt) override;
  RetryPolicy retry_policy() const override { return {0, {}, 1.0, {}}; }
  std::size_t calls() const;

 private:
  Handler handler_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

/// Extracts the input sentence from a rendered task prompt, as EchoInput does.
std::string extract_input_sentence(const std::string& prompt);

// ---------------------------------------------------------------------------
// OpenAI-compatible HTTP backend

struct ChatBackendConfig {
  /// Full URL of the chat-completions endpoint, e.g.
  /// https://api.example.com/v1/chat/completions
  std::string endpoint;
  std::string model;
  double timeout_seconds = 60.0;
  std::size_t max_retries = 3;
  double temperature = 0.0;
  /// Sent as a bearer token when non-empty.
  std::string api_key;

  void validate() const;
};

class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(ChatBackendConfig config);

  std::string send(const std::string& prompt) override;
  RetryPolicy retry_policy() const override;

  const ChatBackendConfig& config() const noexcept { return config_; }

 private:
  ChatBackendConfig config_;
};

}  // namespace rair
