#include "rair/llm.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace rair {
namespace {

constexpr std::string_view kInstructionMarker = "现在请纠正下列句子：";

}  // namespace

std::chrono::milliseconds RetryPolicy::backoff(std::size_t retry) const {
  const double scaled =
      static_cast<double>(initial_backoff.count()) * std::pow(multiplier, static_cast<double>(retry));
  const auto capped = std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

std::string chat(const std::string& prompt, ChatBackend& backend) {
  const auto policy = backend.retry_policy();
  const std::size_t attempts = policy.max_retries + 1;
  std::string last_error;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto delay = policy.backoff(attempt - 1);
      if (delay.count() > 0) {
        std::this_thread::sleep_for(delay);
      }
    }
    try {
      auto reply = trim(backend.send(prompt));
      if (reply.empty()) {
        throw EmptyOutputError("backend returned an empty completion", attempt + 1);
      }
      return reply;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw BackendError("backend failed after " + std::to_string(attempts) +
                         " attempts: " + last_error,
                     attempts);
}

std::string render_prompt(const CorrectionTask& input, std::span<const std::string> context,
                          const TemplateSet& templates) {
  const auto& instruction = templates.prompt(input.task);
  const std::string sentence =
      input.task == TaskKind::NBest ? join_candidates(input.candidates) : input.source;
  std::string out;
  if (!context.empty()) {
    out += templates.context_header;
    out += '\n';
    for (std::size_t i = 0; i < context.size(); ++i) {
      out += std::to_string(i + 1);
      out += ". ";
      out += context[i];
      out += '\n';
    }
    out += '\n';
  }
  out += instruction.fill(sentence);
  return out;
}

std::string extract_input_sentence(const std::string& prompt) {
  const auto marker = prompt.find(kInstructionMarker);
  if (marker == std::string::npos) {
    return trim(prompt);
  }
  const auto begin = marker + kInstructionMarker.size();
  const auto end = prompt.find('\n', begin);
  std::string sentence = prompt.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
  const auto separator = sentence.find(kCandidateSeparator);
  if (separator != std::string::npos) {
    sentence.resize(separator);
  }
  return trim(sentence);
}

MockChatBackend::MockChatBackend(std::vector<MockReply> script, MockExhaustion exhaustion)
    : script_(std::move(script)), exhaustion_(exhaustion) {
  if (script_.empty() && exhaustion_ == MockExhaustion::RepeatLast) {
    throw ArgumentError("repeat-last mock needs at least one scripted reply");
  }
}

MockChatBackend::MockChatBackend(const std::vector<std::string>& replies, MockExhaustion exhaustion)
    : MockChatBackend(
          [&replies] {
            std::vector<MockReply> script;
            script.reserve(replies.size());
            for (const auto& r : replies) script.push_back(MockReply::reply(r));
            return script;
          }(),
          exhaustion) {}

std::string MockChatBackend::send(const std::string& prompt) {
  MockReply reply;
  std::size_t call = 0;
  {
    std::lock_guard lock(mutex_);
    prompts_.push_back(prompt);
    call = prompts_.size();
    if (next_ < script_.size()) {
      reply = script_[next_++];
    } else if (exhaustion_ == MockExhaustion::RepeatLast) {
      reply = script_.back();
    } else {
      throw BackendError("mock script exhausted at call " + std::to_string(call), call);
    }
  }
  switch (reply.kind) {
    case MockReply::Kind::TransientFailure:
      throw TransportError("scripted transient failure at call " + std::to_string(call));
    case MockReply::Kind::EchoInput:
      return extract_input_sentence(prompt);
    case MockReply::Kind::Text:
      break;
  }
  return reply.text;
}

std::size_t MockChatBackend::calls() const {
  std::lock_guard lock(mutex_);
  return prompts_.size();
}

std::vector<std::string> MockChatBackend::prompts() const {
  std::lock_guard lock(mutex_);
  return prompts_;
}

std::string CallbackChatBackend::send(const std::string& prompt) {
  {
    std::lock_guard lock(mutex_);
    ++calls_;
  }
  return handler_(prompt);
}

std::size_t CallbackChatBackend::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

}  // namespace rair
