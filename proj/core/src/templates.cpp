#include "rair/templates.hpp"

#include "rair/errors.hpp"

#include <fstream>
#include <sstream>

namespace rair {
namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

template <typename Reader>
TemplateSet assemble(Reader read) {
  TemplateSet set;
  set.prompts.emplace(TaskKind::Spelling, PromptTemplate(TaskKind::Spelling, read("prompts/spelling.txt")));
  set.prompts.emplace(TaskKind::Splitting, PromptTemplate(TaskKind::Splitting, read("prompts/splitting.txt")));
  set.prompts.emplace(TaskKind::NBest, PromptTemplate(TaskKind::NBest, read("prompts/nbest.txt")));
  set.context_header = read("prompts/context_header.txt");
  set.length = {read("length/satisfied.txt"), read("length/spelling.txt"),
                read("length/splitting.txt"), read("length/nbest.txt")};
  set.expansion = {read("expansion/term.txt"), read("expansion/sentence.txt"),
                   read("expansion/background.txt")};
  return set;
}

}  // namespace

PromptTemplate::PromptTemplate(TaskKind task, std::string body)
    : task_(task), body_(std::move(body)) {
  if (count_occurrences(body_, kInputPlaceholder) != 1) {
    throw ConfigError("prompt template for " + std::string(to_string(task)) +
                      " must contain " + std::string(kInputPlaceholder) + " exactly once");
  }
}

std::string PromptTemplate::fill(std::string_view input) const {
  const auto pos = body_.find(kInputPlaceholder);
  std::string out;
  out.reserve(body_.size() + input.size());
  out.append(body_, 0, pos);
  out.append(input);
  out.append(body_, pos + kInputPlaceholder.size());
  return out;
}

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet set = assemble([](std::string_view name) {
    const auto asset = detail::builtin_asset(name);
    if (asset.empty()) {
      throw ConfigError("builtin asset missing: " + std::string(name));
    }
    return std::string(asset);
  });
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& root) {
  return assemble([&root](std::string_view name) {
    const auto path = root / std::filesystem::path(name);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ConfigError("template asset not found: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto text = buffer.str();
    if (!text.empty() && text.back() == '\n') {
      text.pop_back();
    }
    return text;
  });
}

const PromptTemplate& TemplateSet::prompt(TaskKind task) const {
  const auto it = prompts.find(task);
  if (it == prompts.end()) {
    throw ConfigError("no prompt template registered for task " + std::string(to_string(task)));
  }
  return it->second;
}

std::string fill_placeholders(std::string_view text,
                              const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out(text);
  for (const auto& [name, value] : values) {
    const std::string key = "{" + name + "}";
    for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size())) {
      out.replace(pos, key.size(), value);
    }
  }
  return out;
}

}  // namespace rair
