#pragma once

#include "rair/task.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rair {

/// Pair dataset: one {"id","source","target","task"} record per line. A
/// missing "task" falls back to `default_task`. Records are validated; ids
/// must be unique. Lines with a "_header" key are skipped.
std::vector<SentencePair> read_pairs(std::istream& in, std::optional<TaskKind> default_task = {});

/// N-best dataset: one {"id","candidates":[...],"target"} record per line.
std::vector<NBestGroup> read_nbest(std::istream& in);

void write_pairs(std::ostream& out, const std::vector<SentencePair>& pairs);
void write_nbest(std::ostream& out, const std::vector<NBestGroup>& groups);

struct Prediction {
  std::string id;
  std::string output;
  std::string method;
  std::size_t rounds_used = 0;
  bool switched = false;
  std::optional<std::string> error;
};

std::vector<Prediction> read_predictions(std::istream& in);

/// {"_header": {"kind": ..., "config_hash": ..., "seed": ...}} line that
/// starts every file the command-line tool writes.
std::string header_line(std::string_view kind, std::string_view config_hash, std::uint64_t seed);

/// Writes through a sibling temp file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

}  // namespace rair
