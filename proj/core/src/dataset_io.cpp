#include "rair/dataset_io.hpp"

#include "rair/errors.hpp"
#include "rair/text.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace rair {
namespace {

template <typename Fn>
void for_each_record(std::istream& in, std::string_view what, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto json = nlohmann::json::parse(line);
      if (json.contains("_header")) continue;
      fn(json);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("malformed " + std::string(what) + " record: " + e.what(),
                      "line " + std::to_string(line_no));
    } catch (const DataError& e) {
      throw DataError(e.what(), "line " + std::to_string(line_no));
    } catch (const ConfigError& e) {
      throw DataError(e.what(), "line " + std::to_string(line_no));
    }
  }
}

void require_unique(std::unordered_set<std::string>& seen, const std::string& id) {
  if (!seen.insert(id).second) {
    throw DataError("duplicate id", id);
  }
}

}  // namespace

std::vector<SentencePair> read_pairs(std::istream& in, std::optional<TaskKind> default_task) {
  std::vector<SentencePair> pairs;
  std::unordered_set<std::string> seen;
  for_each_record(in, "pair", [&](const nlohmann::json& json) {
    SentencePair pair;
    pair.id = json.at("id").get<std::string>();
    pair.source = json.at("source").get<std::string>();
    pair.target = json.at("target").get<std::string>();
    if (json.contains("task")) {
      pair.task = parse_task_kind(json["task"].get<std::string>());
    } else if (default_task) {
      pair.task = *default_task;
    } else {
      throw DataError("record has no task and no default was given", pair.id);
    }
    pair.validate();
    require_unique(seen, pair.id);
    pairs.push_back(std::move(pair));
  });
  return pairs;
}

std::vector<NBestGroup> read_nbest(std::istream& in) {
  std::vector<NBestGroup> groups;
  std::unordered_set<std::string> seen;
  for_each_record(in, "n-best", [&](const nlohmann::json& json) {
    NBestGroup group;
    group.id = json.at("id").get<std::string>();
    group.candidates = json.at("candidates").get<std::vector<std::string>>();
    group.target = json.value("target", std::string{});
    group.validate();
    require_unique(seen, group.id);
    groups.push_back(std::move(group));
  });
  return groups;
}

void write_pairs(std::ostream& out, const std::vector<SentencePair>& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json record = {
        {"id", p.id}, {"source", p.source}, {"target", p.target}, {"task", to_string(p.task)}};
    out << record.dump() << '\n';
  }
}

void write_nbest(std::ostream& out, const std::vector<NBestGroup>& groups) {
  for (const auto& g : groups) {
    nlohmann::ordered_json record = {{"id", g.id}, {"candidates", g.candidates}, {"target", g.target}};
    out << record.dump() << '\n';
  }
}

std::vector<Prediction> read_predictions(std::istream& in) {
  std::vector<Prediction> predictions;
  for_each_record(in, "prediction", [&](const nlohmann::json& json) {
    Prediction p;
    p.id = json.at("id").get<std::string>();
    p.output = json.at("output").get<std::string>();
    p.method = json.value("method", std::string{});
    p.rounds_used = json.value("rounds_used", std::size_t{0});
    p.switched = json.value("switched", false);
    if (json.contains("error")) p.error = json["error"].get<std::string>();
    predictions.push_back(std::move(p));
  });
  return predictions;
}

std::string header_line(std::string_view kind, std::string_view config_hash, std::uint64_t seed) {
  nlohmann::ordered_json header = {{"kind", kind}, {"config_hash", config_hash}, {"seed", seed}};
  return nlohmann::ordered_json{{"_header", std::move(header)}}.dump();
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer) {
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot open for writing: " + temp.string());
    }
    writer(out);
    out.flush();
    if (!out) {
      throw DataError("write failed: " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw DataError("cannot move " + temp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace rair
