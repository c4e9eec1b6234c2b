#include "rair_cli.hpp"

#include "mock_script.hpp"

#include "rair/rair.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

namespace rair::cli {
namespace {

namespace fs = std::filesystem;

// Flags shared by every subcommand; unset ones leave the config untouched.
struct CommonFlags {
  std::optional<fs::path> config_file;
  std::optional<std::string> task;
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> rounds;
  std::optional<std::size_t> adse_limit;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<fs::path> mock_script;
  std::optional<std::string> backend_url;
  std::optional<std::string> embed_url;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--task", task, "spelling | splitting | nbest");
    app.add_option("--top-k", top_k, "retrieved sentences per query");
    app.add_option("--rounds", rounds, "length-reflection round limit");
    app.add_option("--adse-limit", adse_limit, "failed attempts before switching method");
    app.add_option("--seed", seed, "seed for every random draw");
    app.add_option("--workers", workers, "worker threads (default: logical CPUs)");
    app.add_option("--mock-script", mock_script, "scripted chat replies (JSON)")->check(CLI::ExistingFile);
    app.add_option("--backend-url", backend_url, "OpenAI-compatible chat-completions URL");
    app.add_option("--embed-url", embed_url, "embedding service base URL");
  }

  RunConfig resolve() const {
    auto config = RunConfig::load(config_file);
    if (task) config.set("task", *task);
    if (top_k) config.set("retrieve_top_k", std::to_string(*top_k));
    if (rounds) config.set("mlr_rounds", std::to_string(*rounds));
    if (adse_limit) config.set("adse_limit", std::to_string(*adse_limit));
    if (seed) config.set("seed", std::to_string(*seed));
    if (workers) config.set("workers", std::to_string(*workers));
    if (backend_url) config.set("chat_url", *backend_url);
    if (embed_url) config.set("embed_url", *embed_url);
    return config;
  }
};

std::size_t worker_count(const RunConfig& config) {
  const auto configured = config.get_size("workers");
  return configured == 0 ? default_worker_count() : configured;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return in;
}

const TemplateSet& templates_for(const RunConfig& config, std::optional<TemplateSet>& storage) {
  const auto& dir = config.get("templates_dir");
  if (dir.empty()) return TemplateSet::builtin();
  storage = TemplateSet::load(dir);
  return *storage;
}

/// Chat backends keyed by task id or expansion subject.
class BackendSource {
 public:
  BackendSource(const CommonFlags& flags, const RunConfig& config) {
    if (flags.mock_script) {
      script_ = MockScript::load(*flags.mock_script);
    } else if (!config.get("chat_url").empty()) {
      shared_ = std::make_shared<HttpChatBackend>(config.chat_backend());
    }
  }

  bool available() const { return script_ || shared_; }

  std::shared_ptr<ChatBackend> for_key(const std::string& key) const {
    if (script_) return script_->backend_for(key);
    if (shared_) return shared_;
    throw ConfigError("no chat backend: pass --mock-script or --backend-url");
  }

 private:
  std::optional<MockScript> script_;
  std::shared_ptr<ChatBackend> shared_;
};

std::unique_ptr<EmbedBackend> make_embedder(const RunConfig& config) {
  if (!config.get("embed_url").empty()) {
    return std::make_unique<HttpEmbedBackend>(config.embed_backend());
  }
  return std::make_unique<HashingEmbedder>(config.get_size("embed_dim"));
}

Corpus load_corpus(const fs::path& path) {
  auto in = open_input(path);
  return read_corpus(in);
}

VectorIndex load_or_build_index(const std::optional<fs::path>& path, const Corpus& corpus,
                                EmbedBackend& embedder, std::size_t workers) {
  if (path) {
    auto in = open_input(*path);
    return read_index(in);
  }
  return build_index(corpus, embedder, 64, workers);
}

// --------------------------------------------------------------------------

struct BuildCorpusArgs {
  std::optional<fs::path> pairs;
  std::optional<fs::path> terms;
  bool expand_train = false;
  fs::path out;
};

int build_corpus_cmd(const CommonFlags& flags, const BuildCorpusArgs& args, std::ostream& out) {
  const auto config = flags.resolve();
  std::optional<TemplateSet> storage;
  const auto& templates = templates_for(config, storage);
  const auto workers = worker_count(config);

  std::vector<SentencePair> pairs;
  if (args.pairs) {
    auto in = open_input(*args.pairs);
    pairs = read_pairs(in, parse_task_kind(config.get("task")));
  }
  auto train_docs = ingest_training_targets(pairs);

  std::vector<std::string> terms;
  if (args.terms) {
    auto in = open_input(*args.terms);
    terms = read_terms(in);
  }

  const bool needs_backend = !terms.empty() || (args.expand_train && !train_docs.empty());
  const BackendSource backends(flags, config);
  if (needs_backend && !backends.available()) {
    throw ConfigError("expansion needs a chat backend: pass --mock-script or --backend-url");
  }

  std::vector<CorpusDoc> expansion_docs;
  if (args.expand_train) {
    auto per_sentence = parallel_map(train_docs.size(), workers, [&](std::size_t i) {
      const auto& sentence = train_docs[i].text;
      return expand_sentence(sentence, *backends.for_key(sentence), templates);
    });
    for (auto& docs : per_sentence) {
      for (auto& doc : docs) expansion_docs.push_back(std::move(doc));
    }
  }
  const auto term_docs = parallel_map(terms.size(), workers, [&](std::size_t i) {
    return expand_term(terms[i], *backends.for_key(terms[i]), templates);
  });

  const auto corpus = build_corpus(train_docs, expansion_docs, term_docs, config.get("domain_tag"));
  write_file_atomically(args.out, [&](std::ostream& o) {
    o << header_line("corpus", config.hash(), config.get_u64("seed")) << '\n';
    write_corpus(o, corpus);
  });
  out << "build-corpus: " << corpus.size() << " docs (" << train_docs.size() << " train, "
      << expansion_docs.size() << " expansion, " << term_docs.size() << " term) -> " << args.out.string()
      << '\n';
  return kSuccess;
}

struct IndexArgs {
  fs::path corpus;
  fs::path out;
};

int index_cmd(const CommonFlags& flags, const IndexArgs& args, std::ostream& out) {
  const auto config = flags.resolve();
  const auto corpus = load_corpus(args.corpus);
  auto embedder = make_embedder(config);
  const auto index = build_index(corpus, *embedder, 64, worker_count(config));
  write_file_atomically(args.out, [&](std::ostream& o) {
    o << header_line("index", config.hash(), config.get_u64("seed")) << '\n';
    write_index(o, index);
  });
  out << "index: " << index.size() << " vectors, dim " << index.dim() << " -> " << args.out.string() << '\n';
  return kSuccess;
}

struct TrainDataArgs {
  fs::path pairs;
  fs::path corpus;
  std::optional<fs::path> index;
  std::optional<std::size_t> n_neg;
  fs::path out;
};

int make_train_data_cmd(const CommonFlags& flags, const TrainDataArgs& args, std::ostream& out,
                        std::ostream& err) {
  auto config = flags.resolve();
  if (args.n_neg) config.set("n_neg", std::to_string(*args.n_neg));
  std::vector<SentencePair> pairs;
  {
    auto in = open_input(args.pairs);
    pairs = read_pairs(in, TaskKind::Spelling);
  }
  const auto corpus = load_corpus(args.corpus);
  auto embedder = make_embedder(config);
  const auto workers = worker_count(config);
  const auto index = load_or_build_index(args.index, corpus, *embedder, workers);
  const Retriever base(corpus, index, *embedder);

  SampleOptions options{config.get_size("n_neg"), config.get_u64("seed")};
  std::vector<const SentencePair*> usable;
  std::size_t skipped = 0;
  for (const auto& pair : pairs) {
    if (pair.task == TaskKind::Spelling && pair.source != pair.target) {
      usable.push_back(&pair);
    } else {
      ++skipped;
    }
  }
  const auto samples = parallel_map(usable.size(), workers, [&](std::size_t i) {
    return build_training_sample(*usable[i], base, options);
  });
  std::size_t short_samples = 0;
  for (const auto& s : samples) short_samples += s.short_of_negatives ? 1 : 0;
  write_file_atomically(args.out, [&](std::ostream& o) {
    o << header_line("training_samples", config.hash(), options.seed) << '\n';
    write_training_samples(o, samples);
  });
  if (short_samples > 0) {
    err << "make-train-data: warning: " << short_samples << " samples have fewer than " << options.n_neg
        << " negatives\n";
  }
  out << "make-train-data: " << samples.size() << " samples (" << skipped << " pairs without errors skipped) -> "
      << args.out.string() << '\n';
  return kSuccess;
}

struct CorrectArgs {
  fs::path dataset;
  std::optional<fs::path> corpus;
  std::optional<fs::path> index;
  bool no_background = false;
  fs::path out;
  std::optional<fs::path> trace_out;
};

std::vector<CorrectionTask> load_tasks(const fs::path& path, TaskKind kind, bool has_training_set) {
  auto in = open_input(path);
  std::vector<CorrectionTask> tasks;
  if (kind == TaskKind::NBest) {
    for (const auto& group : read_nbest(in)) tasks.push_back(CorrectionTask::from(group, has_training_set));
  } else {
    for (const auto& pair : read_pairs(in, kind)) tasks.push_back(CorrectionTask::from(pair, has_training_set));
  }
  return tasks;
}

int correct_cmd(const CommonFlags& flags, const CorrectArgs& args, std::ostream& out) {
  const auto config = flags.resolve();
  std::optional<TemplateSet> storage;
  const auto& templates = templates_for(config, storage);
  const auto cfg = config.pipeline();
  const auto workers = worker_count(config);
  const auto kind = parse_task_kind(config.get("task"));
  const bool has_training_set = args.corpus.has_value();
  const auto tasks = load_tasks(args.dataset, kind, has_training_set);

  const BackendSource backends(flags, config);
  if (!backends.available()) {
    throw ConfigError("correct needs a chat backend: pass --mock-script or --backend-url");
  }

  std::optional<Corpus> corpus;
  std::optional<VectorIndex> index;
  std::unique_ptr<EmbedBackend> embedder;
  std::optional<Retriever> retriever;
  std::unique_ptr<ContextProvider> context;
  if (has_training_set) {
    corpus = load_corpus(*args.corpus);
    embedder = make_embedder(config);
    index = load_or_build_index(args.index, *corpus, *embedder, workers);
    retriever.emplace(*corpus, *index, *embedder);
    context = std::make_unique<IndexContext>(*retriever);
  } else if (args.no_background) {
    context = std::make_unique<NoContext>();
  } else {
    context = std::make_unique<BackgroundContext>(nullptr, true, templates);
  }

  const auto results = run_batch(
      tasks, [&](const CorrectionTask& task) { return backends.for_key(task.id); }, *context, cfg, workers,
      templates);

  const auto hash = config.hash();
  write_file_atomically(args.out, [&](std::ostream& o) {
    o << header_line("predictions", hash, cfg.seed) << '\n';
    for (const auto& r : results) o << to_prediction_line(r) << '\n';
  });
  if (args.trace_out) {
    write_file_atomically(*args.trace_out, [&](std::ostream& o) {
      o << header_line("traces", hash, cfg.seed) << '\n';
      for (const auto& r : results) o << to_trace_line(r) << '\n';
    });
  }

  std::size_t errors = 0;
  std::size_t retrieval = 0;
  std::size_t switched = 0;
  for (const auto& r : results) {
    errors += r.ok() ? 0 : 1;
    retrieval += r.method == Method::Retrieval ? 1 : 0;
    switched += r.switched ? 1 : 0;
  }
  out << "correct: " << results.size() << " items, " << errors << " errors (retrieval " << retrieval
      << ", direct " << results.size() - retrieval << ", switched " << switched << ") -> " << args.out.string()
      << '\n';
  return errors == 0 ? kSuccess : kBackendError;
}

struct EvaluateArgs {
  fs::path dataset;
  fs::path predictions;
  std::optional<fs::path> baseline;
  bool macro = false;
  bool table = false;
};

std::vector<EvalItem> join_items(const fs::path& dataset, TaskKind kind, const fs::path& predictions_path) {
  std::map<std::string, std::string> outputs;
  {
    auto in = open_input(predictions_path);
    for (auto& p : read_predictions(in)) outputs[p.id] = std::move(p.output);
  }
  std::vector<EvalItem> items;
  auto lookup = [&](const std::string& id) -> const std::string& {
    const auto it = outputs.find(id);
    if (it == outputs.end()) throw DataError("no prediction for dataset item", id);
    return it->second;
  };
  auto in = open_input(dataset);
  if (kind == TaskKind::NBest) {
    for (auto& g : read_nbest(in)) {
      items.push_back({g.id, g.candidates.front(), g.candidates, lookup(g.id), g.target});
    }
  } else {
    for (auto& p : read_pairs(in, kind)) {
      items.push_back({p.id, p.source, {}, lookup(p.id), p.target});
    }
  }
  return items;
}

int evaluate_cmd(const CommonFlags& flags, const EvaluateArgs& args, std::ostream& out) {
  const auto config = flags.resolve();
  const auto kind = parse_task_kind(config.get("task"));
  const auto averaging = args.macro ? CerAveraging::Macro : CerAveraging::Pooled;
  const auto items = join_items(args.dataset, kind, args.predictions);
  auto records = evaluate(items, kind, averaging);
  if (args.baseline) {
    const auto baseline_items = join_items(args.dataset, kind, *args.baseline);
    const auto base = cer(baseline_items, averaging);
    const auto improved = cer(items, averaging);
    records.push_back({"CERR", cerr(base.cer, improved.cer) * 100.0,
                       "baseline_cer=" + format_percent(base.cer) + " cer=" + format_percent(improved.cer)});
  }
  out << "evaluate: " << items.size() << " items, task " << to_string(kind) << '\n';
  if (args.table) {
    write_table(out, records);
  } else {
    write_report(out, records);
  }
  return kSuccess;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retrieval-augmented text correction with length reflection", "rair"};
  app.require_subcommand(1);

  CommonFlags common;

  auto* build = app.add_subcommand("build-corpus", "Build the retrieval corpus");
  BuildCorpusArgs build_args;
  common.attach(*build);
  build->add_option("--pairs", build_args.pairs, "training pair dataset")->check(CLI::ExistingFile);
  build->add_option("--terms", build_args.terms, "domain term list")->check(CLI::ExistingFile);
  build->add_flag("--expand-train", build_args.expand_train, "expand training targets into paragraphs");
  build->add_option("--out", build_args.out, "corpus output file")->required();

  auto* index = app.add_subcommand("index", "Embed a corpus into a vector index");
  IndexArgs index_args;
  common.attach(*index);
  index->add_option("--corpus", index_args.corpus)->required()->check(CLI::ExistingFile);
  index->add_option("--out", index_args.out)->required();

  auto* train = app.add_subcommand("make-train-data", "Emit contrastive retriever training samples");
  TrainDataArgs train_args;
  common.attach(*train);
  train->add_option("--pairs", train_args.pairs)->required()->check(CLI::ExistingFile);
  train->add_option("--corpus", train_args.corpus)->required()->check(CLI::ExistingFile);
  train->add_option("--index", train_args.index, "prebuilt index of the corpus")->check(CLI::ExistingFile);
  train->add_option("--n-neg", train_args.n_neg, "negatives per sample");
  train->add_option("--out", train_args.out)->required();

  auto* correct = app.add_subcommand("correct", "Correct a dataset");
  CorrectArgs correct_args;
  common.attach(*correct);
  correct->add_option("--dataset", correct_args.dataset)->required()->check(CLI::ExistingFile);
  correct->add_option("--corpus", correct_args.corpus, "retrieval corpus (enables training-set mode)")
      ->check(CLI::ExistingFile);
  correct->add_option("--index", correct_args.index)->check(CLI::ExistingFile);
  correct->add_flag("--no-background", correct_args.no_background,
                    "without a corpus, skip background generation");
  correct->add_option("--out", correct_args.out, "prediction file")->required();
  correct->add_option("--trace-out", correct_args.trace_out, "per-round trace file");

  auto* evaluate_app = app.add_subcommand("evaluate", "Score predictions against references");
  EvaluateArgs eval_args;
  common.attach(*evaluate_app);
  evaluate_app->add_option("--dataset", eval_args.dataset)->required()->check(CLI::ExistingFile);
  evaluate_app->add_option("--predictions", eval_args.predictions)->required()->check(CLI::ExistingFile);
  evaluate_app->add_option("--baseline", eval_args.baseline, "baseline predictions for CERR")
      ->check(CLI::ExistingFile);
  evaluate_app->add_flag("--macro", eval_args.macro, "macro-average CER over sentences");
  evaluate_app->add_flag("--table", eval_args.table, "tab-separated table output");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (build->parsed()) return build_corpus_cmd(common, build_args, out);
    if (index->parsed()) return index_cmd(common, index_args, out);
    if (train->parsed()) return make_train_data_cmd(common, train_args, out, err);
    if (correct->parsed()) return correct_cmd(common, correct_args, out);
    if (evaluate_app->parsed()) return evaluate_cmd(common, eval_args, out);
  } catch (const ConfigError& e) {
    err << "rair: configuration error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "rair: data error: " << e.what() << '\n';
    return kDataError;
  } catch (const TaskError& e) {
    err << "rair: data error: " << e.what() << '\n';
    return kDataError;
  } catch (const BackendError& e) {
    err << "rair: backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const ExpansionError& e) {
    err << "rair: backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const ArgumentError& e) {
    err << "rair: data error: " << e.what() << '\n';
    return kDataError;
  }
  err << "rair: no subcommand\n";
  return kUsage;
}

}  // namespace rair::cli
