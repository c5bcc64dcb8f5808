#include "bgner/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>

#include "CLI11.hpp"
#include "bgner/corpus.hpp"
#include "bgner/error.hpp"
#include "bgner/eval.hpp"
#include "bgner/gazetteer.hpp"
#include "bgner/mi.hpp"
#include "bgner/pipeline.hpp"
#include "bgner/runconfig.hpp"

namespace bgner::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ifstream open_data_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

corpus::ParsedCorpus parse_corpus_file(const std::string& path, corpus::ParseMode mode) {
  auto in = open_data_file(path);
  try {
    return corpus::parse_corpus(in, mode);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

/// Accepts labeled (2/3 column) and unlabeled (1/2 column) files; used by
/// the commands that only need surfaces.
std::vector<corpus::Sentence> read_sentences_any(const std::string& path) {
  {
    auto in = open_data_file(path);
    try {
      auto parsed = corpus::parse_corpus(in, corpus::ParseMode::Repair);
      std::vector<corpus::Sentence> sentences;
      sentences.reserve(parsed.sentences.size());
      for (auto& ts : parsed.sentences) sentences.push_back(std::move(ts.sentence));
      return sentences;
    } catch (const DataError&) {
    }
  }
  auto in = open_data_file(path);
  try {
    return corpus::parse_unlabeled_corpus(in).sentences;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

config::RunConfig make_config(const std::string& path, std::span<const std::string> overrides) {
  config::RunConfig cfg = config::load_config_file(path);
  for (const auto& assignment : overrides) config::apply_override(cfg, assignment);
  config::validate(cfg);
  return cfg;
}

/// Resource files are named by the config, so failures to load them are
/// configuration errors.
pipeline::Resources load_config_resources(const config::RunConfig& cfg) {
  try {
    return pipeline::load_resources(cfg);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

std::size_t token_count(std::span<const corpus::TaggedSentence> sentences) {
  std::size_t n = 0;
  for (const auto& ts : sentences) n += ts.sentence.size();
  return n;
}

struct TrainArgs {
  std::string config_path;
  std::string train_path;
  std::string dev_path;
  std::string model_out;
  std::string induction_report;
  std::vector<std::string> sets;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const config::RunConfig cfg = make_config(a.config_path, a.sets);
  const pipeline::Resources res = load_config_resources(cfg);
  report_warnings(res.warnings, err);

  const corpus::ParsedCorpus train = parse_corpus_file(a.train_path, corpus::ParseMode::Strict);
  if (train.sentences.empty()) throw DataError(a.train_path + ": training corpus is empty");
  corpus::ParsedCorpus dev;
  if (!a.dev_path.empty()) dev = parse_corpus_file(a.dev_path, corpus::ParseMode::Strict);

  if ((cfg.features.local_msd || cfg.features.nonlocal_msd) && !train.has_msd) {
    err << "warning: morpho-syntactic features are enabled but the training corpus "
           "has no tag column\n";
  }

  out << "train sentences " << train.sentences.size() << "\n";
  out << "train tokens " << token_count(train.sentences) << "\n";
  if (!a.dev_path.empty()) out << "dev sentences " << dev.sentences.size() << "\n";

  const pipeline::TrainOutcome outcome =
      pipeline::train_model(train.sentences, dev.sentences, cfg, res, &out);

  if (cfg.induction_enabled) out << "induced " << outcome.induction.added.size() << "\n";
  for (auto family : pipeline::kFamilies)
    out << "predicates " << family << " " << outcome.family_rows.at(std::string(family)) << "\n";
  out << "features " << outcome.model.index.size() << "\n";
  out << "final objective " << fixed(outcome.final_objective, 6) << "\n";

  crf::save_model_file(outcome.model, a.model_out);
  out << "model written to " << a.model_out << "\n";
  if (!a.induction_report.empty()) {
    std::ofstream rep(a.induction_report, std::ios::binary);
    if (!rep) throw DataError("cannot write induction report: " + a.induction_report);
    rep << induction::report_tsv(outcome.induction);
  }
  return 0;
}

struct TagArgs {
  std::string model_path;
  std::string config_path;
  std::string input_path;
  bool force = false;
  std::vector<std::string> sets;
};

int cmd_tag(const TagArgs& a, std::ostream& out, std::ostream& err) {
  const config::RunConfig cfg = make_config(a.config_path, a.sets);
  const crf::Model model = crf::load_model_file(a.model_path);

  const std::string expected = pipeline::fingerprint(cfg);
  if (!model.fingerprint.empty() && model.fingerprint != expected) {
    if (!a.force) {
      err << "error: feature configuration does not match the model\n"
          << "  model:  " << model.fingerprint << "\n"
          << "  config: " << expected << "\n"
          << "pass --force to tag anyway\n";
      return 1;
    }
    err << "warning: feature configuration does not match the model; tagging anyway\n";
  }

  const pipeline::Resources res = load_config_resources(cfg);
  report_warnings(res.warnings, err);

  auto in = open_data_file(a.input_path);
  corpus::UnlabeledCorpus input;
  try {
    input = corpus::parse_unlabeled_corpus(in);
  } catch (const DataError& e) {
    throw DataError(a.input_path + ": " + e.what());
  }
  if ((cfg.features.local_msd || cfg.features.nonlocal_msd) && !input.has_msd) {
    err << "warning: the model uses morpho-syntactic features but the input has no "
           "tag column; those features stay inactive\n";
  }

  const auto view = res.view(cfg.features);
  std::vector<corpus::TaggedSentence> tagged;
  tagged.reserve(input.sentences.size());
  for (auto& sentence : input.sentences) {
    corpus::LabelSequence labels = pipeline::tag_sentence(sentence, model, view, cfg.bio_mask);
    tagged.push_back({std::move(sentence), std::move(labels)});
  }
  corpus::write_corpus(out, tagged);
  return 0;
}

struct EvaluateArgs {
  std::string gold_path;
  std::string pred_path;
  bool relaxed = false;
  bool tsv = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const corpus::ParsedCorpus gold = parse_corpus_file(a.gold_path, corpus::ParseMode::Strict);
  const corpus::ParsedCorpus pred = parse_corpus_file(a.pred_path, corpus::ParseMode::Repair);
  for (const auto& w : pred.warnings)
    err << "warning: " << a.pred_path << " line " << w.line << ": " << w.message << "\n";

  std::vector<corpus::LabelSequence> gold_labels;
  std::vector<corpus::LabelSequence> pred_labels;
  gold_labels.reserve(gold.sentences.size());
  pred_labels.reserve(pred.sentences.size());
  for (const auto& ts : gold.sentences) gold_labels.push_back(ts.labels);
  for (const auto& ts : pred.sentences) pred_labels.push_back(ts.labels);

  const eval::EvalReport report = a.relaxed ? eval::evaluate_relaxed(gold_labels, pred_labels)
                                            : eval::evaluate(gold_labels, pred_labels);
  out << (a.tsv ? eval::format_report_tsv(report) : eval::format_report(report));
  return 0;
}

struct MiBuildArgs {
  std::string input_path;
  std::string output_path;
  std::int64_t top_k = 1'000'000;
  int bins = 2;
  std::int64_t min_count = 2;
  std::string denominator = "adjacent";
};

int cmd_mi_build(const MiBuildArgs& a, std::ostream& out) {
  mi::MIConfig cfg;
  cfg.top_k = a.top_k;
  cfg.bins = a.bins;
  cfg.min_count = a.min_count;
  if (a.denominator == "adjacent") {
    cfg.denominator = mi::JointDenominator::AdjacentPositions;
  } else if (a.denominator == "tokens") {
    cfg.denominator = mi::JointDenominator::Tokens;
  } else {
    throw ConfigError("--denominator expects adjacent or tokens, got '" + a.denominator + "'");
  }
  if (cfg.top_k <= 0) throw ConfigError("--top-k must be positive");
  if (cfg.bins < 2) throw ConfigError("--bins must be at least 2");
  if (cfg.min_count < 1) throw ConfigError("--min-count must be at least 1");

  const std::vector<corpus::Sentence> sentences = read_sentences_any(a.input_path);
  const mi::MITable table = mi::build_table(sentences, cfg);
  out << "sentences " << table.total_sentences() << "\n";
  out << "tokens " << table.total_tokens() << "\n";
  out << "pairs " << table.size() << "\n";
  table.save_file(a.output_path);
  out << "table written to " << a.output_path << "\n";
  return 0;
}

struct GazetteerCheckArgs {
  std::string path;
  bool casefold = false;
};

int cmd_gazetteer_check(const GazetteerCheckArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<gaz::CompileWarning> warnings;
  const auto normalize = a.casefold ? gaz::Normalize::Casefold : gaz::Normalize::Exact;
  gaz::Gazetteer g;
  {
    auto in = open_data_file(a.path);
    g = gaz::Gazetteer::compile(a.path, in, normalize, &warnings);
  }
  for (const auto& w : warnings)
    err << "warning: " << a.path << " line " << w.line << ": " << w.message << "\n";
  if (g.entry_count() == 0) throw DataError(a.path + ": zero entries");
  out << "entries " << g.entry_count() << "\n";
  for (const auto& entry : g.entries()) out << entry << "\n";
  return 0;
}

struct InspectArgs {
  std::string config_path;
  std::string corpus_path;
  std::int64_t sentence = 0;  // 1-based; 0 selects all
  std::vector<std::string> sets;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream& err) {
  const config::RunConfig cfg = make_config(a.config_path, a.sets);
  const pipeline::Resources res = load_config_resources(cfg);
  report_warnings(res.warnings, err);

  const std::vector<corpus::Sentence> sentences = read_sentences_any(a.corpus_path);
  if (a.sentence < 0 || static_cast<std::size_t>(a.sentence) > sentences.size()) {
    throw DataError("--sentence out of range: corpus has " + std::to_string(sentences.size()) +
                    " sentences");
  }

  const auto view = res.view(cfg.features);
  const std::size_t first = a.sentence > 0 ? static_cast<std::size_t>(a.sentence) - 1 : 0;
  const std::size_t last = a.sentence > 0 ? static_cast<std::size_t>(a.sentence) : sentences.size();
  for (std::size_t s = first; s < last; ++s) {
    if (s > first) out << "\n";
    const auto obs = features::extract_observations(sentences[s], view);
    for (std::size_t t = 0; t < obs.size(); ++t) {
      out << sentences[s][t].surface << '\t';
      bool head = true;
      for (const auto& p : obs[t]) {
        if (!head) out << ' ';
        head = false;
        out << p;
      }
      out << "\n";
    }
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bgner: conditional random field named-entity tagger"};
  app.name("bgner");
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a model on a labeled corpus");
  train->add_option("--config", train_args.config_path, "run configuration file")->required();
  train->add_option("--train", train_args.train_path, "labeled training corpus")->required();
  train->add_option("--dev", train_args.dev_path, "labeled corpus scored after each iteration");
  train->add_option("--model-out", train_args.model_out, "where to write the model")->required();
  train->add_option("--induction-report", train_args.induction_report,
                    "where to write the induced-feature table");
  train->add_option("--set", train_args.sets, "override a config key (section.key=value)");

  TagArgs tag_args;
  CLI::App* tag = app.add_subcommand("tag", "label a corpus with a trained model");
  tag->add_option("--model", tag_args.model_path, "trained model file")->required();
  tag->add_option("--config", tag_args.config_path, "run configuration file")->required();
  tag->add_option("--input", tag_args.input_path, "unlabeled corpus")->required();
  tag->add_flag("--force", tag_args.force, "tag even when the configuration fingerprint differs");
  tag->add_option("--set", tag_args.sets, "override a config key (section.key=value)");

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score predictions against gold labels");
  evaluate->add_option("--gold", eval_args.gold_path, "gold labeled corpus")->required();
  evaluate->add_option("--pred", eval_args.pred_path, "predicted labeled corpus")->required();
  evaluate->add_flag("--relaxed", eval_args.relaxed, "credit one-token overlaps of the same type");
  evaluate->add_flag("--tsv", eval_args.tsv, "machine-readable output");

  MiBuildArgs mi_args;
  CLI::App* mi_build = app.add_subcommand("mi-build", "build a mutual-information table");
  mi_build->add_option("--input", mi_args.input_path, "corpus to count bigrams in")->required();
  mi_build->add_option("--output", mi_args.output_path, "where to write the table")->required();
  mi_build->add_option("--top-k", mi_args.top_k, "keep this many highest-MI pairs");
  mi_build->add_option("--bins", mi_args.bins, "equal-frequency bins over the kept pairs");
  mi_build->add_option("--min-count", mi_args.min_count, "drop pairs seen fewer times");
  mi_build->add_option("--denominator", mi_args.denominator,
                       "joint denominator: adjacent or tokens");

  GazetteerCheckArgs gaz_args;
  CLI::App* gaz_check = app.add_subcommand("gazetteer-check", "compile and dump a gazetteer");
  gaz_check->add_option("--file", gaz_args.path, "gazetteer list, one entry per line")->required();
  gaz_check->add_flag("--casefold", gaz_args.casefold, "case-insensitive matching");

  InspectArgs inspect_args;
  CLI::App* inspect = app.add_subcommand("inspect", "dump extracted predicates per token");
  inspect->add_option("--config", inspect_args.config_path, "run configuration file")->required();
  inspect->add_option("--corpus", inspect_args.corpus_path, "corpus to extract from")->required();
  inspect->add_option("--sentence", inspect_args.sentence, "1-based sentence to dump (default all)");
  inspect->add_option("--set", inspect_args.sets, "override a config key (section.key=value)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (train->parsed()) return cmd_train(train_args, out, err);
    if (tag->parsed()) return cmd_tag(tag_args, out, err);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, out, err);
    if (mi_build->parsed()) return cmd_mi_build(mi_args, out);
    if (gaz_check->parsed()) return cmd_gazetteer_check(gaz_args, out, err);
    if (inspect->parsed()) return cmd_inspect(inspect_args, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace bgner::cli
