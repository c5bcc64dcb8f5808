#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/crf.hpp"
#include "bgner/error.hpp"
#include "bgner/eval.hpp"
#include "bgner/features.hpp"
#include "bgner/induction.hpp"
#include "bgner/mi.hpp"
#include "bgner/pipeline.hpp"
#include "bgner/runconfig.hpp"

namespace py = pybind11;
using namespace bgner;

namespace {

corpus::Sentence make_sentence(const std::vector<std::string>& tokens,
                               const std::optional<std::vector<std::string>>& tags) {
  if (!tags) return corpus::Sentence::from_surfaces(tokens);
  if (tags->size() != tokens.size())
    throw DataError("token and tag lists have different lengths");
  std::vector<corpus::Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out.push_back({tokens[i], (*tags)[i], i});
  return corpus::Sentence(std::move(out));
}

corpus::LabelSequence make_labels(const std::vector<std::string>& labels) {
  corpus::LabelSequence out;
  out.reserve(labels.size());
  for (const std::string& l : labels) out.push_back(corpus::label_from_string(l));
  return out;
}

std::vector<std::string> label_names(const corpus::LabelSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (corpus::Label l : seq) out.emplace_back(corpus::to_string(l));
  return out;
}

// Sentences arrive as (tokens, labels) or (tokens, labels, tags) sequences.
std::vector<corpus::TaggedSentence> convert_corpus(const py::sequence& data) {
  std::vector<corpus::TaggedSentence> out;
  for (const auto& item : data) {
    const auto entry = item.cast<py::sequence>();
    if (entry.size() != 2 && entry.size() != 3)
      throw DataError("each sentence must be (tokens, labels) or (tokens, labels, tags)");
    const auto tokens = entry[0].cast<std::vector<std::string>>();
    const auto labels = entry[1].cast<std::vector<std::string>>();
    std::optional<std::vector<std::string>> tags;
    if (entry.size() == 3 && !entry[2].is_none())
      tags = entry[2].cast<std::vector<std::string>>();
    corpus::Sentence sentence = make_sentence(tokens, tags);
    corpus::LabelSequence gold = make_labels(labels);
    if (gold.size() != sentence.size())
      throw DataError("label count does not match token count");
    out.push_back({std::move(sentence), std::move(gold)});
  }
  return out;
}

class Tagger {
 public:
  Tagger(config::RunConfig cfg, pipeline::Resources res, crf::Model model)
      : cfg_(std::move(cfg)), res_(std::move(res)), model_(std::move(model)) {}

  std::vector<std::string> tag(const std::vector<std::string>& tokens,
                               const std::optional<std::vector<std::string>>& tags) const {
    if (tokens.empty()) return {};
    const corpus::Sentence sentence = make_sentence(tokens, tags);
    return label_names(
        pipeline::tag_sentence(sentence, model_, res_.view(cfg_.features), cfg_.bio_mask));
  }

  std::vector<std::vector<std::string>> features(
      const std::vector<std::string>& tokens,
      const std::optional<std::vector<std::string>>& tags) const {
    const corpus::Sentence sentence = make_sentence(tokens, tags);
    pred::ObservationTable obs =
        features::extract_observations(sentence, res_.view(cfg_.features));
    induction::augment_with_model_conjunctions(obs, model_);
    std::vector<std::vector<std::string>> out;
    for (const auto& cell : obs) out.emplace_back(cell.begin(), cell.end());
    return out;
  }

  void save(const std::string& path) const { crf::save_model_file(model_, path); }

  const std::string& fingerprint() const { return model_.fingerprint; }
  std::size_t feature_count() const { return model_.index.size(); }

  const config::RunConfig& config() const { return cfg_; }
  const pipeline::Resources& resources() const { return res_; }
  const crf::Model& model() const { return model_; }

 private:
  config::RunConfig cfg_;
  pipeline::Resources res_;
  crf::Model model_;
};

Tagger train(const py::sequence& data, const config::RunConfig& cfg_in,
             const std::optional<py::sequence>& dev) {
  config::RunConfig cfg = cfg_in;
  config::validate(cfg);
  const auto train_data = convert_corpus(data);
  std::vector<corpus::TaggedSentence> dev_data;
  if (dev) dev_data = convert_corpus(*dev);
  pipeline::Resources res = pipeline::load_resources(cfg);
  pipeline::TrainOutcome outcome = pipeline::train_model(train_data, dev_data, cfg, res);
  return Tagger(std::move(cfg), std::move(res), std::move(outcome.model));
}

Tagger load_tagger(const std::string& path, const config::RunConfig& cfg_in, bool force) {
  config::RunConfig cfg = cfg_in;
  config::validate(cfg);
  crf::Model model = crf::load_model_file(path);
  if (!force && !model.fingerprint.empty() &&
      model.fingerprint != pipeline::fingerprint(cfg)) {
    throw ConfigError(
        "feature configuration does not match the model; pass force=True to override");
  }
  pipeline::Resources res = pipeline::load_resources(cfg);
  return Tagger(std::move(cfg), std::move(res), std::move(model));
}

py::dict evaluate_labels(const std::vector<std::vector<std::string>>& gold,
                         const std::vector<std::vector<std::string>>& pred, bool relaxed) {
  std::vector<corpus::LabelSequence> g, p;
  for (const auto& s : gold) g.push_back(make_labels(s));
  for (const auto& s : pred) p.push_back(make_labels(s));
  const eval::EvalReport report = relaxed ? eval::evaluate_relaxed(g, p) : eval::evaluate(g, p);
  py::dict out;
  const auto put = [&](const char* key, const eval::Scores& s) {
    py::dict d;
    d["tp"] = s.tp;
    d["fp"] = s.fp;
    d["fn"] = s.fn;
    d["precision"] = s.precision();
    d["recall"] = s.recall();
    d["f1"] = s.f1();
    out[key] = d;
  };
  put("PER", report.of(corpus::EntityType::Per));
  put("ORG", report.of(corpus::EntityType::Org));
  put("LOC", report.of(corpus::EntityType::Loc));
  put("MISC", report.of(corpus::EntityType::Misc));
  put("OVERALL", report.overall());
  return out;
}

std::vector<std::tuple<std::string, std::size_t, std::size_t>> spans(
    const std::vector<std::string>& labels) {
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
  for (const corpus::EntitySpan& s : corpus::spans_from_bio(make_labels(labels)))
    out.emplace_back(std::string(corpus::to_string(s.type)), s.start, s.end);
  return out;
}

void build_mi_table(const std::vector<std::vector<std::string>>& sentences,
                    const std::string& path, std::int64_t top_k, int bins,
                    std::int64_t min_count, const std::string& denominator) {
  mi::MIConfig cfg;
  cfg.top_k = top_k;
  cfg.bins = bins;
  cfg.min_count = min_count;
  if (denominator == "adjacent") {
    cfg.denominator = mi::JointDenominator::AdjacentPositions;
  } else if (denominator == "tokens") {
    cfg.denominator = mi::JointDenominator::Tokens;
  } else {
    throw ConfigError("denominator expects adjacent or tokens, got '" + denominator + "'");
  }
  std::vector<corpus::Sentence> converted;
  converted.reserve(sentences.size());
  for (const auto& s : sentences) converted.push_back(corpus::Sentence::from_surfaces(s));
  mi::build_table(converted, cfg).save_file(path);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conditional random field named-entity tagger";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");

  py::class_<config::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_static("load", &config::load_config_file, py::arg("path"),
                  "Parse an INI-style configuration file.")
      .def(
          "set",
          [](config::RunConfig& cfg, const std::string& key, const std::string& value) {
            config::apply_override(cfg, key + "=" + value);
          },
          py::arg("key"), py::arg("value"),
          "Override one setting, e.g. set('features.gazetteer', 'true').")
      .def("validate", [](const config::RunConfig& cfg) { config::validate(cfg); })
      .def("fingerprint", [](const config::RunConfig& cfg) { return pipeline::fingerprint(cfg); });

  py::class_<Tagger>(m, "Tagger")
      .def("tag", &Tagger::tag, py::arg("tokens"), py::arg("tags") = py::none(),
           "Label one sentence; returns one BIO tag per token.")
      .def("features", &Tagger::features, py::arg("tokens"), py::arg("tags") = py::none(),
           "The observation predicates the model sees at each position.")
      .def("save", &Tagger::save, py::arg("path"))
      .def_property_readonly("fingerprint", &Tagger::fingerprint)
      .def_property_readonly("feature_count", &Tagger::feature_count);

  m.def("train", &train, py::arg("sentences"), py::arg("config") = config::RunConfig(),
        py::arg("dev") = py::none(),
        "Train a tagger on (tokens, labels[, tags]) sentences.");
  m.def("load", &load_tagger, py::arg("path"), py::arg("config") = config::RunConfig(),
        py::arg("force") = false, "Load a saved model with the resources named by config.");
  m.def("evaluate", &evaluate_labels, py::arg("gold"), py::arg("pred"),
        py::arg("relaxed") = false,
        "Entity-level scores per type plus OVERALL, as percentages.");
  m.def("spans", &spans, py::arg("labels"), "Decode BIO labels into (type, start, end) spans.");
  m.def("build_mi_table", &build_mi_table, py::arg("sentences"), py::arg("path"),
        py::arg("top_k") = 1'000'000, py::arg("bins") = 2, py::arg("min_count") = 2,
        py::arg("denominator") = "adjacent",
        "Rank adjacent-pair mutual information and write the binned table.");
}
