#include "bgner/pipeline.hpp"

#include <cstdio>
#include <ostream>
#include <utility>

#include "bgner/error.hpp"
#include "bgner/eval.hpp"

namespace bgner::pipeline {

namespace {

std::string basename_stem(std::string_view path) {
  auto slash = path.find_last_of("/\\");
  if (slash != std::string_view::npos) path.remove_prefix(slash + 1);
  auto dot = path.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) path = path.substr(0, dot);
  return std::string(path);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

features::ExtractionResources Resources::view(const features::FeatureConfig& config) const {
  features::ExtractionResources res;
  res.config = config;
  res.mapping = mapping ? &*mapping : nullptr;
  res.gazetteers = gazetteers;
  res.mi_table = mi_table ? &*mi_table : nullptr;
  res.domain_rules = domain_rules;
  return res;
}

Resources load_resources(const config::RunConfig& config) {
  Resources res;
  if (!config.msd_mapping_path.empty())
    res.mapping = msd::MsdMapping::load_file(config.msd_mapping_path);
  const auto normalize = config.gazetteer_casefold ? gaz::Normalize::Casefold : gaz::Normalize::Exact;
  for (const auto& path : config.gazetteer_paths) {
    std::vector<gaz::CompileWarning> warnings;
    auto g = gaz::Gazetteer::compile_file(basename_stem(path), path, normalize, &warnings);
    for (const auto& w : warnings)
      res.warnings.push_back(path + " line " + std::to_string(w.line) + ": " + w.message);
    res.gazetteers.push_back(std::move(g));
  }
  if (!config.mi_table_path.empty()) res.mi_table = mi::MITable::load_file(config.mi_table_path);
  res.domain_rules = config.domain_rules_path.empty()
                         ? features::DomainRules::defaults()
                         : features::DomainRules::load_file(config.domain_rules_path);
  return res;
}

std::string fingerprint(const config::RunConfig& config) {
  const auto& f = config.features;
  std::string families;
  auto add = [&](bool on, std::string_view name) {
    if (!on) return;
    if (!families.empty()) families += ',';
    families += name;
  };
  add(f.orthographic, "orthographic");
  add(f.ngram, "ngram");
  add(f.affix, "affix");
  add(f.context, "context");
  add(f.domain, "domain");
  add(f.gazetteer, "gazetteer");
  add(f.local_msd, "local_msd");
  add(f.nonlocal_msd, "nonlocal_msd");
  add(f.mi, "mi");
  if (families.empty()) families = "-";

  std::string gazetteers;
  for (const auto& path : config.gazetteer_paths) {
    if (!gazetteers.empty()) gazetteers += ',';
    gazetteers += basename_stem(path);
  }
  if (gazetteers.empty()) gazetteers = "-";

  std::string out = "v1;families=" + families + ";alphabet=" + f.alphabet;
  out += ";gazetteers=" + gazetteers;
  out += ";casefold=" + std::string(config.gazetteer_casefold ? "1" : "0");
  out += ";domain=" +
         (config.domain_rules_path.empty() ? std::string("default")
                                           : basename_stem(config.domain_rules_path));
  out += ";msd=" +
         (config.msd_mapping_path.empty() ? std::string("-") : basename_stem(config.msd_mapping_path));
  out += ";mi=" +
         (config.mi_table_path.empty() ? std::string("-") : basename_stem(config.mi_table_path));
  return out;
}

std::string_view family_of(const pred::Predicate& p) {
  auto parsed = pred::parse_predicate(p);
  if (parsed.ns == "CONJ") return "conjunction";
  if (parsed.ns == "W") return parsed.has_offset ? std::string_view("context") : "word";
  if (parsed.ns == "ORTH") return "orthographic";
  if (parsed.ns == "NGRAM") return "ngram";
  if (parsed.ns == "PRE" || parsed.ns == "SUF") return "affix";
  if (parsed.ns == "CTX") return "context";
  if (parsed.ns == "DOM") return "domain";
  if (parsed.ns == "GAZ") return "gazetteer";
  if (parsed.ns == "LTAG") return "local_msd";
  if (parsed.ns == "NTAG") return "nonlocal_msd";
  if (parsed.ns == "MI") return "mi";
  throw DataError("unclassifiable predicate: " + p);
}

std::vector<induction::Instance> extract_training(std::span<const corpus::TaggedSentence> data,
                                                  const features::ExtractionResources& res,
                                                  features::ExtractionStats* stats) {
  std::vector<induction::Instance> out;
  out.reserve(data.size());
  for (const auto& ts : data)
    out.push_back({features::extract_observations(ts.sentence, res, stats), ts.labels});
  return out;
}

TrainOutcome train_model(std::span<const corpus::TaggedSentence> train,
                         std::span<const corpus::TaggedSentence> dev,
                         const config::RunConfig& config, const Resources& res,
                         std::ostream* log) {
  if (train.empty()) throw DataError("training corpus is empty");
  const auto view = res.view(config.features);
  auto instances = extract_training(train, view);

  crf::FeatureIndex index;
  for (const auto& inst : instances) crf::index_training_features(index, inst.obs, inst.labels);

  std::vector<crf::EncodedSentence> encoded;
  encoded.reserve(instances.size());
  for (const auto& inst : instances) encoded.push_back(crf::encode(inst.obs, inst.labels, index));

  crf::TrainConfig tc = config.crf;

  crf::Model probe;
  std::vector<crf::EncodedSentence> dev_encoded;
  std::vector<corpus::LabelSequence> dev_gold;
  if (!dev.empty()) {
    probe.index = index;
    probe.l2_sigma = config.crf.l2_sigma;
    dev_encoded.reserve(dev.size());
    for (const auto& ts : dev) {
      dev_encoded.push_back(crf::encode(features::extract_observations(ts.sentence, view), probe.index));
      dev_gold.push_back(ts.labels);
    }
  }
  if (log) {
    auto prev = tc.on_iteration;
    tc.on_iteration = [&, prev](const crf::IterationInfo& info) {
      if (prev) prev(info);
      *log << "iteration " << info.iteration << " objective " << fixed(info.objective, 6);
      if (!dev.empty()) {
        probe.weights = info.weights;
        std::vector<corpus::LabelSequence> pred;
        pred.reserve(dev_encoded.size());
        for (const auto& enc : dev_encoded)
          pred.push_back(crf::viterbi(crf::build_lattice(enc, probe), config.bio_mask));
        *log << " dev_f1 " << fixed(eval::evaluate(dev_gold, pred).overall().f1(), 2);
      }
      *log << "\n";
    };
  }

  TrainOutcome outcome;
  outcome.model = crf::train(encoded, std::move(index), tc);

  if (config.induction_enabled && config.induction.rounds > 0) {
    induction::InductionConfig ic = config.induction;
    ic.train = config.crf;
    auto [induced, report] = induction::induce(instances, std::move(outcome.model), ic);
    outcome.model = std::move(induced);
    outcome.induction = std::move(report);
  }

  outcome.model.fingerprint = fingerprint(config);

  for (auto family : kFamilies) outcome.family_rows[std::string(family)] = 0;
  for (std::int32_t row = 0; row < outcome.model.index.row_count(); ++row)
    ++outcome.family_rows[std::string(family_of(outcome.model.index.row_name(row)))];

  for (auto& inst : instances) {
    induction::augment_with_model_conjunctions(inst.obs, outcome.model);
  }
  std::vector<crf::EncodedSentence> final_encoded;
  final_encoded.reserve(instances.size());
  for (const auto& inst : instances)
    final_encoded.push_back(crf::encode(inst.obs, inst.labels, outcome.model.index));
  outcome.final_objective = crf::log_likelihood_and_gradient(final_encoded, outcome.model).value;
  return outcome;
}

corpus::LabelSequence tag_sentence(const corpus::Sentence& sentence, const crf::Model& model,
                                   const features::ExtractionResources& res, bool bio_mask,
                                   features::ExtractionStats* stats) {
  auto obs = features::extract_observations(sentence, res, stats);
  induction::augment_with_model_conjunctions(obs, model);
  const auto enc = crf::encode(obs, model.index);
  return crf::viterbi(crf::build_lattice(enc, model), bio_mask);
}

}  // namespace bgner::pipeline
