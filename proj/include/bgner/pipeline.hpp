#ifndef BGNER_PIPELINE_HPP
#define BGNER_PIPELINE_HPP

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/crf.hpp"
#include "bgner/features.hpp"
#include "bgner/induction.hpp"
#include "bgner/runconfig.hpp"

namespace bgner::pipeline {

/// Owned feature resources loaded from the paths named in a RunConfig.
struct Resources {
  std::optional<msd::MsdMapping> mapping;
  std::vector<gaz::Gazetteer> gazetteers;
  std::optional<mi::MITable> mi_table;
  features::DomainRules domain_rules;
  std::vector<std::string> warnings;

  features::ExtractionResources view(const features::FeatureConfig& config) const;
};

Resources load_resources(const config::RunConfig& config);

/// Stable digest of everything that shapes extraction: family switches,
/// alphabet, and resource identities. Stored in trained models and checked
/// before tagging.
std::string fingerprint(const config::RunConfig& config);

inline constexpr std::array<std::string_view, 11> kFamilies = {
    "word",      "orthographic", "ngram",     "affix",        "context", "domain",
    "gazetteer", "local_msd",    "nonlocal_msd", "mi",        "conjunction"};

std::string_view family_of(const pred::Predicate& p);

std::vector<induction::Instance> extract_training(std::span<const corpus::TaggedSentence> data,
                                                  const features::ExtractionResources& res,
                                                  features::ExtractionStats* stats = nullptr);

struct TrainOutcome {
  crf::Model model;
  induction::InductionReport induction;
  std::map<std::string, std::size_t> family_rows;  // distinct predicates per family
  double final_objective = 0.0;
};

/// Extracts, indexes, trains, and optionally runs induction. Per-iteration
/// dev F1 is logged when a dev corpus is given. The returned model carries
/// the config fingerprint.
TrainOutcome train_model(std::span<const corpus::TaggedSentence> train,
                         std::span<const corpus::TaggedSentence> dev,
                         const config::RunConfig& config, const Resources& res,
                         std::ostream* log = nullptr);

corpus::LabelSequence tag_sentence(const corpus::Sentence& sentence, const crf::Model& model,
                                   const features::ExtractionResources& res, bool bio_mask,
                                   features::ExtractionStats* stats = nullptr);

}  // namespace bgner::pipeline

#endif
