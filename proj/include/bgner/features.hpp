#ifndef BGNER_FEATURES_HPP
#define BGNER_FEATURES_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/gazetteer.hpp"
#include "bgner/mi.hpp"
#include "bgner/msd.hpp"
#include "bgner/predicate.hpp"
#include "bgner/text.hpp"

namespace bgner::features {

/// The ablation switchboard: one flag per predicate family.
struct FeatureConfig {
  bool orthographic = true;
  bool ngram = true;
  bool affix = true;
  bool context = true;
  bool domain = false;
  bool gazetteer = false;
  bool local_msd = false;
  bool nonlocal_msd = false;
  bool mi = false;
  std::string alphabet = "cyrillic";
};

struct DomainRule {
  std::string name;
  std::string suffix;
};

/// Case-insensitive name-suffix rules; the built-in set covers the
/// frequent Bulgarian person/location endings.
class DomainRules {
 public:
  static DomainRules defaults();
  static DomainRules load(std::istream& in);
  static DomainRules load_file(const std::string& path);

  const std::vector<DomainRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<DomainRule> rules_;
};

pred::PredicateSet orthographic_predicates(std::string_view token,
                                           const text::AlphabetConfig& alphabet);
pred::PredicateSet ngram_predicates(std::string_view token);
pred::PredicateSet affix_predicates(std::string_view token);
pred::PredicateSet context_predicates(const corpus::Sentence& sentence, std::size_t i);
pred::PredicateSet domain_suffix_predicates(std::string_view token, const DomainRules& rules);
pred::PredicateSet morpho_local_predicates(const corpus::Token& token,
                                           const msd::MsdMapping& mapping,
                                           const pred::PredicateSet& word_preds,
                                           std::size_t* unknown_tags = nullptr);
pred::PredicateSet morpho_nonlocal_predicates(const corpus::Sentence& sentence, std::size_t i,
                                              const msd::MsdMapping& mapping);

struct ExtractionResources {
  FeatureConfig config;
  const msd::MsdMapping* mapping = nullptr;
  std::span<const gaz::Gazetteer> gazetteers;
  const mi::MITable* mi_table = nullptr;
  DomainRules domain_rules;
};

struct ExtractionStats {
  std::size_t unknown_tags = 0;
};

/// Per-position union of active families plus the mandatory `W=` predicate.
pred::ObservationTable extract_observations(const corpus::Sentence& sentence,
                                            const ExtractionResources& res,
                                            ExtractionStats* stats = nullptr);

}  // namespace bgner::features

#endif
