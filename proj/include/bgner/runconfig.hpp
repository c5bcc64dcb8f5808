#ifndef BGNER_RUNCONFIG_HPP
#define BGNER_RUNCONFIG_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bgner/crf.hpp"
#include "bgner/features.hpp"
#include "bgner/induction.hpp"

namespace bgner::config {

/// Everything a run needs beyond its corpora: feature-family switches,
/// resource paths, CRF hyperparameters, and induction settings. Parsed
/// from a sectioned key = value file; individual keys can be overridden
/// with `section.key=value` strings.
struct RunConfig {
  features::FeatureConfig features;
  bool induction_enabled = false;

  std::vector<std::string> gazetteer_paths;
  bool gazetteer_casefold = false;
  std::string msd_mapping_path;
  std::string mi_table_path;
  std::string domain_rules_path;  // empty selects the built-in rules

  crf::TrainConfig crf;
  bool bio_mask = false;

  induction::InductionConfig induction;
};

RunConfig parse_config(std::istream& in);
RunConfig parse_config_string(std::string_view text);
RunConfig load_config_file(const std::string& path);

/// Applies one `section.key=value` override.
void apply_override(RunConfig& config, std::string_view assignment);

/// Cross-field checks: msd families need a mapping path, mi needs a table
/// path, gazetteer needs at least one list, induction limits make sense.
void validate(const RunConfig& config);

}  // namespace bgner::config

#endif
