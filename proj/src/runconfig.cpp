#include "bgner/runconfig.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "bgner/error.hpp"

namespace bgner::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_bool(std::string_view value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + std::string(value) + "'");
}

int parse_int(std::string_view value, const std::string& key) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view value, const std::string& key) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + std::string(value) + "'");
  }
  return out;
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  while (!value.empty()) {
    const std::size_t comma = value.find(',');
    std::string_view item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

void assign(RunConfig& c, const std::string& section, const std::string& key,
            std::string_view value) {
  const std::string full = section + "." + key;
  if (section == "features") {
    features::FeatureConfig& f = c.features;
    if (key == "orthographic") f.orthographic = parse_bool(value, full);
    else if (key == "ngram") f.ngram = parse_bool(value, full);
    else if (key == "affix") f.affix = parse_bool(value, full);
    else if (key == "context") f.context = parse_bool(value, full);
    else if (key == "domain") f.domain = parse_bool(value, full);
    else if (key == "gazetteer") f.gazetteer = parse_bool(value, full);
    else if (key == "local_msd") f.local_msd = parse_bool(value, full);
    else if (key == "nonlocal_msd") f.nonlocal_msd = parse_bool(value, full);
    else if (key == "mi") f.mi = parse_bool(value, full);
    else if (key == "induction") c.induction_enabled = parse_bool(value, full);
    else if (key == "alphabet") f.alphabet = std::string(value);
    else throw ConfigError("unknown config key '" + full + "'");
  } else if (section == "resources") {
    if (key == "gazetteers") c.gazetteer_paths = parse_list(value);
    else if (key == "gazetteer_casefold") c.gazetteer_casefold = parse_bool(value, full);
    else if (key == "msd_mapping") c.msd_mapping_path = std::string(value);
    else if (key == "mi_table") c.mi_table_path = std::string(value);
    else if (key == "domain_rules") c.domain_rules_path = std::string(value);
    else throw ConfigError("unknown config key '" + full + "'");
  } else if (section == "crf") {
    if (key == "l2_sigma") c.crf.l2_sigma = parse_real(value, full);
    else if (key == "max_iterations") c.crf.max_iterations = parse_int(value, full);
    else if (key == "grad_tolerance") c.crf.grad_tolerance = parse_real(value, full);
    else if (key == "bio_mask") c.bio_mask = parse_bool(value, full);
    else throw ConfigError("unknown config key '" + full + "'");
  } else if (section == "induction") {
    if (key == "rounds") c.induction.rounds = parse_int(value, full);
    else if (key == "candidates_per_round") c.induction.candidates_per_round = parse_int(value, full);
    else if (key == "additions_per_round") c.induction.additions_per_round = parse_int(value, full);
    else if (key == "max_arity") c.induction.max_arity = parse_int(value, full);
    else if (key == "gain_floor") c.induction.gain_floor = parse_real(value, full);
    else if (key == "error_threshold") c.induction.error_threshold = parse_real(value, full);
    else throw ConfigError("unknown config key '" + full + "'");
  } else {
    throw ConfigError("unknown config section '" + section + "'");
  }
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    try {
      if (s.front() == '[') {
        if (s.back() != ']' || s.size() < 3) throw ConfigError("malformed section header");
        section = std::string(trim(s.substr(1, s.size() - 2)));
        continue;
      }
      const std::size_t eq = s.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key = value");
      if (section.empty()) throw ConfigError("key outside any [section]");
      const std::string key{trim(s.substr(0, eq))};
      assign(config, section, key, trim(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig parse_config_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  const std::size_t dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value, got '" +
                      std::string(assignment) + "'");
  }
  const std::string section{trim(assignment.substr(0, dot))};
  const std::string key{trim(assignment.substr(dot + 1, eq - dot - 1))};
  assign(config, section, key, trim(assignment.substr(eq + 1)));
}

void validate(const RunConfig& config) {
  const features::FeatureConfig& f = config.features;
  if ((f.local_msd || f.nonlocal_msd) && config.msd_mapping_path.empty()) {
    throw ConfigError("features.local_msd and features.nonlocal_msd require resources.msd_mapping");
  }
  if (f.mi && config.mi_table_path.empty()) {
    throw ConfigError("features.mi requires resources.mi_table");
  }
  if (f.gazetteer && config.gazetteer_paths.empty()) {
    throw ConfigError("features.gazetteer requires resources.gazetteers");
  }
  text::AlphabetConfig::by_name(f.alphabet);  // throws on unknown names
  if (!(config.crf.l2_sigma > 0.0)) throw ConfigError("crf.l2_sigma must be positive");
  if (config.crf.max_iterations < 0) throw ConfigError("crf.max_iterations must be non-negative");
  if (!(config.crf.grad_tolerance >= 0.0)) {
    throw ConfigError("crf.grad_tolerance must be non-negative");
  }
  if (config.induction_enabled) {
    const induction::InductionConfig& ic = config.induction;
    if (ic.rounds < 0) throw ConfigError("induction.rounds must be non-negative");
    if (ic.candidates_per_round <= 0) {
      throw ConfigError("induction.candidates_per_round must be positive");
    }
    if (ic.additions_per_round <= 0) {
      throw ConfigError("induction.additions_per_round must be positive");
    }
    if (ic.additions_per_round > ic.candidates_per_round) {
      throw ConfigError("induction.additions_per_round must not exceed candidates_per_round");
    }
    if (ic.max_arity < 2) throw ConfigError("induction.max_arity must be at least 2");
    if (!(ic.gain_floor >= 0.0)) throw ConfigError("induction.gain_floor must be non-negative");
    if (!(ic.error_threshold >= 0.0) || !(ic.error_threshold <= 1.0)) {
      throw ConfigError("induction.error_threshold must lie in [0, 1]");
    }
  }
}

}  // namespace bgner::config
