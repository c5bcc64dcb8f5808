#include "bgner/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "bgner/error.hpp"
#include "doctest.h"

using namespace bgner;
using namespace bgner::config;

TEST_SUITE_BEGIN("runconfig");

namespace {
const char* kFull =
    "# run settings\n"
    "[features]\n"
    "orthographic = true\n"
    "ngram = false\n"
    "affix = true\n"
    "context = true\n"
    "domain = true\n"
    "gazetteer = true\n"
    "local_msd = true\n"
    "nonlocal_msd = false\n"
    "mi = true\n"
    "induction = true\n"
    "alphabet = latin_cyrillic\n"
    "\n"
    "[resources]\n"
    "gazetteers = data/per.gaz, data/loc.gaz\n"
    "gazetteer_casefold = true\n"
    "msd_mapping = data/msd.map\n"
    "mi_table = data/mi.table\n"
    "domain_rules = data/domain.rules\n"
    "\n"
    "[crf]\n"
    "l2_sigma = 4.5\n"
    "max_iterations = 120\n"
    "grad_tolerance = 1e-3\n"
    "bio_mask = true\n"
    "\n"
    "[induction]\n"
    "rounds = 2\n"
    "candidates_per_round = 400\n"
    "additions_per_round = 40\n"
    "max_arity = 4\n"
    "gain_floor = 0.25\n"
    "error_threshold = 0.4\n";
}

TEST_CASE("defaults match the struct initializers") {
  RunConfig c = parse_config_string("");
  CHECK(c.features.orthographic);
  CHECK(c.features.ngram);
  CHECK(c.features.affix);
  CHECK(c.features.context);
  CHECK_FALSE(c.features.domain);
  CHECK_FALSE(c.features.gazetteer);
  CHECK_FALSE(c.features.local_msd);
  CHECK_FALSE(c.features.nonlocal_msd);
  CHECK_FALSE(c.features.mi);
  CHECK(c.features.alphabet == "cyrillic");
  CHECK_FALSE(c.induction_enabled);
  CHECK(c.gazetteer_paths.empty());
  CHECK_FALSE(c.gazetteer_casefold);
  CHECK(c.crf.l2_sigma == 10.0);
  CHECK(c.crf.max_iterations == 300);
  CHECK(c.crf.grad_tolerance == 1e-4);
  CHECK_FALSE(c.bio_mask);
  CHECK(c.induction.rounds == 3);
  CHECK(c.induction.candidates_per_round == 1000);
  CHECK(c.induction.additions_per_round == 200);
  CHECK(c.induction.max_arity == 3);
  CHECK(c.induction.gain_floor == 0.0);
  CHECK(c.induction.error_threshold == 0.5);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("full file parses every section") {
  RunConfig c = parse_config_string(kFull);
  CHECK(c.features.orthographic);
  CHECK_FALSE(c.features.ngram);
  CHECK(c.features.domain);
  CHECK(c.features.gazetteer);
  CHECK(c.features.local_msd);
  CHECK_FALSE(c.features.nonlocal_msd);
  CHECK(c.features.mi);
  CHECK(c.induction_enabled);
  CHECK(c.features.alphabet == "latin_cyrillic");
  CHECK(c.gazetteer_paths == std::vector<std::string>{"data/per.gaz", "data/loc.gaz"});
  CHECK(c.gazetteer_casefold);
  CHECK(c.msd_mapping_path == "data/msd.map");
  CHECK(c.mi_table_path == "data/mi.table");
  CHECK(c.domain_rules_path == "data/domain.rules");
  CHECK(c.crf.l2_sigma == 4.5);
  CHECK(c.crf.max_iterations == 120);
  CHECK(c.crf.grad_tolerance == 1e-3);
  CHECK(c.bio_mask);
  CHECK(c.induction.rounds == 2);
  CHECK(c.induction.candidates_per_round == 400);
  CHECK(c.induction.additions_per_round == 40);
  CHECK(c.induction.max_arity == 4);
  CHECK(c.induction.gain_floor == 0.25);
  CHECK(c.induction.error_threshold == 0.4);
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
  RunConfig c = parse_config_string(
      "; leading comment\n"
      "\n"
      "[ crf ]\n"
      "  l2_sigma=2\n"
      "max_iterations   =  7   \n");
  CHECK(c.crf.l2_sigma == 2.0);
  CHECK(c.crf.max_iterations == 7);
}

TEST_CASE("sigma accepts inf") {
  RunConfig c = parse_config_string("[crf]\nl2_sigma = inf\n");
  CHECK(std::isinf(c.crf.l2_sigma));
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("errors carry the line number") {
  using Catcher = ConfigError;
  CHECK_THROWS_WITH_AS(parse_config_string("[features]\nngram = maybe\n"),
                       "config line 2: 'features.ngram' expects true or false, got 'maybe'",
                       Catcher);
  CHECK_THROWS_WITH_AS(parse_config_string("[nope]\nx = 1\n"),
                       "config line 2: unknown config section 'nope'", Catcher);
  CHECK_THROWS_WITH_AS(parse_config_string("[features]\nshiny = 1\n"),
                       "config line 2: unknown config key 'features.shiny'", Catcher);
  CHECK_THROWS_WITH_AS(parse_config_string("x = 1\n"),
                       "config line 1: key outside any [section]", Catcher);
  CHECK_THROWS_WITH_AS(parse_config_string("[crf\nl2_sigma = 1\n"),
                       "config line 1: malformed section header", Catcher);
  CHECK_THROWS_WITH_AS(parse_config_string("[crf]\nl2_sigma\n"),
                       "config line 2: expected key = value", Catcher);
  CHECK_THROWS_AS(parse_config_string("[crf]\nmax_iterations = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[crf]\nl2_sigma = 1x\n"), ConfigError);
}

TEST_CASE("overrides mirror file keys") {
  RunConfig c = parse_config_string(kFull);
  apply_override(c, "crf.l2_sigma=9");
  apply_override(c, "features.mi=false");
  apply_override(c, "resources.gazetteers=solo.gaz");
  CHECK(c.crf.l2_sigma == 9.0);
  CHECK_FALSE(c.features.mi);
  CHECK(c.gazetteer_paths == std::vector<std::string>{"solo.gaz"});
  CHECK_THROWS_AS(apply_override(c, "l2_sigma=9"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "crf.l2_sigma"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "crf.bogus=1"), ConfigError);
}

TEST_CASE("validate names the offending requirement") {
  RunConfig c;
  c.features.local_msd = true;
  CHECK_THROWS_WITH_AS(
      validate(c), "features.local_msd and features.nonlocal_msd require resources.msd_mapping",
      ConfigError);
  c = RunConfig{};
  c.features.mi = true;
  CHECK_THROWS_WITH_AS(validate(c), "features.mi requires resources.mi_table", ConfigError);
  c = RunConfig{};
  c.features.gazetteer = true;
  CHECK_THROWS_WITH_AS(validate(c), "features.gazetteer requires resources.gazetteers",
                       ConfigError);
  c = RunConfig{};
  c.features.alphabet = "runic";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.crf.l2_sigma = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.crf.max_iterations = -1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.crf.grad_tolerance = -0.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("induction bounds checked only when enabled") {
  RunConfig c;
  c.induction.max_arity = 1;
  CHECK_NOTHROW(validate(c));
  c.induction_enabled = true;
  CHECK_THROWS_WITH_AS(validate(c), "induction.max_arity must be at least 2", ConfigError);
  c = RunConfig{};
  c.induction_enabled = true;
  c.induction.additions_per_round = 500;
  c.induction.candidates_per_round = 100;
  CHECK_THROWS_WITH_AS(validate(c),
                       "induction.additions_per_round must not exceed candidates_per_round",
                       ConfigError);
  c = RunConfig{};
  c.induction_enabled = true;
  c.induction.error_threshold = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.induction_enabled = true;
  c.induction.gain_floor = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("file loading reports the path") {
  const std::string path = "test_runconfig.tmp.ini";
  {
    std::ofstream out(path);
    out << "[crf]\nl2_sigma = 3\n";
  }
  RunConfig c = load_config_file(path);
  CHECK(c.crf.l2_sigma == 3.0);
  {
    std::ofstream out(path);
    out << "[crf]\nl2_sigma = bad\n";
  }
  try {
    load_config_file(path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(path) == 0);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config_file("no_such_config.ini"), ConfigError);
}

TEST_SUITE_END();
