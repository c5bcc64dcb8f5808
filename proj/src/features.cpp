#include "bgner/features.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bgner/error.hpp"

namespace bgner::features {

using pred::PredicateSet;
using text::AlphabetConfig;

namespace {

bool all_of_cps(const std::u32string& cps, auto&& pred) {
  return std::all_of(cps.begin(), cps.end(), pred);
}

bool is_dash(char32_t c) { return c == U'-'; }
bool is_dot(char32_t c) { return c == U'.'; }

bool in_set(char32_t c, std::u32string_view set) {
  return set.find(c) != std::u32string_view::npos;
}

// The real-number shape: [-0-9]+ [.,]? [0-9]+ over the whole token.
bool real_number_shape(const std::u32string& cps) {
  auto digit = text::is_ascii_digit;
  auto dash_digit = [&](char32_t c) { return c == U'-' || digit(c); };
  const std::size_t n = cps.size();
  // no separator: both halves collapse into [-0-9]+ ending in a digit
  if (n >= 2 && all_of_cps(cps, dash_digit) && digit(cps[n - 1])) return true;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (cps[k] != U'.' && cps[k] != U',') continue;
    bool left = true, right = true;
    for (std::size_t i = 0; i < k && left; ++i) left = dash_digit(cps[i]);
    for (std::size_t i = k + 1; i < n && right; ++i) right = digit(cps[i]);
    if (left && right) return true;
  }
  return false;
}

bool roman_shape(const std::u32string& cps) {
  if (cps.empty()) return false;
  return all_of_cps(cps, [](char32_t c) { return in_set(c, U"ivxdlcm"); }) ||
         all_of_cps(cps, [](char32_t c) { return in_set(c, U"IVXDLCM"); });
}

}  // namespace

DomainRules DomainRules::defaults() {
  DomainRules r;
  for (const char* s : {"ska", "ski", "ov", "ova", "va", "vo"}) {
    r.rules_.push_back({s, s});
  }
  return r;
}

DomainRules DomainRules::load(std::istream& in) {
  DomainRules r;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw DataError("expected 'name<TAB>suffix'", line_no);
    }
    r.rules_.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  if (r.rules_.empty()) throw DataError("domain rule file has no rules");
  return r;
}

DomainRules DomainRules::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open domain rule file: " + path);
  try {
    return load(in);
  } catch (DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

PredicateSet orthographic_predicates(std::string_view token, const AlphabetConfig& alphabet) {
  if (token.empty()) throw DataError("orthographic_predicates requires a non-empty token");
  const std::u32string cps = text::decode_utf8(token);
  const std::size_t n = cps.size();
  auto up = [&](char32_t c) { return alphabet.is_upper(c); };
  auto low = [&](char32_t c) { return alphabet.is_lower(c); };
  auto alpha = [&](char32_t c) { return alphabet.is_alpha(c); };
  auto digit = text::is_ascii_digit;

  PredicateSet out;
  auto emit = [&](const char* row) { out.insert(pred::make_predicate("ORTH", row)); };

  if (up(cps[0])) emit("InitCap");
  if (n == 2 && up(cps[0])) emit("CapAny");
  if (up(cps[0]) && std::all_of(cps.begin() + 1, cps.end(), low)) emit("InitCapAlpha");
  if (all_of_cps(cps, up)) {
    emit("AllCap");
    emit("Acronym");  // published inventory keeps both names for this shape
  }
  if (all_of_cps(cps, low)) emit("AllLower");
  if (all_of_cps(cps, alpha)) emit("CapMix");
  if (std::any_of(cps.begin(), cps.end(), digit)) emit("ContainsDigit");
  if (n == 1 && digit(cps[0])) emit("SingleDigit");
  if (n == 2 && digit(cps[0]) && digit(cps[1])) emit("DoubleDigit");
  if (all_of_cps(cps, digit)) emit("NaturalNumber");
  if (real_number_shape(cps)) emit("RealNumber");
  if (all_of_cps(cps, [&](char32_t c) { return alpha(c) || digit(c); })) emit("AlphaNumeric");
  if (roman_shape(cps)) emit("Roman");
  if (std::any_of(cps.begin(), cps.end(), is_dash)) emit("ContainsDash");
  if (is_dash(cps[0])) emit("InitDash");
  if (is_dash(cps[n - 1])) emit("EndsDash");
  if (n == 1 && in_set(cps[0], U",.;:?!-+\"")) emit("Punctuation");
  if (n >= 2 && all_of_cps(cps, is_dot)) emit("MultiDots");
  if (is_dot(cps[n - 1])) emit("EndsWithDot");
  if (n == 2 && up(cps[0]) && is_dot(cps[1])) emit("LonelyInitial");
  if (n == 1 && alpha(cps[0])) emit("SingleChar");
  if (n == 1 && (cps[0] == U'"' || cps[0] == U'\'')) emit("Quote");
  return out;
}

PredicateSet ngram_predicates(std::string_view token) {
  if (token.empty()) throw DataError("ngram_predicates requires a non-empty token");
  const std::u32string cps = text::decode_utf8(token);
  PredicateSet out;
  for (std::size_t len = 2; len <= 4 && len <= cps.size(); ++len) {
    for (std::size_t start = 0; start + len <= cps.size(); ++start) {
      out.insert(pred::make_predicate("NGRAM", text::encode_utf8(cps.substr(start, len))));
    }
  }
  return out;
}

PredicateSet affix_predicates(std::string_view token) {
  if (token.empty()) throw DataError("affix_predicates requires a non-empty token");
  const std::u32string cps = text::decode_utf8(token);
  PredicateSet out;
  for (int len = 2; len <= 4; ++len) {
    if (cps.size() < static_cast<std::size_t>(len)) break;
    out.insert(pred::make_affix_predicate(
        "PRE", len, text::encode_utf8(cps.substr(0, static_cast<std::size_t>(len)))));
    out.insert(pred::make_affix_predicate(
        "SUF", len,
        text::encode_utf8(cps.substr(cps.size() - static_cast<std::size_t>(len)))));
  }
  return out;
}

namespace {

// Spans (open, close) with close = sentence length for unmatched openers.
// Brackets pair by kind; straight quotes toggle; Bulgarian and angled
// quotes are directional.
std::vector<std::pair<std::size_t, std::size_t>> delimiter_spans(
    const corpus::Sentence& s, bool quotes) {
  struct Kind {
    std::string_view open, close;
  };
  static const Kind kBrackets[] = {{"(", ")"}, {"[", "]"}};
  static const Kind kQuotes[] = {{"\"", "\""}, {"'", "'"}, {"„", "“"},
                                 {"«", "»"}};
  std::span<const Kind> kinds = quotes ? std::span<const Kind>(kQuotes)
                                       : std::span<const Kind>(kBrackets);

  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::vector<std::vector<std::size_t>> stacks(kinds.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string& tok = s[i].surface;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      if (kinds[k].open == kinds[k].close) {
        if (tok == kinds[k].open) {
          if (stacks[k].empty()) {
            stacks[k].push_back(i);
          } else {
            spans.push_back({stacks[k].back(), i});
            stacks[k].pop_back();
          }
        }
      } else if (tok == kinds[k].open) {
        stacks[k].push_back(i);
      } else if (tok == kinds[k].close) {
        if (!stacks[k].empty()) {
          spans.push_back({stacks[k].back(), i});
          stacks[k].pop_back();
        }
      }
    }
  }
  for (const auto& stack : stacks) {
    for (std::size_t open : stack) spans.push_back({open, s.size()});
  }
  return spans;
}

bool strictly_inside(const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                     std::size_t i) {
  return std::any_of(spans.begin(), spans.end(),
                     [&](const auto& sp) { return sp.first < i && i < sp.second; });
}

}  // namespace

PredicateSet context_predicates(const corpus::Sentence& sentence, std::size_t i) {
  if (i >= sentence.size()) throw DataError("context_predicates position out of range");
  PredicateSet out;
  if (i == 0) {
    out.insert(pred::make_predicate_at("W", -1, "<S>"));
  } else {
    out.insert(pred::make_predicate_at("W", -1, sentence[i - 1].surface));
  }
  if (i + 1 == sentence.size()) {
    out.insert(pred::make_predicate_at("W", 1, "</S>"));
  } else {
    out.insert(pred::make_predicate_at("W", 1, sentence[i + 1].surface));
  }
  if (strictly_inside(delimiter_spans(sentence, false), i)) {
    out.insert(pred::make_predicate("CTX", "InParen"));
  }
  if (strictly_inside(delimiter_spans(sentence, true), i)) {
    out.insert(pred::make_predicate("CTX", "InQuote"));
  }
  return out;
}

PredicateSet domain_suffix_predicates(std::string_view token, const DomainRules& rules) {
  if (token.empty()) throw DataError("domain_suffix_predicates requires a non-empty token");
  if (rules.empty()) throw ConfigError("domain predicate family enabled with no rules");
  const std::string folded = text::fold_case(token);
  PredicateSet out;
  for (const DomainRule& rule : rules.rules()) {
    const std::string suffix = text::fold_case(rule.suffix);
    if (folded.size() >= suffix.size() &&
        folded.compare(folded.size() - suffix.size(), suffix.size(), suffix) == 0) {
      out.insert(pred::make_predicate("DOM", rule.name));
    }
  }
  return out;
}

PredicateSet morpho_local_predicates(const corpus::Token& token, const msd::MsdMapping& mapping,
                                     const PredicateSet& word_preds, std::size_t* unknown_tags) {
  PredicateSet out;
  if (!token.msd.has_value()) return out;
  const msd::TagAttributes* attrs = mapping.lookup(*token.msd);
  if (attrs == nullptr) {
    if (unknown_tags != nullptr) ++*unknown_tags;
    out.insert(pred::make_predicate("LTAG", "<UNK>"));
    return out;
  }
  for (const std::string& attr : attrs->local) {
    out.insert(pred::make_predicate("LTAG", attr));
    const std::string ltag_atom = "LTAG:" + text::mask_value(attr);
    for (const pred::Predicate& wp : word_preds) {
      if (pred::is_conjunction(wp)) continue;
      out.insert(pred::make_conjunction({ltag_atom, pred::atom_from_predicate(wp)}));
    }
  }
  return out;
}

PredicateSet morpho_nonlocal_predicates(const corpus::Sentence& sentence, std::size_t i,
                                        const msd::MsdMapping& mapping) {
  if (i >= sentence.size()) throw DataError("morpho_nonlocal_predicates position out of range");
  PredicateSet out;
  const corpus::Token& token = sentence[i];
  if (!token.msd.has_value()) return out;
  const msd::TagAttributes* attrs = mapping.lookup(*token.msd);
  if (attrs == nullptr) return out;

  for (const std::string& attr : attrs->nonlocal) {
    const std::string ntag_atom = "NTAG:" + text::mask_value(attr);
    for (int d = -3; d <= 3; ++d) {
      const long j = static_cast<long>(i) + d;
      if (j < 0 || j >= static_cast<long>(sentence.size())) continue;
      out.insert(pred::make_predicate_at("NTAG", d, attr));
      const std::string word_atom = pred::render_head("W", d) + ":" +
                                    text::mask_value(sentence[static_cast<std::size_t>(j)].surface);
      out.insert(pred::make_conjunction({ntag_atom, word_atom}));
    }
  }
  return out;
}

pred::ObservationTable extract_observations(const corpus::Sentence& sentence,
                                            const ExtractionResources& res,
                                            ExtractionStats* stats) {
  const FeatureConfig& fc = res.config;
  if ((fc.local_msd || fc.nonlocal_msd) && res.mapping == nullptr) {
    throw ConfigError("msd predicate families enabled without an msd mapping");
  }
  if (fc.mi && res.mi_table == nullptr) {
    throw ConfigError("mi predicate family enabled without an mi table");
  }
  const AlphabetConfig& alphabet = AlphabetConfig::by_name(fc.alphabet);

  pred::ObservationTable table;
  table.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const std::string& surface = sentence[i].surface;
    PredicateSet word;
    word.insert(pred::make_predicate("W", surface));
    if (fc.orthographic) word.merge(orthographic_predicates(surface, alphabet));
    if (fc.ngram) word.merge(ngram_predicates(surface));
    if (fc.affix) word.merge(affix_predicates(surface));
    if (fc.domain) word.merge(domain_suffix_predicates(surface, res.domain_rules));

    PredicateSet obs = word;
    if (fc.context) obs.merge(context_predicates(sentence, i));
    if (fc.gazetteer) obs.merge(gaz::gazetteer_predicates(sentence, i, res.gazetteers));
    if (fc.mi) obs.merge(mi::mi_predicates(sentence, i, *res.mi_table));
    if (fc.local_msd) {
      obs.merge(morpho_local_predicates(sentence[i], *res.mapping, word,
                                        stats != nullptr ? &stats->unknown_tags : nullptr));
    }
    if (fc.nonlocal_msd) obs.merge(morpho_nonlocal_predicates(sentence, i, *res.mapping));
    table.push_back(std::move(obs));
  }
  return table;
}

}  // namespace bgner::features
