#include "bgner/mi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bgner/error.hpp"

namespace bgner::mi {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BigramCounts count_bigrams(std::span<const corpus::Sentence> sentences) {
  if (sentences.empty()) throw DataError("cannot count bigrams of an empty corpus");
  BigramCounts out;
  for (const corpus::Sentence& s : sentences) {
    ++out.total_sentences;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ++out.total_tokens;
      ++out.unigrams[s[i].surface];
      if (i + 1 < s.size()) ++out.bigrams[{s[i].surface, s[i + 1].surface}];
    }
  }
  return out;
}

std::vector<ScoredPair> compute_mi(const BigramCounts& counts, std::int64_t min_count,
                                   JointDenominator denominator) {
  if (min_count < 1) throw ConfigError("min_count must be >= 1");
  const double n = static_cast<double>(counts.total_tokens);
  const double d = denominator == JointDenominator::AdjacentPositions
                       ? static_cast<double>(counts.total_tokens - counts.total_sentences)
                       : n;

  std::vector<ScoredPair> out;
  for (const auto& [pair, c12] : counts.bigrams) {
    if (c12 < min_count) continue;
    const double c1 = static_cast<double>(counts.unigrams.at(pair.first));
    const double c2 = static_cast<double>(counts.unigrams.at(pair.second));
    const double value = std::log((static_cast<double>(c12) / d) / ((c1 / n) * (c2 / n)));
    out.push_back({pair, value, c12});
  }

  std::sort(out.begin(), out.end(), [](const ScoredPair& a, const ScoredPair& b) {
    if (a.mi != b.mi) return a.mi > b.mi;
    if (a.count != b.count) return a.count > b.count;
    return a.pair < b.pair;
  });
  return out;
}

MITable::MITable(std::vector<ScoredPair> ranked, int bins, std::int64_t n, std::int64_t s,
                 std::int64_t top_k)
    : bins_(bins), n_(n), s_(s), top_k_(top_k) {
  if (bins < 1) throw ConfigError("bins must be >= 1");
  const std::size_t p = ranked.size();
  if (p < static_cast<std::size_t>(bins)) {
    throw DataError("fewer surviving pairs (" + std::to_string(p) + ") than bins (" +
                    std::to_string(bins) + ")");
  }
  // ranked is MI-descending; bin 0 holds the lowest MI values and the
  // remainder pairs go to the lowest bins.
  const std::size_t base = p / static_cast<std::size_t>(bins);
  const std::size_t extra = p % static_cast<std::size_t>(bins);
  std::vector<std::size_t> bin_size(static_cast<std::size_t>(bins), base);
  for (std::size_t b = 0; b < extra; ++b) ++bin_size[b];

  std::size_t idx = p;  // walk from the lowest-MI end
  for (int b = 0; b < bins; ++b) {
    for (std::size_t k = 0; k < bin_size[static_cast<std::size_t>(b)]; ++k) {
      --idx;
      rows_.push_back({ranked[idx].pair, Entry{ranked[idx].mi, b}});
    }
  }
  std::reverse(rows_.begin(), rows_.end());  // back to MI-descending order
  for (const auto& [pair, entry] : rows_) table_.emplace(pair, entry);
}

const MITable::Entry* MITable::lookup(std::string_view w1, std::string_view w2) const {
  auto it = table_.find(Pair{std::string(w1), std::string(w2)});
  return it == table_.end() ? nullptr : &it->second;
}

void MITable::save(std::ostream& out) const {
  out << "bgner-mi 1\tN=" << n_ << "\tS=" << s_ << "\ttop_k=" << top_k_ << "\tbins=" << bins_
      << "\n";
  for (const auto& [pair, entry] : rows_) {
    out << pair.first << '\t' << pair.second << '\t' << format_double(entry.mi) << '\t'
        << entry.bin << '\n';
  }
}

void MITable::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write mi table file: " + path);
  save(out);
}

MITable MITable::load(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("empty mi table file");
  MITable t;
  long long n = 0, s = 0, top_k = 0;
  int bins = 0;
  if (std::sscanf(header.c_str(), "bgner-mi 1\tN=%lld\tS=%lld\ttop_k=%lld\tbins=%d", &n, &s,
                  &top_k, &bins) != 4) {
    throw DataError("bad mi table header: " + header);
  }
  t.n_ = n;
  t.s_ = s;
  t.top_k_ = top_k;
  t.bins_ = bins;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string w1, w2, mi_text, bin_text;
    if (!std::getline(row, w1, '\t') || !std::getline(row, w2, '\t') ||
        !std::getline(row, mi_text, '\t') || !std::getline(row, bin_text)) {
      throw DataError("bad mi table row", line_no);
    }
    Entry e{};
    try {
      e.mi = std::stod(mi_text);
      e.bin = std::stoi(bin_text);
    } catch (const std::exception&) {
      throw DataError("bad mi table row", line_no);
    }
    if (e.bin < 0 || e.bin >= t.bins_) throw DataError("bin out of range", line_no);
    if (!t.table_.emplace(Pair{w1, w2}, e).second) {
      throw DataError("duplicate pair in mi table", line_no);
    }
    t.rows_.push_back({Pair{std::move(w1), std::move(w2)}, e});
  }
  return t;
}

MITable MITable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open mi table file: " + path);
  try {
    return load(in);
  } catch (DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

MITable build_table(std::span<const corpus::Sentence> sentences, const MIConfig& config) {
  if (config.top_k < 1) throw ConfigError("top_k must be >= 1");
  BigramCounts counts = count_bigrams(sentences);
  std::vector<ScoredPair> ranked = compute_mi(counts, config.min_count, config.denominator);
  if (std::cmp_greater(ranked.size(), config.top_k)) {
    ranked.resize(static_cast<std::size_t>(config.top_k));
  }
  return MITable(std::move(ranked), config.bins, counts.total_tokens, counts.total_sentences,
                 config.top_k);
}

pred::PredicateSet mi_predicates(const corpus::Sentence& sentence, std::size_t i,
                                 const MITable& table) {
  if (i >= sentence.size()) throw DataError("mi_predicates position out of range");
  pred::PredicateSet out;
  if (i + 1 < sentence.size()) {
    if (const MITable::Entry* e = table.lookup(sentence[i].surface, sentence[i + 1].surface)) {
      out.insert(pred::make_predicate_at("MI", 1, "bin_" + std::to_string(e->bin)));
    }
  }
  if (i > 0) {
    if (const MITable::Entry* e = table.lookup(sentence[i - 1].surface, sentence[i].surface)) {
      out.insert(pred::make_predicate_at("MI", -1, "bin_" + std::to_string(e->bin)));
    }
  }
  return out;
}

}  // namespace bgner::mi
