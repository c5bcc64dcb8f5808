#ifndef BGNER_MI_HPP
#define BGNER_MI_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/predicate.hpp"

namespace bgner::mi {

using Pair = std::pair<std::string, std::string>;

struct BigramCounts {
  std::map<std::string, std::int64_t> unigrams;
  std::map<Pair, std::int64_t> bigrams;  // (w1, w2): w2 immediately follows w1
  std::int64_t total_tokens = 0;         // N
  std::int64_t total_sentences = 0;      // S
};

/// Which denominator estimates the joint Pr(x1,x2).
enum class JointDenominator {
  AdjacentPositions,  // N - S (default)
  Tokens,             // N
};

struct ScoredPair {
  Pair pair;
  double mi;
  std::int64_t count;
};

struct MIConfig {
  std::int64_t top_k = 1'000'000;
  int bins = 2;
  std::int64_t min_count = 2;
  JointDenominator denominator = JointDenominator::AdjacentPositions;
};

class MITable {
 public:
  struct Entry {
    double mi;
    int bin;
  };

  MITable() = default;
  MITable(std::vector<ScoredPair> ranked, int bins, std::int64_t n, std::int64_t s,
          std::int64_t top_k);

  /// nullptr when the ordered pair is not in the table.
  const Entry* lookup(std::string_view w1, std::string_view w2) const;

  std::size_t size() const { return table_.size(); }
  int bins() const { return bins_; }
  std::int64_t total_tokens() const { return n_; }
  std::int64_t total_sentences() const { return s_; }
  std::int64_t top_k() const { return top_k_; }

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static MITable load(std::istream& in);
  static MITable load_file(const std::string& path);

  /// Pairs in the table's rank order (highest MI first).
  const std::vector<std::pair<Pair, Entry>>& rows() const { return rows_; }

 private:
  std::map<Pair, Entry> table_;
  std::vector<std::pair<Pair, Entry>> rows_;
  int bins_ = 0;
  std::int64_t n_ = 0;
  std::int64_t s_ = 0;
  std::int64_t top_k_ = 0;
};

BigramCounts count_bigrams(std::span<const corpus::Sentence> sentences);

/// MI(x1,x2) = ln( (c12/D) / ((c1/N)(c2/N)) ), D per the denominator choice.
/// Pairs with bigram count below min_count are dropped. Output is ranked:
/// MI desc, then bigram count desc, then pair asc.
std::vector<ScoredPair> compute_mi(const BigramCounts& counts, std::int64_t min_count,
                                   JointDenominator denominator = JointDenominator::AdjacentPositions);

MITable build_table(std::span<const corpus::Sentence> sentences, const MIConfig& config);

/// `MI@+1=bin_b` for (w_i, w_{i+1}); `MI@-1=bin_b` for (w_{i-1}, w_i).
pred::PredicateSet mi_predicates(const corpus::Sentence& sentence, std::size_t i,
                                 const MITable& table);

}  // namespace bgner::mi

#endif
