#ifndef BGNER_GAZETTEER_HPP
#define BGNER_GAZETTEER_HPP

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgner/corpus.hpp"
#include "bgner/predicate.hpp"

namespace bgner::gaz {

enum class Normalize { Exact, Casefold };

struct CompileWarning {
  std::size_t line;
  std::string message;
};

/// A compiled list of token-sequence entries. An entry matches only when
/// all of its tokens appear contiguously in the sentence.
class Gazetteer {
 public:
  static Gazetteer compile(std::string name, std::istream& in, Normalize normalize,
                           std::vector<CompileWarning>* warnings = nullptr);
  static Gazetteer compile_string(std::string name, std::string_view text, Normalize normalize,
                                  std::vector<CompileWarning>* warnings = nullptr);
  static Gazetteer compile_file(std::string name, const std::string& path, Normalize normalize,
                                std::vector<CompileWarning>* warnings = nullptr);

  const std::string& name() const { return name_; }
  std::size_t entry_count() const { return entry_count_; }
  Normalize normalize() const { return normalize_; }

  /// True iff some entry occurs as a contiguous token run covering position i.
  bool match_at(const corpus::Sentence& sentence, std::size_t i) const;

  /// One flag per position: covered by at least one full-entry match.
  std::vector<bool> coverage(const corpus::Sentence& sentence) const;

  /// Entries in sorted order, tokens space-joined (for round-trip checks).
  std::vector<std::string> entries() const;

 private:
  struct Node {
    std::map<std::string, std::size_t> next;  // token -> node index
    bool terminal = false;
  };

  std::string norm(std::string_view token) const;

  std::string name_;
  Normalize normalize_ = Normalize::Exact;
  std::vector<Node> nodes_{Node{}};  // node 0 is the root
  std::size_t entry_count_ = 0;
  std::size_t max_entry_len_ = 0;
};

/// `GAZ=name` when a match covers i; `GAZ@-1=`/`GAZ@+1=` for the neighbors.
pred::PredicateSet gazetteer_predicates(const corpus::Sentence& sentence, std::size_t i,
                                        std::span<const Gazetteer> gazetteers);

}  // namespace bgner::gaz

#endif
