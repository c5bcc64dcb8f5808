#ifndef BGNER_CORPUS_HPP
#define BGNER_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgner/error.hpp"

namespace bgner::corpus {

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

enum class EntityType : std::uint8_t { Per = 0, Org, Loc, Misc };
inline constexpr int kNumEntityTypes = 4;

/// The nine BIO tags. The numeric order defines the label ids used for
/// deterministic tie-breaking in decoding and in model files.
enum class Label : std::uint8_t {
  BPer = 0,
  IPer,
  BOrg,
  IOrg,
  BLoc,
  ILoc,
  BMisc,
  IMisc,
  Outside
};
inline constexpr int kNumLabels = 9;

std::string_view to_string(Label label);
std::string_view to_string(EntityType type);
Label label_from_string(std::string_view s);  // throws DataError on unknown tag
EntityType entity_type_from_string(std::string_view s);

inline int label_id(Label label) { return static_cast<int>(label); }
Label label_from_id(int id);

bool is_begin(Label label);
bool is_inside(Label label);
inline bool is_outside(Label label) { return label == Label::Outside; }
/// Entity type of a B-/I- label; empty for O.
std::optional<EntityType> entity_type(Label label);
Label begin_label(EntityType type);
Label inside_label(EntityType type);

// ---------------------------------------------------------------------------
// Tokens and sentences
// ---------------------------------------------------------------------------

struct Token {
  std::string surface;               // non-empty, no whitespace
  std::optional<std::string> msd;    // full morpho-syntactic tag, if any
  std::size_t index = 0;             // position in its sentence

  bool operator==(const Token&) const = default;
};

class Sentence {
 public:
  /// Validates surfaces and forces token indices to 0..n-1.
  explicit Sentence(std::vector<Token> tokens);

  static Sentence from_surfaces(std::vector<std::string> surfaces);

  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  const std::vector<Token>& tokens() const { return tokens_; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }
  bool has_msd() const;

  bool operator==(const Sentence&) const = default;

 private:
  std::vector<Token> tokens_;
};

using LabelSequence = std::vector<Label>;

struct TaggedSentence {
  Sentence sentence;
  LabelSequence labels;
};

// ---------------------------------------------------------------------------
// Entity spans
// ---------------------------------------------------------------------------

struct EntitySpan {
  EntityType type;
  std::size_t start;  // inclusive
  std::size_t end;    // exclusive

  auto operator<=>(const EntitySpan&) const = default;
};

/// An I-X label is admissible only after B-X or I-X of the same type.
bool bio_well_formed(const LabelSequence& labels);

/// Rewrites every stray I-X to B-X (the usual promotion convention).
/// `repairs`, when given, receives the number of rewritten positions.
LabelSequence repair_bio(LabelSequence labels, std::size_t* repairs = nullptr);

/// Maximal B-X (I-X)* runs become spans, sorted by start. A stray I-X is
/// treated as if repaired to B-X, so the function is total.
std::vector<EntitySpan> spans_from_bio(const LabelSequence& labels);

/// Exact inverse of spans_from_bio for valid span lists. Throws DataError
/// on overlapping or out-of-bounds spans.
LabelSequence bio_from_spans(std::span<const EntitySpan> spans, std::size_t length);

// ---------------------------------------------------------------------------
// Column corpus format
// ---------------------------------------------------------------------------
//
// One token per line, `surface[<TAB>msd]<TAB>label`, blank line between
// sentences. Reading splits on any run of spaces/tabs; writing always emits
// single tabs. A file has either 2 or 3 columns throughout; mixing is an
// error. The unlabeled variant drops the label column.

enum class ParseMode { Strict, Repair };

struct ParseWarning {
  std::size_t line;
  std::string message;
};

struct ParsedCorpus {
  std::vector<TaggedSentence> sentences;
  std::vector<ParseWarning> warnings;  // repairs recorded here in Repair mode
  bool has_msd = false;
};

struct UnlabeledCorpus {
  std::vector<Sentence> sentences;
  bool has_msd = false;
};

ParsedCorpus parse_corpus(std::istream& in, ParseMode mode);
ParsedCorpus parse_corpus(std::string_view content, ParseMode mode);
UnlabeledCorpus parse_unlabeled_corpus(std::istream& in);
UnlabeledCorpus parse_unlabeled_corpus(std::string_view content);

void write_corpus(std::ostream& out, std::span<const TaggedSentence> sentences);
std::string corpus_to_string(std::span<const TaggedSentence> sentences);

}  // namespace bgner::corpus

#endif
