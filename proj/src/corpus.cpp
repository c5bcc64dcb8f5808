#include "bgner/corpus.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>

namespace bgner::corpus {

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "B-PER", "I-PER", "B-ORG", "I-ORG", "B-LOC", "I-LOC", "B-MISC", "I-MISC", "O"};

constexpr std::array<std::string_view, kNumEntityTypes> kTypeNames = {"PER", "ORG",
                                                                      "LOC", "MISC"};

}  // namespace

std::string_view to_string(Label label) { return kLabelNames[label_id(label)]; }

std::string_view to_string(EntityType type) {
  return kTypeNames[static_cast<int>(type)];
}

Label label_from_string(std::string_view s) {
  for (int i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == s) return static_cast<Label>(i);
  }
  throw DataError("unknown label '" + std::string(s) + "'");
}

EntityType entity_type_from_string(std::string_view s) {
  for (int i = 0; i < kNumEntityTypes; ++i) {
    if (kTypeNames[i] == s) return static_cast<EntityType>(i);
  }
  throw DataError("unknown entity type '" + std::string(s) + "'");
}

Label label_from_id(int id) {
  if (id < 0 || id >= kNumLabels) throw std::out_of_range("label id out of range");
  return static_cast<Label>(id);
}

bool is_begin(Label label) {
  const int id = label_id(label);
  return id < 8 && id % 2 == 0;
}

bool is_inside(Label label) {
  const int id = label_id(label);
  return id < 8 && id % 2 == 1;
}

std::optional<EntityType> entity_type(Label label) {
  if (label == Label::Outside) return std::nullopt;
  return static_cast<EntityType>(label_id(label) / 2);
}

Label begin_label(EntityType type) {
  return static_cast<Label>(static_cast<int>(type) * 2);
}

Label inside_label(EntityType type) {
  return static_cast<Label>(static_cast<int>(type) * 2 + 1);
}

// ---------------------------------------------------------------------------

namespace {

void validate_surface(const std::string& surface) {
  if (surface.empty()) throw DataError("empty token surface");
  for (char c : surface) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
      throw DataError("token surface contains whitespace: '" + surface + "'");
  }
}

}  // namespace

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw DataError("sentence must contain at least one token");
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    validate_surface(tokens_[i].surface);
    tokens_[i].index = i;
  }
}

Sentence Sentence::from_surfaces(std::vector<std::string> surfaces) {
  std::vector<Token> tokens;
  tokens.reserve(surfaces.size());
  for (auto& s : surfaces) tokens.push_back(Token{std::move(s), std::nullopt, 0});
  return Sentence(std::move(tokens));
}

bool Sentence::has_msd() const {
  return !tokens_.empty() && tokens_.front().msd.has_value();
}

// ---------------------------------------------------------------------------

bool bio_well_formed(const LabelSequence& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_inside(labels[i])) continue;
    if (i == 0) return false;
    const Label prev = labels[i - 1];
    if (is_outside(prev) || entity_type(prev) != entity_type(labels[i])) return false;
  }
  return true;
}

LabelSequence repair_bio(LabelSequence labels, std::size_t* repairs) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_inside(labels[i])) continue;
    const bool stray = i == 0 || is_outside(labels[i - 1]) ||
                       entity_type(labels[i - 1]) != entity_type(labels[i]);
    if (stray) {
      labels[i] = begin_label(*entity_type(labels[i]));
      ++count;
    }
  }
  if (repairs) *repairs = count;
  return labels;
}

std::vector<EntitySpan> spans_from_bio(const LabelSequence& labels) {
  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < labels.size()) {
    const auto type = entity_type(labels[i]);
    if (!type) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    ++i;
    while (i < labels.size() && is_inside(labels[i]) && entity_type(labels[i]) == type)
      ++i;
    spans.push_back(EntitySpan{*type, start, i});
  }
  return spans;
}

LabelSequence bio_from_spans(std::span<const EntitySpan> spans, std::size_t length) {
  LabelSequence labels(length, Label::Outside);
  std::vector<EntitySpan> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const EntitySpan& a, const EntitySpan& b) { return a.start < b.start; });
  std::size_t previous_end = 0;
  bool first = true;
  for (const EntitySpan& span : sorted) {
    if (span.start >= span.end || span.end > length)
      throw DataError("entity span out of bounds");
    if (!first && span.start < previous_end) throw DataError("overlapping entity spans");
    labels[span.start] = begin_label(span.type);
    for (std::size_t i = span.start + 1; i < span.end; ++i)
      labels[i] = inside_label(span.type);
    previous_end = span.end;
    first = false;
  }
  return labels;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) cols.push_back(line.substr(start, i - start));
  }
  return cols;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// Shared reader: labeled files carry a trailing label column, unlabeled
// files do not. Column-count consistency is checked across the whole file.
template <typename SentenceSink>
void read_blocks(std::istream& in, bool labeled, ParseMode mode,
                 std::vector<ParseWarning>* warnings, bool* has_msd,
                 SentenceSink&& sink) {
  const std::size_t base_cols = labeled ? 2 : 1;
  int file_cols = -1;  // fixed by the first token line
  std::vector<Token> tokens;
  std::vector<Label> labels;
  std::vector<std::size_t> line_of_token;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (tokens.empty()) return;
    if (labeled && mode == ParseMode::Repair) {
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!is_inside(labels[i])) continue;
        const bool stray = i == 0 || is_outside(labels[i - 1]) ||
                           entity_type(labels[i - 1]) != entity_type(labels[i]);
        if (stray) {
          const Label fixed = begin_label(*entity_type(labels[i]));
          warnings->push_back(
              {line_of_token[i], "stray " + std::string(to_string(labels[i])) +
                                     " promoted to " + std::string(to_string(fixed))});
          labels[i] = fixed;
        }
      }
    } else if (labeled) {
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!is_inside(labels[i])) continue;
        const bool stray = i == 0 || is_outside(labels[i - 1]) ||
                           entity_type(labels[i - 1]) != entity_type(labels[i]);
        if (stray)
          throw DataError("ill-formed BIO: stray " + std::string(to_string(labels[i])),
                          line_of_token[i]);
      }
    }
    sink(Sentence(std::move(tokens)), std::move(labels));
    tokens.clear();
    labels.clear();
    line_of_token.clear();
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = chomp(raw);
    if (is_blank(line)) {
      flush();
      continue;
    }
    std::vector<std::string> cols = split_columns(line);
    if (cols.size() != base_cols && cols.size() != base_cols + 1)
      throw DataError("expected " + std::to_string(base_cols) + " or " +
                          std::to_string(base_cols + 1) + " columns, got " +
                          std::to_string(cols.size()),
                      line_no);
    if (file_cols == -1) {
      file_cols = static_cast<int>(cols.size());
      *has_msd = cols.size() == base_cols + 1;
    } else if (static_cast<int>(cols.size()) != file_cols) {
      throw DataError("inconsistent column count (file started with " +
                          std::to_string(file_cols) + " columns)",
                      line_no);
    }
    Token token;
    token.surface = cols[0];
    if (*has_msd) token.msd = cols[1];
    try {
      if (labeled) labels.push_back(label_from_string(cols.back()));
      tokens.push_back(std::move(token));
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
    line_of_token.push_back(line_no);
  }
  flush();
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, ParseMode mode) {
  ParsedCorpus result;
  read_blocks(in, /*labeled=*/true, mode, &result.warnings, &result.has_msd,
              [&](Sentence sentence, LabelSequence labels) {
                result.sentences.push_back({std::move(sentence), std::move(labels)});
              });
  return result;
}

ParsedCorpus parse_corpus(std::string_view content, ParseMode mode) {
  std::istringstream in{std::string(content)};
  return parse_corpus(in, mode);
}

UnlabeledCorpus parse_unlabeled_corpus(std::istream& in) {
  UnlabeledCorpus result;
  std::vector<ParseWarning> ignored;
  read_blocks(in, /*labeled=*/false, ParseMode::Strict, &ignored, &result.has_msd,
              [&](Sentence sentence, LabelSequence) {
                result.sentences.push_back(std::move(sentence));
              });
  return result;
}

UnlabeledCorpus parse_unlabeled_corpus(std::string_view content) {
  std::istringstream in{std::string(content)};
  return parse_unlabeled_corpus(in);
}

void write_corpus(std::ostream& out, std::span<const TaggedSentence> sentences) {
  bool first = true;
  for (const TaggedSentence& ts : sentences) {
    if (!first) out << '\n';
    first = false;
    for (std::size_t i = 0; i < ts.sentence.size(); ++i) {
      const Token& token = ts.sentence[i];
      out << token.surface;
      if (token.msd) out << '\t' << *token.msd;
      out << '\t' << to_string(ts.labels[i]) << '\n';
    }
  }
}

std::string corpus_to_string(std::span<const TaggedSentence> sentences) {
  std::ostringstream out;
  write_corpus(out, sentences);
  return out.str();
}

}  // namespace bgner::corpus
