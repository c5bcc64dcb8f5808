#ifndef BGNER_TEXT_HPP
#define BGNER_TEXT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bgner::text {

/// Decodes UTF-8 into codepoints. Invalid bytes are kept as single
/// codepoints with their byte value so that garbage input degrades to
/// latin-1 instead of aborting a batch run.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(std::u32string_view s);
std::string encode_utf8(char32_t c);

/// Uppercase/lowercase codepoint classes used by the orthographic
/// predicates. The classes are explicit ranges, not full Unicode
/// categories: the predicate semantics must not drift with the
/// platform's Unicode tables.
class AlphabetConfig {
 public:
  struct Range {
    char32_t first;
    char32_t last;  // inclusive
  };

  AlphabetConfig(std::string name, std::vector<Range> upper, std::vector<Range> lower);

  static const AlphabetConfig& cyrillic();        // U+0410-042F / U+0430-044F
  static const AlphabetConfig& latin();           // A-Z / a-z
  static const AlphabetConfig& latin_cyrillic();  // union of both
  static const AlphabetConfig& by_name(std::string_view name);

  bool is_upper(char32_t c) const;
  bool is_lower(char32_t c) const;
  bool is_alpha(char32_t c) const { return is_upper(c) || is_lower(c); }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<Range> upper_;
  std::vector<Range> lower_;
};

/// Case-folds latin and Bulgarian cyrillic capitals to lowercase.
/// Used for case-insensitive suffix rules and gazetteer casefolding;
/// intentionally independent of the configured alphabet.
char32_t fold_char(char32_t c);
std::string fold_case(std::string_view s);

/// Predicate values embed raw tokens; the characters that carry meaning
/// in predicate names ('=', '&', ':') and whitespace are masked so every
/// emitted name stays parseable. Mirrors what the name grammar expects.
std::string mask_value(std::string_view s);

bool is_ascii_digit(char32_t c);

}  // namespace bgner::text

#endif
