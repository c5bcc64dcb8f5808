#include "bgner/text.hpp"

#include "bgner/error.hpp"

namespace bgner::text {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(b0);  // stray continuation byte
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(b0);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(s[i + k]);
      if ((bk & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (!ok) {
      out.push_back(b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) out += encode_utf8(c);
  return out;
}

AlphabetConfig::AlphabetConfig(std::string name, std::vector<Range> upper,
                               std::vector<Range> lower)
    : name_(std::move(name)), upper_(std::move(upper)), lower_(std::move(lower)) {}

namespace {
bool in_ranges(const std::vector<AlphabetConfig::Range>& ranges, char32_t c) {
  for (const auto& r : ranges) {
    if (c >= r.first && c <= r.last) return true;
  }
  return false;
}
}  // namespace

bool AlphabetConfig::is_upper(char32_t c) const { return in_ranges(upper_, c); }
bool AlphabetConfig::is_lower(char32_t c) const { return in_ranges(lower_, c); }

const AlphabetConfig& AlphabetConfig::cyrillic() {
  static const AlphabetConfig cfg("cyrillic", {{0x0410, 0x042F}}, {{0x0430, 0x044F}});
  return cfg;
}

const AlphabetConfig& AlphabetConfig::latin() {
  static const AlphabetConfig cfg("latin", {{U'A', U'Z'}}, {{U'a', U'z'}});
  return cfg;
}

const AlphabetConfig& AlphabetConfig::latin_cyrillic() {
  static const AlphabetConfig cfg("latin+cyrillic", {{U'A', U'Z'}, {0x0410, 0x042F}},
                                  {{U'a', U'z'}, {0x0430, 0x044F}});
  return cfg;
}

const AlphabetConfig& AlphabetConfig::by_name(std::string_view name) {
  if (name == "cyrillic") return cyrillic();
  if (name == "latin") return latin();
  if (name == "latin+cyrillic") return latin_cyrillic();
  throw ConfigError("unknown alphabet: " + std::string(name));
}

char32_t fold_char(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c >= 0x0410 && c <= 0x042F) return c + 0x20;
  return c;
}

std::string fold_case(std::string_view s) {
  std::u32string cps = decode_utf8(s);
  for (char32_t& c : cps) c = fold_char(c);
  return encode_utf8(cps);
}

std::string mask_value(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '=': out += "__EQ__"; break;
      case '&': out += "__AMP__"; break;
      case ':': out += "__COLON__"; break;
      case ' ':
      case '\t':
      case '\n':
      case '\r': out += "__SP__"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

}  // namespace bgner::text
