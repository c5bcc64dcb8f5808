#include "bgner/predicate.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "bgner/error.hpp"
#include "bgner/text.hpp"

namespace bgner::pred {

namespace {

enum class OffsetRule { Never, Allowed };

struct NsInfo {
  std::string_view name;
  OffsetRule offsets;
  bool arity;  // PRE/SUF carry a 2..4 digit
};

// Closed registry. CONJ is handled separately.
constexpr std::array<NsInfo, 11> kNamespaces = {{
    {"W", OffsetRule::Allowed, false},
    {"ORTH", OffsetRule::Never, false},
    {"NGRAM", OffsetRule::Never, false},
    {"PRE", OffsetRule::Never, true},
    {"SUF", OffsetRule::Never, true},
    {"CTX", OffsetRule::Never, false},
    {"DOM", OffsetRule::Never, false},
    {"GAZ", OffsetRule::Allowed, false},
    {"LTAG", OffsetRule::Never, false},
    {"NTAG", OffsetRule::Allowed, false},
    {"MI", OffsetRule::Allowed, false},
}};

const NsInfo* find_ns(std::string_view name) {
  for (const NsInfo& info : kNamespaces) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

[[noreturn]] void bad(const std::string& what, std::string_view p) {
  throw DataError("bad predicate: " + what + " in '" + std::string(p) + "'");
}

bool valid_value(std::string_view v) {
  if (v.empty()) return false;
  for (char c : v) {
    if (c == '=' || c == '&' || c == ':') return false;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

// Parses `NS`, `NS@+2`, `SUF3`; shared by the '=' and ':' grammars.
struct Head {
  std::string ns;
  int arity = 0;
  int offset = 0;
  bool has_offset = false;
};

Head parse_head(std::string_view head, std::string_view whole) {
  Head out;
  std::size_t at = head.find('@');
  std::string_view ns_part = at == std::string_view::npos ? head : head.substr(0, at);

  if (!ns_part.empty() && ns_part.back() >= '0' && ns_part.back() <= '9') {
    out.arity = ns_part.back() - '0';
    ns_part.remove_suffix(1);
  }
  const NsInfo* info = find_ns(ns_part);
  if (info == nullptr) bad("unknown namespace '" + std::string(ns_part) + "'", whole);
  out.ns = std::string(ns_part);

  if (info->arity) {
    if (out.arity < 2 || out.arity > 4) bad("affix arity must be 2..4", whole);
  } else if (out.arity != 0) {
    bad("namespace does not take an arity digit", whole);
  }

  if (at != std::string_view::npos) {
    if (info->offsets == OffsetRule::Never) bad("namespace does not take an offset", whole);
    std::string_view off = head.substr(at + 1);
    if (off.size() < 2 || (off[0] != '+' && off[0] != '-')) bad("malformed offset", whole);
    int magnitude = 0;
    auto [ptr, ec] = std::from_chars(off.data() + 1, off.data() + off.size(), magnitude);
    if (ec != std::errc() || ptr != off.data() + off.size() || magnitude == 0 ||
        off[1] == '0') {
      bad("malformed offset", whole);
    }
    out.offset = off[0] == '-' ? -magnitude : magnitude;
    out.has_offset = true;
  }
  return out;
}

std::string render_offset(int offset) {
  if (offset == 0) return {};
  return (offset > 0 ? "@+" : "@-") + std::to_string(offset > 0 ? offset : -offset);
}

struct SplitAtom {
  Head head;
  std::string_view value;
};

SplitAtom parse_atom_parts(std::string_view atom, std::string_view whole) {
  std::size_t colon = atom.find(':');
  if (colon == std::string_view::npos) bad("atom missing ':'", whole);
  SplitAtom out{parse_head(atom.substr(0, colon), whole), atom.substr(colon + 1)};
  if (!valid_value(out.value)) bad("invalid atom value", whole);
  return out;
}

}  // namespace

std::string render_head(std::string_view ns, int offset) {
  return std::string(ns) + render_offset(offset);
}

std::string render_affix_head(std::string_view ns, int arity) {
  return std::string(ns) + std::to_string(arity);
}

Predicate make_predicate(std::string_view ns, std::string_view raw_value) {
  return make_predicate_at(ns, 0, raw_value);
}

Predicate make_predicate_at(std::string_view ns, int offset, std::string_view raw_value) {
  return render_head(ns, offset) + "=" + text::mask_value(raw_value);
}

Predicate make_affix_predicate(std::string_view ns, int arity, std::string_view raw_value) {
  return render_affix_head(ns, arity) + "=" + text::mask_value(raw_value);
}

ParsedPredicate parse_predicate(const Predicate& p) {
  std::size_t eq = p.find('=');
  if (eq == std::string::npos || eq == 0) bad("missing '='", p);
  std::string_view head = std::string_view(p).substr(0, eq);
  std::string_view value = std::string_view(p).substr(eq + 1);

  ParsedPredicate out;
  if (head == "CONJ") {
    out.ns = "CONJ";
    out.value = std::string(value);
    if (value.empty()) bad("empty conjunction", p);
    std::size_t pos = 0;
    while (true) {
      std::size_t amp = value.find('&', pos);
      std::string_view atom =
          amp == std::string_view::npos ? value.substr(pos) : value.substr(pos, amp - pos);
      parse_atom_parts(atom, p);
      out.conj_atoms.emplace_back(atom);
      if (amp == std::string_view::npos) break;
      pos = amp + 1;
    }
    if (out.conj_atoms.size() < 2) bad("conjunction needs at least two atoms", p);
    for (std::size_t i = 1; i < out.conj_atoms.size(); ++i) {
      if (out.conj_atoms[i - 1] >= out.conj_atoms[i]) {
        bad("conjunction atoms must be strictly sorted", p);
      }
    }
    return out;
  }

  Head h = parse_head(head, p);
  if (!valid_value(value)) bad("invalid value", p);
  out.ns = std::move(h.ns);
  out.arity = h.arity;
  out.offset = h.offset;
  out.has_offset = h.has_offset;
  out.value = std::string(value);
  return out;
}

bool valid_predicate(const Predicate& p) noexcept {
  try {
    parse_predicate(p);
    return true;
  } catch (const DataError&) {
    return false;
  }
}

bool is_conjunction(const Predicate& p) { return p.rfind("CONJ=", 0) == 0; }

std::string atom_from_predicate(const Predicate& p) {
  if (is_conjunction(p)) bad("conjunction cannot be an atom", p);
  parse_predicate(p);  // validates
  std::string atom = p;
  atom[atom.find('=')] = ':';
  return atom;
}

Predicate predicate_from_atom(std::string_view atom) {
  std::size_t colon = atom.find(':');
  if (colon == std::string_view::npos) bad("atom missing ':'", atom);
  std::string p(atom);
  p[colon] = '=';
  parse_predicate(p);  // validates
  return p;
}

Predicate make_conjunction(std::vector<std::string> atoms) {
  if (atoms.size() < 2) throw DataError("conjunction needs at least two atoms");
  std::sort(atoms.begin(), atoms.end());
  std::string value;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) {
      if (atoms[i] == atoms[i - 1]) throw DataError("duplicate conjunction atom: " + atoms[i]);
      value += '&';
    }
    value += atoms[i];
  }
  Predicate p = "CONJ=" + value;
  parse_predicate(p);  // validates the atoms
  return p;
}

std::vector<std::string> conjunction_atoms(const Predicate& conj) {
  ParsedPredicate parsed = parse_predicate(conj);
  if (parsed.ns != "CONJ") bad("not a conjunction", conj);
  return std::move(parsed.conj_atoms);
}

Predicate extend_conjunction(const Predicate& conj, std::string_view atom) {
  std::vector<std::string> atoms = conjunction_atoms(conj);
  atoms.emplace_back(atom);
  return make_conjunction(std::move(atoms));
}

}  // namespace bgner::pred
