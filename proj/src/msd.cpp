#include "bgner/msd.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bgner/error.hpp"

namespace bgner::msd {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Parses `local:attr1,attr2` or `nonlocal:attrA`; empty attr list allowed
// as `local:`.
void parse_attr_field(std::string_view field, std::size_t line, TagAttributes& out) {
  std::size_t colon = field.find(':');
  if (colon == std::string_view::npos) {
    throw DataError("attribute field missing 'local:'/'nonlocal:' prefix", line);
  }
  std::string_view kind = field.substr(0, colon);
  std::string_view rest = field.substr(colon + 1);
  std::vector<std::string>* dest = nullptr;
  if (kind == "local") {
    dest = &out.local;
  } else if (kind == "nonlocal") {
    dest = &out.nonlocal;
  } else {
    throw DataError("unknown attribute kind '" + std::string(kind) + "'", line);
  }
  if (!dest->empty()) throw DataError("duplicate '" + std::string(kind) + ":' field", line);
  if (rest.empty()) return;
  for (std::string& attr : split(rest, ',')) {
    if (attr.empty()) throw DataError("empty attribute name", line);
    dest->push_back(std::move(attr));
  }
}

}  // namespace

MsdMapping MsdMapping::load(std::istream& in) {
  MsdMapping m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> cols = split(line, '\t');
    if (cols[0] == "reduce") {
      if (cols.size() != 3) throw DataError("reduce rule needs pattern and replacement", line_no);
      ReduceRule rule;
      rule.pattern_text = cols[1];
      try {
        rule.pattern = std::regex(cols[1]);
      } catch (const std::regex_error& e) {
        throw DataError("bad reduce pattern '" + cols[1] + "': " + e.what(), line_no);
      }
      rule.replacement = cols[2];
      m.rules_.push_back(std::move(rule));
      continue;
    }

    if (cols.size() < 2 || cols.size() > 3) {
      throw DataError("expected fulltag, local field, optional nonlocal field", line_no);
    }
    TagAttributes attrs;
    for (std::size_t i = 1; i < cols.size(); ++i) parse_attr_field(cols[i], line_no, attrs);
    std::sort(attrs.local.begin(), attrs.local.end());
    attrs.local.erase(std::unique(attrs.local.begin(), attrs.local.end()), attrs.local.end());
    std::sort(attrs.nonlocal.begin(), attrs.nonlocal.end());
    attrs.nonlocal.erase(std::unique(attrs.nonlocal.begin(), attrs.nonlocal.end()),
                         attrs.nonlocal.end());

    for (const std::string& a : attrs.local) m.local_inv_.insert(a);
    for (const std::string& a : attrs.nonlocal) m.nonlocal_inv_.insert(a);
    if (!m.table_.emplace(cols[0], std::move(attrs)).second) {
      throw DataError("duplicate tag '" + cols[0] + "'", line_no);
    }
  }

  for (const std::string& a : m.local_inv_) {
    if (m.nonlocal_inv_.count(a) > 0) {
      throw DataError("attribute '" + a + "' appears in both the local and nonlocal inventories");
    }
  }
  return m;
}

MsdMapping MsdMapping::load_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load(in);
}

MsdMapping MsdMapping::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open msd mapping file: " + path);
  try {
    return load(in);
  } catch (DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

const TagAttributes* MsdMapping::lookup(std::string_view full_tag) const {
  std::string tag(full_tag);
  auto it = table_.find(tag);
  if (it != table_.end()) return &it->second;
  for (const ReduceRule& rule : rules_) {
    tag = std::regex_replace(tag, rule.pattern, rule.replacement);
    it = table_.find(tag);
    if (it != table_.end()) return &it->second;
  }
  return nullptr;
}

}  // namespace bgner::msd
