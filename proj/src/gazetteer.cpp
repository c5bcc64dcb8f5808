#include "bgner/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "bgner/error.hpp"
#include "bgner/text.hpp"

namespace bgner::gaz {

namespace {

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) next = line.size();
    if (next > pos) out.emplace_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string Gazetteer::norm(std::string_view token) const {
  return normalize_ == Normalize::Casefold ? text::fold_case(token) : std::string(token);
}

Gazetteer Gazetteer::compile(std::string name, std::istream& in, Normalize normalize,
                             std::vector<CompileWarning>* warnings) {
  Gazetteer g;
  g.name_ = std::move(name);
  g.normalize_ = normalize;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> tokens = split_tokens(line);
    if (tokens.empty()) continue;

    std::size_t node = 0;
    for (std::string& tok : tokens) {
      std::string key = g.norm(tok);
      auto [it, inserted] = g.nodes_[node].next.try_emplace(key, g.nodes_.size());
      if (inserted) g.nodes_.emplace_back();
      node = it->second;
    }
    if (g.nodes_[node].terminal) {
      if (warnings != nullptr) {
        warnings->push_back({line_no, "duplicate entry '" + line + "'"});
      }
      continue;
    }
    g.nodes_[node].terminal = true;
    ++g.entry_count_;
    g.max_entry_len_ = std::max(g.max_entry_len_, tokens.size());
  }

  if (g.entry_count_ == 0) {
    throw DataError("gazetteer '" + g.name_ + "' has zero entries");
  }
  return g;
}

Gazetteer Gazetteer::compile_string(std::string name, std::string_view text, Normalize normalize,
                                    std::vector<CompileWarning>* warnings) {
  std::istringstream in{std::string(text)};
  return compile(std::move(name), in, normalize, warnings);
}

Gazetteer Gazetteer::compile_file(std::string name, const std::string& path, Normalize normalize,
                                  std::vector<CompileWarning>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gazetteer file: " + path);
  return compile(std::move(name), in, normalize, warnings);
}

std::vector<bool> Gazetteer::coverage(const corpus::Sentence& sentence) const {
  std::vector<bool> covered(sentence.size(), false);
  std::vector<std::string> keys(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) keys[i] = norm(sentence[i].surface);

  for (std::size_t start = 0; start < sentence.size(); ++start) {
    std::size_t node = 0;
    for (std::size_t j = start; j < sentence.size() && j - start < max_entry_len_; ++j) {
      auto it = nodes_[node].next.find(keys[j]);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (nodes_[node].terminal) {
        for (std::size_t k = start; k <= j; ++k) covered[k] = true;
      }
    }
  }
  return covered;
}

bool Gazetteer::match_at(const corpus::Sentence& sentence, std::size_t i) const {
  if (i >= sentence.size()) throw DataError("match_at position out of range");
  return coverage(sentence)[i];
}

std::vector<std::string> Gazetteer::entries() const {
  std::vector<std::string> out;
  std::vector<std::string> stack;
  std::function<void(std::size_t)> walk = [&](std::size_t node) {
    if (nodes_[node].terminal) {
      std::string joined;
      for (std::size_t i = 0; i < stack.size(); ++i) {
        if (i > 0) joined += ' ';
        joined += stack[i];
      }
      out.push_back(std::move(joined));
    }
    for (const auto& [tok, next] : nodes_[node].next) {
      stack.push_back(tok);
      walk(next);
      stack.pop_back();
    }
  };
  walk(0);
  std::sort(out.begin(), out.end());
  return out;
}

pred::PredicateSet gazetteer_predicates(const corpus::Sentence& sentence, std::size_t i,
                                        std::span<const Gazetteer> gazetteers) {
  if (i >= sentence.size()) throw DataError("gazetteer_predicates position out of range");
  pred::PredicateSet out;
  for (const Gazetteer& g : gazetteers) {
    std::vector<bool> covered = g.coverage(sentence);
    if (covered[i]) out.insert(pred::make_predicate("GAZ", g.name()));
    if (i > 0 && covered[i - 1]) out.insert(pred::make_predicate_at("GAZ", -1, g.name()));
    if (i + 1 < sentence.size() && covered[i + 1]) {
      out.insert(pred::make_predicate_at("GAZ", 1, g.name()));
    }
  }
  return out;
}

}  // namespace bgner::gaz
