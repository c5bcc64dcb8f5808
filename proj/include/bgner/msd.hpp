#ifndef BGNER_MSD_HPP
#define BGNER_MSD_HPP

#include <iosfwd>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bgner::msd {

struct TagAttributes {
  std::vector<std::string> local;     // sorted, unique
  std::vector<std::string> nonlocal;  // sorted, unique
};

/// Maps full morpho-syntactic tags to their local/nonlocal attribute
/// sets. Tags missing from the table are retried through the reduce
/// rules (applied in file order, lookup after each rewrite).
class MsdMapping {
 public:
  static MsdMapping load(std::istream& in);
  static MsdMapping load_string(std::string_view text);
  static MsdMapping load_file(const std::string& path);

  /// nullptr when the tag (after reduction) is unknown.
  const TagAttributes* lookup(std::string_view full_tag) const;

  std::size_t tag_count() const { return table_.size(); }
  const std::set<std::string>& local_inventory() const { return local_inv_; }
  const std::set<std::string>& nonlocal_inventory() const { return nonlocal_inv_; }

 private:
  struct ReduceRule {
    std::string pattern_text;
    std::regex pattern;
    std::string replacement;
  };

  std::unordered_map<std::string, TagAttributes> table_;
  std::vector<ReduceRule> rules_;
  std::set<std::string> local_inv_;
  std::set<std::string> nonlocal_inv_;
};

}  // namespace bgner::msd

#endif
