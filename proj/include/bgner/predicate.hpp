#ifndef BGNER_PREDICATE_HPP
#define BGNER_PREDICATE_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bgner::pred {

/// A predicate is its canonical name: `NS=value`, `NS@+2=value`,
/// `SUF3=ova`, or `CONJ=atom&atom&...` with atoms of the form
/// `NS[@off]:value` in strictly ascending order. Values are masked
/// (see text::mask_value) so '=' appears exactly once and '&'/':'
/// only as structure inside CONJ.
using Predicate = std::string;
using PredicateSet = std::set<Predicate>;
using ObservationTable = std::vector<PredicateSet>;

struct ParsedPredicate {
  std::string ns;                       // base namespace, e.g. "SUF"
  int arity = 0;                        // PRE/SUF only: 2..4
  int offset = 0;
  bool has_offset = false;
  std::string value;                    // masked value (CONJ: joined atoms)
  std::vector<std::string> conj_atoms;  // CONJ only
};

/// Head rendering: `W`, `W@-1`, `NTAG@+2`, `SUF3`.
std::string render_head(std::string_view ns, int offset);
std::string render_affix_head(std::string_view ns, int arity);

/// Builders mask the raw value. Offset 0 renders without `@`.
Predicate make_predicate(std::string_view ns, std::string_view raw_value);
Predicate make_predicate_at(std::string_view ns, int offset, std::string_view raw_value);
Predicate make_affix_predicate(std::string_view ns, int arity, std::string_view raw_value);

/// Full grammar check; throws DataError naming the offending part.
ParsedPredicate parse_predicate(const Predicate& p);
bool valid_predicate(const Predicate& p) noexcept;

bool is_conjunction(const Predicate& p);

/// Atom form of a non-CONJ predicate: `W@-1=na` <-> `W@-1:na`.
std::string atom_from_predicate(const Predicate& p);
Predicate predicate_from_atom(std::string_view atom);

/// Canonical conjunction: atoms sorted, joined with '&'. Requires at
/// least two distinct valid atoms.
Predicate make_conjunction(std::vector<std::string> atoms);
std::vector<std::string> conjunction_atoms(const Predicate& conj);
Predicate extend_conjunction(const Predicate& conj, std::string_view atom);

}  // namespace bgner::pred

#endif
