#ifndef ASTPAT_PATTERN_HPP
#define ASTPAT_PATTERN_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "astpat/diff.hpp"

namespace astpat {

// Entity constraint of a micro-pattern: the wildcard, one kind, or an
// alternation of kinds (written KIND_A|KIND_B in pattern files).
struct KindSpec {
  bool any = true;
  std::vector<EntityKind> kinds;  // sorted, unique; empty iff any

  bool matches(EntityKind k) const;

  static KindSpec wildcard() { return KindSpec{}; }
  static KindSpec of(EntityKind k) { return KindSpec{false, {k}}; }
  static KindSpec one_of(std::vector<EntityKind> ks);

  friend bool operator==(const KindSpec&, const KindSpec&) = default;
};

// One change template; the operation is mandatory, entity constraints
// default to the wildcard.
struct MicroPattern {
  ChangeType ct{};
  KindSpec et;
  KindSpec pt;

  friend bool operator==(const MicroPattern&, const MicroPattern&) = default;
};

// Constraint between two matched changes, on concrete node identity:
// ParentOf(i, j) - the node of match j is enclosed by the node of match i;
// SameParent(i, j) - both matched nodes have the same enclosing node.
struct RelationConstraint {
  enum class Kind { ParentOf, SameParent };
  Kind kind = Kind::ParentOf;
  int subject = 0;
  int object = 0;

  friend bool operator==(const RelationConstraint&, const RelationConstraint&) = default;
};

// A change that must be absent from the hunk for the pattern to hold.
// An unscoped entry rejects on any match in the hunk; a scoped entry
// rejects only when the offending change stands in the stated node
// relation to one of the matched micro-patterns.
struct UndesiredChange {
  enum class Scope {
    Anywhere,       // any matching change in the hunk rejects
    ParentOfMatch,  // offender's node is the enclosing node of match #anchor
    ChildOfMatch,   // offender's enclosing node is the node of match #anchor
  };
  MicroPattern what;
  Scope scope = Scope::Anywhere;
  int anchor = -1;  // index into the micro-pattern list when scoped

  friend bool operator==(const UndesiredChange&, const UndesiredChange&) = default;
};

struct PatternDefinition {
  std::string id;    // short code, e.g. "IF-APCJ"
  std::string name;  // display string
  std::vector<MicroPattern> micro;           // ordered; position matters
  std::vector<RelationConstraint> relations;
  std::vector<UndesiredChange> undesired;

  friend bool operator==(const PatternDefinition&, const PatternDefinition&) = default;
};

// Malformed pattern text (unknown keyword, bad token, missing end).
class PatternSyntaxError : public std::runtime_error {
 public:
  PatternSyntaxError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Structurally invalid definition (empty change list, index out of range,
// duplicate id, wildcard operation).
class PatternValidationError : public std::runtime_error {
 public:
  explicit PatternValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Parses the line-oriented pattern file format:
//
//   pattern IF-APCJ "Addition of Precondition Check with Jump"
//     change STATEMENT_INSERT IF *
//     change STATEMENT_INSERT RETURN IF
//     relation parent_of 0 1
//     undesired none
//   end
//
// Keywords are case-insensitive; '#' starts a comment; '*' is the
// wildcard; `undesired` lines take the same triple with an optional
// `scoped [parent_of|child_of] <index>` suffix (default parent_of).
std::vector<PatternDefinition> parse_pattern_file(std::string_view text);

// Canonical text form; parse_pattern_file(serialize_patterns(d)) == d.
std::string serialize_patterns(const std::vector<PatternDefinition>& defs);

// The 18 built-in change patterns.
const std::vector<PatternDefinition>& builtin_catalog();

}  // namespace astpat

#endif  // ASTPAT_PATTERN_HPP
