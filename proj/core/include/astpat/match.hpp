#ifndef ASTPAT_MATCH_HPP
#define ASTPAT_MATCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "astpat/hunk.hpp"
#include "astpat/pattern.hpp"

namespace astpat {

// Assignment of each micro-pattern to one change of a hunk; positions are
// strictly increasing (the micro-pattern order follows the source order).
struct MatchAssignment {
  std::string pattern_id;
  std::vector<int> mapping;  // mapping[i] = change position for micro i

  friend bool operator==(const MatchAssignment&, const MatchAssignment&) = default;
};

struct PatternInstance {
  std::string pattern_id;
  std::string path;
  std::string revision;  // commit id; empty outside mining
  int hunk_index = 0;
  MatchAssignment assignment;

  friend bool operator==(const PatternInstance&, const PatternInstance&) = default;
};

// True iff the change's operation equals the template's and both entity
// constraints accept (wildcards accept everything).
bool micro_matches(const MicroPattern& mp, const SourceCodeChange& c);

// Decides whether the hunk contains an instance of the pattern:
// (1) find an order-preserving injective assignment of the micro-patterns
//     to hunk changes (complete backtracking search),
// (2) check every relation constraint on the concrete matched nodes,
// (3) check that no hunk change matches an undesired entry under its scope.
// Returns the lexicographically smallest satisfying assignment, or nothing.
// At most one instance is reported per (pattern, hunk).
std::optional<PatternInstance> classify_hunk(const PatternDefinition& pattern,
                                             const AstHunk& hunk);

// classify_hunk over the cross product, in (hunk, pattern) order.
std::vector<PatternInstance> classify_revision(
    const std::vector<PatternDefinition>& catalog,
    const std::vector<AstHunk>& hunks);

// JSON array of {pattern_id, path, commit, hunk_index, mapping}.
std::string instances_to_json(const std::vector<PatternInstance>& instances);

}  // namespace astpat

#endif  // ASTPAT_MATCH_HPP
