#ifndef ASTPAT_HUNK_HPP
#define ASTPAT_HUNK_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "astpat/diff.hpp"

namespace astpat {

// One maximal run of consecutive changed lines in a line-based diff.
// A range (start, len) covers lines start .. start+len-1; a range with
// len = 0 marks the position where the other side's lines would go
// (start = one past the last preceding kept line on that side).
struct LineHunk {
  int old_start = 0;
  int old_len = 0;
  int new_start = 0;
  int new_len = 0;

  friend bool operator==(const LineHunk&, const LineHunk&) = default;
};

// Longest-common-subsequence line diff with zero context lines.
std::vector<LineHunk> line_diff(const std::vector<std::string>& old_lines,
                                const std::vector<std::string>& new_lines);

// A group of co-localized changes: changes anchored in the same line hunk,
// plus moves that share their new enclosing element, closed transitively.
struct AstHunk {
  std::string path;
  int index = 0;                        // position within the revision pair
  std::vector<SourceCodeChange> changes;  // preserves ChangeList order
  std::vector<int> line_hunks;            // indices into the line-hunk list
};

// Changes exist but the line diff is empty, so nothing can anchor them;
// indicates the change extraction and the line diff disagree.
class UnanchoredChange : public std::runtime_error {
 public:
  explicit UnanchoredChange(const std::string& what) : std::runtime_error(what) {}
};

// Partitions list.changes into AST hunks. Line hunks with no changes
// produce no group; a group spanning several line hunks merges them; a
// group whose spans touch no hunk at all attaches to the nearest one.
// Throws UnanchoredChange when there are changes but no line hunks.
std::vector<AstHunk> group_ast_hunks(const ChangeList& list,
                                     const std::vector<LineHunk>& hunks);

// Debug rendering: JSON array of {id, line_hunks, changes:[rendered]}.
std::string hunks_to_json(const std::vector<AstHunk>& hunks);

}  // namespace astpat

#endif  // ASTPAT_HUNK_HPP
