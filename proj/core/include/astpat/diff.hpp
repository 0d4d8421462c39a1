#ifndef ASTPAT_DIFF_HPP
#define ASTPAT_DIFF_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "astpat/syntax.hpp"

namespace astpat {

// Taxonomy of edit operations recognized between two statement trees.
enum class ChangeType : std::uint8_t {
  StatementInsert,
  StatementDelete,
  StatementUpdate,
  StatementParentChange,
  StatementOrderingChange,
  ConditionExpressionChange,
  ElsePartInsert,
  ElsePartDelete,
  AdditionalFunctionality,
  RemovedFunctionality,
  MethodDeclarationChange,
  AdditionalObjectState,
  RemovedObjectState,
};

inline constexpr int kChangeTypeCount = 13;

// Canonical identifier, e.g. "STATEMENT_INSERT". Stable; used in pattern
// files and machine-readable output.
std::string_view change_type_token(ChangeType ct);

// Human-readable form, e.g. "Statement insert".
std::string_view change_type_display(ChangeType ct);

// Case-insensitive token lookup; returns false on unknown tokens.
bool change_type_from_token(std::string_view token, ChangeType& out);

// Which revision a change is anchored in.
enum class Side : std::uint8_t { Old, New };

// One edit, described by its operation, the kind of the affected node and
// the kind of that node's enclosing element. For parent-change moves the
// enclosing element is the one in the NEW revision.
struct SourceCodeChange {
  ChangeType ct{};
  EntityKind et{};
  EntityKind pt{};
  Side side = Side::New;
  LineSpan anchor_span;       // lines in the anchoring revision's file
  std::string node_value;     // normalized value of the affected node
  std::string parent_value;   // normalized value of the enclosing node
  // Node identities: mapped old/new nodes share one id, unmapped nodes get
  // fresh ids. parent_id names the enclosing element on the anchoring side
  // (the new parent for moves). Then wrappers are transparent: a statement
  // in a then-branch reports the If itself as its enclosing element.
  int node_id = -1;
  int parent_id = -1;
  int node_preorder = -1;     // pre-order index on the anchoring side

  friend bool operator==(const SourceCodeChange&, const SourceCodeChange&) = default;
};

// "<change type> of <entity> in <parent entity>".
std::string render_change(const SourceCodeChange& c);

// Pairs of (old pre-order index, new pre-order index).
struct NodeMapping {
  std::vector<std::pair<int, int>> pairs;
};

// Tunable constants of the tree-matching stage.
struct MatchConfig {
  // Minimum bigram-set Dice similarity for two same-kind leaves to match.
  double leaf_similarity_threshold = 0.6;
  // Minimum fraction of leaf descendants mapped into the candidate partner
  // for two same-kind inner nodes to match (of the larger leaf count).
  double inner_overlap_threshold = 0.5;
};

// Dice coefficient over the sets of character bigrams of a and b.
// When either string has no bigram, falls back to 1.0 on equality, else 0.0.
double dice_similarity(std::string_view a, std::string_view b);

// Flattened pre-order view of a tree; parent[i] is the pre-order index of
// node i's parent (-1 for the root).
struct TreeView {
  std::vector<const AstNode*> nodes;
  std::vector<int> parent;

  int size() const { return static_cast<int>(nodes.size()); }
};

TreeView flatten_tree(const AstNode& root);

// Computes a partial one-to-one mapping between the two trees: leaves by
// greedy descending value similarity, inner nodes bottom-up by mapped-leaf
// overlap. Ties break by smallest pre-order distance, then leftmost node.
NodeMapping match_trees(const CompilationUnit& old_unit,
                        const CompilationUnit& new_unit,
                        const MatchConfig& config = {});

struct ChangeList {
  std::vector<SourceCodeChange> changes;
  const CompilationUnit* old_unit = nullptr;
  const CompilationUnit* new_unit = nullptr;
  // Pre-order index -> node identity, for each side. Mapped nodes share
  // their identity across sides.
  std::vector<int> old_identity;
  std::vector<int> new_identity;
};

// Classifies all differences between the two revisions into an ordered
// change list (ordered by anchor line, then side, then pre-order index,
// then change-type token).
ChangeList extract_changes(const CompilationUnit& old_unit,
                           const CompilationUnit& new_unit,
                           const MatchConfig& config = {});

// Debug rendering: JSON array of
// {ct, et, pt, side, start_line, end_line, value}.
std::string change_list_to_json(const ChangeList& list);

}  // namespace astpat

#endif  // ASTPAT_DIFF_HPP
