#include "astpat/diff.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>

#include <json.hpp>

namespace astpat {

namespace {

struct ChangeTypeEntry {
  ChangeType ct;
  std::string_view token;
  std::string_view display;
};

constexpr std::array<ChangeTypeEntry, kChangeTypeCount> kChangeTypeTable{{
    {ChangeType::StatementInsert, "STATEMENT_INSERT", "Statement insert"},
    {ChangeType::StatementDelete, "STATEMENT_DELETE", "Statement delete"},
    {ChangeType::StatementUpdate, "STATEMENT_UPDATE", "Statement update"},
    {ChangeType::StatementParentChange, "STATEMENT_PARENT_CHANGE",
     "Statement parent change"},
    {ChangeType::StatementOrderingChange, "STATEMENT_ORDERING_CHANGE",
     "Statement ordering change"},
    {ChangeType::ConditionExpressionChange, "CONDITION_EXPRESSION_CHANGE",
     "Condition expression change"},
    {ChangeType::ElsePartInsert, "ELSE_PART_INSERT", "Else part insert"},
    {ChangeType::ElsePartDelete, "ELSE_PART_DELETE", "Else part delete"},
    {ChangeType::AdditionalFunctionality, "ADDITIONAL_FUNCTIONALITY",
     "Additional functionality"},
    {ChangeType::RemovedFunctionality, "REMOVED_FUNCTIONALITY",
     "Removed functionality"},
    {ChangeType::MethodDeclarationChange, "METHOD_DECLARATION_CHANGE",
     "Method declaration change"},
    {ChangeType::AdditionalObjectState, "ADDITIONAL_OBJECT_STATE",
     "Additional object state"},
    {ChangeType::RemovedObjectState, "REMOVED_OBJECT_STATE",
     "Removed object state"},
}};

}  // namespace

std::string_view change_type_token(ChangeType ct) {
  return kChangeTypeTable[static_cast<size_t>(ct)].token;
}

std::string_view change_type_display(ChangeType ct) {
  return kChangeTypeTable[static_cast<size_t>(ct)].display;
}

bool change_type_from_token(std::string_view token, ChangeType& out) {
  std::string t(token);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& e : kChangeTypeTable) {
    if (t == e.token) {
      out = e.ct;
      return true;
    }
  }
  return false;
}

std::string render_change(const SourceCodeChange& c) {
  std::string out;
  out += change_type_display(c.ct);
  out += " of ";
  out += entity_kind_display(c.et);
  out += " in ";
  out += entity_kind_display(c.pt);
  return out;
}

// ---------------------------------------------------------------------------
// Similarity
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint16_t> bigram_set(std::string_view s) {
  std::vector<std::uint16_t> v;
  if (s.size() < 2) return v;
  v.reserve(s.size() - 1);
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    v.push_back(static_cast<std::uint16_t>(
        (static_cast<unsigned char>(s[i]) << 8) | static_cast<unsigned char>(s[i + 1])));
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

size_t intersection_size(const std::vector<std::uint16_t>& a,
                         const std::vector<std::uint16_t>& b) {
  size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

double dice_of_sets(const std::vector<std::uint16_t>& a,
                    const std::vector<std::uint16_t>& b, std::string_view sa,
                    std::string_view sb) {
  if (a.empty() || b.empty()) return sa == sb ? 1.0 : 0.0;
  return 2.0 * static_cast<double>(intersection_size(a, b)) /
         static_cast<double>(a.size() + b.size());
}

}  // namespace

double dice_similarity(std::string_view a, std::string_view b) {
  return dice_of_sets(bigram_set(a), bigram_set(b), a, b);
}

// ---------------------------------------------------------------------------
// Tree flattening
// ---------------------------------------------------------------------------

namespace {

void flatten_into(const AstNode& node, int parent, TreeView& out) {
  int index = static_cast<int>(out.nodes.size());
  out.nodes.push_back(&node);
  out.parent.push_back(parent);
  for (const AstNode& child : node.children) flatten_into(child, index, out);
}

}  // namespace

TreeView flatten_tree(const AstNode& root) {
  TreeView view;
  flatten_into(root, -1, view);
  return view;
}

// ---------------------------------------------------------------------------
// Tree matching
// ---------------------------------------------------------------------------

namespace {

bool is_statement_leaf(EntityKind k) {
  return (is_leaf_statement_kind(k) && k != EntityKind::FieldDeclaration) ||
         k == EntityKind::ConditionExpression;
}

bool is_inner_statement_kind(EntityKind k) {
  switch (k) {
    case EntityKind::Block:
    case EntityKind::If:
    case EntityKind::For:
    case EntityKind::While:
    case EntityKind::DoWhile:
    case EntityKind::Switch:
    case EntityKind::SwitchCase:
    case EntityKind::Try:
    case EntityKind::CatchClause:
      return true;
    default:
      return false;
  }
}

// Everything match_trees needs about one side.
struct SideIndex {
  TreeView view;
  std::vector<std::vector<std::uint16_t>> bigrams;
  std::vector<int> height;
  std::vector<int> subtree_end;            // one past the last descendant
  std::vector<bool> in_scope;              // descendant of a mapped method
  std::vector<std::vector<int>> leaf_desc; // in-scope statement leaves below

  explicit SideIndex(const AstNode& root) : view(flatten_tree(root)) {
    int n = view.size();
    bigrams.resize(n);
    height.assign(n, 0);
    subtree_end.assign(n, 0);
    in_scope.assign(n, false);
    leaf_desc.resize(n);
    for (int i = 0; i < n; ++i) bigrams[i] = bigram_set(view.nodes[i]->value);
    for (int i = n - 1; i >= 0; --i) {
      subtree_end[i] = std::max(subtree_end[i], i + 1);
      int p = view.parent[i];
      if (p >= 0) {
        height[p] = std::max(height[p], height[i] + 1);
        subtree_end[p] = std::max(subtree_end[p], subtree_end[i]);
      }
    }
  }

  EntityKind kind(int i) const { return view.nodes[i]->kind; }
  const std::string& value(int i) const { return view.nodes[i]->value; }

  bool contains(int ancestor, int node) const {
    return node > ancestor && node < subtree_end[ancestor];
  }

  void mark_scope(int method_index) {
    for (int i = method_index + 1; i < subtree_end[method_index]; ++i) {
      in_scope[i] = true;
    }
  }

  void collect_leaf_descendants() {
    // Children precede nothing: pre-order puts parents first, so walking
    // backwards visits every child before its parent.
    for (int i = view.size() - 1; i >= 0; --i) {
      if (!in_scope[i]) continue;
      int p = view.parent[i];
      if (p < 0) continue;
      if (is_statement_leaf(kind(i))) leaf_desc[p].push_back(i);
      for (int leaf : leaf_desc[i]) leaf_desc[p].push_back(leaf);
    }
  }
};

struct Matcher {
  const MatchConfig& config;
  SideIndex o;  // old
  SideIndex n;  // new
  std::vector<int> o2n;
  std::vector<int> n2o;

  Matcher(const CompilationUnit& old_unit, const CompilationUnit& new_unit,
          const MatchConfig& cfg)
      : config(cfg), o(old_unit.root), n(new_unit.root) {
    o2n.assign(o.view.size(), -1);
    n2o.assign(n.view.size(), -1);
  }

  void map(int oi, int ni) {
    o2n[oi] = ni;
    n2o[ni] = oi;
  }

  void unmap_old(int oi) {
    if (o2n[oi] >= 0) {
      n2o[o2n[oi]] = -1;
      o2n[oi] = -1;
    }
  }

  void force_map(int oi, int ni) {
    if (o2n[oi] == ni) return;
    unmap_old(oi);
    if (n2o[ni] >= 0) o2n[n2o[ni]] = -1;
    map(oi, ni);
  }

  struct Candidate {
    double score;
    int distance;
    int old_index;
    int new_index;
  };

  static bool candidate_less(const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.old_index != b.old_index) return a.old_index < b.old_index;
    return a.new_index < b.new_index;
  }

  void greedy(std::vector<Candidate>& cands) {
    std::sort(cands.begin(), cands.end(), candidate_less);
    for (const Candidate& c : cands) {
      if (o2n[c.old_index] < 0 && n2o[c.new_index] < 0) {
        map(c.old_index, c.new_index);
      }
    }
  }

  double value_sim(int oi, int ni) {
    return dice_of_sets(o.bigrams[oi], n.bigrams[ni], o.value(oi), n.value(ni));
  }

  void match_class_members() {
    map(0, 0);  // roots always correspond
    std::vector<int> old_methods, new_methods, old_fields, new_fields;
    for (int i = 0; i < o.view.size(); ++i) {
      if (o.view.parent[i] != 0) continue;
      if (o.kind(i) == EntityKind::MethodDeclaration) old_methods.push_back(i);
      if (o.kind(i) == EntityKind::FieldDeclaration) old_fields.push_back(i);
    }
    for (int i = 0; i < n.view.size(); ++i) {
      if (n.view.parent[i] != 0) continue;
      if (n.kind(i) == EntityKind::MethodDeclaration) new_methods.push_back(i);
      if (n.kind(i) == EntityKind::FieldDeclaration) new_fields.push_back(i);
    }
    std::vector<Candidate> cands;
    for (int oi : old_methods) {
      for (int ni : new_methods) {
        double s = value_sim(oi, ni);
        if (s >= config.leaf_similarity_threshold) {
          cands.push_back({s, std::abs(oi - ni), oi, ni});
        }
      }
    }
    greedy(cands);
    // Fields pair only on exact text: an edited field reads as remove + add.
    cands.clear();
    for (int oi : old_fields) {
      for (int ni : new_fields) {
        if (o.value(oi) == n.value(ni)) {
          cands.push_back({1.0, std::abs(oi - ni), oi, ni});
        }
      }
    }
    greedy(cands);

    for (int oi : old_methods) {
      if (o2n[oi] >= 0) {
        o.mark_scope(oi);
        n.mark_scope(o2n[oi]);
      }
    }
    o.collect_leaf_descendants();
    n.collect_leaf_descendants();
  }

  void match_leaves() {
    std::vector<int> old_leaves, new_leaves;
    for (int i = 0; i < o.view.size(); ++i) {
      if (o.in_scope[i] && is_statement_leaf(o.kind(i))) old_leaves.push_back(i);
    }
    for (int i = 0; i < n.view.size(); ++i) {
      if (n.in_scope[i] && is_statement_leaf(n.kind(i))) new_leaves.push_back(i);
    }
    std::vector<Candidate> cands;
    for (int oi : old_leaves) {
      for (int ni : new_leaves) {
        if (o.kind(oi) != n.kind(ni)) continue;
        double s = value_sim(oi, ni);
        if (s >= config.leaf_similarity_threshold) {
          cands.push_back({s, std::abs(oi - ni), oi, ni});
        }
      }
    }
    greedy(cands);
  }

  // Fraction of leaves under the pair that are mapped into each other, of
  // the larger side; inner nodes with no leaves fall back to value
  // similarity so empty structures can still pair up.
  bool inner_score(int oi, int ni, double& score) {
    const auto& lo = o.leaf_desc[oi];
    const auto& ln = n.leaf_desc[ni];
    size_t max_leaves = std::max(lo.size(), ln.size());
    if (max_leaves == 0) {
      score = value_sim(oi, ni);
      return score >= config.leaf_similarity_threshold;
    }
    int common = 0;
    for (int leaf : lo) {
      int partner = o2n[leaf];
      if (partner >= 0 && n.contains(ni, partner)) ++common;
    }
    score = static_cast<double>(common) / static_cast<double>(max_leaves);
    return score >= config.inner_overlap_threshold;
  }

  void match_inner() {
    std::vector<int> old_inner, new_inner;
    for (int i = 0; i < o.view.size(); ++i) {
      if (o.in_scope[i] && is_inner_statement_kind(o.kind(i))) old_inner.push_back(i);
    }
    for (int i = 0; i < n.view.size(); ++i) {
      if (n.in_scope[i] && is_inner_statement_kind(n.kind(i))) new_inner.push_back(i);
    }
    // Bottom-up: lower structures first so overlap evidence is settled
    // before their enclosing structures are considered.
    std::sort(old_inner.begin(), old_inner.end(), [&](int a, int b) {
      if (o.height[a] != o.height[b]) return o.height[a] < o.height[b];
      return a < b;
    });
    for (int oi : old_inner) {
      if (o2n[oi] >= 0) continue;
      int best = -1;
      double best_score = -1.0;
      for (int ni : new_inner) {
        if (n2o[ni] >= 0 || n.kind(ni) != o.kind(oi)) continue;
        double score = 0.0;
        if (!inner_score(oi, ni, score)) continue;
        if (best < 0 || score > best_score ||
            (score == best_score &&
             (std::abs(oi - ni) < std::abs(oi - best) ||
              (std::abs(oi - ni) == std::abs(oi - best) && ni < best)))) {
          best = ni;
          best_score = score;
        }
      }
      if (best >= 0) map(oi, best);
    }
  }

  // Condition, then/else and finally children follow their parents: force
  // the pairs for every mapped structure, then drop stray condition pairs
  // whose parents ended up unmapped or mapped elsewhere.
  void derive_structural() {
    for (int oi = 0; oi < o.view.size(); ++oi) {
      int ni = o2n[oi];
      if (ni < 0 || o.kind(oi) != n.kind(ni)) continue;
      switch (o.kind(oi)) {
        case EntityKind::If: {
          force_child(oi, ni, EntityKind::ConditionExpression);
          force_child(oi, ni, EntityKind::Then);
          force_child(oi, ni, EntityKind::Else);
          break;
        }
        case EntityKind::For:
        case EntityKind::While:
        case EntityKind::DoWhile:
        case EntityKind::Switch:
          force_child(oi, ni, EntityKind::ConditionExpression);
          break;
        case EntityKind::Try:
          force_child(oi, ni, EntityKind::Finally);
          break;
        default:
          break;
      }
    }
    // stray provisional condition pairs
    for (int oi = 0; oi < o.view.size(); ++oi) {
      if (o.kind(oi) != EntityKind::ConditionExpression || o2n[oi] < 0) continue;
      int ni = o2n[oi];
      int op = o.view.parent[oi];
      int np = n.view.parent[ni];
      if (op < 0 || np < 0 || o2n[op] != np) unmap_old(oi);
    }
  }

  void force_child(int oi, int ni, EntityKind child_kind) {
    int oc = find_child(o, oi, child_kind);
    int nc = find_child(n, ni, child_kind);
    if (oc >= 0 && nc >= 0) force_map(oc, nc);
  }

  static int find_child(const SideIndex& side, int parent, EntityKind kind) {
    for (int i = parent + 1; i < side.subtree_end[parent]; ++i) {
      if (side.view.parent[i] == parent && side.kind(i) == kind) return i;
    }
    return -1;
  }

  NodeMapping run() {
    match_class_members();
    match_leaves();
    match_inner();
    derive_structural();
    NodeMapping result;
    for (int oi = 0; oi < o.view.size(); ++oi) {
      if (o2n[oi] >= 0) result.pairs.emplace_back(oi, o2n[oi]);
    }
    return result;
  }
};

}  // namespace

NodeMapping match_trees(const CompilationUnit& old_unit,
                        const CompilationUnit& new_unit,
                        const MatchConfig& config) {
  Matcher m(old_unit, new_unit, config);
  return m.run();
}

// ---------------------------------------------------------------------------
// Change extraction
// ---------------------------------------------------------------------------

namespace {

// Then wrappers are invisible as enclosing elements: a statement inside a
// then-branch reports the If itself.
int resolve_parent(const TreeView& view, int index) {
  int p = view.parent[index];
  while (p >= 0 && view.nodes[p]->kind == EntityKind::Then) p = view.parent[p];
  return p;
}

LineSpan header_span(const AstNode& node) {
  int end = node.children.empty() ? node.span.end_line
                                  : node.children.front().span.start_line;
  end = std::max(node.span.start_line, std::min(node.span.end_line, end));
  return LineSpan{node.span.start_line, end};
}

struct Extractor {
  const CompilationUnit& old_unit;
  const CompilationUnit& new_unit;
  TreeView o;
  TreeView n;
  std::vector<int> o2n;
  std::vector<int> n2o;
  ChangeList result;

  Extractor(const CompilationUnit& ou, const CompilationUnit& nu,
            const NodeMapping& mapping)
      : old_unit(ou), new_unit(nu), o(flatten_tree(ou.root)), n(flatten_tree(nu.root)) {
    o2n.assign(o.size(), -1);
    n2o.assign(n.size(), -1);
    for (auto [oi, ni] : mapping.pairs) {
      o2n[oi] = ni;
      n2o[ni] = oi;
    }
    assign_identities();
    result.old_unit = &old_unit;
    result.new_unit = &new_unit;
  }

  void assign_identities() {
    int next = 0;
    result.old_identity.assign(o.size(), -1);
    result.new_identity.assign(n.size(), -1);
    for (int oi = 0; oi < o.size(); ++oi) {
      result.old_identity[oi] = next;
      if (o2n[oi] >= 0) result.new_identity[o2n[oi]] = next;
      ++next;
    }
    for (int ni = 0; ni < n.size(); ++ni) {
      if (result.new_identity[ni] < 0) result.new_identity[ni] = next++;
    }
  }

  SourceCodeChange base_change(ChangeType ct, Side side, int index) {
    const TreeView& view = side == Side::Old ? o : n;
    const std::vector<int>& ids =
        side == Side::Old ? result.old_identity : result.new_identity;
    int parent = resolve_parent(view, index);
    SourceCodeChange c;
    c.ct = ct;
    c.et = view.nodes[index]->kind;
    c.pt = parent >= 0 ? view.nodes[parent]->kind : EntityKind::Class;
    c.side = side;
    c.anchor_span = view.nodes[index]->span;
    c.node_value = view.nodes[index]->value;
    c.parent_value = parent >= 0 ? view.nodes[parent]->value : std::string();
    c.node_id = ids[index];
    c.parent_id = parent >= 0 ? ids[parent] : -1;
    c.node_preorder = index;
    return c;
  }

  bool method_mapped_side(const TreeView& view, const std::vector<int>& to_other,
                          int index) {
    // Walk up to the enclosing method; true when that method is mapped.
    int p = index;
    while (p >= 0 && view.nodes[p]->kind != EntityKind::MethodDeclaration) {
      p = view.parent[p];
    }
    return p >= 0 && to_other[p] >= 0;
  }

  void class_level() {
    for (int oi = 0; oi < o.size(); ++oi) {
      if (o.parent[oi] != 0) continue;
      EntityKind k = o.nodes[oi]->kind;
      if (k == EntityKind::MethodDeclaration) {
        if (o2n[oi] < 0) {
          result.changes.push_back(
              base_change(ChangeType::RemovedFunctionality, Side::Old, oi));
        } else if (o.nodes[oi]->value != n.nodes[o2n[oi]]->value) {
          SourceCodeChange c =
              base_change(ChangeType::MethodDeclarationChange, Side::New, o2n[oi]);
          c.anchor_span = header_span(*n.nodes[o2n[oi]]);
          result.changes.push_back(std::move(c));
        }
      } else if (k == EntityKind::FieldDeclaration && o2n[oi] < 0) {
        result.changes.push_back(
            base_change(ChangeType::RemovedObjectState, Side::Old, oi));
      }
    }
    for (int ni = 0; ni < n.size(); ++ni) {
      if (n.parent[ni] != 0 || n2o[ni] >= 0) continue;
      EntityKind k = n.nodes[ni]->kind;
      if (k == EntityKind::MethodDeclaration) {
        result.changes.push_back(
            base_change(ChangeType::AdditionalFunctionality, Side::New, ni));
      } else if (k == EntityKind::FieldDeclaration) {
        result.changes.push_back(
            base_change(ChangeType::AdditionalObjectState, Side::New, ni));
      }
    }
  }

  void statement_level() {
    for (int oi = 0; oi < o.size(); ++oi) {
      EntityKind k = o.nodes[oi]->kind;
      if (o.parent[oi] <= -1 || o.parent[oi] == 0) continue;  // root and members
      if (!method_mapped_side(o, o2n, oi)) continue;
      if (k == EntityKind::Then) continue;
      if (k == EntityKind::ConditionExpression) {
        int ni = o2n[oi];
        if (ni >= 0 && o.nodes[oi]->value != n.nodes[ni]->value) {
          result.changes.push_back(
              base_change(ChangeType::ConditionExpressionChange, Side::New, ni));
        }
        continue;
      }
      if (o2n[oi] < 0) {
        result.changes.push_back(base_change(
            k == EntityKind::Else ? ChangeType::ElsePartDelete
                                  : ChangeType::StatementDelete,
            Side::Old, oi));
        continue;
      }
      int ni = o2n[oi];
      if (k != EntityKind::Else && k != EntityKind::Finally &&
          o.nodes[oi]->value != n.nodes[ni]->value &&
          !is_structured_value_kind(k)) {
        SourceCodeChange c = base_change(ChangeType::StatementUpdate, Side::New, ni);
        if (k == EntityKind::SwitchCase || k == EntityKind::CatchClause) {
          c.anchor_span = header_span(*n.nodes[ni]);
        }
        result.changes.push_back(std::move(c));
      }
      int op = resolve_parent(o, oi);
      int np = resolve_parent(n, ni);
      if (op >= 0 && np >= 0 &&
          result.old_identity[op] != result.new_identity[np]) {
        result.changes.push_back(
            base_change(ChangeType::StatementParentChange, Side::New, ni));
      }
    }
    for (int ni = 0; ni < n.size(); ++ni) {
      EntityKind k = n.nodes[ni]->kind;
      if (n.parent[ni] <= -1 || n.parent[ni] == 0) continue;
      if (!method_mapped_side(n, n2o, ni)) continue;
      if (k == EntityKind::Then || k == EntityKind::ConditionExpression) continue;
      if (n2o[ni] < 0) {
        result.changes.push_back(base_change(
            k == EntityKind::Else ? ChangeType::ElsePartInsert
                                  : ChangeType::StatementInsert,
            Side::New, ni));
      }
    }
    ordering_level();
  }

  // Structures whose value mirrors their condition child: an edit there is
  // already reported as a condition change.
  static bool is_structured_value_kind(EntityKind k) {
    switch (k) {
      case EntityKind::If:
      case EntityKind::For:
      case EntityKind::While:
      case EntityKind::DoWhile:
      case EntityKind::Switch:
        return true;
      default:
        return false;
    }
  }

  void ordering_level() {
    // For each mapped parent pair: siblings that stayed get flagged when
    // any pair of them crosses; both endpoints of a crossing are reported.
    std::vector<bool> flagged(n.size(), false);
    for (int op = 0; op < o.size(); ++op) {
      int np = o2n[op];
      if (np < 0) continue;
      if (!method_mapped_side(o, o2n, op) &&
          o.nodes[op]->kind != EntityKind::MethodDeclaration)
        continue;
      std::vector<std::pair<int, int>> stay;  // (old child, new position)
      std::vector<int> new_children;
      for (int ni = np + 1; ni < n.size(); ++ni) {
        if (n.parent[ni] == np) new_children.push_back(ni);
      }
      for (int oc = op + 1; oc < o.size(); ++oc) {
        if (o.parent[oc] != op) continue;
        int nc = o2n[oc];
        if (nc < 0 || n.parent[nc] != np) continue;
        auto it = std::find(new_children.begin(), new_children.end(), nc);
        stay.emplace_back(oc, static_cast<int>(it - new_children.begin()));
      }
      for (size_t a = 0; a < stay.size(); ++a) {
        for (size_t b = a + 1; b < stay.size(); ++b) {
          if (stay[a].second > stay[b].second) {
            flagged[o2n[stay[a].first]] = true;
            flagged[o2n[stay[b].first]] = true;
          }
        }
      }
    }
    for (int ni = 0; ni < n.size(); ++ni) {
      if (flagged[ni]) {
        result.changes.push_back(
            base_change(ChangeType::StatementOrderingChange, Side::New, ni));
      }
    }
  }

  ChangeList run() {
    class_level();
    statement_level();
    std::stable_sort(result.changes.begin(), result.changes.end(),
                     [](const SourceCodeChange& a, const SourceCodeChange& b) {
                       if (a.anchor_span.start_line != b.anchor_span.start_line)
                         return a.anchor_span.start_line < b.anchor_span.start_line;
                       if (a.side != b.side) return a.side == Side::Old;
                       if (a.node_preorder != b.node_preorder)
                         return a.node_preorder < b.node_preorder;
                       return change_type_token(a.ct) < change_type_token(b.ct);
                     });
    return std::move(result);
  }
};

}  // namespace

ChangeList extract_changes(const CompilationUnit& old_unit,
                           const CompilationUnit& new_unit,
                           const MatchConfig& config) {
  NodeMapping mapping = match_trees(old_unit, new_unit, config);
  Extractor ex(old_unit, new_unit, mapping);
  return ex.run();
}

std::string change_list_to_json(const ChangeList& list) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SourceCodeChange& c : list.changes) {
    nlohmann::ordered_json item;
    item["ct"] = std::string(change_type_token(c.ct));
    item["et"] = std::string(entity_kind_token(c.et));
    item["pt"] = std::string(entity_kind_token(c.pt));
    item["side"] = c.side == Side::Old ? "old" : "new";
    item["start_line"] = c.anchor_span.start_line;
    item["end_line"] = c.anchor_span.end_line;
    item["value"] = c.node_value;
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

}  // namespace astpat
