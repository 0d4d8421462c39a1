#include "astpat/hunk.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

namespace astpat {

std::vector<LineHunk> line_diff(const std::vector<std::string>& old_lines,
                                const std::vector<std::string>& new_lines) {
  size_t n = old_lines.size();
  size_t m = new_lines.size();
  size_t pre = 0;
  while (pre < n && pre < m && old_lines[pre] == new_lines[pre]) ++pre;
  size_t post = 0;
  while (post < n - pre && post < m - pre &&
         old_lines[n - 1 - post] == new_lines[m - 1 - post]) {
    ++post;
  }
  size_t on = n - pre - post;
  size_t nn = m - pre - post;
  if (on == 0 && nn == 0) return {};

  // LCS lengths over the untrimmed middle.
  std::vector<std::vector<int>> lcs(on + 1, std::vector<int>(nn + 1, 0));
  for (size_t i = on; i-- > 0;) {
    for (size_t j = nn; j-- > 0;) {
      if (old_lines[pre + i] == new_lines[pre + j]) {
        lcs[i][j] = lcs[i + 1][j + 1] + 1;
      } else {
        lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
      }
    }
  }

  std::vector<LineHunk> hunks;
  size_t i = 0, j = 0;
  bool in_hunk = false;
  auto open_hunk = [&]() {
    if (!in_hunk) {
      hunks.push_back(LineHunk{static_cast<int>(pre + i + 1), 0,
                               static_cast<int>(pre + j + 1), 0});
      in_hunk = true;
    }
  };
  while (i < on || j < nn) {
    if (i < on && j < nn && old_lines[pre + i] == new_lines[pre + j]) {
      in_hunk = false;
      ++i;
      ++j;
    } else if (j == nn || (i < on && lcs[i + 1][j] >= lcs[i][j + 1])) {
      open_hunk();
      ++hunks.back().old_len;
      ++i;
    } else {
      open_hunk();
      ++hunks.back().new_len;
      ++j;
    }
  }
  return hunks;
}

namespace {

bool is_move(ChangeType ct) {
  return ct == ChangeType::StatementParentChange ||
         ct == ChangeType::StatementOrderingChange;
}

bool span_hits_range(const LineSpan& span, int start, int len) {
  if (len <= 0) return false;
  return span.start_line <= start + len - 1 && span.end_line >= start;
}

bool change_hits_hunk(const SourceCodeChange& c, const LineHunk& h) {
  if (c.side == Side::Old) return span_hits_range(c.anchor_span, h.old_start, h.old_len);
  return span_hits_range(c.anchor_span, h.new_start, h.new_len);
}

// Line distance between a change's anchor and a hunk's footprint on the
// change's anchoring side; an empty range counts as the gap position just
// before its start.
int anchoring_side_distance(const SourceCodeChange& c, const LineHunk& h) {
  int start = c.side == Side::Old ? h.old_start : h.new_start;
  int len = c.side == Side::Old ? h.old_len : h.new_len;
  int lo = start;
  int hi = len > 0 ? start + len - 1 : start;
  if (len == 0) lo = start > 1 ? start - 1 : start;
  if (c.anchor_span.end_line < lo) return lo - c.anchor_span.end_line;
  if (c.anchor_span.start_line > hi) return c.anchor_span.start_line - hi;
  return 0;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int size) : parent(size) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<AstHunk> group_ast_hunks(const ChangeList& list,
                                     const std::vector<LineHunk>& hunks) {
  const auto& changes = list.changes;
  if (changes.empty()) return {};
  if (hunks.empty()) {
    throw UnanchoredChange("changes present but the line diff is empty: " +
                           render_change(changes.front()));
  }

  int nc = static_cast<int>(changes.size());
  int nh = static_cast<int>(hunks.size());
  UnionFind uf(nc + nh);  // change i -> i, hunk k -> nc + k

  // Condition 1: a change belongs with every line hunk its span touches on
  // its anchoring side (touching several bridges them).
  for (int ci = 0; ci < nc; ++ci) {
    for (int hi = 0; hi < nh; ++hi) {
      if (change_hits_hunk(changes[ci], hunks[hi])) uf.unite(ci, nc + hi);
    }
  }

  // Condition 2: moves into the same enclosing element stay together.
  std::unordered_map<int, int> move_rep;  // parent_id -> first move change
  for (int ci = 0; ci < nc; ++ci) {
    if (!is_move(changes[ci].ct)) continue;
    auto [it, inserted] = move_rep.emplace(changes[ci].parent_id, ci);
    if (!inserted) uf.unite(ci, it->second);
  }

  // A group can end up without any hunk when the line diff attributed its
  // edit to surrounding context instead — a move whose lines did not change,
  // or an element whose own lines are all context (say, a wrapper that lost
  // its statements to the enclosing block). Tie such groups to the nearest
  // hunk so the partition stays total.
  auto root_has_hunk = [&](int root) {
    for (int hi = 0; hi < nh; ++hi) {
      if (uf.find(nc + hi) == root) return true;
    }
    return false;
  };
  for (int ci = 0; ci < nc; ++ci) {
    int root = uf.find(ci);
    if (root_has_hunk(root)) continue;
    int best_hunk = -1;
    int best_dist = 0;
    for (int cj = 0; cj < nc; ++cj) {
      if (uf.find(cj) != root) continue;
      for (int hi = 0; hi < nh; ++hi) {
        int d = anchoring_side_distance(changes[cj], hunks[hi]);
        if (best_hunk < 0 || d < best_dist) {
          best_hunk = hi;
          best_dist = d;
        }
      }
    }
    uf.unite(ci, nc + best_hunk);
  }

  // Materialize groups in first-change order.
  std::vector<AstHunk> result;
  std::unordered_map<int, int> root_to_group;
  std::string path = list.new_unit          ? list.new_unit->path
                     : list.old_unit        ? list.old_unit->path
                                            : std::string();
  for (int ci = 0; ci < nc; ++ci) {
    int root = uf.find(ci);
    auto [it, inserted] = root_to_group.emplace(root, static_cast<int>(result.size()));
    if (inserted) {
      AstHunk h;
      h.path = path;
      h.index = it->second;
      result.push_back(std::move(h));
    }
    result[it->second].changes.push_back(changes[ci]);
  }
  for (int hi = 0; hi < nh; ++hi) {
    auto it = root_to_group.find(uf.find(nc + hi));
    if (it != root_to_group.end()) result[it->second].line_hunks.push_back(hi);
  }
  return result;
}

std::string hunks_to_json(const std::vector<AstHunk>& hunks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const AstHunk& h : hunks) {
    nlohmann::ordered_json item;
    item["id"] = {{"path", h.path}, {"index", h.index}};
    item["line_hunks"] = h.line_hunks;
    nlohmann::ordered_json rendered = nlohmann::ordered_json::array();
    for (const SourceCodeChange& c : h.changes) rendered.push_back(render_change(c));
    item["changes"] = std::move(rendered);
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

}  // namespace astpat
