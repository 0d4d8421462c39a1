#include "astpat/match.hpp"

#include <functional>

#include <json.hpp>

namespace astpat {

bool micro_matches(const MicroPattern& mp, const SourceCodeChange& c) {
  return mp.ct == c.ct && mp.et.matches(c.et) && mp.pt.matches(c.pt);
}

namespace {

bool relations_hold(const PatternDefinition& pattern,
                    const std::vector<SourceCodeChange>& changes,
                    const std::vector<int>& mapping) {
  for (const RelationConstraint& r : pattern.relations) {
    const SourceCodeChange& subject = changes[mapping[r.subject]];
    const SourceCodeChange& object = changes[mapping[r.object]];
    switch (r.kind) {
      case RelationConstraint::Kind::ParentOf:
        if (object.parent_id != subject.node_id) return false;
        break;
      case RelationConstraint::Kind::SameParent:
        if (object.parent_id != subject.parent_id) return false;
        break;
    }
  }
  return true;
}

bool undesired_absent(const PatternDefinition& pattern,
                      const std::vector<SourceCodeChange>& changes,
                      const std::vector<int>& mapping) {
  for (const UndesiredChange& u : pattern.undesired) {
    for (const SourceCodeChange& c : changes) {
      if (!micro_matches(u.what, c)) continue;
      switch (u.scope) {
        case UndesiredChange::Scope::Anywhere:
          return false;
        case UndesiredChange::Scope::ParentOfMatch:
          if (c.node_id == changes[mapping[u.anchor]].parent_id) return false;
          break;
        case UndesiredChange::Scope::ChildOfMatch:
          if (c.parent_id == changes[mapping[u.anchor]].node_id) return false;
          break;
      }
    }
  }
  return true;
}

// Depth-first search over order-preserving injective assignments, trying
// positions left to right so the first full assignment that survives all
// three validation phases is also the lexicographically smallest one.
bool search_assignment(const PatternDefinition& pattern,
                       const std::vector<SourceCodeChange>& changes,
                       size_t micro_index, std::vector<int>& mapping) {
  if (micro_index == pattern.micro.size()) {
    return relations_hold(pattern, changes, mapping) &&
           undesired_absent(pattern, changes, mapping);
  }
  int start = micro_index == 0 ? 0 : mapping[micro_index - 1] + 1;
  int remaining = static_cast<int>(pattern.micro.size() - micro_index);
  int limit = static_cast<int>(changes.size()) - remaining;
  for (int pos = start; pos <= limit; ++pos) {
    if (!micro_matches(pattern.micro[micro_index], changes[pos])) continue;
    mapping.push_back(pos);
    if (search_assignment(pattern, changes, micro_index + 1, mapping)) return true;
    mapping.pop_back();
  }
  return false;
}

}  // namespace

std::optional<PatternInstance> classify_hunk(const PatternDefinition& pattern,
                                             const AstHunk& hunk) {
  if (pattern.micro.empty() || hunk.changes.size() < pattern.micro.size()) {
    return std::nullopt;
  }
  std::vector<int> mapping;
  mapping.reserve(pattern.micro.size());
  if (!search_assignment(pattern, hunk.changes, 0, mapping)) return std::nullopt;
  PatternInstance instance;
  instance.pattern_id = pattern.id;
  instance.path = hunk.path;
  instance.hunk_index = hunk.index;
  instance.assignment = MatchAssignment{pattern.id, std::move(mapping)};
  return instance;
}

std::vector<PatternInstance> classify_revision(
    const std::vector<PatternDefinition>& catalog,
    const std::vector<AstHunk>& hunks) {
  std::vector<PatternInstance> instances;
  for (const AstHunk& hunk : hunks) {
    for (const PatternDefinition& pattern : catalog) {
      if (auto instance = classify_hunk(pattern, hunk)) {
        instances.push_back(std::move(*instance));
      }
    }
  }
  return instances;
}

std::string instances_to_json(const std::vector<PatternInstance>& instances) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const PatternInstance& inst : instances) {
    nlohmann::ordered_json item;
    item["pattern_id"] = inst.pattern_id;
    item["path"] = inst.path;
    item["commit"] = inst.revision;
    item["hunk_index"] = inst.hunk_index;
    item["mapping"] = inst.assignment.mapping;
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

}  // namespace astpat
