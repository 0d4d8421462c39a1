#include "astpat/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_set>

namespace astpat {

bool KindSpec::matches(EntityKind k) const {
  if (any) return true;
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

KindSpec KindSpec::one_of(std::vector<EntityKind> ks) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  KindSpec spec;
  spec.any = ks.empty();
  spec.kinds = std::move(ks);
  return spec;
}

namespace {

std::string lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Splits one line into whitespace-separated tokens; a double-quoted token
// may contain spaces and \" escapes. '#' outside quotes starts a comment.
std::vector<std::string> tokenize_line(std::string_view line, int line_no) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      std::string tok;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i];
        if (d == '\\' && i + 1 < line.size() && line[i + 1] == '"') {
          tok.push_back('"');
          i += 2;
          continue;
        }
        if (d == '"') {
          closed = true;
          ++i;
          break;
        }
        tok.push_back(d);
        ++i;
      }
      if (!closed) throw PatternSyntaxError("unterminated quoted string", line_no);
      tokens.push_back(std::move(tok));
      continue;
    }
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

KindSpec parse_kind_spec(const std::string& token, int line_no) {
  if (token == "*") return KindSpec::wildcard();
  std::vector<EntityKind> kinds;
  size_t start = 0;
  while (start <= token.size()) {
    size_t bar = token.find('|', start);
    std::string_view part(token.data() + start,
                          (bar == std::string::npos ? token.size() : bar) - start);
    EntityKind k;
    if (!entity_kind_from_token(part, k)) {
      throw PatternSyntaxError("unknown entity kind '" + std::string(part) + "'",
                               line_no);
    }
    kinds.push_back(k);
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return KindSpec::one_of(std::move(kinds));
}

int parse_index(const std::string& token, int line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw PatternSyntaxError("expected an index, got '" + token + "'", line_no);
  }
  return value;
}

void validate(const PatternDefinition& def) {
  if (def.micro.empty()) {
    throw PatternValidationError("pattern " + def.id + ": change list is empty");
  }
  int count = static_cast<int>(def.micro.size());
  for (const RelationConstraint& r : def.relations) {
    if (r.subject < 0 || r.subject >= count || r.object < 0 || r.object >= count) {
      throw PatternValidationError("pattern " + def.id + ": relation index out of range");
    }
    if (r.subject == r.object) {
      throw PatternValidationError("pattern " + def.id + ": relation needs two distinct changes");
    }
  }
  for (const UndesiredChange& u : def.undesired) {
    if (u.scope != UndesiredChange::Scope::Anywhere &&
        (u.anchor < 0 || u.anchor >= count)) {
      throw PatternValidationError("pattern " + def.id + ": undesired scope index out of range");
    }
  }
}

std::string spec_to_string(const KindSpec& spec) {
  if (spec.any) return "*";
  std::string out;
  for (size_t i = 0; i < spec.kinds.size(); ++i) {
    if (i) out.push_back('|');
    out += entity_kind_token(spec.kinds[i]);
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\\\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<PatternDefinition> parse_pattern_file(std::string_view text) {
  std::vector<PatternDefinition> defs;
  PatternDefinition current;
  bool open = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::vector<std::string> toks = tokenize_line(line, line_no);
    if (toks.empty()) continue;
    std::string keyword = lower_copy(toks[0]);
    if (keyword == "pattern") {
      if (open) throw PatternSyntaxError("missing 'end' before new pattern", line_no);
      if (toks.size() < 2) throw PatternSyntaxError("pattern needs an identifier", line_no);
      if (toks.size() > 3) throw PatternSyntaxError("too many tokens after pattern name", line_no);
      current = PatternDefinition{};
      current.id = toks[1];
      current.name = toks.size() > 2 ? toks[2] : toks[1];
      open = true;
    } else if (keyword == "change") {
      if (!open) throw PatternSyntaxError("'change' outside a pattern block", line_no);
      if (toks.size() < 2 || toks.size() > 4) {
        throw PatternSyntaxError("expected: change <type> [<entity> [<parent>]]", line_no);
      }
      if (toks[1] == "*") {
        throw PatternValidationError("pattern " + current.id + ": change type cannot be the wildcard");
      }
      MicroPattern mp;
      if (!change_type_from_token(toks[1], mp.ct)) {
        throw PatternSyntaxError("unknown change type '" + toks[1] + "'", line_no);
      }
      mp.et = toks.size() > 2 ? parse_kind_spec(toks[2], line_no) : KindSpec::wildcard();
      mp.pt = toks.size() > 3 ? parse_kind_spec(toks[3], line_no) : KindSpec::wildcard();
      current.micro.push_back(std::move(mp));
    } else if (keyword == "relation") {
      if (!open) throw PatternSyntaxError("'relation' outside a pattern block", line_no);
      if (toks.size() != 4) {
        throw PatternSyntaxError("expected: relation <parent_of|same_parent> <i> <j>", line_no);
      }
      RelationConstraint r;
      std::string kind = lower_copy(toks[1]);
      if (kind == "parent_of") {
        r.kind = RelationConstraint::Kind::ParentOf;
      } else if (kind == "same_parent") {
        r.kind = RelationConstraint::Kind::SameParent;
      } else {
        throw PatternSyntaxError("unknown relation '" + toks[1] + "'", line_no);
      }
      r.subject = parse_index(toks[2], line_no);
      r.object = parse_index(toks[3], line_no);
      current.relations.push_back(r);
    } else if (keyword == "undesired") {
      if (!open) throw PatternSyntaxError("'undesired' outside a pattern block", line_no);
      if (toks.size() < 2) throw PatternSyntaxError("expected a change type or 'none'", line_no);
      if (lower_copy(toks[1]) == "none") {
        if (toks.size() != 2) throw PatternSyntaxError("'undesired none' takes no arguments", line_no);
        continue;
      }
      if (toks[1] == "*") {
        throw PatternValidationError("pattern " + current.id + ": change type cannot be the wildcard");
      }
      UndesiredChange u;
      if (!change_type_from_token(toks[1], u.what.ct)) {
        throw PatternSyntaxError("unknown change type '" + toks[1] + "'", line_no);
      }
      size_t i = 2;
      std::vector<std::string> triple;
      while (i < toks.size() && lower_copy(toks[i]) != "scoped") triple.push_back(toks[i++]);
      if (triple.size() > 2) {
        throw PatternSyntaxError("too many entity tokens in undesired change", line_no);
      }
      u.what.et = !triple.empty() ? parse_kind_spec(triple[0], line_no) : KindSpec::wildcard();
      u.what.pt = triple.size() > 1 ? parse_kind_spec(triple[1], line_no) : KindSpec::wildcard();
      if (i < toks.size()) {
        ++i;  // 'scoped'
        u.scope = UndesiredChange::Scope::ParentOfMatch;
        if (i < toks.size()) {
          std::string dir = lower_copy(toks[i]);
          if (dir == "parent_of") {
            u.scope = UndesiredChange::Scope::ParentOfMatch;
            ++i;
          } else if (dir == "child_of") {
            u.scope = UndesiredChange::Scope::ChildOfMatch;
            ++i;
          }
        }
        if (i >= toks.size()) throw PatternSyntaxError("'scoped' needs an index", line_no);
        u.anchor = parse_index(toks[i], line_no);
        if (++i != toks.size()) throw PatternSyntaxError("trailing tokens after scope index", line_no);
      }
      current.undesired.push_back(std::move(u));
    } else if (keyword == "end") {
      if (!open) throw PatternSyntaxError("'end' without a pattern block", line_no);
      if (toks.size() != 1) throw PatternSyntaxError("'end' takes no arguments", line_no);
      validate(current);
      defs.push_back(std::move(current));
      open = false;
    } else {
      throw PatternSyntaxError("unknown keyword '" + toks[0] + "'", line_no);
    }
  }
  if (open) throw PatternSyntaxError("missing 'end' at end of file", line_no);
  std::unordered_set<std::string> seen;
  for (const PatternDefinition& def : defs) {
    if (!seen.insert(def.id).second) {
      throw PatternValidationError("duplicate pattern id " + def.id);
    }
  }
  return defs;
}

std::string serialize_patterns(const std::vector<PatternDefinition>& defs) {
  std::string out;
  for (const PatternDefinition& def : defs) {
    out += "pattern " + def.id + " " + quote(def.name) + "\n";
    for (const MicroPattern& mp : def.micro) {
      out += "  change ";
      out += change_type_token(mp.ct);
      out += " " + spec_to_string(mp.et) + " " + spec_to_string(mp.pt) + "\n";
    }
    for (const RelationConstraint& r : def.relations) {
      out += "  relation ";
      out += r.kind == RelationConstraint::Kind::ParentOf ? "parent_of" : "same_parent";
      out += " " + std::to_string(r.subject) + " " + std::to_string(r.object) + "\n";
    }
    if (def.undesired.empty()) {
      out += "  undesired none\n";
    }
    for (const UndesiredChange& u : def.undesired) {
      out += "  undesired ";
      out += change_type_token(u.what.ct);
      out += " " + spec_to_string(u.what.et) + " " + spec_to_string(u.what.pt);
      if (u.scope == UndesiredChange::Scope::ParentOfMatch) {
        out += " scoped parent_of " + std::to_string(u.anchor);
      } else if (u.scope == UndesiredChange::Scope::ChildOfMatch) {
        out += " scoped child_of " + std::to_string(u.anchor);
      }
      out += "\n";
    }
    out += "end\n";
  }
  return out;
}

}  // namespace astpat
