#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace astpat {

// Syntactic kind of a node in the statement-level tree. Statement kinds
// (Assignment..ThrowStatement, FieldDeclaration) are leaves; structural kinds
// may carry children. Expressions are never broken into subtrees: they live
// as normalized text in node values.
enum class EntityKind : std::uint8_t {
  Class,
  MethodDeclaration,
  FieldDeclaration,
  Parameter,
  ReturnType,
  Block,
  If,
  Then,
  Else,
  For,
  While,
  DoWhile,
  Switch,
  SwitchCase,
  Try,
  CatchClause,
  Finally,
  ConditionExpression,
  Assignment,
  VariableDeclaration,
  MethodInvocation,
  ReturnStatement,
  BreakStatement,
  ContinueStatement,
  ThrowStatement,
};

inline constexpr int kEntityKindCount = 25;

// Canonical token as used in pattern files and JSON, e.g. "METHOD_INVOCATION".
std::string_view entity_kind_token(EntityKind k);

// Human-readable name as used in rendered changes, e.g. "Method invocation".
std::string_view entity_kind_display(EntityKind k);

// Parses a canonical token or one of its aliases (RETURN, BREAK, CONTINUE,
// THROW, CONDITION). Case-insensitive. Returns false on unknown tokens.
bool entity_kind_from_token(std::string_view token, EntityKind& out);

// True for kinds that terminate the statement tree (never have children).
bool is_leaf_statement_kind(EntityKind k);

// 1-based inclusive line range in the originating file.
struct LineSpan {
  int start_line = 0;
  int end_line = 0;

  bool contains(const LineSpan& other) const {
    return start_line <= other.start_line && other.end_line <= end_line;
  }
  bool intersects(const LineSpan& other) const {
    return start_line <= other.end_line && other.start_line <= end_line;
  }
  friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

// Labeled ordered tree node. `value` holds whitespace-normalized source text:
// the condition for If/loops/Switch, the full statement text for leaves, the
// signature for MethodDeclaration, the label for SwitchCase, the parameter
// for CatchClause.
struct AstNode {
  EntityKind kind = EntityKind::Class;
  std::string value;
  LineSpan span;
  std::vector<AstNode> children;
};

// One parsed file revision. `root` is always a Class node; parsing a
// method-body fragment wraps the statements in a synthetic Class and
// MethodDeclaration so fragment pairs diff like regular method bodies.
struct CompilationUnit {
  std::string path;
  AstNode root;
  std::vector<std::string> source_lines;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message + " at line " + std::to_string(line) +
                           ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Collapses every run of whitespace to a single space and trims both ends.
std::string normalize_value(std::string_view raw);

// Parses UTF-8 source text in the supported Java-like subset. Accepts either
// a single top-level class or a bare method-body fragment. Comments, blank
// lines and empty statements produce no nodes. Throws ParseError on
// unbalanced braces, unterminated statements or unsupported top-level
// constructs.
CompilationUnit parse_source(std::string_view text, std::string path);

// Structural equality on (kind, value, children), ignoring spans.
bool same_tree(const AstNode& a, const AstNode& b);

}  // namespace astpat
