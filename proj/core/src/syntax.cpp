#include "astpat/syntax.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace astpat {

namespace {

struct KindEntry {
  EntityKind kind;
  std::string_view token;
  std::string_view display;
};

constexpr std::array<KindEntry, kEntityKindCount> kKindTable{{
    {EntityKind::Class, "CLASS", "Class"},
    {EntityKind::MethodDeclaration, "METHOD_DECLARATION", "Method declaration"},
    {EntityKind::FieldDeclaration, "FIELD_DECLARATION", "Field declaration"},
    {EntityKind::Parameter, "PARAMETER", "Parameter"},
    {EntityKind::ReturnType, "RETURN_TYPE", "Return type"},
    {EntityKind::Block, "BLOCK", "Block"},
    {EntityKind::If, "IF", "If"},
    {EntityKind::Then, "THEN", "Then"},
    {EntityKind::Else, "ELSE", "Else"},
    {EntityKind::For, "FOR", "For"},
    {EntityKind::While, "WHILE", "While"},
    {EntityKind::DoWhile, "DO_WHILE", "Do while"},
    {EntityKind::Switch, "SWITCH", "Switch"},
    {EntityKind::SwitchCase, "SWITCH_CASE", "Switch case"},
    {EntityKind::Try, "TRY", "Try"},
    {EntityKind::CatchClause, "CATCH_CLAUSE", "Catch clause"},
    {EntityKind::Finally, "FINALLY", "Finally"},
    {EntityKind::ConditionExpression, "CONDITION_EXPRESSION", "Condition"},
    {EntityKind::Assignment, "ASSIGNMENT", "Assignment"},
    {EntityKind::VariableDeclaration, "VARIABLE_DECLARATION", "Variable declaration"},
    {EntityKind::MethodInvocation, "METHOD_INVOCATION", "Method invocation"},
    {EntityKind::ReturnStatement, "RETURN_STATEMENT", "Return"},
    {EntityKind::BreakStatement, "BREAK_STATEMENT", "Break"},
    {EntityKind::ContinueStatement, "CONTINUE_STATEMENT", "Continue"},
    {EntityKind::ThrowStatement, "THROW_STATEMENT", "Throw"},
}};

std::string upper_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string_view entity_kind_token(EntityKind k) {
  return kKindTable[static_cast<size_t>(k)].token;
}

std::string_view entity_kind_display(EntityKind k) {
  return kKindTable[static_cast<size_t>(k)].display;
}

bool entity_kind_from_token(std::string_view token, EntityKind& out) {
  const std::string t = upper_copy(token);
  for (const auto& e : kKindTable) {
    if (t == e.token) {
      out = e.kind;
      return true;
    }
  }
  // Short aliases used by the pattern file grammar.
  if (t == "RETURN") { out = EntityKind::ReturnStatement; return true; }
  if (t == "BREAK") { out = EntityKind::BreakStatement; return true; }
  if (t == "CONTINUE") { out = EntityKind::ContinueStatement; return true; }
  if (t == "THROW") { out = EntityKind::ThrowStatement; return true; }
  if (t == "CONDITION") { out = EntityKind::ConditionExpression; return true; }
  return false;
}

bool is_leaf_statement_kind(EntityKind k) {
  switch (k) {
    case EntityKind::FieldDeclaration:
    case EntityKind::Assignment:
    case EntityKind::VariableDeclaration:
    case EntityKind::MethodInvocation:
    case EntityKind::ReturnStatement:
    case EntityKind::BreakStatement:
    case EntityKind::ContinueStatement:
    case EntityKind::ThrowStatement:
      return true;
    default:
      return false;
  }
}

std::string normalize_value(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool in_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

bool same_tree(const AstNode& a, const AstNode& b) {
  if (a.kind != b.kind || a.value != b.value) return false;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(a.children[i], b.children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Ident, Number, String, Char, Punct, Op, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string_view text;
  int line = 0;
  int column = 0;
  size_t offset = 0;  // byte range in the original text
  size_t end = 0;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_op_char(char c) {
  return std::string_view("=+-*/%<>!&|^~?").find(c) != std::string_view::npos;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    // UTF-8 BOM
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
        continue;
      }
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        int start_line = line_;
        int start_col = col_;
        advance(2);
        bool closed = false;
        while (pos_ < text_.size()) {
          if (text_[pos_] == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
            advance(2);
            closed = true;
            break;
          }
          advance(1);
        }
        if (!closed) throw ParseError("unterminated block comment", start_line, start_col);
        continue;
      }
      Token t;
      t.line = line_;
      t.column = col_;
      t.offset = pos_;
      if (is_ident_start(c)) {
        t.kind = TokKind::Ident;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance(1);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = TokKind::Number;
        while (pos_ < text_.size() &&
               (is_ident_char(text_[pos_]) || text_[pos_] == '.')) {
          advance(1);
        }
      } else if (c == '"' || c == '\'') {
        t.kind = c == '"' ? TokKind::String : TokKind::Char;
        char quote = c;
        advance(1);
        bool closed = false;
        while (pos_ < text_.size()) {
          char d = text_[pos_];
          if (d == '\\') {
            advance(2);
            continue;
          }
          if (d == '\n') break;
          advance(1);
          if (d == quote) {
            closed = true;
            break;
          }
        }
        if (!closed) throw ParseError("unterminated literal", t.line, t.column);
      } else if (is_op_char(c)) {
        t.kind = TokKind::Op;
        while (pos_ < text_.size() && is_op_char(text_[pos_])) advance(1);
      } else {
        t.kind = TokKind::Punct;
        advance(1);
      }
      t.end = pos_;
      t.text = text_.substr(t.offset, t.end - t.offset);
      tokens.push_back(t);
    }
    Token end;
    end.kind = TokKind::End;
    end.line = line_;
    end.column = col_;
    end.offset = end.end = text_.size();
    tokens.push_back(end);
    return tokens;
  }

 private:
  void advance(size_t n) {
    for (size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Replaces comments with a single space, respecting string and char literals.
// Used when deriving node values from raw source slices.
std::string strip_comments(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '/') {
      while (i < raw.size() && raw[i] != '\n') ++i;
      out.push_back(' ');
      continue;
    }
    if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '*') {
      i += 2;
      while (i + 1 < raw.size() && !(raw[i] == '*' && raw[i + 1] == '/')) ++i;
      i = std::min(raw.size(), i + 2);
      out.push_back(' ');
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      out.push_back(c);
      ++i;
      while (i < raw.size()) {
        char d = raw[i];
        out.push_back(d);
        ++i;
        if (d == '\\' && i < raw.size()) {
          out.push_back(raw[i]);
          ++i;
          continue;
        }
        if (d == quote || d == '\n') break;
      }
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

const std::unordered_set<std::string_view> kModifiers{
    "public", "private", "protected", "static", "final",    "abstract",
    "synchronized", "native",  "transient", "volatile", "strictfp"};

const std::unordered_set<std::string_view> kAssignOps{
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
    "++", "--"};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, std::vector<Token> tokens)
      : text_(text), toks_(std::move(tokens)) {}

  AstNode parse_unit() {
    skip_file_header();
    size_t probe = pos_;
    while (probe < toks_.size() && toks_[probe].kind == TokKind::Ident &&
           kModifiers.count(toks_[probe].text)) {
      ++probe;
    }
    if (probe < toks_.size() && is_ident(toks_[probe], "class")) {
      AstNode cls = parse_class();
      if (!at_end()) {
        throw ParseError("unsupported top-level construct", cur().line, cur().column);
      }
      return cls;
    }
    if (saw_header_ && !at_end()) {
      throw ParseError("expected a class after package/import header", cur().line,
                       cur().column);
    }
    return parse_fragment();
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& tok(size_t i) const { return toks_[std::min(i, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == TokKind::End; }
  bool is_punct(const Token& t, char c) const {
    return t.kind == TokKind::Punct && t.text.size() == 1 && t.text[0] == c;
  }
  bool is_ident(const Token& t, std::string_view s) const {
    return t.kind == TokKind::Ident && t.text == s;
  }
  void expect_punct(char c, const char* what) {
    if (!is_punct(cur(), c)) {
      throw ParseError(std::string("expected '") + c + "' " + what, cur().line,
                       cur().column);
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().column);
  }

  std::string slice_value(size_t from_tok, size_t to_tok) const {
    if (to_tok < from_tok) return "";
    size_t lo = toks_[from_tok].offset;
    size_t hi = toks_[to_tok].end;
    return normalize_value(strip_comments(text_.substr(lo, hi - lo)));
  }

  LineSpan slice_span(size_t from_tok, size_t to_tok) const {
    return LineSpan{toks_[from_tok].line, toks_[to_tok].line};
  }

  void skip_file_header() {
    // package and import lines carry no AST content.
    while (!at_end() && (is_ident(cur(), "package") || is_ident(cur(), "import"))) {
      saw_header_ = true;
      while (!at_end() && !is_punct(cur(), ';')) ++pos_;
      if (at_end()) fail("unterminated package/import declaration");
      ++pos_;
    }
    skip_annotations();
  }

  void skip_annotations() {
    while (!at_end() && is_punct(cur(), '@')) {
      ++pos_;
      if (cur().kind != TokKind::Ident) fail("malformed annotation");
      ++pos_;
      while (!at_end() && is_punct(cur(), '.')) {
        ++pos_;
        if (cur().kind != TokKind::Ident) fail("malformed annotation");
        ++pos_;
      }
      if (is_punct(cur(), '(')) skip_balanced_parens();
    }
  }

  void skip_balanced_parens() {
    int start_line = cur().line, start_col = cur().column;
    int depth = 0;
    do {
      if (at_end()) throw ParseError("unbalanced parentheses", start_line, start_col);
      if (is_punct(cur(), '(')) ++depth;
      if (is_punct(cur(), ')')) --depth;
      ++pos_;
    } while (depth > 0);
  }

  void skip_modifiers() {
    skip_annotations();
    while (cur().kind == TokKind::Ident && kModifiers.count(cur().text)) {
      ++pos_;
      skip_annotations();
    }
  }

  AstNode parse_fragment() {
    AstNode method;
    method.kind = EntityKind::MethodDeclaration;
    method.value = "";
    size_t first = pos_;
    while (!at_end()) method.children.push_back(parse_statements_one());
    drop_empty(method.children);
    int lo = toks_.empty() ? 1 : tok(first).line;
    int hi = std::max(lo, toks_[toks_.size() - 1].line);
    method.span = LineSpan{lo, hi};

    AstNode cls;
    cls.kind = EntityKind::Class;
    cls.value = "";
    cls.span = method.span;
    cls.children.push_back(std::move(method));
    return cls;
  }

  AstNode parse_class() {
    size_t start = pos_;
    skip_modifiers();
    if (!is_ident(cur(), "class")) fail("unsupported top-level construct");
    ++pos_;
    if (cur().kind != TokKind::Ident) fail("expected class name");
    std::string name(cur().text);
    ++pos_;
    // extends / implements clause up to the body brace.
    while (!at_end() && !is_punct(cur(), '{')) ++pos_;
    expect_punct('{', "to open class body");

    AstNode cls;
    cls.kind = EntityKind::Class;
    cls.value = "class " + name;
    while (!at_end() && !is_punct(cur(), '}')) {
      cls.children.push_back(parse_member());
    }
    expect_punct('}', "to close class body");
    cls.span = slice_span(start, pos_ - 1);
    return cls;
  }

  AstNode parse_member() {
    size_t start = pos_;
    skip_modifiers();
    if (is_ident(cur(), "class")) fail("nested classes are not supported");
    if (cur().kind != TokKind::Ident) fail("expected member declaration");

    // Look ahead: constructor (Name '(') vs method (Type Name '(') vs field.
    size_t probe = pos_;
    std::string first_type = scan_type(probe);
    if (probe < toks_.size() && is_punct(tok(probe), '(')) {
      return parse_method(start, /*return_type=*/"", first_type, probe);
    }
    if (tok(probe).kind == TokKind::Ident) {
      std::string name(tok(probe).text);
      size_t after_name = probe + 1;
      if (after_name < toks_.size() && is_punct(tok(after_name), '(')) {
        return parse_method(start, first_type, name, after_name);
      }
      return parse_field(start);
    }
    fail("expected field or method declaration");
  }

  // Advances `probe` past a type: Ident('.'Ident)* followed by any '[]' pairs.
  // Returns the canonical type text (no spaces).
  std::string scan_type(size_t& probe) {
    std::string out;
    if (tok(probe).kind != TokKind::Ident) fail("expected type name");
    out += tok(probe).text;
    ++probe;
    while (probe + 1 < toks_.size() && is_punct(tok(probe), '.') &&
           tok(probe + 1).kind == TokKind::Ident) {
      out += ".";
      out += tok(probe + 1).text;
      probe += 2;
    }
    while (probe + 1 < toks_.size() && is_punct(tok(probe), '[') &&
           is_punct(tok(probe + 1), ']')) {
      out += "[]";
      probe += 2;
    }
    return out;
  }

  AstNode parse_field(size_t start) {
    size_t first = pos_;
    while (!at_end() && !is_punct(cur(), ';')) {
      if (is_punct(cur(), '{') || is_punct(cur(), '}')) {
        fail("unterminated field declaration");
      }
      ++pos_;
    }
    if (at_end()) fail("unterminated field declaration");
    ++pos_;  // ';'
    AstNode field;
    field.kind = EntityKind::FieldDeclaration;
    field.value = slice_value(start, pos_ - 1);
    field.span = slice_span(start, pos_ - 1);
    (void)first;
    return field;
  }

  AstNode parse_method(size_t start, const std::string& return_type,
                       const std::string& name, size_t paren_tok) {
    pos_ = paren_tok;
    expect_punct('(', "to open parameter list");
    std::vector<std::string> param_types;
    while (!at_end() && !is_punct(cur(), ')')) {
      skip_annotations();
      if (cur().kind == TokKind::Ident && kModifiers.count(cur().text)) ++pos_;  // final
      size_t probe = pos_;
      std::string ptype = scan_type(probe);
      pos_ = probe;
      if (cur().kind == TokKind::Op && cur().text == "...") {
        // varargs never lex as one op token ('.' is punct); kept for safety
      }
      if (is_punct(cur(), '.')) {
        // varargs: three '.' puncts
        int dots = 0;
        while (is_punct(cur(), '.')) {
          ++dots;
          ++pos_;
        }
        if (dots == 3) ptype += "...";
      }
      if (cur().kind != TokKind::Ident) fail("expected parameter name");
      ++pos_;
      param_types.push_back(ptype);
      if (is_punct(cur(), ',')) ++pos_;
    }
    expect_punct(')', "to close parameter list");
    if (is_ident(cur(), "throws")) {
      while (!at_end() && !is_punct(cur(), '{') && !is_punct(cur(), ';')) ++pos_;
    }

    AstNode method;
    method.kind = EntityKind::MethodDeclaration;
    std::string sig;
    if (!return_type.empty()) sig = return_type + " ";
    sig += name + "(";
    for (size_t i = 0; i < param_types.size(); ++i) {
      if (i) sig += ", ";
      sig += param_types[i];
    }
    sig += ")";
    method.value = sig;

    if (is_punct(cur(), ';')) {
      ++pos_;  // abstract/native method without a body
    } else {
      expect_punct('{', "to open method body");
      while (!at_end() && !is_punct(cur(), '}')) {
        method.children.push_back(parse_statements_one());
      }
      expect_punct('}', "to close method body");
      drop_empty(method.children);
    }
    method.span = slice_span(start, pos_ - 1);
    return method;
  }

  // Sentinel for constructs that produce no node (empty statements).
  static AstNode none() {
    AstNode n;
    n.kind = EntityKind::Block;
    n.value = "\x01none";
    return n;
  }
  static bool is_none(const AstNode& n) { return n.value == "\x01none"; }
  static void drop_empty(std::vector<AstNode>& nodes) {
    std::erase_if(nodes, [](const AstNode& n) { return is_none(n); });
  }

  AstNode parse_statements_one() {
    skip_annotations();
    if (at_end()) fail("expected statement");
    const Token& t = cur();
    if (is_punct(t, ';')) {
      ++pos_;
      return none();
    }
    if (is_punct(t, '{')) return parse_block();
    if (t.kind == TokKind::Ident) {
      if (t.text == "if") return parse_if();
      if (t.text == "for") return parse_for();
      if (t.text == "while") return parse_while();
      if (t.text == "do") return parse_do_while();
      if (t.text == "switch") return parse_switch();
      if (t.text == "try") return parse_try();
      if (t.text == "return") return parse_simple(EntityKind::ReturnStatement);
      if (t.text == "break") return parse_simple(EntityKind::BreakStatement);
      if (t.text == "continue") return parse_simple(EntityKind::ContinueStatement);
      if (t.text == "throw") return parse_simple(EntityKind::ThrowStatement);
      if (t.text == "else" || t.text == "case" || t.text == "default" ||
          t.text == "catch" || t.text == "finally") {
        fail("unexpected '" + std::string(t.text) + "'");
      }
    }
    return parse_expression_statement();
  }

  AstNode parse_block() {
    size_t start = pos_;
    expect_punct('{', "to open block");
    AstNode block;
    block.kind = EntityKind::Block;
    while (!at_end() && !is_punct(cur(), '}')) {
      block.children.push_back(parse_statements_one());
    }
    expect_punct('}', "to close block");
    drop_empty(block.children);
    block.span = slice_span(start, pos_ - 1);
    return block;
  }

  // Consumes '(' ... ')' with nesting and returns the token range of the
  // inside (from, to inclusive); empty insides yield from > to.
  std::pair<size_t, size_t> paren_range() {
    expect_punct('(', "to open condition");
    size_t from = pos_;
    int depth = 1;
    while (!at_end()) {
      if (is_punct(cur(), '(')) ++depth;
      if (is_punct(cur(), ')')) {
        --depth;
        if (depth == 0) break;
      }
      ++pos_;
    }
    if (at_end()) fail("unbalanced parentheses in condition");
    size_t to = pos_ - 1;
    ++pos_;  // ')'
    return {from, to};
  }

  AstNode make_condition(size_t from, size_t to) {
    AstNode cond;
    cond.kind = EntityKind::ConditionExpression;
    if (to >= from && to < toks_.size()) {
      cond.value = slice_value(from, to);
      cond.span = slice_span(from, to);
    } else {
      cond.value = "";
      cond.span = slice_span(from > 0 ? from - 1 : 0, from > 0 ? from - 1 : 0);
    }
    return cond;
  }

  // Parses a brace block or a single statement into `out`.
  void parse_branch_body(std::vector<AstNode>& out) {
    if (is_punct(cur(), '{')) {
      ++pos_;
      while (!at_end() && !is_punct(cur(), '}')) {
        out.push_back(parse_statements_one());
      }
      expect_punct('}', "to close branch");
      drop_empty(out);
      return;
    }
    if (is_punct(cur(), ';')) {
      ++pos_;
      return;
    }
    out.push_back(parse_statements_one());
    drop_empty(out);
  }

  AstNode parse_if() {
    size_t start = pos_;
    ++pos_;  // 'if'
    auto [cfrom, cto] = paren_range();

    AstNode then_node;
    then_node.kind = EntityKind::Then;
    size_t then_start = pos_;
    parse_branch_body(then_node.children);
    then_node.span = slice_span(then_start, pos_ > then_start ? pos_ - 1 : then_start);

    AstNode node;
    node.kind = EntityKind::If;
    node.children.push_back(make_condition(cfrom, cto));
    node.children.push_back(std::move(then_node));

    if (is_ident(cur(), "else")) {
      size_t else_start = pos_;
      ++pos_;
      AstNode else_node;
      else_node.kind = EntityKind::Else;
      parse_branch_body(else_node.children);
      else_node.span = slice_span(else_start, pos_ > else_start ? pos_ - 1 : else_start);
      node.children.push_back(std::move(else_node));
    }
    node.value = node.children.front().value;
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_for() {
    size_t start = pos_;
    ++pos_;
    auto [cfrom, cto] = paren_range();
    AstNode node;
    node.kind = EntityKind::For;
    node.children.push_back(make_condition(cfrom, cto));
    parse_branch_body(node.children);
    node.value = node.children.front().value;
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_while() {
    size_t start = pos_;
    ++pos_;
    auto [cfrom, cto] = paren_range();
    AstNode node;
    node.kind = EntityKind::While;
    node.children.push_back(make_condition(cfrom, cto));
    parse_branch_body(node.children);
    node.value = node.children.front().value;
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_do_while() {
    size_t start = pos_;
    ++pos_;  // 'do'
    AstNode node;
    node.kind = EntityKind::DoWhile;
    parse_branch_body(node.children);
    if (!is_ident(cur(), "while")) fail("expected 'while' after do body");
    ++pos_;
    auto [cfrom, cto] = paren_range();
    expect_punct(';', "after do-while condition");
    // The condition follows the body in source order, so it is kept as the
    // last child; lookups go by kind, not position.
    node.children.push_back(make_condition(cfrom, cto));
    node.value = node.children.back().value;
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_switch() {
    size_t start = pos_;
    ++pos_;
    auto [cfrom, cto] = paren_range();
    AstNode node;
    node.kind = EntityKind::Switch;
    node.children.push_back(make_condition(cfrom, cto));
    node.value = node.children.front().value;
    expect_punct('{', "to open switch body");
    while (!at_end() && !is_punct(cur(), '}')) {
      node.children.push_back(parse_switch_case());
    }
    expect_punct('}', "to close switch body");
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_switch_case() {
    size_t start = pos_;
    AstNode c;
    c.kind = EntityKind::SwitchCase;
    if (is_ident(cur(), "case")) {
      ++pos_;
      size_t lfrom = pos_;
      while (!at_end() && !is_punct(cur(), ':')) ++pos_;
      if (at_end()) fail("unterminated case label");
      c.value = "case " + slice_value(lfrom, pos_ - 1);
      ++pos_;  // ':'
    } else if (is_ident(cur(), "default")) {
      ++pos_;
      if (!is_punct(cur(), ':')) fail("expected ':' after default");
      ++pos_;
      c.value = "default";
    } else {
      fail("expected 'case' or 'default' inside switch");
    }
    while (!at_end() && !is_punct(cur(), '}') && !is_ident(cur(), "case") &&
           !is_ident(cur(), "default")) {
      c.children.push_back(parse_statements_one());
    }
    drop_empty(c.children);
    c.span = slice_span(start, pos_ > start ? pos_ - 1 : start);
    return c;
  }

  AstNode parse_try() {
    size_t start = pos_;
    ++pos_;  // 'try'
    if (!is_punct(cur(), '{')) fail("expected '{' after try");
    AstNode node;
    node.kind = EntityKind::Try;
    node.value = "try";
    parse_branch_body(node.children);  // body statements hang off Try directly
    bool saw_handler = false;
    while (is_ident(cur(), "catch")) {
      saw_handler = true;
      size_t cstart = pos_;
      ++pos_;
      auto [pfrom, pto] = paren_range();
      AstNode clause;
      clause.kind = EntityKind::CatchClause;
      clause.value = pto >= pfrom ? slice_value(pfrom, pto) : "";
      if (!is_punct(cur(), '{')) fail("expected '{' after catch");
      parse_branch_body(clause.children);
      clause.span = slice_span(cstart, pos_ - 1);
      node.children.push_back(std::move(clause));
    }
    if (is_ident(cur(), "finally")) {
      saw_handler = true;
      size_t fstart = pos_;
      ++pos_;
      if (!is_punct(cur(), '{')) fail("expected '{' after finally");
      AstNode fin;
      fin.kind = EntityKind::Finally;
      parse_branch_body(fin.children);
      fin.span = slice_span(fstart, pos_ - 1);
      node.children.push_back(std::move(fin));
    }
    if (!saw_handler) fail("try requires a catch or finally block");
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_simple(EntityKind kind) {
    size_t start = pos_;
    while (!at_end() && !is_punct(cur(), ';')) {
      if (is_punct(cur(), '{') || is_punct(cur(), '}')) fail("unterminated statement");
      ++pos_;
    }
    if (at_end()) fail("unterminated statement");
    ++pos_;  // ';'
    AstNode node;
    node.kind = kind;
    node.value = slice_value(start, pos_ - 1);
    node.span = slice_span(start, pos_ - 1);
    return node;
  }

  AstNode parse_expression_statement() {
    size_t start = pos_;
    int paren_depth = 0;
    bool has_assign = false;
    bool has_call = false;
    while (!at_end() && !(paren_depth == 0 && is_punct(cur(), ';'))) {
      if (is_punct(cur(), '(')) {
        ++paren_depth;
        has_call = true;
      } else if (is_punct(cur(), ')')) {
        --paren_depth;
      } else if (is_punct(cur(), '{') || is_punct(cur(), '}')) {
        fail("unterminated statement");
      } else if (paren_depth == 0 && cur().kind == TokKind::Op &&
                 kAssignOps.count(cur().text)) {
        has_assign = true;
      }
      ++pos_;
    }
    if (at_end()) fail("unterminated statement");
    ++pos_;  // ';'
    size_t last = pos_ - 1;

    AstNode node;
    node.kind = classify_expression(start, last, has_assign, has_call);
    node.value = slice_value(start, last);
    node.span = slice_span(start, last);
    return node;
  }

  // Declaration test: [modifier]* Type Name followed by '=', ';' or ','.
  bool looks_like_declaration(size_t start, size_t last) const {
    size_t i = start;
    while (i <= last && toks_[i].kind == TokKind::Ident && kModifiers.count(toks_[i].text)) {
      ++i;
    }
    if (i > last || toks_[i].kind != TokKind::Ident) return false;
    ++i;  // type head
    while (i + 1 <= last && is_punct(toks_[i], '.') && toks_[i + 1].kind == TokKind::Ident) {
      i += 2;
    }
    while (i + 1 <= last && is_punct(toks_[i], '[') && is_punct(toks_[i + 1], ']')) {
      i += 2;
    }
    if (i > last || toks_[i].kind != TokKind::Ident) return false;
    ++i;  // name
    if (i > last) return false;
    return (toks_[i].kind == TokKind::Op && toks_[i].text == "=") ||
           is_punct(toks_[i], ';') || is_punct(toks_[i], ',');
  }

  EntityKind classify_expression(size_t start, size_t last, bool has_assign,
                                 bool has_call) const {
    if (looks_like_declaration(start, last)) return EntityKind::VariableDeclaration;
    if (has_assign) return EntityKind::Assignment;
    if (has_call) return EntityKind::MethodInvocation;
    return EntityKind::Assignment;
  }

  std::string_view text_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  bool saw_header_ = false;
};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = text.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.emplace_back(line);
      start = i + 1;
    }
  }
  if (!lines.empty() && lines.back().empty() && !text.empty() && text.back() == '\n') {
    lines.pop_back();
  }
  return lines;
}

}  // namespace

CompilationUnit parse_source(std::string_view text, std::string path) {
  Lexer lexer(text);
  Parser parser(text, lexer.run());
  CompilationUnit unit;
  unit.path = std::move(path);
  unit.root = parser.parse_unit();
  unit.source_lines = split_lines(text);
  if (unit.root.span.start_line == 0) {
    unit.root.span = LineSpan{1, std::max<int>(1, static_cast<int>(unit.source_lines.size()))};
  }
  return unit;
}

}  // namespace astpat
