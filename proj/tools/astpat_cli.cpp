// astpat — statement-level AST diffing and change-pattern matching.
//
//   astpat diff  <old> <new>            print AST changes grouped by hunk
//   astpat match <old> <new>            match patterns against one revision
//   astpat mine  <source>               count pattern instances in a history
//
// Exit codes: 0 success (match: at least one instance), 1 no instances
// (match only), 2 parse/pattern/ingestion errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "astpat/diff.hpp"
#include "astpat/hunk.hpp"
#include "astpat/match.hpp"
#include "astpat/mine.hpp"
#include "astpat/pattern.hpp"
#include "astpat/syntax.hpp"

namespace {

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<astpat::PatternDefinition> load_patterns(const std::string& patterns_file) {
  if (patterns_file.empty()) return astpat::builtin_catalog();
  return astpat::parse_pattern_file(read_file_or_throw(patterns_file));
}

struct Revision {
  astpat::CompilationUnit old_unit;
  astpat::CompilationUnit new_unit;
  astpat::ChangeList changes;
  std::vector<astpat::LineHunk> line_hunks;
  std::vector<astpat::AstHunk> hunks;
};

Revision analyze_pair(const std::string& old_path, const std::string& new_path) {
  Revision rev;
  rev.old_unit = astpat::parse_source(read_file_or_throw(old_path), old_path);
  rev.new_unit = astpat::parse_source(read_file_or_throw(new_path), new_path);
  rev.changes = astpat::extract_changes(rev.old_unit, rev.new_unit);
  rev.line_hunks =
      astpat::line_diff(rev.old_unit.source_lines, rev.new_unit.source_lines);
  rev.hunks = astpat::group_ast_hunks(rev.changes, rev.line_hunks);
  return rev;
}

int cmd_diff(const std::string& old_path, const std::string& new_path,
             const std::string& format) {
  Revision rev = analyze_pair(old_path, new_path);
  if (rev.changes.changes.empty()) {
    std::cout << "no changes\n";
    return 0;
  }
  if (format == "json") {
    std::cout << astpat::hunks_to_json(rev.hunks) << "\n";
    return 0;
  }
  for (const astpat::AstHunk& hunk : rev.hunks) {
    std::cout << "hunk " << hunk.index;
    for (size_t i = 0; i < hunk.line_hunks.size(); ++i) {
      const astpat::LineHunk& lh = rev.line_hunks[hunk.line_hunks[i]];
      std::cout << (i == 0 ? ": " : ", ") << "old " << lh.old_start << ","
                << lh.old_len << " -> new " << lh.new_start << "," << lh.new_len;
    }
    std::cout << "\n";
    for (const astpat::SourceCodeChange& change : hunk.changes) {
      std::cout << "  " << astpat::render_change(change) << "\n";
    }
  }
  return 0;
}

int cmd_match(const std::string& old_path, const std::string& new_path,
              const std::string& patterns_file, const std::string& format) {
  std::vector<astpat::PatternDefinition> catalog = load_patterns(patterns_file);
  Revision rev = analyze_pair(old_path, new_path);
  std::vector<astpat::PatternInstance> instances =
      astpat::classify_revision(catalog, rev.hunks);
  if (format == "json") {
    std::cout << astpat::instances_to_json(instances) << "\n";
  } else if (instances.empty()) {
    std::cout << "no instances\n";
  } else {
    for (const astpat::PatternInstance& inst : instances) {
      std::cout << inst.pattern_id << ": hunk " << inst.hunk_index << ", changes";
      for (int position : inst.assignment.mapping) std::cout << " " << position;
      std::cout << "\n";
    }
  }
  return instances.empty() ? 1 : 0;
}

int cmd_mine(const std::string& source, const astpat::MineOptions& options,
             const std::string& patterns_file, const std::string& format) {
  std::vector<astpat::PatternDefinition> catalog = load_patterns(patterns_file);
  astpat::MiningReport report = astpat::mine(source, catalog, options);
  if (format == "json") {
    std::cout << astpat::render_report_json(report) << "\n";
  } else {
    std::cout << astpat::render_report_table(report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statement-level AST change-pattern detector"};
  app.require_subcommand(1);

  std::string old_path, new_path, source;
  std::string patterns_file;
  std::string format = "text";
  astpat::MineOptions options;
  std::string filter = "all";
  std::string backend = "auto";
  std::string mine_format = "table";

  CLI::App* diff = app.add_subcommand("diff", "print AST changes between two files");
  diff->add_option("old", old_path, "old revision of the file")->required();
  diff->add_option("new", new_path, "new revision of the file")->required();
  diff->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* match = app.add_subcommand("match", "match change patterns against two files");
  match->add_option("old", old_path, "old revision of the file")->required();
  match->add_option("new", new_path, "new revision of the file")->required();
  match->add_option("--patterns", patterns_file, "pattern definition file")
      ->envname("ASTPAT_PATTERNS");
  match->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* mine = app.add_subcommand("mine", "count pattern instances over a history");
  mine->add_option("source", source, "git work tree or corpus directory")->required();
  mine->add_option("--filter", filter, "all or bugfix")
      ->check(CLI::IsMember({"all", "bugfix"}));
  mine->add_option("--ext", options.extensions, "file extensions to analyze");
  mine->add_option("--workers", options.workers, "worker thread count")
      ->check(CLI::PositiveNumber);
  mine->add_option("--format", mine_format, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  mine->add_option("--patterns", patterns_file, "pattern definition file")
      ->envname("ASTPAT_PATTERNS");
  mine->add_option("--backend", backend, "auto, git or corpus")
      ->check(CLI::IsMember({"auto", "git", "corpus"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (diff->parsed()) return cmd_diff(old_path, new_path, format);
    if (match->parsed()) return cmd_match(old_path, new_path, patterns_file, format);
    options.filter = filter == "bugfix" ? astpat::CommitFilter::Bugfix
                                        : astpat::CommitFilter::All;
    options.backend = backend == "git"      ? astpat::SourceBackend::Git
                      : backend == "corpus" ? astpat::SourceBackend::Corpus
                                            : astpat::SourceBackend::Auto;
    return cmd_mine(source, options, patterns_file, mine_format);
  } catch (const astpat::ParseError& error) {
    std::cerr << "parse error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
}
