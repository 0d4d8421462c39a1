#ifndef ASTPAT_MINE_HPP
#define ASTPAT_MINE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "astpat/match.hpp"
#include "astpat/pattern.hpp"

namespace astpat {

struct ChangedFile {
  std::string path;
  std::string old_ref;  // backend-specific handle for the parent's content
  std::string new_ref;  // backend-specific handle for the commit's content
};

struct Commit {
  std::string id;
  std::string message;
  std::optional<std::string> parent_id;     // first parent
  std::vector<ChangedFile> changed_files;   // modified files only
};

// One file's two revisions across a commit and its first parent.
struct RevisionPair {
  std::string commit_id;
  std::string path;
  std::string old_text;
  std::string new_text;
};

enum class CommitFilter { All, Bugfix };

enum class SourceBackend {
  Auto,    // Git when <source>/.git exists, otherwise Corpus
  Git,     // a git work tree; read via the git command-line tool
  Corpus,  // directory of <commit-id>/{message.txt, old/<path>, new/<path>}
};

class RepositoryAccessError : public std::runtime_error {
 public:
  explicit RepositoryAccessError(const std::string& what)
      : std::runtime_error(what) {}
};

class CorpusFormatError : public std::runtime_error {
 public:
  explicit CorpusFormatError(const std::string& what)
      : std::runtime_error(what) {}
};

// Enumerates the history of `source` in topological (oldest-first) order.
// Merge commits are paired with their first parent only.
std::vector<Commit> ingest_history(const std::string& source,
                                   SourceBackend backend = SourceBackend::Auto);

// Loads the modified-file pairs of one commit whose path matches one of
// the extensions (empty list = all paths). Pairs with identical contents
// are dropped.
std::vector<RevisionPair> load_revision_pairs(
    const std::string& source, SourceBackend backend, const Commit& commit,
    const std::vector<std::string>& extensions);

// True iff the message contains "bug", "fix" or "patch", case-insensitively.
bool filter_bugfix(const Commit& commit);

struct MineOptions {
  CommitFilter filter = CommitFilter::All;
  std::vector<std::string> extensions{".java"};
  int workers = 1;
  SourceBackend backend = SourceBackend::Auto;
};

struct PatternCount {
  std::string id;
  std::string name;
  long count = 0;

  friend bool operator==(const PatternCount&, const PatternCount&) = default;
};

struct MiningReport {
  std::vector<PatternCount> counts;  // catalog order
  long total = 0;                    // sum of counts
  long commits_total = 0;            // commits in the history
  long commits_analyzed = 0;         // commits surviving the message filter
  long revisions_total = 0;          // modified file pairs over all commits
  long revisions_analyzed = 0;       // pairs processed end to end
  long revisions_skipped = 0;        // pairs dropped (outside the grammar)

  friend bool operator==(const MiningReport&, const MiningReport&) = default;
};

// Runs the full pipeline over every surviving revision pair and aggregates
// instance counts per pattern. Deterministic: the report is identical for
// any worker count.
MiningReport mine(const std::string& source,
                  const std::vector<PatternDefinition>& catalog,
                  const MineOptions& options = {});

// Aligned-column table: one row per pattern (descending count, ties by id)
// and a Total row, plus the processing tallies.
std::string render_report_table(const MiningReport& report);

std::string render_report_json(const MiningReport& report);

}  // namespace astpat

#endif  // ASTPAT_MINE_HPP
