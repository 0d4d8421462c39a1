#include "astpat/mine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "astpat/hunk.hpp"

namespace fs = std::filesystem;

namespace astpat {

namespace {

// --------------------------------------------------------------------------
// Small process/file helpers
// --------------------------------------------------------------------------

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

struct CommandResult {
  int status = -1;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  result.status = pclose(pipe);
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusFormatError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool extension_matches(const std::string& path,
                       const std::vector<std::string>& extensions) {
  if (extensions.empty()) return true;
  for (const std::string& ext : extensions) {
    if (path.size() >= ext.size() &&
        path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
      return true;
    }
  }
  return false;
}

SourceBackend resolve_backend(const std::string& source, SourceBackend backend) {
  if (backend != SourceBackend::Auto) return backend;
  return fs::exists(fs::path(source) / ".git") ? SourceBackend::Git
                                               : SourceBackend::Corpus;
}

// --------------------------------------------------------------------------
// Corpus backend: <commit-id>/{message.txt, old/<path>, new/<path>}
// --------------------------------------------------------------------------

std::vector<Commit> ingest_corpus(const std::string& source) {
  fs::path root(source);
  if (!fs::is_directory(root)) {
    throw CorpusFormatError(source + " is not a directory");
  }
  std::vector<fs::path> commit_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] == '.') continue;
    commit_dirs.push_back(entry.path());
  }
  std::sort(commit_dirs.begin(), commit_dirs.end());

  std::vector<Commit> commits;
  for (const fs::path& dir : commit_dirs) {
    fs::path message_file = dir / "message.txt";
    if (!fs::exists(message_file)) {
      throw CorpusFormatError("missing message.txt in " + dir.string());
    }
    Commit commit;
    commit.id = dir.filename().string();
    commit.message = read_file(message_file);
    fs::path old_root = dir / "old";
    fs::path new_root = dir / "new";
    if (fs::is_directory(new_root) && fs::is_directory(old_root)) {
      std::vector<std::string> rel_paths;
      for (const auto& entry : fs::recursive_directory_iterator(new_root)) {
        if (!entry.is_regular_file()) continue;
        rel_paths.push_back(fs::relative(entry.path(), new_root).generic_string());
      }
      std::sort(rel_paths.begin(), rel_paths.end());
      for (const std::string& rel : rel_paths) {
        fs::path old_file = old_root / rel;
        if (!fs::is_regular_file(old_file)) continue;  // added file: no pair
        if (read_file(old_file) == read_file(new_root / rel)) continue;
        commit.changed_files.push_back(
            ChangedFile{rel, old_file.string(), (new_root / rel).string()});
      }
    }
    commits.push_back(std::move(commit));
  }
  return commits;
}

// --------------------------------------------------------------------------
// Git backend, via the git command-line tool
// --------------------------------------------------------------------------

std::string git_prefix(const std::string& source) {
  return "git -C " + shell_quote(source) + " ";
}

std::vector<std::string> split_lines_of(const std::string& text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t eol = text.find('\n', start);
    if (eol == std::string::npos) eol = text.size();
    lines.push_back(text.substr(start, eol - start));
    start = eol + 1;
  }
  return lines;
}

std::vector<Commit> ingest_git(const std::string& source) {
  CommandResult check = run_command(git_prefix(source) + "rev-parse --git-dir");
  if (check.status != 0) {
    throw RepositoryAccessError(source + " is not a git repository");
  }
  CommandResult head = run_command(git_prefix(source) + "rev-parse --verify HEAD");
  if (head.status != 0) return {};  // repository without commits

  CommandResult listing =
      run_command(git_prefix(source) + "rev-list --topo-order --reverse --parents HEAD");
  if (listing.status != 0) {
    throw RepositoryAccessError("rev-list failed for " + source);
  }

  std::vector<Commit> commits;
  for (const std::string& line : split_lines_of(listing.output)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    Commit commit;
    fields >> commit.id;
    std::string parent;
    if (fields >> parent) commit.parent_id = parent;  // first parent only

    CommandResult message =
        run_command(git_prefix(source) + "log --format=%B -n 1 " + shell_quote(commit.id));
    if (message.status != 0) {
      throw RepositoryAccessError("cannot read message of " + commit.id);
    }
    commit.message = message.output;

    if (commit.parent_id) {
      CommandResult difftree = run_command(
          git_prefix(source) + "diff-tree -r --no-renames --diff-filter=M " +
          shell_quote(*commit.parent_id) + " " + shell_quote(commit.id));
      if (difftree.status != 0) {
        throw RepositoryAccessError("diff-tree failed for " + commit.id);
      }
      for (const std::string& row : split_lines_of(difftree.output)) {
        // :100644 100644 <old blob> <new blob> M\t<path>
        if (row.empty() || row[0] != ':') continue;
        size_t tab = row.find('\t');
        if (tab == std::string::npos) continue;
        std::istringstream meta(row.substr(1, tab - 1));
        std::string old_mode, new_mode, old_blob, new_blob, status;
        meta >> old_mode >> new_mode >> old_blob >> new_blob >> status;
        if (status != "M") continue;
        commit.changed_files.push_back(
            ChangedFile{row.substr(tab + 1), old_blob, new_blob});
      }
    }
    commits.push_back(std::move(commit));
  }
  return commits;
}

std::string git_blob(const std::string& source, const std::string& ref) {
  CommandResult blob = run_command(git_prefix(source) + "cat-file blob " + shell_quote(ref));
  if (blob.status != 0) {
    throw RepositoryAccessError("cat-file failed for blob " + ref);
  }
  return blob.output;
}

}  // namespace

std::vector<Commit> ingest_history(const std::string& source, SourceBackend backend) {
  switch (resolve_backend(source, backend)) {
    case SourceBackend::Git:
      return ingest_git(source);
    default:
      return ingest_corpus(source);
  }
}

std::vector<RevisionPair> load_revision_pairs(
    const std::string& source, SourceBackend backend, const Commit& commit,
    const std::vector<std::string>& extensions) {
  SourceBackend resolved = resolve_backend(source, backend);
  std::vector<RevisionPair> pairs;
  for (const ChangedFile& file : commit.changed_files) {
    if (!extension_matches(file.path, extensions)) continue;
    RevisionPair pair;
    pair.commit_id = commit.id;
    pair.path = file.path;
    if (resolved == SourceBackend::Git) {
      pair.old_text = git_blob(source, file.old_ref);
      pair.new_text = git_blob(source, file.new_ref);
    } else {
      pair.old_text = read_file(file.old_ref);
      pair.new_text = read_file(file.new_ref);
    }
    if (pair.old_text == pair.new_text) continue;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

bool filter_bugfix(const Commit& commit) {
  std::string lower = commit.message;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.find("bug") != std::string::npos ||
         lower.find("fix") != std::string::npos ||
         lower.find("patch") != std::string::npos;
}

namespace {

struct PairOutcome {
  bool skipped = false;
  std::vector<long> counts;  // per catalog index
};

PairOutcome process_pair(const RevisionPair& pair,
                         const std::vector<PatternDefinition>& catalog) {
  PairOutcome outcome;
  outcome.counts.assign(catalog.size(), 0);
  CompilationUnit old_unit, new_unit;
  try {
    old_unit = parse_source(pair.old_text, pair.path);
    new_unit = parse_source(pair.new_text, pair.path);
  } catch (const ParseError&) {
    outcome.skipped = true;
    return outcome;
  }
  ChangeList changes = extract_changes(old_unit, new_unit);
  std::vector<LineHunk> hunks =
      line_diff(old_unit.source_lines, new_unit.source_lines);
  std::vector<AstHunk> groups = group_ast_hunks(changes, hunks);
  std::vector<PatternInstance> instances = classify_revision(catalog, groups);
  for (const PatternInstance& inst : instances) {
    for (size_t i = 0; i < catalog.size(); ++i) {
      if (catalog[i].id == inst.pattern_id) {
        ++outcome.counts[i];
        break;
      }
    }
  }
  return outcome;
}

}  // namespace

MiningReport mine(const std::string& source,
                  const std::vector<PatternDefinition>& catalog,
                  const MineOptions& options) {
  MiningReport report;
  for (const PatternDefinition& def : catalog) {
    report.counts.push_back(PatternCount{def.id, def.name, 0});
  }

  std::vector<Commit> commits = ingest_history(source, options.backend);
  report.commits_total = static_cast<long>(commits.size());

  std::vector<RevisionPair> work;
  for (const Commit& commit : commits) {
    std::vector<RevisionPair> pairs =
        load_revision_pairs(source, options.backend, commit, options.extensions);
    report.revisions_total += static_cast<long>(pairs.size());
    bool analyzed =
        options.filter == CommitFilter::All || filter_bugfix(commit);
    if (!analyzed) continue;
    ++report.commits_analyzed;
    for (RevisionPair& pair : pairs) work.push_back(std::move(pair));
  }

  size_t workers = static_cast<size_t>(std::max(1, options.workers));
  workers = std::min(workers, std::max<size_t>(work.size(), 1));
  std::vector<PairOutcome> outcomes(work.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&]() {
    for (;;) {
      size_t index = next.fetch_add(1);
      if (index >= work.size()) return;
      try {
        outcomes[index] = process_pair(work[index], catalog);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t i = 0; i < workers; ++i) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Sequential merge keeps the report identical for any worker count.
  for (const PairOutcome& outcome : outcomes) {
    if (outcome.skipped) {
      ++report.revisions_skipped;
      continue;
    }
    ++report.revisions_analyzed;
    for (size_t i = 0; i < report.counts.size(); ++i) {
      report.counts[i].count += outcome.counts[i];
      report.total += outcome.counts[i];
    }
  }
  return report;
}

namespace {

std::vector<PatternCount> table_order(const MiningReport& report) {
  std::vector<PatternCount> rows = report.counts;
  std::sort(rows.begin(), rows.end(), [](const PatternCount& a, const PatternCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.id < b.id;
  });
  return rows;
}

}  // namespace

std::string render_report_table(const MiningReport& report) {
  std::vector<PatternCount> rows = table_order(report);
  size_t name_width = std::string("Pattern").size();
  size_t code_width = std::string("Code").size();
  size_t count_width = std::string("Count").size();
  for (const PatternCount& row : rows) {
    name_width = std::max(name_width, row.name.size());
    code_width = std::max(code_width, row.id.size());
    count_width = std::max(count_width, std::to_string(row.count).size());
  }
  count_width = std::max(count_width, std::to_string(report.total).size());

  std::ostringstream out;
  auto line = [&](const std::string& name, const std::string& code,
                  const std::string& count) {
    out << name << std::string(name_width - name.size() + 2, ' ');
    out << code << std::string(code_width - code.size() + 2, ' ');
    out << std::string(count_width - count.size(), ' ') << count << "\n";
  };
  line("Pattern", "Code", "Count");
  line(std::string(name_width, '-'), std::string(code_width, '-'),
       std::string(count_width, '-'));
  for (const PatternCount& row : rows) {
    line(row.name, row.id, std::to_string(row.count));
  }
  line("Total", "", std::to_string(report.total));
  out << "\n";
  out << "Commits: " << report.commits_total << " total, " << report.commits_analyzed
      << " analyzed\n";
  out << "Revisions: " << report.revisions_total << " total, "
      << report.revisions_analyzed << " analyzed, " << report.revisions_skipped
      << " skipped\n";
  return out.str();
}

std::string render_report_json(const MiningReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json patterns = nlohmann::ordered_json::array();
  for (const PatternCount& row : table_order(report)) {
    patterns.push_back({{"id", row.id}, {"name", row.name}, {"count", row.count}});
  }
  doc["patterns"] = std::move(patterns);
  doc["total"] = report.total;
  doc["commits"] = {{"total", report.commits_total},
                    {"analyzed", report.commits_analyzed}};
  doc["revisions"] = {{"total", report.revisions_total},
                      {"analyzed", report.revisions_analyzed},
                      {"skipped", report.revisions_skipped}};
  return doc.dump(2);
}

}  // namespace astpat
