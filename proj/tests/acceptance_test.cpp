// Acceptance gates for the change-pattern detector. Each test pins one
// user-visible guarantee of the finished tool; a custom listener prints a
// single verdict line per gate so a run reads as a checklist.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "astpat/diff.hpp"
#include "astpat/hunk.hpp"
#include "astpat/match.hpp"
#include "astpat/mine.hpp"
#include "astpat/pattern.hpp"
#include "astpat/syntax.hpp"
#include "support/corpus_util.hpp"
#include "support/generator.hpp"
#include "support/oracles.hpp"

namespace astpat {
namespace {

using testsupport::exhaustive_classify;
using testsupport::GenClass;
using testsupport::GenConfig;
using testsupport::generate_class;
using testsupport::mutate_class;
using testsupport::render;
using testsupport::replay_changes;
using testsupport::Rng;
using testsupport::run_cli;
using testsupport::scramble_formatting;
using testsupport::TempDir;
using testsupport::write_corpus_commit;

const std::string kMiniCorpus = std::string(ASTPAT_TEST_DATA_DIR) + "/mini_corpus";

// ---------------------------------------------------------------------------
// Fixture pairs. Every pattern in the catalog appears below once as the
// intended hit and once as a near miss that must stay silent.
// ---------------------------------------------------------------------------

// Both hunks of the guard scenario in one file: find() wraps an existing
// return into a new if (a move, not a precondition), while run() gains a
// genuine null check that jumps out.
const char kServiceOld[] =
    "class Service {\n"
    "  int find(int a) {\n"
    "    compute(a);\n"
    "    return a;\n"
    "  }\n"
    "  void run(Object p) {\n"
    "    use(p);\n"
    "  }\n"
    "}\n";
const char kServiceNew[] =
    "class Service {\n"
    "  int find(int a) {\n"
    "    compute(a);\n"
    "    if (a > 0) {\n"
    "      return a;\n"
    "    }\n"
    "  }\n"
    "  void run(Object p) {\n"
    "    log.info(\"starting\");\n"
    "    if (p == null) {\n"
    "      return;\n"
    "    }\n"
    "    use(p);\n"
    "  }\n"
    "}\n";

// Dropping an else branch while the if survives: exactly two changes.
const char kElseDropOld[] =
    "class F {\n"
    "  int check(int a) {\n"
    "    if (a > 0) {\n"
    "      handle(a);\n"
    "    } else {\n"
    "      log.warn(a);\n"
    "    }\n"
    "    return a;\n"
    "  }\n"
    "}\n";
const char kElseDropNew[] =
    "class F {\n"
    "  int check(int a) {\n"
    "    if (a > 0) {\n"
    "      handle(a);\n"
    "    }\n"
    "    return a;\n"
    "  }\n"
    "}\n";

const char kCondIfOld[] =
    "class Sample {\n"
    "  int clamp(int v, int limit) {\n"
    "    if (v > limit) {\n"
    "      v = limit;\n"
    "    }\n"
    "    return v;\n"
    "  }\n"
    "}\n";
const char kCondIfNew[] =
    "class Sample {\n"
    "  int clamp(int v, int limit) {\n"
    "    if (v >= limit) {\n"
    "      v = limit;\n"
    "    }\n"
    "    return v;\n"
    "  }\n"
    "}\n";

const char kCondLoopOld[] =
    "class Sample {\n"
    "  void sweep(int n) {\n"
    "    while (i < n) {\n"
    "      visit(i);\n"
    "      i = i + 1;\n"
    "    }\n"
    "  }\n"
    "}\n";
const char kCondLoopNew[] =
    "class Sample {\n"
    "  void sweep(int n) {\n"
    "    while (i <= n) {\n"
    "      visit(i);\n"
    "      i = i + 1;\n"
    "    }\n"
    "  }\n"
    "}\n";

const char kMethodsOne[] =
    "class Sample {\n"
    "  void tick() {\n"
    "    count = count + 1;\n"
    "  }\n"
    "}\n";
const char kMethodsTwo[] =
    "class Sample {\n"
    "  void tick() {\n"
    "    count = count + 1;\n"
    "  }\n"
    "  void reset() {\n"
    "    count = 0;\n"
    "  }\n"
    "}\n";

const char kFieldsOne[] =
    "class Sample {\n"
    "  int count = 0;\n"
    "  void fail(int code) {\n"
    "    report(code);\n"
    "  }\n"
    "}\n";
const char kFieldsTwo[] =
    "class Sample {\n"
    "  int count = 0;\n"
    "  int lastError = 0;\n"
    "  void fail(int code) {\n"
    "    report(code);\n"
    "  }\n"
    "}\n";

const char kElseAbsent[] =
    "class Sample {\n"
    "  void route(int mode) {\n"
    "    if (mode > 0) {\n"
    "      fast(mode);\n"
    "    }\n"
    "  }\n"
    "}\n";
const char kElsePresent[] =
    "class Sample {\n"
    "  void route(int mode) {\n"
    "    if (mode > 0) {\n"
    "      fast(mode);\n"
    "    } else {\n"
    "      slow(mode);\n"
    "    }\n"
    "  }\n"
    "}\n";

const char kSignatureOld[] =
    "class Sample {\n"
    "  int lookup(int key) {\n"
    "    return table.get(key);\n"
    "  }\n"
    "}\n";
const char kSignatureNew[] =
    "class Sample {\n"
    "  int lookup(int key, int fallback) {\n"
    "    return table.get(key);\n"
    "  }\n"
    "}\n";

const char kGuardOld[] =
    "class Handler {\n"
    "  void handle(Object req) {\n"
    "    dispatch(req);\n"
    "  }\n"
    "}\n";
const char kGuardNew[] =
    "class Handler {\n"
    "  void handle(Object req) {\n"
    "    if (req == null) {\n"
    "      return;\n"
    "    }\n"
    "    dispatch(req);\n"
    "  }\n"
    "}\n";

// Fresh check around fresh, non-jumping work.
const char kCheckOld[] =
    "class Sample {\n"
    "  void step(int mode) {\n"
    "    advance(mode);\n"
    "  }\n"
    "}\n";
const char kCheckNew[] =
    "class Sample {\n"
    "  void step(int mode) {\n"
    "    if (mode > 0) {\n"
    "      hits = hits + 1;\n"
    "    }\n"
    "    advance(mode);\n"
    "  }\n"
    "}\n";

// The return already existed; the new if merely re-parents it.
const char kWrapOld[] =
    "class Service {\n"
    "  int find(int a) {\n"
    "    compute(a);\n"
    "    return a;\n"
    "  }\n"
    "}\n";
const char kWrapNew[] =
    "class Service {\n"
    "  int find(int a) {\n"
    "    compute(a);\n"
    "    if (a > 0) {\n"
    "      return a;\n"
    "    }\n"
    "  }\n"
    "}\n";

const char kCaseOne[] =
    "class Sample {\n"
    "  void route(int k) {\n"
    "    switch (k) {\n"
    "      case 1:\n"
    "        one(k);\n"
    "    }\n"
    "  }\n"
    "}\n";
const char kCaseTwo[] =
    "class Sample {\n"
    "  void route(int k) {\n"
    "    switch (k) {\n"
    "      case 1:\n"
    "        one(k);\n"
    "      case 2:\n"
    "        two(k);\n"
    "    }\n"
    "  }\n"
    "}\n";

const char kSwitchAbsent[] =
    "class Sample {\n"
    "  void route(int k) {\n"
    "    done(k);\n"
    "  }\n"
    "}\n";
const char kSwitchPresent[] =
    "class Sample {\n"
    "  void route(int k) {\n"
    "    switch (k) {\n"
    "      case 1:\n"
    "        one(k);\n"
    "    }\n"
    "    done(k);\n"
    "  }\n"
    "}\n";

const char kCatchOne[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    try {\n"
    "      parse(text);\n"
    "    } catch (IOError e) {\n"
    "      log.warn(e);\n"
    "    }\n"
    "  }\n"
    "}\n";
const char kCatchTwo[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    try {\n"
    "      parse(text);\n"
    "    } catch (IOError e) {\n"
    "      log.warn(e);\n"
    "    } catch (Error e) {\n"
    "      log.fail(e);\n"
    "    }\n"
    "  }\n"
    "}\n";

const char kTryAbsent[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    parse(text);\n"
    "    apply(text);\n"
    "  }\n"
    "}\n";
const char kTryPresent[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    try {\n"
    "      parse(text);\n"
    "      apply(text);\n"
    "    } catch (Error e) {\n"
    "      log.warn(e);\n"
    "    }\n"
    "  }\n"
    "}\n";

// A try removed wholesale, body and handler included.
const char kTryBlockOld[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    try {\n"
    "      parse(text);\n"
    "    } catch (Error e) {\n"
    "      log.warn(e);\n"
    "    }\n"
    "    finish(text);\n"
    "  }\n"
    "}\n";
const char kTryBlockNew[] =
    "class Sample {\n"
    "  void load(String text) {\n"
    "    finish(text);\n"
    "  }\n"
    "}\n";

const char kIfElseAbsent[] =
    "class Sample {\n"
    "  void route(int mode) {\n"
    "    done(mode);\n"
    "  }\n"
    "}\n";
const char kIfElsePresent[] =
    "class Sample {\n"
    "  void route(int mode) {\n"
    "    if (mode > 0) {\n"
    "      fast(mode);\n"
    "    } else {\n"
    "      slow(mode);\n"
    "    }\n"
    "    done(mode);\n"
    "  }\n"
    "}\n";

const char kIfBlockOld[] =
    "class Sample {\n"
    "  void m(int a) {\n"
    "    if (a > 0) {\n"
    "      log.warn(a);\n"
    "    }\n"
    "    run(a);\n"
    "  }\n"
    "}\n";
const char kIfBlockNew[] =
    "class Sample {\n"
    "  void m(int a) {\n"
    "    run(a);\n"
    "  }\n"
    "}\n";

struct PatternFixture {
  const char* id;
  const char* hit_old;
  const char* hit_new;
  const char* miss_old;
  const char* miss_new;
};

// One firing pair and one near-miss pair per catalog pattern.
const PatternFixture kPatternFixtures[] = {
    {"IF-CC", kCondIfOld, kCondIfNew, kCondLoopOld, kCondLoopNew},
    {"MD-ADD", kMethodsOne, kMethodsTwo, kMethodsTwo, kMethodsOne},
    {"CF-ADD", kFieldsOne, kFieldsTwo, kFieldsTwo, kFieldsOne},
    {"IF-ABR", kElseAbsent, kElsePresent, kIfElseAbsent, kIfElsePresent},
    {"MD-CHG", kSignatureOld, kSignatureNew, kCondIfOld, kCondIfNew},
    {"MD-RMV", kMethodsTwo, kMethodsOne, kMethodsOne, kMethodsTwo},
    {"CF-RMV", kFieldsTwo, kFieldsOne, kFieldsOne, kFieldsTwo},
    {"IF-APCJ", kGuardOld, kGuardNew, kWrapOld, kWrapNew},
    {"TY-ARCB-add", kCatchOne, kCatchTwo, kTryAbsent, kTryPresent},
    {"IF-APC", kCheckOld, kCheckNew, kGuardOld, kGuardNew},
    {"SW-ARSB-add", kCaseOne, kCaseTwo, kSwitchAbsent, kSwitchPresent},
    {"TY-ARCB-rm", kCatchTwo, kCatchOne, kTryBlockOld, kTryBlockNew},
    {"IF-RMV", kIfBlockOld, kIfBlockNew, kElsePresent, kElseAbsent},
    {"LP-CC", kCondLoopOld, kCondLoopNew, kCondIfOld, kCondIfNew},
    {"IF-RBR", kElsePresent, kElseAbsent, kIfElsePresent, kIfElseAbsent},
    {"SW-ARSB-rm", kCaseTwo, kCaseOne, kSwitchPresent, kSwitchAbsent},
    {"TY-ARTC-rm", kTryBlockOld, kTryBlockNew, kCatchTwo, kCatchOne},
    {"TY-ARTC-add", kTryAbsent, kTryPresent, kCatchOne, kCatchTwo},
};

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

struct Revision {
  CompilationUnit old_unit;
  CompilationUnit new_unit;
  ChangeList changes;
  std::vector<LineHunk> line_hunks;
  std::vector<AstHunk> hunks;
};

Revision analyze(const std::string& old_text, const std::string& new_text) {
  Revision r;
  r.old_unit = parse_source(old_text, "Sample.java");
  r.new_unit = parse_source(new_text, "Sample.java");
  r.changes = extract_changes(r.old_unit, r.new_unit);
  r.line_hunks = line_diff(r.old_unit.source_lines, r.new_unit.source_lines);
  r.hunks = group_ast_hunks(r.changes, r.line_hunks);
  return r;
}

std::vector<std::string> fired_patterns(const std::string& old_text,
                                        const std::string& new_text) {
  Revision r = analyze(old_text, new_text);
  std::vector<std::string> ids;
  for (const PatternInstance& instance :
       classify_revision(builtin_catalog(), r.hunks)) {
    ids.push_back(instance.pattern_id);
  }
  return ids;
}

const PatternDefinition& find_pattern(const std::string& id) {
  for (const PatternDefinition& def : builtin_catalog()) {
    if (def.id == id) return def;
  }
  ADD_FAILURE() << "pattern " << id << " missing from the catalog";
  static const PatternDefinition empty{};
  return empty;
}

// Randomized hunks and patterns for the matcher-equivalence gate, kept in
// sync with the unit-level property tests.

SourceCodeChange change(ChangeType ct, EntityKind et, EntityKind pt, int node_id,
                        int parent_id) {
  SourceCodeChange c;
  c.ct = ct;
  c.et = et;
  c.pt = pt;
  c.node_id = node_id;
  c.parent_id = parent_id;
  return c;
}

ChangeType random_change_type(Rng& rng) {
  return static_cast<ChangeType>(rng.range(0, kChangeTypeCount - 1));
}

EntityKind random_entity_kind(Rng& rng) {
  static const std::vector<EntityKind> pool{
      EntityKind::If,         EntityKind::While,
      EntityKind::MethodDeclaration,
      EntityKind::Assignment, EntityKind::ReturnStatement,
      EntityKind::Else,       EntityKind::MethodInvocation,
      EntityKind::Try,        EntityKind::SwitchCase};
  return rng.pick(pool);
}

KindSpec random_kind_spec(Rng& rng) {
  int roll = rng.range(0, 9);
  if (roll < 4) return KindSpec::wildcard();
  if (roll < 8) return KindSpec::of(random_entity_kind(rng));
  return KindSpec::one_of({random_entity_kind(rng), random_entity_kind(rng)});
}

AstHunk random_hunk(Rng& rng, int max_changes) {
  AstHunk hunk;
  hunk.path = "synthetic.java";
  int n = rng.range(1, max_changes);
  for (int i = 0; i < n; ++i) {
    int node_id = 100 + i;
    int parent_id;
    int roll = rng.range(0, 9);
    if (roll < 4 && i > 0) {
      parent_id = 100 + rng.range(0, i - 1);
    } else if (roll < 7) {
      parent_id = 7;
    } else {
      parent_id = 50 + i;
    }
    hunk.changes.push_back(change(random_change_type(rng), random_entity_kind(rng),
                                  random_entity_kind(rng), node_id, parent_id));
  }
  return hunk;
}

PatternDefinition random_pattern(Rng& rng, int max_micro, const AstHunk* bias) {
  PatternDefinition def;
  def.id = "RND";
  def.name = "Randomized";
  int n = rng.range(1, max_micro);
  if (bias != nullptr && rng.chance(0.5)) {
    n = std::min(n, static_cast<int>(bias->changes.size()));
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      int remaining = static_cast<int>(bias->changes.size()) - (n - i);
      pos = rng.range(pos, remaining);
      const SourceCodeChange& c = bias->changes[static_cast<size_t>(pos)];
      MicroPattern mp{c.ct, KindSpec::of(c.et), KindSpec::of(c.pt)};
      if (rng.chance(0.3)) mp.et = KindSpec::wildcard();
      if (rng.chance(0.3)) mp.pt = KindSpec::wildcard();
      def.micro.push_back(std::move(mp));
      ++pos;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      def.micro.push_back(MicroPattern{random_change_type(rng), random_kind_spec(rng),
                                       random_kind_spec(rng)});
    }
  }
  n = static_cast<int>(def.micro.size());
  if (n >= 2 && rng.chance(0.5)) {
    int a = rng.range(0, n - 1);
    int b = rng.range(0, n - 1);
    if (a != b) {
      def.relations.push_back(RelationConstraint{
          rng.chance(0.5) ? RelationConstraint::Kind::ParentOf
                          : RelationConstraint::Kind::SameParent,
          a, b});
    }
  }
  int undesired = rng.range(0, 2);
  for (int u = 0; u < undesired; ++u) {
    UndesiredChange entry;
    entry.what = MicroPattern{random_change_type(rng), random_kind_spec(rng),
                              random_kind_spec(rng)};
    int scope = rng.range(0, 2);
    if (scope == 0) {
      entry.scope = UndesiredChange::Scope::Anywhere;
    } else {
      entry.scope = scope == 1 ? UndesiredChange::Scope::ParentOfMatch
                               : UndesiredChange::Scope::ChildOfMatch;
      entry.anchor = rng.range(0, n - 1);
    }
    def.undesired.push_back(std::move(entry));
  }
  return def;
}

// ---------------------------------------------------------------------------
// Gate 1: the precondition-with-jump pattern separates a wrapped return
// from a freshly inserted guard, and the whole decision is fast.
// ---------------------------------------------------------------------------

TEST(Acceptance, PreconditionPatternTellsFreshGuardsFromWrappedReturns) {
  auto start = std::chrono::steady_clock::now();

  Revision r = analyze(kServiceOld, kServiceNew);
  ASSERT_EQ(r.hunks.size(), 2u);
  const PatternDefinition& apcj = find_pattern("IF-APCJ");

  // Hunk 0 wraps an existing return: the move is no insertion.
  EXPECT_FALSE(classify_hunk(apcj, r.hunks[0]).has_value());

  // Hunk 1 inserts a fresh guard; the mapping skips the unrelated logging
  // call in front of it.
  std::optional<PatternInstance> hit = classify_hunk(apcj, r.hunks[1]);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->assignment.mapping, (std::vector<int>{1, 2}));

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  EXPECT_LT(elapsed.count(), 1000) << "took " << elapsed.count() << " ms";
}

// ---------------------------------------------------------------------------
// Gate 2: dropping an else branch diffs to exactly two changes in one
// hunk, classified as an else-branch removal and nothing jump-related.
// ---------------------------------------------------------------------------

TEST(Acceptance, ElseRemovalYieldsTwoChangesInOneHunk) {
  Revision r = analyze(kElseDropOld, kElseDropNew);
  EXPECT_EQ(r.changes.changes.size(), 2u);
  EXPECT_EQ(r.hunks.size(), 1u);

  std::vector<PatternInstance> instances =
      classify_revision(builtin_catalog(), r.hunks);
  bool saw_else_removal = false;
  for (const PatternInstance& instance : instances) {
    if (instance.pattern_id == "IF-RBR") saw_else_removal = true;
    EXPECT_NE(instance.pattern_id, "IF-APCJ");
  }
  EXPECT_TRUE(saw_else_removal);
}

// ---------------------------------------------------------------------------
// Gate 3: identical sources produce no changes, and formatting-only edits
// (whitespace, comments, line breaks) produce no changes and no hunks.
// ---------------------------------------------------------------------------

TEST(Acceptance, IdenticalAndReformattedSourcesProduceNoChanges) {
  int programs = 0;
  for (uint32_t seed = 1000; seed < 1220; ++seed) {
    Rng rng(seed);
    GenClass model = generate_class(rng);
    std::string text = render(model);
    CompilationUnit a = parse_source(text, "gen.java");
    CompilationUnit b = parse_source(text, "gen.java");
    ASSERT_TRUE(extract_changes(a, a).changes.empty()) << "seed " << seed;
    ASSERT_TRUE(extract_changes(a, b).changes.empty()) << "seed " << seed;

    CompilationUnit scrambled =
        parse_source(scramble_formatting(text, rng), "gen.java");
    ChangeList changes = extract_changes(a, scrambled);
    ASSERT_TRUE(changes.changes.empty()) << "seed " << seed;
    std::vector<AstHunk> hunks = group_ast_hunks(
        changes, line_diff(a.source_lines, scrambled.source_lines));
    ASSERT_TRUE(hunks.empty()) << "seed " << seed;
    ++programs;
  }
  EXPECT_GE(programs, 200);
}

// ---------------------------------------------------------------------------
// Gate 4: grouping never produces more AST hunks than there are line hunks.
// ---------------------------------------------------------------------------

TEST(Acceptance, AstHunksNeverOutnumberLineHunks) {
  int usable = 0;
  for (uint32_t seed = 2000; seed < 2260; ++seed) {
    Rng rng(seed);
    GenClass model = generate_class(rng);
    std::string old_text = render(model);
    GenClass edited = model;
    mutate_class(edited, rng, rng.range(1, 4));
    std::string new_text = render(edited);
    if (new_text == old_text) continue;
    ++usable;

    Revision r = analyze(old_text, new_text);
    ASSERT_LE(r.hunks.size(), r.line_hunks.size()) << "seed " << seed;
  }
  EXPECT_GE(usable, 200);
}

// ---------------------------------------------------------------------------
// Gate 5: replaying an extracted change list onto the old tree rebuilds
// the new tree, on every fixture and on generated pairs.
// ---------------------------------------------------------------------------

TEST(Acceptance, ReplayingChangeListsRebuildsTheNewTree) {
  for (const PatternFixture& fixture : kPatternFixtures) {
    EXPECT_EQ(replay_changes(analyze(fixture.hit_old, fixture.hit_new).changes),
              "")
        << fixture.id << " hit pair";
    EXPECT_EQ(
        replay_changes(analyze(fixture.miss_old, fixture.miss_new).changes), "")
        << fixture.id << " miss pair";
  }

  for (const Commit& commit : ingest_history(kMiniCorpus, SourceBackend::Corpus)) {
    for (const RevisionPair& pair : load_revision_pairs(
             kMiniCorpus, SourceBackend::Corpus, commit, {".java"})) {
      EXPECT_EQ(replay_changes(analyze(pair.old_text, pair.new_text).changes), "")
          << commit.id;
    }
  }

  int usable = 0;
  for (uint32_t seed = 3000; seed < 3260; ++seed) {
    Rng rng(seed);
    GenClass model = generate_class(rng);
    std::string old_text = render(model);
    GenClass edited = model;
    mutate_class(edited, rng, rng.range(1, 4));
    std::string new_text = render(edited);
    if (new_text == old_text) continue;
    ++usable;
    ASSERT_EQ(replay_changes(analyze(old_text, new_text).changes), "")
        << "seed " << seed;
  }
  EXPECT_GE(usable, 200);
}

// ---------------------------------------------------------------------------
// Gate 6: the backtracking matcher agrees with the exhaustive all-mappings
// search, widening a kind never loses a match, and extra undesired entries
// never add one.
// ---------------------------------------------------------------------------

TEST(Acceptance, BacktrackingMatcherAgreesWithExhaustiveSearch) {
  Rng rng(6001);
  int matched = 0;
  int widened = 0;
  int tightened = 0;
  for (int round = 0; round < 1200; ++round) {
    AstHunk hunk = random_hunk(rng, 8);
    PatternDefinition def = random_pattern(rng, 3, &hunk);

    std::optional<PatternInstance> fast = classify_hunk(def, hunk);
    std::optional<MatchAssignment> slow = exhaustive_classify(def, hunk);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "round " << round;
    if (fast) {
      ASSERT_EQ(fast->assignment.mapping, slow->mapping) << "round " << round;
      ++matched;
    }

    // Widening: drop relations and undesired entries, then wildcard one
    // field of a matching pattern; the match must survive.
    PatternDefinition plain = def;
    plain.relations.clear();
    plain.undesired.clear();
    if (classify_hunk(plain, hunk).has_value()) {
      PatternDefinition wider = plain;
      int at = rng.range(0, static_cast<int>(plain.micro.size()) - 1);
      if (rng.chance(0.5)) {
        wider.micro[static_cast<size_t>(at)].et = KindSpec::wildcard();
      } else {
        wider.micro[static_cast<size_t>(at)].pt = KindSpec::wildcard();
      }
      ASSERT_TRUE(classify_hunk(wider, hunk).has_value()) << "round " << round;
      ++widened;
    }

    // Tightening: one more undesired entry can only remove matches.
    PatternDefinition stricter = def;
    UndesiredChange extra;
    extra.what = MicroPattern{random_change_type(rng), random_kind_spec(rng),
                              random_kind_spec(rng)};
    stricter.undesired.push_back(extra);
    bool strict_hit = classify_hunk(stricter, hunk).has_value();
    ASSERT_LE(strict_hit, fast.has_value()) << "round " << round;
    if (fast.has_value() && !strict_hit) ++tightened;
  }
  EXPECT_GT(matched, 50);
  EXPECT_GT(widened, 50);
  EXPECT_GT(tightened, 10);
}

// ---------------------------------------------------------------------------
// Gate 7: the shipped twelve-pair corpus yields exactly its labeled counts,
// and the CLI report is byte-identical across worker counts.
// ---------------------------------------------------------------------------

TEST(Acceptance, MiniCorpusYieldsTheLabeledCounts) {
  const std::map<std::string, long> expected = {
      {"IF-CC", 1},       {"MD-ADD", 1},      {"CF-ADD", 1},
      {"IF-ABR", 1},      {"MD-CHG", 1},      {"MD-RMV", 1},
      {"CF-RMV", 1},      {"IF-APCJ", 1},     {"TY-ARCB-add", 0},
      {"IF-APC", 1},      {"SW-ARSB-add", 0}, {"TY-ARCB-rm", 0},
      {"IF-RMV", 0},      {"LP-CC", 1},       {"IF-RBR", 1},
      {"SW-ARSB-rm", 0},  {"TY-ARTC-rm", 0},  {"TY-ARTC-add", 1},
  };

  MineOptions options;
  options.backend = SourceBackend::Corpus;
  MiningReport report = mine(kMiniCorpus, builtin_catalog(), options);
  ASSERT_EQ(report.counts.size(), expected.size());
  for (const PatternCount& row : report.counts) {
    auto it = expected.find(row.id);
    ASSERT_NE(it, expected.end()) << row.id;
    EXPECT_EQ(row.count, it->second) << row.id;
  }
  EXPECT_EQ(report.total, 12);

  testsupport::ProcessResult serial =
      run_cli("mine '" + kMiniCorpus + "' --backend corpus --workers 1");
  testsupport::ProcessResult parallel =
      run_cli("mine '" + kMiniCorpus + "' --backend corpus --workers 8");
  EXPECT_EQ(serial.status, 0);
  EXPECT_EQ(parallel.status, 0);
  EXPECT_EQ(serial.output, parallel.output);
  EXPECT_NE(serial.output.find("Total"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Gate 8: the bug/fix/patch message filter analyzes exactly the keyword
// commits of a mixed-message history.
// ---------------------------------------------------------------------------

TEST(Acceptance, BugfixFilterPicksExactlyTheKeywordCommits) {
  const char* messages[] = {"Bugfix", "fix typo", "PATCH 3",
                            "refactor", "docs", "cleanup"};
  TempDir tmp;
  for (int i = 0; i < 6; ++i) {
    write_corpus_commit(tmp.path(), "c" + std::to_string(i + 1), messages[i],
                        {{"Sample.java", kGuardOld, kGuardNew}});
  }

  MineOptions options;
  options.backend = SourceBackend::Corpus;
  options.filter = CommitFilter::Bugfix;
  MiningReport report = mine(tmp.path().string(), builtin_catalog(), options);
  EXPECT_EQ(report.commits_total, 6);
  EXPECT_EQ(report.commits_analyzed, 3);
  EXPECT_EQ(report.revisions_analyzed, 3);
  EXPECT_EQ(report.revisions_skipped, 0);
}

// ---------------------------------------------------------------------------
// Gate 9: the catalog holds 18 unique patterns, and each one fires on its
// dedicated fixture while staying silent on a near miss.
// ---------------------------------------------------------------------------

TEST(Acceptance, EveryPatternHasAPositiveAndANegativeFixture) {
  const std::vector<PatternDefinition>& catalog = builtin_catalog();
  ASSERT_EQ(catalog.size(), 18u);
  std::set<std::string> ids;
  for (const PatternDefinition& def : catalog) ids.insert(def.id);
  EXPECT_EQ(ids.size(), 18u);

  ASSERT_EQ(std::size(kPatternFixtures), catalog.size());
  for (const PatternFixture& fixture : kPatternFixtures) {
    EXPECT_TRUE(ids.count(fixture.id)) << fixture.id;

    std::vector<std::string> hits =
        fired_patterns(fixture.hit_old, fixture.hit_new);
    EXPECT_NE(std::find(hits.begin(), hits.end(), fixture.id), hits.end())
        << fixture.id << " did not fire on its hit pair";

    std::vector<std::string> misses =
        fired_patterns(fixture.miss_old, fixture.miss_new);
    EXPECT_EQ(std::find(misses.begin(), misses.end(), fixture.id), misses.end())
        << fixture.id << " fired on its miss pair";
  }
}

// ---------------------------------------------------------------------------
// Gate 10: mining a synthetic thousand-pair history of ~100-line files
// finishes within a minute on one worker.
// ---------------------------------------------------------------------------

TEST(Acceptance, ThousandPairCorpusMinesInUnderAMinute) {
  GenConfig config;
  config.min_methods = 3;
  config.max_methods = 5;
  config.min_stmts = 2;
  config.max_stmts = 7;

  TempDir tmp;
  long total_lines = 0;
  for (int i = 0; i < 1000; ++i) {
    Rng rng(static_cast<uint32_t>(9000 + i));
    GenClass model = generate_class(rng, config);
    std::string old_text = render(model);
    GenClass edited = model;
    mutate_class(edited, rng, rng.range(1, 4));
    std::string new_text = render(edited);
    if (new_text == old_text) new_text += "\n";  // keep the pair non-identical
    total_lines += std::count(old_text.begin(), old_text.end(), '\n');

    char id[16];
    std::snprintf(id, sizeof id, "c%04d", i);
    write_corpus_commit(tmp.path(), id, "fix batch " + std::to_string(i),
                        {{"Gen.java", old_text, new_text}});
  }
  double mean_lines = static_cast<double>(total_lines) / 1000.0;
  EXPECT_GT(mean_lines, 60.0) << "generated files too small";
  EXPECT_LT(mean_lines, 200.0) << "generated files too large";

  MineOptions options;
  options.backend = SourceBackend::Corpus;
  options.workers = 1;
  auto start = std::chrono::steady_clock::now();
  MiningReport report = mine(tmp.path().string(), builtin_catalog(), options);
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  EXPECT_EQ(report.revisions_total, 1000);
  EXPECT_EQ(report.revisions_analyzed, 1000);
  EXPECT_EQ(report.revisions_skipped, 0);
  EXPECT_LT(elapsed.count(), 60000) << "took " << elapsed.count() << " ms";
}

// ---------------------------------------------------------------------------
// Verdict output: one line per gate.
// ---------------------------------------------------------------------------

struct Gate {
  int number;
  const char* label;
};

const std::map<std::string, Gate>& gate_table() {
  static const std::map<std::string, Gate> table = {
      {"PreconditionPatternTellsFreshGuardsFromWrappedReturns",
       {1, "precondition-with-jump accepts a fresh guard, rejects a wrapped return"}},
      {"ElseRemovalYieldsTwoChangesInOneHunk",
       {2, "else removal diffs to two changes in one hunk, classified as else removal"}},
      {"IdenticalAndReformattedSourcesProduceNoChanges",
       {3, "identical and reformatted sources yield no changes and no hunks"}},
      {"AstHunksNeverOutnumberLineHunks",
       {4, "AST hunks never outnumber line hunks"}},
      {"ReplayingChangeListsRebuildsTheNewTree",
       {5, "replaying every change list rebuilds the new tree"}},
      {"BacktrackingMatcherAgreesWithExhaustiveSearch",
       {6, "matcher agrees with exhaustive search and stays monotone"}},
      {"MiniCorpusYieldsTheLabeledCounts",
       {7, "mini corpus yields its labeled counts, worker count changes nothing"}},
      {"BugfixFilterPicksExactlyTheKeywordCommits",
       {8, "bug/fix/patch filter analyzes exactly the keyword commits"}},
      {"EveryPatternHasAPositiveAndANegativeFixture",
       {9, "18 unique patterns, each firing on a hit and silent on a near miss"}},
      {"ThousandPairCorpusMinesInUnderAMinute",
       {10, "a thousand ~100-line revision pairs mine in under a minute"}},
  };
  return table;
}

class GateListener : public ::testing::EmptyTestEventListener {
 public:
  void OnTestPartResult(const ::testing::TestPartResult& result) override {
    if (!result.failed()) return;
    failures_ += "    ";
    if (result.file_name() != nullptr) {
      failures_ += std::string(result.file_name()) + ":" +
                   std::to_string(result.line_number()) + ": ";
    }
    failures_ += result.summary();
    failures_ += "\n";
  }

  void OnTestEnd(const ::testing::TestInfo& info) override {
    auto it = gate_table().find(info.name());
    int number = it == gate_table().end() ? 0 : it->second.number;
    const char* label = it == gate_table().end() ? info.name() : it->second.label;
    const char* verdict = info.result()->Passed() ? "PASS" : "FAIL";
    std::printf("[%2d/10] %s  %s\n", number, verdict, label);
    if (!failures_.empty()) {
      std::fputs(failures_.c_str(), stdout);
    }
    failures_.clear();
    std::fflush(stdout);
  }

  void OnTestProgramEnd(const ::testing::UnitTest& unit) override {
    std::printf("acceptance: %d of %d gates passed\n",
                unit.successful_test_count(), unit.total_test_count());
    std::fflush(stdout);
  }

 private:
  std::string failures_;
};

}  // namespace
}  // namespace astpat

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::TestEventListeners& listeners =
      ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new astpat::GateListener);
  return RUN_ALL_TESTS();
}
