#include "starkc/harness.hpp"

#include "starkc/reader.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace starkc;
namespace fs = std::filesystem;

namespace {

const char* kAdd =
    "nat(0). nat(s(X)) :- nat(X).\n"
    "add(0,Y,Y). add(s(X),Y,s(Z)) :- add(X,Y,Z).";

const char* kFacts = R"(
:- lemma(add:x_0_x, all [x]: succeeds nat(?x) => succeeds add(?x,0,?x), p).
:- lemma(add:succ, all [x,y,z]: succeeds nat(?x) & succeeds nat(?y) &
     succeeds add(s(?x),?y,?z) => succeeds add(?x,s(?y),?z), p).
:- theorem(add:commutative, all [x,y,z]: succeeds nat(?x) & succeeds nat(?y) &
     succeeds add(?x,?y,?z) => succeeds add(?y,?x,?z), p).
:- lemma(add:term:1, all [x,y,z]: succeeds nat(?x) => terminates add(?x,?y,?z), p).
:- lemma(add:term:3, all [x,y,z]: succeeds nat(?z) => terminates add(?x,?y,?z), p).
:- theorem(add:term, all [x,y,z]: succeeds nat(?x) \/ succeeds nat(?z)
     => terminates add(?x,?y,?z), p).
)";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::current_path() / ("starkc_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_script(const fs::path& p, const std::string& body) {
  {
    std::ofstream os(p);
    os << "#!/bin/sh\n" << body;
  }
  fs::permissions(p, fs::perms::owner_all | fs::perms::group_read | fs::perms::others_read);
}

// A deterministic stand-in prover. Argument order: <timeout> <logfile> <file>.
// It logs every invocation and proves exactly the files containing an
// induction axiom, once the timeout reaches min_to.
ProverConfig fake_prover(const fs::path& dir, const std::string& label, int min_to) {
  fs::path script = dir / ("prover_" + label + ".sh");
  fs::path log = dir / ("invocations_" + label + ".log");
  std::ostringstream body;
  body << "echo \"run $1 $3\" >> \"$2\"\n"
       << "if [ \"$1\" -ge " << min_to << " ] && grep -q 'fof(induction' \"$3\"; then\n"
       << "  echo '% SZS status Theorem'\n"
       << "else\n"
       << "  echo '% SZS status GaveUp'\n"
       << "fi\n";
  write_script(script, body.str());
  ProverConfig cfg;
  cfg.id = ProverId::Custom;
  cfg.label = label;
  cfg.executable = script.string();
  cfg.arg_template = "$TO " + log.string() + " $FILE";
  return cfg;
}

long invocation_count(const fs::path& dir, const std::string& label) {
  std::ifstream is(dir / ("invocations_" + label + ".log"));
  long n = 0;
  std::string line;
  while (std::getline(is, line)) ++n;
  return n;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("obligations import exactly the earlier facts") {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  REQUIRE(facts.size() == 6);
  std::vector<ProofObligation> obs = build_obligations(p, facts);
  REQUIRE(obs.size() == 6);

  for (size_t i = 0; i < obs.size(); ++i) {
    CHECK(obs[i].ordinal == static_cast<int>(i) + 1);
    // prior facts appear as axioms, in order, nothing from later ordinals
    std::vector<std::string> prior;
    for (const auto& ax : obs[i].axioms) {
      if (ax.name.find("-(add:") != std::string::npos) prior.push_back(ax.name);
    }
    REQUIRE(prior.size() == i);
    for (size_t j = 0; j < i; ++j) {
      std::string expect = std::string(fact_kind_name(facts[j].kind)) + "-(" +
                           facts[j].name + ")";
      CHECK(prior[j] == expect);
    }
  }

  CHECK(obs[0].has_induction);
  CHECK(obs[5].fact.name == "add:term");
  CHECK(!obs[5].has_induction);
}

TEST_CASE("no facts, no obligations") {
  Program p = parse_program(kAdd);
  CHECK(build_obligations(p, {}).empty());
}

TEST_CASE("a theorem alone gets an obligation without an induction axiom") {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(
      ":- theorem(add:term, all [x,y,z]: succeeds nat(?x) \\/ succeeds nat(?z) "
      "=> terminates add(?x,?y,?z), p).");
  std::vector<ProofObligation> obs = build_obligations(p, facts);
  REQUIRE(obs.size() == 1);
  CHECK(!obs[0].has_induction);
  CHECK(!obs[0].induction_note.empty());
  for (const auto& ax : obs[0].axioms) CHECK(ax.name != "induction");
}

TEST_CASE("facts over unknown predicates are rejected") {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(":- lemma(a:b, succeeds mult(?x,?y,?z), p).");
  CHECK_THROWS_AS(build_obligations(p, facts), Error);
}

TEST_CASE("fact functors extend the axiom signature") {
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(":- lemma(a:b, succeeds nat(k), p).");
  std::vector<Functor> sig = effective_signature(p, facts);
  CHECK(std::find(sig.begin(), sig.end(), Functor{"k", 0}) != sig.end());
  // and the distinctness axioms cover the new constant: pairs (0,s),(0,k),(s,k)
  std::vector<ProofObligation> obs = build_obligations(p, facts);
  int distinct = 0;
  for (const auto& ax : obs[0].axioms) {
    if (ax.name.rfind("id2", 0) == 0) ++distinct;
  }
  CHECK(distinct == 3);
}

TEST_CASE("obligation filenames sort in proof order") {
  CHECK(obligation_filename("add", 1, "add:x_0_x") == "add__001__add_x_0_x.p");
  CHECK(obligation_filename("add", 12, "add:term:1") == "add__012__add_term_1.p");
  CHECK(obligation_filename("add", 2, "add:x_0_x") <
        obligation_filename("add", 10, "add:term"));
  CHECK(fact_library("add:x_0_x") == "add");
  CHECK(fact_library("bare") == "bare");
}

TEST_CASE("run_prover reports a missing executable as an error") {
  ProverConfig cfg;
  cfg.label = "X";
  cfg.executable = "/nonexistent/prover";
  cfg.arg_template = "$TO $FILE";
  TempDir dir("rp_missing");
  std::ofstream(dir.path / "f.p") << "fof(a,conjecture,$true).\n";
  ProverOutcome o = run_prover(cfg, dir.path / "f.p", 1);
  CHECK(o.status == ProverStatus::Error);
}

TEST_CASE("run_prover parses SZS statuses") {
  TempDir dir("rp_szs");
  std::ofstream(dir.path / "f.p") << "fof(a,conjecture,$true).\n";

  write_script(dir.path / "theorem.sh", "echo '% SZS status Theorem for x'\n");
  write_script(dir.path / "csa.sh", "echo '% SZS status CounterSatisfiable'\n");
  write_script(dir.path / "gaveup.sh", "echo '% SZS status GaveUp'\nexit 1\n");

  ProverConfig cfg;
  cfg.label = "T";
  cfg.arg_template = "$FILE";

  cfg.executable = (dir.path / "theorem.sh").string();
  CHECK(run_prover(cfg, dir.path / "f.p", 1).status == ProverStatus::Proved);
  cfg.executable = (dir.path / "csa.sh").string();
  CHECK(run_prover(cfg, dir.path / "f.p", 1).status == ProverStatus::Disproved);
  cfg.executable = (dir.path / "gaveup.sh").string();
  CHECK(run_prover(cfg, dir.path / "f.p", 1).status == ProverStatus::Unknown);
}

TEST_CASE("run_prover kills at the wall-clock deadline") {
  TempDir dir("rp_kill");
  std::ofstream(dir.path / "f.p") << "fof(a,conjecture,$true).\n";
  write_script(dir.path / "sleeper.sh", "sleep 30\necho '% SZS status Theorem'\n");
  ProverConfig cfg;
  cfg.label = "S";
  cfg.executable = (dir.path / "sleeper.sh").string();
  cfg.arg_template = "$FILE";
  ProverOutcome o = run_prover(cfg, dir.path / "f.p", 1);
  CHECK(o.status == ProverStatus::Timeout);
  CHECK(o.wall_seconds < 10.0);
}

TEST_CASE("template validation requires one $FILE") {
  ProverConfig cfg;
  cfg.label = "B";
  cfg.executable = "true";
  cfg.arg_template = "$TO";
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.arg_template = "$FILE $FILE";
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("proofs at a small timeout are reused at larger ones") {
  TempDir dir("mono");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  Manifest manifest = compile_to_dir(p, facts, "add", dir.path / "out");
  ProverConfig prover = fake_prover(dir.path, "M", /*min_to=*/10);

  SuiteResult result = execute_suite(dir.path / "out", manifest, {prover}, {1, 10, 60}, 2);

  // 5 obligations carry an induction axiom: missed at 1s, proved at 10s,
  // reused (not re-run) at 60s. add:term is attempted at every timeout.
  CHECK(invocation_count(dir.path, "M") == 6 + 6 + 1);
  int reused = 0;
  for (const auto& o : result.outcomes) {
    if (o.reused && o.status == ProverStatus::Proved) ++reused;
  }
  CHECK(reused == 5);
}

TEST_CASE("the journal makes suites resumable without re-proving") {
  TempDir dir("resume");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);

  Manifest m1 = compile_to_dir(p, facts, "add", dir.path / "full");
  ProverConfig full_prover = fake_prover(dir.path, "F", 1);
  SuiteResult full = execute_suite(dir.path / "full", m1, {full_prover}, {1, 10}, 1);
  std::string full_csv = write_report(full.report, ReportFormat::Csv);

  // Simulate a run killed after four journal records (same prover label so
  // the reports are directly comparable).
  Manifest m2 = compile_to_dir(p, facts, "add", dir.path / "part");
  SuiteResult part_full = execute_suite(dir.path / "part", m2, {full_prover}, {1, 10}, 1);
  (void)part_full;
  std::ifstream journal_in(dir.path / "part" / "journal.jsonl");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(journal_in, line)) lines.push_back(line);
  journal_in.close();
  REQUIRE(lines.size() == 12);
  {
    std::ofstream trunc(dir.path / "part" / "journal.jsonl", std::ios::trunc);
    for (size_t i = 0; i < 4; ++i) trunc << lines[i] << "\n";
  }
  long before = invocation_count(dir.path, "F");
  SuiteResult resumed = execute_suite(dir.path / "part", m2, {full_prover}, {1, 10}, 3);
  long after = invocation_count(dir.path, "F");

  // 12 cells total, 4 journaled. Of the 8 missing cells, the three induction
  // lemmas rerun once at 1s and reuse at 10s; add:term reruns at both.
  CHECK(after - before == 5);
  CHECK(write_report(resumed.report, ReportFormat::Csv) == full_csv);
}

TEST_CASE("suite reports are deterministic across job counts") {
  TempDir dir("jobs");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);

  Manifest m1 = compile_to_dir(p, facts, "add", dir.path / "j1");
  Manifest m4 = compile_to_dir(p, facts, "add", dir.path / "j4");
  ProverConfig prov1 = fake_prover(dir.path, "A", 1);
  ProverConfig prov4 = fake_prover(dir.path, "A", 1);
  SuiteResult r1 = execute_suite(dir.path / "j1", m1, {prov1}, {1, 10}, 1);
  SuiteResult r4 = execute_suite(dir.path / "j4", m4, {prov4}, {1, 10}, 4);
  CHECK(write_report(r1.report, ReportFormat::Csv) ==
        write_report(r4.report, ReportFormat::Csv));
}

TEST_CASE("a per-prover job limit serializes that prover's processes") {
  TempDir dir("percap");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  Manifest manifest = compile_to_dir(p, facts, "add", dir.path / "out");

  // the script detects overlapping invocations with a mkdir mutex
  fs::path lock = dir.path / "lock";
  fs::path violations = dir.path / "violations";
  std::ostringstream body;
  body << "if ! mkdir " << lock.string() << " 2>/dev/null; then\n"
       << "  echo overlap >> " << violations.string() << "\n"
       << "fi\nsleep 0.05\nrmdir " << lock.string() << " 2>/dev/null\n"
       << "echo '% SZS status GaveUp'\n";
  write_script(dir.path / "capped.sh", body.str());

  ProverConfig cfg;
  cfg.id = ProverId::Custom;
  cfg.label = "C";
  cfg.executable = (dir.path / "capped.sh").string();
  cfg.arg_template = "$FILE";
  cfg.max_jobs = 1;

  execute_suite(dir.path / "out", manifest, {cfg}, {1}, 4);
  CHECK(!fs::exists(violations));
}

TEST_CASE("compile-only suites have no prover columns") {
  TempDir dir("noprover");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  Report rep = run_suite(p, facts, {}, {1}, 1, dir.path / "out", {}, "add");
  CHECK(rep.combos.empty());
  CHECK(write_report(rep, ReportFormat::Csv) == "lib,#\nadd,6\n");
}

TEST_CASE("report formatting follows the lib/#/combo-timeout scheme") {
  Report r;
  r.libraries = {"add"};
  r.combos = {"E", "V", "EV"};
  r.timeouts = {1, 10};
  auto row = [&](const std::string& combo, int t, int succ) {
    r.rows.push_back(Report::Row{"add", combo, t, 6, succ});
  };
  row("E", 1, 3);
  row("V", 1, 5);
  row("EV", 1, 5);
  row("E", 10, 4);
  row("V", 10, 6);
  row("EV", 10, 6);

  CHECK(write_report(r, ReportFormat::Csv) ==
        "lib,#,E-1s,V-1s,EV-1s,E-10s,V-10s,EV-10s\n"
        "add,6,50%,83%,83%,67%,100%,100%\n");

  std::string md = write_report(r, ReportFormat::Markdown);
  CHECK(md.find("| lib | # | E-1s | V-1s | EV-1s | E-10s | V-10s | EV-10s |") == 0);
  CHECK(md.find("| add | 6 | 50% | 83% | 83% | 67% | 100% | 100% |") != std::string::npos);
}

TEST_CASE("empty report renders the header only") {
  Report r;
  CHECK(write_report(r, ReportFormat::Csv) == "lib,#\n");
}

TEST_CASE("success rate rounds to the nearest percent") {
  Report::Row row{"l", "E", 1, 3, 2};
  CHECK(Report::rate_percent(row) == 67);
  row.success_count = 1;
  CHECK(Report::rate_percent(row) == 33);
  row.fact_count = 0;
  CHECK(Report::rate_percent(row) == 0);
}

TEST_CASE("manifests round-trip through the output directory") {
  TempDir dir("manifest");
  Program p = parse_program(kAdd);
  std::vector<Fact> facts = parse_facts(kFacts);
  Manifest written = compile_to_dir(p, facts, "add", dir.path / "out", {}, "/src/add.pl",
                                    "/src/add.pr");
  Manifest loaded = load_manifest(dir.path / "out");
  CHECK(loaded.program_name == "add");
  CHECK(loaded.program_path == "/src/add.pl");
  REQUIRE(loaded.entries.size() == written.entries.size());
  for (size_t i = 0; i < loaded.entries.size(); ++i) {
    CHECK(loaded.entries[i].fact == written.entries[i].fact);
    CHECK(loaded.entries[i].file == written.entries[i].file);
    CHECK(loaded.entries[i].has_induction == written.entries[i].has_induction);
    CHECK(fs::exists(dir.path / "out" / loaded.entries[i].file));
  }
}

} // TEST_SUITE
