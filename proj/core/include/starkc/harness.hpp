#pragma once

#include "starkc/ast.hpp"
#include "starkc/axiomgen.hpp"
#include "starkc/tptp.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace starkc {

// ---------------------------------------------------------------------------
// Obligations

struct CompileOptions {
  // Fact name -> 1-based premise index to induct on, overriding the default
  // first-eligible-premise choice.
  std::map<std::string, int> induct_on;
};

struct ProofObligation {
  Fact fact;
  int ordinal = 0;  // 1-based position in the fact file
  std::vector<NamedFormula> axioms;  // CET, gr, uniqueness/totality, fixed
                                     // points, prior facts, optional induction
  NamedFormula conjecture;
  bool has_induction = false;
  std::string induction_note;  // reason when has_induction is false
};

/// One obligation per fact, in file order; every fact with a smaller ordinal
/// is imported as an axiom. Throws when a fact references a predicate the
/// program does not define.
std::vector<ProofObligation> build_obligations(const Program& p,
                                               const std::vector<Fact>& facts,
                                               const CompileOptions& opts = {});

/// The signature CET/gr axioms range over: program functors plus any functor
/// mentioned only by the facts.
std::vector<Functor> effective_signature(const Program& p, const std::vector<Fact>& facts);

/// Library component of a fact name (text before the first ':', or the whole
/// name).
std::string fact_library(const std::string& fact_name);

/// add:x_0_x with ordinal 1 in library add -> add__001__add_x_0_x.p; lexical
/// order equals proof-dependency order.
std::string obligation_filename(const std::string& library, int ordinal,
                                const std::string& fact_name);

// ---------------------------------------------------------------------------
// Compiled output directory

struct ManifestEntry {
  int ordinal = 0;
  std::string fact;
  std::string kind;
  std::string file;
  bool has_induction = false;
};

struct Manifest {
  std::string program_name;
  std::string program_path;  // absolute source paths, for recompilation
  std::string facts_path;
  std::string generator;
  std::vector<ManifestEntry> entries;
};

/// Writes one .p file per obligation (atomically) plus manifest.json.
Manifest compile_to_dir(const Program& p, const std::vector<Fact>& facts,
                        const std::string& program_name,
                        const std::filesystem::path& out_dir,
                        const CompileOptions& opts = {},
                        const std::string& program_path = {},
                        const std::string& facts_path = {});

Manifest load_manifest(const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Provers

enum class ProverId { Eprover, Vampire, Custom };

struct ProverConfig {
  ProverId id = ProverId::Custom;
  std::string label;       // report column letter(s), e.g. "E"
  std::string executable;  // path or command name
  std::string arg_template;  // contains $FILE exactly once; $TO = seconds
  int max_jobs = 0;          // per-prover concurrency cap; 0 = no cap

  static ProverConfig eprover_default();
  static ProverConfig vampire_default();

  void validate() const;  // throws on a malformed template
};

enum class ProverStatus { Proved, Disproved, Unknown, Timeout, Error };
std::string_view prover_status_name(ProverStatus s);

struct ProverOutcome {
  std::string prover;  // config label
  std::string fact;
  ProverStatus status = ProverStatus::Error;
  double wall_seconds = 0.0;
  std::string szs_line;  // raw SZS status line (or a diagnostic)
  bool reused = false;   // carried over from a smaller timeout or the journal
};

/// Runs one prover on one file. The timeout is substituted for $TO; the child
/// is killed at timeout + 2s grace. Proved iff the SZS status is Theorem;
/// disproved iff CounterSatisfiable or Satisfiable.
ProverOutcome run_prover(const ProverConfig& cfg, const std::filesystem::path& file,
                         int timeout_seconds);

// ---------------------------------------------------------------------------
// Suites and reports

struct Report {
  struct Row {
    std::string library;
    std::string combo;  // prover label or concatenation, e.g. "EV"
    int timeout_s = 0;
    int fact_count = 0;
    int success_count = 0;
  };

  std::vector<std::string> libraries;  // sorted
  std::vector<std::string> combos;     // column order: provers then combined
  std::vector<int> timeouts;           // ascending
  std::vector<Row> rows;               // sorted by library, timeout, combo
  std::map<std::string, int> fact_counts;  // per library

  static int rate_percent(const Row& r);
};

enum class ReportFormat { Csv, Markdown };

std::string write_report(const Report& r, ReportFormat format);

struct SuiteResult {
  Report report;
  std::vector<ProverOutcome> outcomes;  // one per (fact, prover, timeout) cell
  bool all_proved = false;
};

/// Compiles facts into out_dir (when not already present), then runs every
/// (obligation x prover x timeout) cell with at most `jobs` concurrent prover
/// processes. Results are journaled to journal.jsonl in out_dir, one JSON
/// record per cell, appended atomically; rerunning skips journaled cells.
/// A cell proved at a smaller timeout is reused at larger ones.
SuiteResult execute_suite(const std::filesystem::path& out_dir, const Manifest& manifest,
                          const std::vector<ProverConfig>& provers,
                          std::vector<int> timeouts, int jobs);

/// Convenience wrapper: compile + execute, returning just the report.
Report run_suite(const Program& p, const std::vector<Fact>& facts,
                 const std::vector<ProverConfig>& provers,
                 const std::vector<int>& timeouts, int jobs,
                 const std::filesystem::path& out_dir,
                 const CompileOptions& opts = {},
                 const std::string& program_name = "program");

} // namespace starkc
