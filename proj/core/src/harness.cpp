#include "starkc/harness.hpp"

#include "starkc/completion.hpp"
#include "starkc/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace starkc {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Obligations

std::vector<Functor> effective_signature(const Program& p, const std::vector<Fact>& facts) {
  std::vector<Functor> sig = p.signature;
  for (const auto& f : facts) collect_functors(f.statement, sig);
  return sig;
}

std::string fact_library(const std::string& fact_name) {
  auto pos = fact_name.find(':');
  return pos == std::string::npos ? fact_name : fact_name.substr(0, pos);
}

std::string obligation_filename(const std::string& library, int ordinal,
                                const std::string& fact_name) {
  std::string sanitized;
  for (char c : fact_name) {
    sanitized += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  char ord[8];
  std::snprintf(ord, sizeof ord, "%03d", ordinal);
  return library + "__" + ord + "__" + sanitized + ".p";
}

namespace {

std::string fact_axiom_name(const Fact& f) {
  return std::string(fact_kind_name(f.kind)) + "-(" + f.name + ")";
}

} // namespace

std::vector<ProofObligation> build_obligations(const Program& p,
                                               const std::vector<Fact>& facts,
                                               const CompileOptions& opts) {
  for (const auto& f : facts) {
    std::vector<PredId> used;
    collect_pred_atoms(f.statement, used);
    for (const auto& q : used) {
      if (!p.has_predicate(q)) {
        throw Error("fact " + f.name + " references predicate " + q.name + "/" +
                    std::to_string(q.arity) + " which the program does not define");
      }
    }
  }

  const std::vector<Functor> sig = effective_signature(p, facts);
  const DependencyInfo deps = dependency_info(p);
  const std::map<PredId, std::string> tags = predicate_tags(p.predicates);

  std::vector<NamedFormula> shared;
  for (auto& a : cet_axioms(sig)) shared.push_back(std::move(a));
  for (auto& a : gr_axioms(sig)) shared.push_back(std::move(a));
  for (const auto& pred : p.predicates) {
    for (auto& a : uniq_total_axioms(pred, tags.at(pred))) shared.push_back(std::move(a));
  }
  for (const auto& pred : p.predicates) {
    for (auto& a : fixedpoint_axioms(p, pred, tags.at(pred))) shared.push_back(std::move(a));
  }

  std::vector<ProofObligation> out;
  out.reserve(facts.size());
  for (size_t i = 0; i < facts.size(); ++i) {
    const Fact& fact = facts[i];
    ProofObligation ob;
    ob.fact = fact;
    ob.ordinal = static_cast<int>(i) + 1;
    ob.axioms = shared;
    for (size_t j = 0; j < i; ++j) {
      ob.axioms.push_back(NamedFormula{fact_axiom_name(facts[j]), NamedFormula::Role::Axiom,
                                       facts[j].statement});
    }
    std::optional<int> premise_index;
    if (auto it = opts.induct_on.find(fact.name); it != opts.induct_on.end()) {
      premise_index = it->second;
    }
    std::string why;
    if (auto ind = induction_axiom(p, deps, fact.statement, premise_index, &why)) {
      ob.axioms.push_back(std::move(*ind));
      ob.has_induction = true;
    } else {
      ob.induction_note = why;
    }
    ob.conjecture =
        NamedFormula{fact_axiom_name(fact), NamedFormula::Role::Conjecture, fact.statement};
    out.push_back(std::move(ob));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output directory

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

} // namespace

Manifest compile_to_dir(const Program& p, const std::vector<Fact>& facts,
                        const std::string& program_name, const fs::path& out_dir,
                        const CompileOptions& opts, const std::string& program_path,
                        const std::string& facts_path) {
  fs::create_directories(out_dir);
  std::vector<ProofObligation> obligations = build_obligations(p, facts, opts);
  ManglingTable table = ManglingTable::build(effective_signature(p, facts), p.predicates);

  Manifest manifest;
  manifest.program_name = program_name;
  manifest.program_path = program_path;
  manifest.facts_path = facts_path;
  manifest.generator = std::string("starkc ") + kVersion;

  const int total = static_cast<int>(obligations.size());
  for (const auto& ob : obligations) {
    std::vector<NamedFormula> clauses = ob.axioms;
    clauses.push_back(ob.conjecture);
    FileHeader header{program_name, ob.fact.name, ob.ordinal, total};
    std::string text = emit_file(clauses, table, header);
    std::string file = obligation_filename(fact_library(ob.fact.name), ob.ordinal, ob.fact.name);
    write_file_atomic(out_dir / file, text);
    manifest.entries.push_back(ManifestEntry{ob.ordinal, ob.fact.name,
                                             std::string(fact_kind_name(ob.fact.kind)), file,
                                             ob.has_induction});
  }

  json j;
  j["program"] = manifest.program_name;
  j["program_path"] = manifest.program_path;
  j["facts_path"] = manifest.facts_path;
  j["generator"] = manifest.generator;
  j["obligations"] = json::array();
  for (const auto& e : manifest.entries) {
    j["obligations"].push_back({{"ordinal", e.ordinal},
                                {"fact", e.fact},
                                {"kind", e.kind},
                                {"file", e.file},
                                {"has_induction", e.has_induction}});
  }
  write_file_atomic(out_dir / "manifest.json", j.dump(2) + "\n");
  return manifest;
}

Manifest load_manifest(const fs::path& out_dir) {
  json j = json::parse(read_file(out_dir / "manifest.json"));
  Manifest m;
  m.program_name = j.value("program", "");
  m.program_path = j.value("program_path", "");
  m.facts_path = j.value("facts_path", "");
  m.generator = j.value("generator", "");
  for (const auto& e : j.at("obligations")) {
    m.entries.push_back(ManifestEntry{e.at("ordinal").get<int>(), e.at("fact").get<std::string>(),
                                      e.at("kind").get<std::string>(),
                                      e.at("file").get<std::string>(),
                                      e.at("has_induction").get<bool>()});
  }
  return m;
}

// ---------------------------------------------------------------------------
// Prover processes

std::string_view prover_status_name(ProverStatus s) {
  switch (s) {
    case ProverStatus::Proved: return "proved";
    case ProverStatus::Disproved: return "disproved";
    case ProverStatus::Unknown: return "unknown";
    case ProverStatus::Timeout: return "timeout";
    case ProverStatus::Error: return "error";
  }
  return "?";
}

ProverConfig ProverConfig::eprover_default() {
  ProverConfig c;
  c.id = ProverId::Eprover;
  c.label = "E";
  const char* env = std::getenv("STARKC_EPROVER");
  c.executable = env && *env ? env : "eprover";
  c.arg_template =
      "--delete-bad-limit=2000000000 --definitional-cnf -s --auto-schedule=8 "
      "--proof-object --cpu-limit=$TO $FILE";
  return c;
}

ProverConfig ProverConfig::vampire_default() {
  ProverConfig c;
  c.id = ProverId::Vampire;
  c.label = "V";
  const char* env = std::getenv("STARKC_VAMPIRE");
  c.executable = env && *env ? env : "vampire";
  c.arg_template = "--mode casc -m 16384 --cores 7 -t $TO $FILE";
  return c;
}

void ProverConfig::validate() const {
  size_t first = arg_template.find("$FILE");
  if (first == std::string::npos || arg_template.find("$FILE", first + 1) != std::string::npos) {
    throw Error("prover " + label + ": argument template must contain $FILE exactly once");
  }
}

namespace {

std::vector<std::string> split_template(const std::string& tmpl, int timeout_s,
                                        const std::string& file) {
  std::vector<std::string> out;
  std::istringstream ss(tmpl);
  std::string word;
  while (ss >> word) {
    auto replace_all = [&](const std::string& from, const std::string& to) {
      size_t pos = 0;
      while ((pos = word.find(from, pos)) != std::string::npos) {
        word.replace(pos, from.size(), to);
        pos += to.size();
      }
    };
    replace_all("$TO", std::to_string(timeout_s));
    replace_all("$FILE", file);
    out.push_back(word);
  }
  return out;
}

struct ChildResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string output;  // stdout and stderr merged
};

ChildResult run_child(const std::string& exe, const std::vector<std::string>& args,
                      double deadline_seconds) {
  ChildResult res;
  int pipefd[2];
  if (pipe(pipefd) != 0) {
    res.spawn_failed = true;
    res.output = "pipe() failed";
    return res;
  }

  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    res.spawn_failed = true;
    res.output = "fork() failed";
    return res;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(exe.c_str(), argv.data());
    _exit(127);
  }

  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

  const auto start = std::chrono::steady_clock::now();
  bool killed = false;
  bool child_done = false;
  int status = 0;
  for (;;) {
    struct pollfd pfd{pipefd[0], POLLIN, 0};
    (void)poll(&pfd, 1, 50);
    char buf[4096];
    for (;;) {
      ssize_t n = read(pipefd[0], buf, sizeof buf);
      if (n > 0) {
        res.output.append(buf, static_cast<size_t>(n));
        continue;
      }
      break;
    }
    if (!child_done) {
      pid_t r = waitpid(pid, &status, WNOHANG);
      if (r == pid || r == -1) child_done = true;
    }
    if (child_done) {
      // Drain whatever is left in the pipe.
      for (;;) {
        ssize_t n = read(pipefd[0], buf, sizeof buf);
        if (n > 0) {
          res.output.append(buf, static_cast<size_t>(n));
          continue;
        }
        break;
      }
      break;
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (!killed && elapsed.count() > deadline_seconds) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      killed = true;
      res.timed_out = true;
    }
  }
  close(pipefd[0]);
  if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  } else {
    res.exit_code = -1;
  }
  if (res.exit_code == 127 && res.output.empty()) {
    res.spawn_failed = true;
    res.output = "executable not found or not runnable: " + exe;
  }
  return res;
}

// First definitive SZS status line wins; Theorem beats everything.
std::pair<ProverStatus, std::string> scan_szs(const std::string& output) {
  std::istringstream ss(output);
  std::string line;
  std::optional<std::pair<ProverStatus, std::string>> fallback;
  while (std::getline(ss, line)) {
    size_t pos = line.find("SZS status ");
    if (pos == std::string::npos) continue;
    std::istringstream ws(line.substr(pos + std::strlen("SZS status ")));
    std::string word;
    ws >> word;
    ProverStatus st;
    if (word == "Theorem") {
      return {ProverStatus::Proved, line};
    } else if (word == "CounterSatisfiable" || word == "Satisfiable") {
      st = ProverStatus::Disproved;
    } else if (word == "Timeout" || word == "ResourceOut") {
      st = ProverStatus::Timeout;
    } else {
      st = ProverStatus::Unknown;
    }
    if (!fallback) fallback = {st, line};
  }
  if (fallback) return *fallback;
  return {ProverStatus::Error, ""};
}

} // namespace

ProverOutcome run_prover(const ProverConfig& cfg, const fs::path& file, int timeout_seconds) {
  cfg.validate();
  ProverOutcome out;
  out.prover = cfg.label;
  out.fact = file.stem().string();

  const auto start = std::chrono::steady_clock::now();
  ChildResult child = run_child(cfg.executable, split_template(cfg.arg_template, timeout_seconds,
                                                               file.string()),
                                timeout_seconds + 2.0);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (child.spawn_failed) {
    out.status = ProverStatus::Error;
    out.szs_line = child.output;
    return out;
  }
  auto [status, line] = scan_szs(child.output);
  if (status == ProverStatus::Error) {
    if (child.timed_out) {
      out.status = ProverStatus::Timeout;
      out.szs_line = "killed at wall-clock deadline";
    } else if (child.exit_code != 0) {
      out.status = ProverStatus::Error;
      out.szs_line = "exit code " + std::to_string(child.exit_code) + " without SZS status";
    } else {
      out.status = ProverStatus::Unknown;
      out.szs_line = "no SZS status line";
    }
    return out;
  }
  out.status = status;
  out.szs_line = line;
  return out;
}

// ---------------------------------------------------------------------------
// Journal

namespace {

struct CellKey {
  std::string fact;
  std::string prover;
  int timeout_s = 0;
  friend bool operator<(const CellKey& a, const CellKey& b) {
    return std::tie(a.fact, a.prover, a.timeout_s) < std::tie(b.fact, b.prover, b.timeout_s);
  }
};

struct Journal {
  fs::path path;
  std::map<CellKey, ProverOutcome> cells;

  void load() {
    std::ifstream is(path);
    if (!is) return;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (j.is_discarded()) continue;  // torn final record from a killed run
      ProverOutcome o;
      o.prover = j.value("prover", "");
      o.fact = j.value("fact", "");
      o.status = status_from(j.value("status", "error"));
      o.wall_seconds = j.value("wall_seconds", 0.0);
      o.szs_line = j.value("szs", "");
      o.reused = true;
      cells[{o.fact, o.prover, j.value("timeout", 0)}] = o;
    }
  }

  void append(const CellKey& key, const ProverOutcome& o) {
    json j{{"fact", key.fact},
           {"prover", key.prover},
           {"timeout", key.timeout_s},
           {"status", std::string(prover_status_name(o.status))},
           {"wall_seconds", o.wall_seconds},
           {"szs", o.szs_line},
           {"reused", o.reused}};
    std::ofstream os(path, std::ios::app);
    os << j.dump() << "\n";
    os.flush();
  }

  static ProverStatus status_from(const std::string& s) {
    if (s == "proved") return ProverStatus::Proved;
    if (s == "disproved") return ProverStatus::Disproved;
    if (s == "unknown") return ProverStatus::Unknown;
    if (s == "timeout") return ProverStatus::Timeout;
    return ProverStatus::Error;
  }
};

} // namespace

// ---------------------------------------------------------------------------
// Reports

int Report::rate_percent(const Row& r) {
  if (r.fact_count == 0) return 0;
  return static_cast<int>(std::lround(100.0 * r.success_count / r.fact_count));
}

std::string write_report(const Report& r, ReportFormat format) {
  auto cell = [&](const std::string& lib, const std::string& combo, int t) -> const Report::Row* {
    for (const auto& row : r.rows) {
      if (row.library == lib && row.combo == combo && row.timeout_s == t) return &row;
    }
    return nullptr;
  };
  auto fact_count = [&](const std::string& lib) {
    if (auto it = r.fact_counts.find(lib); it != r.fact_counts.end()) return it->second;
    for (const auto& row : r.rows) {
      if (row.library == lib) return row.fact_count;
    }
    return 0;
  };

  std::string out;
  if (format == ReportFormat::Csv) {
    out += "lib,#";
    for (int t : r.timeouts) {
      for (const auto& c : r.combos) out += "," + c + "-" + std::to_string(t) + "s";
    }
    out += "\n";
    for (const auto& lib : r.libraries) {
      out += lib + "," + std::to_string(fact_count(lib));
      for (int t : r.timeouts) {
        for (const auto& c : r.combos) {
          const Report::Row* row = cell(lib, c, t);
          out += "," + (row ? std::to_string(Report::rate_percent(*row)) + "%" : "");
        }
      }
      out += "\n";
    }
    return out;
  }

  out += "| lib | # |";
  for (int t : r.timeouts) {
    for (const auto& c : r.combos) out += " " + c + "-" + std::to_string(t) + "s |";
  }
  out += "\n|---|---|";
  for (size_t i = 0; i < r.timeouts.size() * r.combos.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& lib : r.libraries) {
    out += "| " + lib + " | " + std::to_string(fact_count(lib)) + " |";
    for (int t : r.timeouts) {
      for (const auto& c : r.combos) {
        const Report::Row* row = cell(lib, c, t);
        out += row ? " " + std::to_string(Report::rate_percent(*row)) + "% |" : "  |";
      }
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite execution

SuiteResult execute_suite(const fs::path& out_dir, const Manifest& manifest,
                          const std::vector<ProverConfig>& provers, std::vector<int> timeouts,
                          int jobs) {
  for (const auto& p : provers) p.validate();
  std::sort(timeouts.begin(), timeouts.end());
  timeouts.erase(std::unique(timeouts.begin(), timeouts.end()), timeouts.end());
  if (jobs < 1) jobs = 1;

  Journal journal{out_dir / "journal.jsonl", {}};
  journal.load();

  // One lane per (fact, prover); a lane walks its timeouts in ascending
  // order so a proof at a small timeout is reused at the larger ones.
  struct Lane {
    const ManifestEntry* entry;
    const ProverConfig* prover;
  };
  std::vector<Lane> lanes;
  for (const auto& e : manifest.entries) {
    for (const auto& p : provers) lanes.push_back(Lane{&e, &p});
  }

  std::mutex mu;
  std::map<std::string, int> running_per_prover;
  std::condition_variable cv;
  std::atomic<size_t> next_lane{0};

  auto worker = [&]() {
    for (;;) {
      size_t i = next_lane.fetch_add(1);
      if (i >= lanes.size()) return;
      const Lane& lane = lanes[i];
      const fs::path file = out_dir / lane.entry->file;
      bool proved_before = false;
      ProverOutcome proof;
      for (int t : timeouts) {
        CellKey key{lane.entry->fact, lane.prover->label, t};
        {
          std::lock_guard<std::mutex> lock(mu);
          auto it = journal.cells.find(key);
          if (it != journal.cells.end()) {
            if (it->second.status == ProverStatus::Proved) {
              proved_before = true;
              proof = it->second;
            }
            continue;
          }
        }
        ProverOutcome outcome;
        if (proved_before) {
          outcome = proof;
          outcome.reused = true;
          outcome.wall_seconds = 0.0;
        } else {
          if (lane.prover->max_jobs > 0) {
            std::unique_lock<std::mutex> lock(mu);
            cv.wait(lock, [&] {
              return running_per_prover[lane.prover->label] < lane.prover->max_jobs;
            });
            ++running_per_prover[lane.prover->label];
          }
          outcome = run_prover(*lane.prover, file, t);
          outcome.fact = lane.entry->fact;
          if (lane.prover->max_jobs > 0) {
            std::lock_guard<std::mutex> lock(mu);
            --running_per_prover[lane.prover->label];
            cv.notify_all();
          }
        }
        {
          std::lock_guard<std::mutex> lock(mu);
          journal.append(key, outcome);
          journal.cells[key] = outcome;
        }
        if (outcome.status == ProverStatus::Proved) {
          proved_before = true;
          proof = outcome;
        }
      }
    }
  };

  std::vector<std::thread> threads;
  const size_t n_workers =
      std::min(static_cast<size_t>(jobs), std::max(lanes.size(), size_t{1}));
  for (size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();

  // Assemble the report: one column per prover, plus a combined column that
  // counts a fact when any prover proved it at that timeout.
  SuiteResult result;
  Report& rep = result.report;
  rep.timeouts = timeouts;
  std::map<std::string, std::vector<std::string>> combo_members;
  for (const auto& p : provers) {
    rep.combos.push_back(p.label);
    combo_members[p.label] = {p.label};
  }
  if (provers.size() > 1) {
    std::string combined;
    std::vector<std::string> members;
    for (const auto& p : provers) {
      combined += p.label;
      members.push_back(p.label);
    }
    rep.combos.push_back(combined);
    combo_members[combined] = std::move(members);
  }

  std::map<std::string, std::vector<const ManifestEntry*>> by_lib;
  for (const auto& e : manifest.entries) by_lib[fact_library(e.fact)].push_back(&e);
  for (const auto& kv : by_lib) {
    rep.libraries.push_back(kv.first);
    rep.fact_counts[kv.first] = static_cast<int>(kv.second.size());
  }

  auto proved_cell = [&](const std::string& fact, const std::string& prover, int t) {
    auto it = journal.cells.find(CellKey{fact, prover, t});
    return it != journal.cells.end() && it->second.status == ProverStatus::Proved;
  };

  for (const auto& lib : rep.libraries) {
    const auto& entries = by_lib.at(lib);
    for (int t : rep.timeouts) {
      for (const auto& combo : rep.combos) {
        Report::Row row;
        row.library = lib;
        row.combo = combo;
        row.timeout_s = t;
        row.fact_count = static_cast<int>(entries.size());
        for (const auto* e : entries) {
          const auto& members = combo_members.at(combo);
          if (std::any_of(members.begin(), members.end(), [&](const std::string& m) {
                return proved_cell(e->fact, m, t);
              })) {
            ++row.success_count;
          }
        }
        rep.rows.push_back(row);
      }
    }
  }

  for (const auto& kv : journal.cells) result.outcomes.push_back(kv.second);

  result.all_proved = true;
  for (const auto& e : manifest.entries) {
    bool proved = false;
    for (const auto& p : provers) {
      for (int t : rep.timeouts) {
        if (proved_cell(e.fact, p.label, t)) {
          proved = true;
          break;
        }
      }
      if (proved) break;
    }
    if (!proved && !provers.empty()) result.all_proved = false;
  }

  return result;
}

Report run_suite(const Program& p, const std::vector<Fact>& facts,
                 const std::vector<ProverConfig>& provers, const std::vector<int>& timeouts,
                 int jobs, const fs::path& out_dir, const CompileOptions& opts,
                 const std::string& program_name) {
  Manifest manifest = compile_to_dir(p, facts, program_name, out_dir, opts);
  return execute_suite(out_dir, manifest, provers, timeouts, jobs).report;
}

} // namespace starkc
