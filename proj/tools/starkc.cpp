#include "starkc/harness.hpp"
#include "starkc/oracle.hpp"
#include "starkc/reader.hpp"
#include "starkc/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace starkc;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

CompileOptions parse_induct_on(const std::vector<std::string>& specs) {
  CompileOptions opts;
  for (const auto& s : specs) {
    auto pos = s.rfind('=');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= s.size()) {
      throw Error("--induct-on expects <fact>=<premise-index>, got '" + s + "'");
    }
    opts.induct_on[s.substr(0, pos)] = std::stoi(s.substr(pos + 1));
  }
  return opts;
}

std::vector<ProverConfig> resolve_provers(const std::string& csv) {
  std::vector<ProverConfig> out;
  std::istringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (name == "eprover" || name == "e") {
      out.push_back(ProverConfig::eprover_default());
    } else if (name == "vampire" || name == "v") {
      out.push_back(ProverConfig::vampire_default());
    } else {
      throw Error("unknown prover '" + name + "' (expected eprover or vampire)");
    }
  }
  return out;
}

std::vector<int> parse_timeouts(const std::string& csv) {
  std::vector<int> out;
  std::istringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw Error("--timeouts needs at least one value");
  return out;
}

int cmd_compile(const fs::path& program_file, const fs::path& facts_file,
                const fs::path& out_dir, const std::vector<std::string>& induct_specs) {
  Program program = parse_program(slurp(program_file), program_file.string());
  std::vector<Fact> facts = parse_facts(slurp(facts_file), facts_file.string());
  CompileOptions opts = parse_induct_on(induct_specs);

  std::string name = program_file.stem().string();
  std::vector<ProofObligation> obligations = build_obligations(program, facts, opts);
  Manifest manifest = compile_to_dir(program, facts, name, out_dir, opts,
                                     fs::absolute(program_file).string(),
                                     fs::absolute(facts_file).string());
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    std::cout << "wrote " << (out_dir / e.file).string()
              << (e.has_induction ? "" : "  [no induction axiom]") << "\n";
    if (!e.has_induction && !obligations[i].induction_note.empty()) {
      std::cerr << "warning: " << e.fact << ": no induction axiom ("
                << obligations[i].induction_note << ")\n";
    }
  }
  std::cout << manifest.entries.size() << " obligation(s) in " << out_dir.string() << "\n";
  return 0;
}

int cmd_prove(const fs::path& out_dir, const std::string& provers_csv,
              const std::string& timeouts_csv, int jobs,
              const std::vector<std::string>& induct_specs, const std::string& report_file,
              const std::string& format) {
  Manifest manifest = load_manifest(out_dir);

  if (!induct_specs.empty()) {
    // Overrides change the induction axiom inside the files, so recompile
    // from the sources recorded in the manifest.
    if (manifest.program_path.empty() || manifest.facts_path.empty()) {
      throw Error("--induct-on needs the manifest to record source paths; recompile first");
    }
    Program program = parse_program(slurp(manifest.program_path), manifest.program_path);
    std::vector<Fact> facts = parse_facts(slurp(manifest.facts_path), manifest.facts_path);
    manifest = compile_to_dir(program, facts, manifest.program_name, out_dir,
                              parse_induct_on(induct_specs), manifest.program_path,
                              manifest.facts_path);
  }

  std::vector<ProverConfig> provers = resolve_provers(provers_csv);
  std::vector<int> timeouts = parse_timeouts(timeouts_csv);
  SuiteResult result = execute_suite(out_dir, manifest, provers, timeouts, jobs);

  for (const auto& o : result.outcomes) {
    std::cout << "[" << o.prover << "] " << o.fact << ": "
              << prover_status_name(o.status);
    if (o.reused) std::cout << " (reused)";
    std::cout << "\n";
  }
  std::cout << "\n" << write_report(result.report, ReportFormat::Markdown);

  if (!report_file.empty()) {
    ReportFormat fmt = format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
    std::ofstream os(report_file, std::ios::binary | std::ios::trunc);
    os << write_report(result.report, fmt);
    std::cout << "report written to " << report_file << "\n";
  }
  return result.all_proved ? 0 : 1;
}

int cmd_check(const fs::path& out_dir) {
  int bad = 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    if (entry.path().extension() == ".p") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::vector<Diagnostic> diags = validate_fof(slurp(f));
    if (diags.empty()) {
      std::cout << f.filename().string() << ": ok\n";
    } else {
      ++bad;
      for (const auto& d : diags) {
        std::cout << f.filename().string() << ":" << d.line << ": " << d.message << "\n";
      }
    }
  }
  if (files.empty()) {
    std::cerr << "no .p files in " << out_dir.string() << "\n";
    return 2;
  }
  return bad == 0 ? 0 : 1;
}

int cmd_solve(const fs::path& program_file, const std::string& goal_text, int depth) {
  Program program = parse_program(slurp(program_file), program_file.string());
  GoalPtr goal = parse_goal(goal_text);
  Verdict v = solve(program, goal, depth);
  std::cout << verdict_name(v.status) << " (" << v.nodes << " nodes, depth bound " << depth
            << ")\n";
  switch (v.status) {
    case VerdictStatus::Succeeds:
    case VerdictStatus::Fails:
      return 0;
    default:
      return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"starkc: compiles logic programs and their properties into TPTP FOF proof obligations and drives first-order provers over them"};
  app.set_version_flag("--version", std::string("starkc ") + kVersion);
  app.require_subcommand(1);

  // compile
  auto* compile = app.add_subcommand("compile", "translate a program and its facts into .p files");
  std::string c_program, c_facts, c_out;
  std::vector<std::string> c_induct;
  compile->add_option("--program", c_program, "logic program (.pl)")->required();
  compile->add_option("--facts", c_facts, "property file (.pr)")->required();
  compile->add_option("--out", c_out, "output directory")->required();
  compile->add_option("--induct-on", c_induct, "<fact>=<premise-index> induction override");

  // prove
  auto* prove = app.add_subcommand("prove", "run provers over a compiled directory");
  std::string p_out, p_provers = "eprover,vampire", p_timeouts = "1,10,60";
  std::string p_report, p_format = "csv";
  int p_jobs = 7;
  std::vector<std::string> p_induct;
  prove->add_option("--out", p_out, "compiled directory")->required();
  prove->add_option("--provers", p_provers, "comma-separated: eprover,vampire");
  prove->add_option("--timeouts", p_timeouts, "comma-separated seconds, e.g. 1,10,60");
  prove->add_option("--jobs", p_jobs, "max concurrent prover processes");
  prove->add_option("--induct-on", p_induct, "<fact>=<premise-index> induction override");
  prove->add_option("--report", p_report, "write the report to this file");
  prove->add_option("--format", p_format, "report format: csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));

  // check
  auto* check = app.add_subcommand("check", "validate emitted .p files");
  std::string k_out;
  check->add_option("--out", k_out, "compiled directory")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "evaluate a goal with the bounded interpreter");
  std::string s_program, s_goal;
  int s_depth = 20;
  solve_cmd->add_option("--program", s_program, "logic program (.pl)")->required();
  solve_cmd->add_option("--goal", s_goal, "goal in clause-body syntax")->required();
  solve_cmd->add_option("--depth", s_depth, "resolution step bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile->parsed()) return cmd_compile(c_program, c_facts, c_out, c_induct);
    if (prove->parsed()) return cmd_prove(p_out, p_provers, p_timeouts, p_jobs, p_induct,
                                          p_report, p_format);
    if (check->parsed()) return cmd_check(k_out);
    if (solve_cmd->parsed()) return cmd_solve(s_program, s_goal, s_depth);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
