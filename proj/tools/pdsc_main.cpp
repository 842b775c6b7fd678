#include "pdsc/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

namespace {

void add_run_flags(CLI::App *cmd, pdsc::RunOptions &o, std::string &solver, std::string &smt_log) {
  cmd->add_option("--solver", solver, "solver command (default: $PDSC_SOLVER, then 'z3 -in')");
  cmd->add_option("--smt-log", smt_log, "append the SMT-LIB2 transcript to this file");
  cmd->add_option("--max-iters", o.limits.max_iters, "stop after N candidate compositions");
  cmd->add_option("--timeout-secs", o.limits.timeout_secs, "wall-clock limit per problem");
  cmd->add_option("--max-abstract-states", o.limits.max_abstract_states, "abstract state cap per reachability call");
  cmd->add_flag("--bmc-each-cex", o.limits.bmc_each_cex, "check every counterexample concretely");
  cmd->add_flag("--assume-wellformed", o.assume_wellformed, "proceed when well-formedness is undetermined");
}

void finalize(pdsc::RunOptions &o, const std::string &solver, const std::string &smt_log) {
  if (!solver.empty())
    o.solver = solver;
  if (!smt_log.empty())
    o.smt_log = smt_log;
}

bool write_json(const std::string &path, const nlohmann::json &j) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return false;
  }
  out << j.dump(2) << "\n";
  return true;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"pdsc: infer self-compositions and invariants for k-safety properties"};
  app.require_subcommand(1);

  pdsc::RunOptions opts;
  std::string solver, smt_log, json_path, file, dir, dump;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());

  auto *verify = app.add_subcommand("verify", "verify one problem file");
  verify->add_option("file", file, "problem file")->required();
  verify->add_option("--json", json_path, "write the report as JSON");
  verify->add_option("--dump-absgraph", dump, "write the last explored abstract graph as DOT");
  add_run_flags(verify, opts, solver, smt_log);

  auto *bench = app.add_subcommand("bench", "run every .pdsc file in a directory");
  bench->add_option("dir", dir, "benchmark directory")->required();
  bench->add_option("--jobs", jobs, "parallel workers");
  bench->add_option("--json", json_path, "write all reports as a JSON array");
  add_run_flags(bench, opts, solver, smt_log);

  auto *check = app.add_subcommand("check", "well-formedness and adequacy only");
  check->add_option("file", file, "problem file")->required();
  check->add_option("--solver", solver, "solver command");
  check->add_option("--json", json_path, "write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : pdsc::kInputError;
  }
  finalize(opts, solver, smt_log);
  if (!dump.empty())
    opts.limits.dump_absgraph = dump;

  if (*verify || *check) {
    pdsc::RunReport r = *verify ? pdsc::run_file(file, opts) : pdsc::check_file(file, opts);
    std::cout << r.to_text();
    if (!json_path.empty() && !write_json(json_path, r.to_json()))
      return pdsc::kInputError;
    return r.exit_code;
  }

  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "not a directory: " << dir << "\n";
    return pdsc::kInputError;
  }
  auto rows = pdsc::run_bench(dir, opts, jobs);
  std::cout << pdsc::bench_table(rows);
  if (!json_path.empty()) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto &r : rows)
      all.push_back(r.to_json());
    if (!write_json(json_path, all))
      return pdsc::kInputError;
  }
  return 0;
}
