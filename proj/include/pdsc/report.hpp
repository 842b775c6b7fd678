#pragma once

#include "pdsc/engine.hpp"
#include "pdsc/problem.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pdsc {

enum ExitCode { kVerified = 0, kNoSolution = 1, kInputError = 2, kResourceLimit = 3, kInternalError = 4 };

struct RunOptions {
  std::optional<std::string> solver;
  std::optional<std::string> smt_log;
  EngineLimits limits;
  bool assume_wellformed = false;
};

struct RunReport {
  std::string program;
  std::string verdict; // verified | no-solution | resource-limit | input-error | internal-error | checked
  int exit_code = kInputError;
  std::string message;

  std::size_t predicates = 0;
  std::vector<std::string> predicate_list;
  std::optional<WellformedReport> wellformed;
  std::map<std::string, std::string> adequacy; // formula name -> pass/fail/unknown

  std::map<std::string, std::string> composition; // "{1,2}" -> wire formula
  std::string pseudocode;
  std::string invariant;
  std::optional<CheckPairReport> check_pair;
  std::optional<Verdict> verdict_detail;
  std::vector<std::map<std::string, std::string>> witness;

  EngineStats metrics;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Well-formedness, adequacy and predicate setup for a parsed problem.  Fills
/// the report and returns the predicate set, or nullopt after recording an
/// input error in the report.
std::optional<PredicateSet> prepare(SolverSession &s, const ProblemFile &pf, const RunOptions &opts,
                                    RunReport &report);

/// The full pipeline on a parsed problem.
RunReport run_problem(const ProblemFile &pf, const RunOptions &opts, const IterationObserver &observer = {});

/// Loads, runs, and maps every failure to an exit code.
RunReport run_file(const std::string &path, const RunOptions &opts);

/// Well-formedness and adequacy only.
RunReport check_file(const std::string &path, const RunOptions &opts);

/// Runs every `.pdsc` file in `dir` with `jobs` workers; rows sorted by name.
std::vector<RunReport> run_bench(const std::string &dir, const RunOptions &opts, unsigned jobs);

/// `Program | Verdict | Time(s) | Iterations` table.
std::string bench_table(const std::vector<RunReport> &rows);

} // namespace pdsc
