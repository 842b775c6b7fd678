#include "pdsc/report.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace pdsc {

namespace fs = std::filesystem;

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["program"] = program;
  j["verdict"] = verdict;
  j["exit_code"] = exit_code;
  if (!message.empty())
    j["message"] = message;
  j["predicates"] = predicate_list;
  if (wellformed) {
    j["wellformed"] = {{"terminal_stutters", to_string(wellformed->terminal_stutters)},
                       {"self_loop", to_string(wellformed->self_loop)}};
  }
  if (!adequacy.empty())
    j["adequacy"] = adequacy;
  if (!composition.empty()) {
    j["composition"] = composition;
    j["pseudocode"] = pseudocode;
  }
  if (!invariant.empty())
    j["invariant"] = invariant;
  if (check_pair) {
    j["check_pair"] = {{"initiation", to_string(check_pair->initiation)},
                       {"consecution", to_string(check_pair->consecution)},
                       {"safety", to_string(check_pair->safety)},
                       {"coverage", to_string(check_pair->coverage)},
                       {"fairness", to_string(check_pair->fairness)}};
  }
  if (!witness.empty())
    j["witness"] = witness;
  j["metrics"] = {{"iterations", metrics.iterations},
                  {"exclusions", metrics.exclusions},
                  {"unreach_cubes", metrics.unreach_cubes},
                  {"states", metrics.states_explored},
                  {"predicates", predicates},
                  {"solver_queries", metrics.solver_queries},
                  {"wall_ms", metrics.wall_ms}};
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << "program:    " << program << "\n";
  os << "verdict:    " << verdict << "\n";
  if (!message.empty())
    os << "message:    " << message << "\n";
  os << "predicates: " << predicates << "\n";
  if (!adequacy.empty()) {
    os << "adequacy:  ";
    for (const auto &[name, result] : adequacy)
      os << " " << name << " " << result;
    os << "\n";
  }
  if (metrics.iterations) {
    os << "iterations: " << metrics.iterations << "  exclusions: " << metrics.exclusions
       << "  unreach cubes: " << metrics.unreach_cubes << "  states: " << metrics.states_explored << "\n";
    os << "time:       " << std::fixed << std::setprecision(2) << metrics.wall_ms / 1000.0 << " s\n";
  }
  if (!pseudocode.empty())
    os << "composition:\n" << pseudocode;
  if (check_pair) {
    os << "check:      initiation " << to_string(check_pair->initiation) << ", consecution "
       << to_string(check_pair->consecution) << ", safety " << to_string(check_pair->safety) << ", coverage "
       << to_string(check_pair->coverage) << ", fairness " << to_string(check_pair->fairness) << "\n";
  }
  if (!witness.empty()) {
    os << "witness:\n";
    for (std::size_t t = 0; t < witness.size(); ++t) {
      os << "  " << t << ":";
      for (const auto &[name, value] : witness[t])
        os << " " << name << "=" << value;
      os << "\n";
    }
  }
  return os.str();
}

namespace {

void input_error(RunReport &r, const std::string &msg) {
  r.verdict = "input-error";
  r.exit_code = kInputError;
  r.message = msg;
}

std::string program_name(const ProblemFile &pf, const std::string &fallback) {
  return pf.option("name", fallback);
}

} // namespace

std::optional<PredicateSet> prepare(SolverSession &s, const ProblemFile &pf, const RunOptions &opts,
                                    RunReport &report) {
  const auto &ts = pf.system;
  const auto &prop = pf.property;

  report.wellformed = check_wellformed(s, ts);
  if (report.wellformed->undetermined() && !opts.assume_wellformed) {
    input_error(report, "well-formedness undetermined (solver returned unknown)");
    return std::nullopt;
  }
  if (report.wellformed->terminal_stutters == Tri::False) {
    input_error(report, "terminal states have outgoing transitions that change the state");
    return std::nullopt;
  }
  if (report.wellformed->self_loop == Tri::False) {
    input_error(report, "some terminal state has no self-loop");
    return std::nullopt;
  }

  PredicateSet P = merge_predicates(mine_predicates(ts, prop), pf.predicates.value_or(std::vector<Expr>{}));
  report.predicates = P.size();
  for (const auto &p : P.preds())
    report.predicate_list.push_back(p.to_wire());
  if (P.size() > AbstractState::max_width) {
    input_error(report, "more than 64 predicates");
    return std::nullopt;
  }

  std::vector<std::pair<std::string, Expr>> targets{{"pre", prop.pre}, {"post", prop.post}};
  for (int i = 1; i <= prop.k; ++i)
    targets.emplace_back("terminal$" + std::to_string(i), ts.terminal_of(i));
  for (const auto &[name, f] : targets) {
    AdequacyResult a = check_adequacy(s, f, P);
    report.adequacy[name] = to_string(a.adequate);
    if (a.adequate == Tri::Unknown) {
      input_error(report, "adequacy of " + name + " undetermined (solver returned unknown)");
      return std::nullopt;
    }
    if (a.adequate == Tri::False) {
      input_error(report, name + " is not expressible over the predicates; abstract state " +
                              a.splitting_state.value_or("?") + " is split");
      return std::nullopt;
    }
  }
  return P;
}

RunReport run_problem(const ProblemFile &pf, const RunOptions &opts, const IterationObserver &observer) {
  RunReport r;
  r.program = program_name(pf, "problem");
  try {
    SolverSession s(default_solver_command(opts.solver), "ALL", opts.smt_log);
    auto P = prepare(s, pf, opts, r);
    if (!P)
      return r;
    Verdict v = verify(s, pf.system, pf.property, *P, opts.limits, observer);
    r.metrics = v.stats;
    r.message = v.reason;
    r.verdict = to_string(v.kind);
    switch (v.kind) {
    case VerdictKind::Verified:
      r.exit_code = kVerified;
      for (const auto &[M, c] : v.f->conditions())
        r.composition[M.to_string()] = c.to_wire();
      r.pseudocode = render_pseudocode(*v.f);
      r.invariant = v.inv.to_wire();
      break;
    case VerdictKind::NoSolution:
      r.exit_code = kNoSolution;
      if (v.witness) {
        for (const auto &step : v.witness->states) {
          std::map<std::string, std::string> row;
          for (const auto &[var, value] : step)
            row[var.display()] = value;
          r.witness.push_back(std::move(row));
        }
      }
      break;
    case VerdictKind::ResourceLimit:
      r.exit_code = kResourceLimit;
      break;
    }
    r.check_pair = v.check;
    r.verdict_detail = std::move(v);
  } catch (const InternalError &e) {
    r.verdict = "internal-error";
    r.exit_code = kInternalError;
    r.message = e.what();
  } catch (const ResourceLimitError &e) {
    r.verdict = "resource-limit";
    r.exit_code = kResourceLimit;
    r.message = e.what();
  } catch (const SolverError &e) {
    input_error(r, std::string(e.what()) + "\n" + e.transcript());
  } catch (const LiftError &e) {
    input_error(r, e.what());
  }
  return r;
}

RunReport run_file(const std::string &path, const RunOptions &opts) {
  ProblemFile pf;
  try {
    pf = load_problem(path);
  } catch (const InputError &e) {
    RunReport r;
    r.program = fs::path(path).stem().string();
    input_error(r, e.what());
    return r;
  }
  if (!pf.options.count("name"))
    pf.options["name"] = fs::path(path).stem().string();
  return run_problem(pf, opts);
}

RunReport check_file(const std::string &path, const RunOptions &opts) {
  RunReport r;
  r.program = fs::path(path).stem().string();
  try {
    ProblemFile pf = load_problem(path);
    r.program = program_name(pf, r.program);
    SolverSession s(default_solver_command(opts.solver), "ALL", opts.smt_log);
    if (prepare(s, pf, opts, r)) {
      r.verdict = "checked";
      r.exit_code = 0;
    }
  } catch (const InputError &e) {
    input_error(r, e.what());
  } catch (const SolverError &e) {
    input_error(r, std::string(e.what()) + "\n" + e.transcript());
  }
  return r;
}

std::vector<RunReport> run_bench(const std::string &dir, const RunOptions &opts, unsigned jobs) {
  std::vector<std::string> files;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pdsc")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  std::vector<RunReport> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= files.size())
        return;
      rows[i] = run_file(files[i], opts);
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  return rows;
}

std::string bench_table(const std::vector<RunReport> &rows) {
  std::size_t w = 7;
  for (const auto &r : rows)
    w = std::max(w, r.program.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "Program" << " | " << std::setw(14) << "Verdict"
     << " | " << std::setw(8) << "Time(s)" << " | Iterations\n";
  os << std::string(w, '-') << "-+-" << std::string(14, '-') << "-+-" << std::string(8, '-') << "-+-----------\n";
  for (const auto &r : rows) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << r.metrics.wall_ms / 1000.0;
    os << std::left << std::setw(static_cast<int>(w)) << r.program << " | " << std::setw(14) << r.verdict << " | "
       << std::setw(8) << t.str() << " | " << r.metrics.iterations << "\n";
  }
  return os.str();
}

} // namespace pdsc
