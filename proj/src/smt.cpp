#include "pdsc/smt.hpp"

#include <cctype>
#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace pdsc {

const char *to_string(Tri t) {
  switch (t) {
  case Tri::True:
    return "pass";
  case Tri::False:
    return "fail";
  case Tri::Unknown:
    return "unknown";
  }
  return "?";
}

const char *to_string(SatStatus s) {
  switch (s) {
  case SatStatus::Sat:
    return "sat";
  case SatStatus::Unsat:
    return "unsat";
  case SatStatus::Unknown:
    return "unknown";
  }
  return "?";
}

bool decode_bool(const SExpr &e) {
  if (e.is_symbol("true"))
    return true;
  if (e.is_symbol("false"))
    return false;
  e.fail("expected boolean value, got " + e.to_string());
}

std::int64_t decode_int(const SExpr &e) {
  if (e.is_atom()) {
    try {
      std::size_t used = 0;
      auto v = std::stoll(e.atom, &used);
      if (used == e.atom.size())
        return v;
    } catch (const std::exception &) {
    }
    e.fail("expected integer value, got " + e.atom);
  }
  if (e.head() == "-" && e.items.size() == 2)
    return -decode_int(e.items[1]);
  e.fail("expected integer value, got " + e.to_string());
}

bool SatResult::get_bool(const Var &v) const {
  auto it = model.find(v);
  if (it == model.end())
    throw std::out_of_range("no model value for " + v.display());
  return decode_bool(parse_sexpr(it->second));
}

std::int64_t SatResult::get_int(const Var &v) const {
  auto it = model.find(v);
  if (it == model.end())
    throw std::out_of_range("no model value for " + v.display());
  return decode_int(parse_sexpr(it->second));
}

std::string default_solver_command(const std::optional<std::string> &flag) {
  if (flag && !flag->empty())
    return *flag;
  if (const char *env = std::getenv("PDSC_SOLVER"); env && *env)
    return env;
  return "z3 -in";
}

SolverSession::SolverSession(std::string command, std::string logic, std::optional<std::string> log_path)
    : command_(std::move(command)), logic_(std::move(logic)) {
  std::signal(SIGPIPE, SIG_IGN);
  if (log_path) {
    log_ = std::make_unique<std::ofstream>(*log_path, std::ios::app);
    if (!*log_)
      throw SolverError("cannot open SMT log " + *log_path, "");
    *log_ << "; session: " << command_ << "\n";
  }

  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw SolverError(std::string("pipe: ") + std::strerror(errno), "");
  pid_ = fork();
  if (pid_ < 0)
    throw SolverError(std::string("fork: ") + std::strerror(errno), "");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    std::string sh = "exec " + command_;
    execl("/bin/sh", "sh", "-c", sh.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  scopes_.emplace_back();
  expect_success("(set-option :print-success true)");
  expect_success("(set-option :produce-models true)");
  expect_success("(set-logic " + logic_ + ")");
}

SolverSession::~SolverSession() {
  try {
    close();
  } catch (...) {
  }
}

void SolverSession::close() {
  if (pid_ <= 0)
    return;
  const std::string bye = "(exit)\n";
  [[maybe_unused]] auto n = ::write(to_child_, bye.data(), bye.size());
  log_line("(exit)");
  ::close(to_child_);
  ::close(from_child_);
  int status = 0;
  waitpid(pid_, &status, 0);
  pid_ = -1;
}

void SolverSession::log_line(const std::string &s) {
  if (log_)
    *log_ << s << "\n";
  recent_.push_back(s);
  if (recent_.size() > 40)
    recent_.pop_front();
}

std::string SolverSession::transcript_tail() const {
  std::string out;
  for (const auto &l : recent_)
    out += l + "\n";
  return out;
}

void SolverSession::fail(const std::string &msg) {
  std::string tail = transcript_tail();
  if (pid_ > 0) {
    ::close(to_child_);
    ::close(from_child_);
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  throw SolverError("solver '" + command_ + "': " + msg, tail);
}

int SolverSession::read_char() {
  if (buf_pos_ >= buf_.size()) {
    char tmp[65536];
    ssize_t n;
    do {
      n = ::read(from_child_, tmp, sizeof tmp);
    } while (n < 0 && errno == EINTR);
    if (n <= 0)
      return -1;
    buf_.assign(tmp, static_cast<std::size_t>(n));
    buf_pos_ = 0;
  }
  return static_cast<unsigned char>(buf_[buf_pos_++]);
}

std::string SolverSession::read_response() {
  int c;
  do {
    c = read_char();
  } while (c != -1 && std::isspace(c));
  if (c == -1)
    fail("solver process closed its output");
  std::string out(1, static_cast<char>(c));
  if (c != '(') {
    for (;;) {
      c = read_char();
      if (c == -1 || std::isspace(c))
        break;
      out += static_cast<char>(c);
    }
    return out;
  }
  int depth = 1;
  while (depth > 0) {
    c = read_char();
    if (c == -1)
      fail("truncated reply: " + out);
    out += static_cast<char>(c);
    if (c == '"' || c == '|') {
      const int close = c;
      for (;;) {
        int d = read_char();
        if (d == -1)
          fail("truncated reply: " + out);
        out += static_cast<char>(d);
        if (d == close)
          break;
      }
    } else if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
  }
  return out;
}

std::string SolverSession::send(const std::string &cmd) {
  if (pid_ <= 0)
    throw SolverError("solver session is closed", transcript_tail());
  log_line(cmd);
  std::string line = cmd + "\n";
  const char *p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(to_child_, p, left);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      fail(std::string("write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  std::string reply = read_response();
  if (reply != "success") {
    if (log_)
      *log_ << "; " << reply << "\n";
  }
  if (reply.rfind("(error", 0) == 0)
    fail("error reply to " + cmd.substr(0, 200) + ": " + reply);
  return reply;
}

void SolverSession::expect_success(const std::string &cmd) {
  std::string reply = send(cmd);
  if (reply != "success")
    fail("unexpected reply to " + cmd.substr(0, 200) + ": " + reply);
}

void SolverSession::push() {
  expect_success("(push 1)");
  scopes_.emplace_back();
}

void SolverSession::pop() {
  if (scopes_.size() <= 1)
    throw std::logic_error("pop without matching push");
  expect_success("(pop 1)");
  for (const auto &name : scopes_.back())
    declared_sorts_.erase(name);
  scopes_.pop_back();
}

void SolverSession::declare(const Var &v) {
  std::string name = v.wire_name();
  auto it = declared_sorts_.find(name);
  if (it != declared_sorts_.end()) {
    if (it->second != v.sort)
      throw SortError("symbol " + name + " redeclared with a different sort");
    return;
  }
  expect_success("(declare-const " + name + " " + v.sort.to_wire() + ")");
  declared_sorts_.emplace(name, v.sort);
  scopes_.back().insert(name);
}

void SolverSession::add(const Expr &f) {
  if (!f.is_bool())
    throw SortError("assertion is not boolean: " + f.to_wire());
  for (const auto &v : free_vars(f))
    declare(v);
  expect_success("(assert " + f.to_wire() + ")");
}

SatStatus SolverSession::check() {
  ++queries_;
  std::string reply = send("(check-sat)");
  if (reply == "sat")
    return SatStatus::Sat;
  if (reply == "unsat")
    return SatStatus::Unsat;
  if (reply == "unknown")
    return SatStatus::Unknown;
  fail("unexpected reply to (check-sat): " + reply);
}

std::string SolverSession::reason_unknown() {
  std::string reply = send("(get-info :reason-unknown)");
  try {
    SExpr e = parse_sexpr(reply);
    if (e.is_list && e.items.size() == 2)
      return e.items[1].to_string();
  } catch (const ParseError &) {
  }
  return reply;
}

std::vector<SExpr> SolverSession::term_values(const std::vector<Expr> &terms) {
  if (terms.empty())
    return {};
  std::string cmd = "(get-value (";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i)
      cmd += ' ';
    cmd += terms[i].to_wire();
  }
  cmd += "))";
  std::string reply = send(cmd);
  SExpr e;
  try {
    e = parse_sexpr(reply);
  } catch (const ParseError &err) {
    fail(std::string("malformed get-value reply: ") + err.what());
  }
  if (!e.is_list || e.items.size() != terms.size())
    fail("get-value reply has the wrong shape: " + reply.substr(0, 200));
  std::vector<SExpr> out;
  out.reserve(terms.size());
  for (auto &pair : e.items) {
    if (!pair.is_list || pair.items.size() != 2)
      fail("get-value reply has the wrong shape: " + reply.substr(0, 200));
    out.push_back(pair.items[1]);
  }
  return out;
}

std::map<Var, std::string> SolverSession::values(const std::vector<Var> &vars) {
  std::vector<Expr> terms;
  terms.reserve(vars.size());
  for (const auto &v : vars) {
    declare(v);
    terms.push_back(mk_var(v));
  }
  auto vals = term_values(terms);
  std::map<Var, std::string> out;
  for (std::size_t i = 0; i < vars.size(); ++i)
    out[vars[i]] = vals[i].to_string();
  return out;
}

SatResult SolverSession::check_sat(const std::vector<Expr> &assertions, std::optional<std::vector<Var>> want) {
  SatResult r;
  push();
  try {
    for (const auto &a : assertions)
      add(a);
    r.status = check();
    if (r.status == SatStatus::Sat) {
      if (!want) {
        std::set<Var> all;
        for (const auto &a : assertions)
          for (const auto &v : free_vars(a))
            all.insert(v);
        want = std::vector<Var>(all.begin(), all.end());
      }
      r.model = values(*want);
    } else if (r.status == SatStatus::Unknown) {
      r.reason = reason_unknown();
    }
  } catch (...) {
    if (live())
      pop();
    throw;
  }
  pop();
  return r;
}

Tri SolverSession::is_valid(const Expr &f) {
  SatResult r = check_sat({mk_not(f)}, std::vector<Var>{});
  switch (r.status) {
  case SatStatus::Unsat:
    return Tri::True;
  case SatStatus::Sat:
    return Tri::False;
  default:
    return Tri::Unknown;
  }
}

std::vector<std::vector<bool>> SolverSession::enumerate(const std::vector<Var> &proj, std::size_t cap) {
  for (const auto &v : proj) {
    if (!v.sort.is_bool())
      throw SortError("all-SAT projection variable " + v.display() + " is not boolean");
    declare(v);
  }
  std::vector<std::vector<bool>> out;
  for (;;) {
    SatStatus st = check();
    if (st == SatStatus::Unsat)
      break;
    if (st == SatStatus::Unknown)
      throw ResourceLimitError("solver returned unknown during model enumeration (" + reason_unknown() + ")");
    if (out.size() >= cap)
      throw ResourceLimitError("model enumeration exceeded cap of " + std::to_string(cap));
    std::vector<bool> row;
    row.reserve(proj.size());
    std::vector<Expr> block;
    if (!proj.empty()) {
      std::vector<Expr> terms;
      for (const auto &v : proj)
        terms.push_back(mk_var(v));
      auto vals = term_values(terms);
      for (std::size_t i = 0; i < proj.size(); ++i) {
        bool b = decode_bool(vals[i]);
        row.push_back(b);
        block.push_back(b ? mk_not(terms[i]) : terms[i]);
      }
    }
    out.push_back(std::move(row));
    Expr clause = mk_or(std::move(block));
    expect_success("(assert " + clause.to_wire() + ")");
  }
  return out;
}

std::vector<std::vector<bool>> SolverSession::all_models(const Expr &f, const std::vector<Var> &proj,
                                                         std::size_t cap) {
  push();
  std::vector<std::vector<bool>> out;
  try {
    add(f);
    out = enumerate(proj, cap);
  } catch (...) {
    if (live())
      pop();
    throw;
  }
  pop();
  return out;
}

} // namespace pdsc
