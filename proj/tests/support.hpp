#pragma once

#include "pdsc/report.hpp"

#include <string>

namespace testing {

inline std::string source_path(const std::string &rel) { return std::string(PDSC_SOURCE_DIR) + "/" + rel; }

inline pdsc::ProblemFile load(const std::string &rel) { return pdsc::load_problem(source_path(rel)); }

inline pdsc::Var iv(const std::string &name, int copy) { return pdsc::Var(name, pdsc::Sort::int_sort(), copy); }
inline pdsc::Var bv(const std::string &name, int copy) { return pdsc::Var(name, pdsc::Sort::bool_sort(), copy); }
inline pdsc::Expr x(const std::string &name, int copy) { return pdsc::mk_var(iv(name, copy)); }

// Parses a formula in the input syntax against the system variables of `pf`.
inline pdsc::Expr formula(const pdsc::ProblemFile &pf, const std::string &text) {
  return pdsc::parse_formula(pdsc::parse_sexpr(text), pf.system.vars, false, pf.property.k);
}

} // namespace testing
