#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsyn/formula.hpp"

namespace qsyn {

// A parsed spec file with user macros retained as templates.
struct SpecFile {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::map<std::string, unsigned> constants;

  struct Definition {
    std::vector<std::string> params;
    FormulaPtr body;  // may contain Call nodes
  };
  std::map<std::string, Definition> definitions;

  // indicator bindings from the indefinitions block, in declaration order
  std::vector<std::pair<std::string, FormulaPtr>> indicator_defs;

  std::vector<std::string> hard_useind;
  std::vector<std::string> soft_useind;
  FormulaPtr hard_req;
  FormulaPtr soft_req;

  const FormulaPtr* indicator_def(const std::string& name) const;
};

// Parses a spec file; macros stay unexpanded, constants are folded.
SpecFile parse_spec(const std::string& text);

// Parses a standalone formula.  All free variables must be in env.  Bare
// variables in formula position are read as EP(var); `true`/`false` in
// formula position are the any-interval / empty formulas.
FormulaPtr parse_formula(const std::string& text, const std::vector<std::string>& env,
                         const std::map<std::string, unsigned>& constants = {});

struct ExpandedSpec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  FormulaPtr hard;
  FormulaPtr soft;
};

// Inlines every macro call, conjoins the useind indicator constraints
// (pref(EP(w) <=> D_w)) onto the requirement that imports them, and checks
// that no free variable escapes the declared interface.
ExpandedSpec expand(const SpecFile& spec);

}  // namespace qsyn
