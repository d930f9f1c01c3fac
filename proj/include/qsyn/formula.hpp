#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qsyn {

// ---------------------------------------------------------------------------
// Propositional layer
// ---------------------------------------------------------------------------

enum class PropKind { False, True, Var, Not, And, Or, Implies, Iff };

struct Prop;
using PropPtr = std::shared_ptr<const Prop>;

struct Prop {
  PropKind kind;
  std::string var;   // Var
  PropPtr lhs, rhs;  // Not uses lhs only
};

PropPtr prop_false();
PropPtr prop_true();
PropPtr prop_var(std::string name);
PropPtr prop_not(PropPtr a);
PropPtr prop_and(PropPtr a, PropPtr b);
PropPtr prop_or(PropPtr a, PropPtr b);
PropPtr prop_implies(PropPtr a, PropPtr b);
PropPtr prop_iff(PropPtr a, PropPtr b);

bool prop_equal(const PropPtr& a, const PropPtr& b);
void collect_prop_vars(const PropPtr& p, std::vector<std::string>& out);
PropPtr subst_prop_vars(const PropPtr& p, const std::map<std::string, std::string>& ren);
std::string to_string(const PropPtr& p);

// ---------------------------------------------------------------------------
// Comparison operators used by the counting terms
// ---------------------------------------------------------------------------

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

bool cmp_eval(CmpOp op, long lhs, long rhs);
const char* to_string(CmpOp op);

// ---------------------------------------------------------------------------
// Interval formulas
//
// The first group of kinds is the core language; everything after FalseF is
// surface sugar that desugar() rewrites away.  Call nodes are unexpanded
// references to user macros inside spec-file templates and are removed by
// spec expansion, never by desugar().
// ---------------------------------------------------------------------------

enum class FormulaKind {
  // core
  Point,       // <phi>    : b == e and phi at b
  AllButLast,  // [phi]    : b < e and phi on [b, e)
  All,         // [[phi]]  : phi on [b, e]
  Unit,        // {{phi}}  : e == b+1 and phi at b
  Chop,        // D1 ^ D2  : split with one shared point
  Not,
  And,
  Or,
  Ex,    // ex p. D
  AllQ,  // all p. D
  SLen,
  SCount,
  SDur,
  TrueF,
  // sugar
  FalseF,
  Implies,
  Iff,
  Pt,       // <true>
  Ext,      // !pt
  Diamond,  // <>D = true^D^true
  Box,      // []D = !<>!D
  Pref,     // pref(D) = !((!D)^true)
  EP,       // EP(phi) = true^<phi>
  KBounded, // KBOUNDED(D,n): D on the whole interval while shorter than n,
            // afterwards on the suffix window of length n
  // spec-template macro call
  Call,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  PropPtr prop;            // Point/AllButLast/All/Unit/SCount/SDur/EP
  FormulaPtr lhs, rhs;     // binary nodes; unary nodes use lhs
  std::string var;         // Ex/AllQ binder, Call target
  CmpOp cmp = CmpOp::Eq;   // SLen/SCount/SDur
  unsigned bound = 0;      // comparison constant, KBounded window
  std::vector<std::string> args;  // Call arguments (variable names)
};

FormulaPtr f_point(PropPtr p);
FormulaPtr f_all_but_last(PropPtr p);
FormulaPtr f_all(PropPtr p);
FormulaPtr f_unit(PropPtr p);
FormulaPtr f_chop(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_ex(std::string var, FormulaPtr a);
FormulaPtr f_allq(std::string var, FormulaPtr a);
FormulaPtr f_slen(CmpOp op, unsigned c);
FormulaPtr f_scount(PropPtr p, CmpOp op, unsigned c);
FormulaPtr f_sdur(PropPtr p, CmpOp op, unsigned c);
FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_pt();
FormulaPtr f_ext();
FormulaPtr f_diamond(FormulaPtr a);
FormulaPtr f_box(FormulaPtr a);
FormulaPtr f_pref(FormulaPtr a);
FormulaPtr f_ep(PropPtr p);
FormulaPtr f_kbounded(FormulaPtr a, unsigned window);
FormulaPtr f_call(std::string name, std::vector<std::string> args);

// Rewrites all sugar into the core kinds.  Total on Call-free input and
// idempotent.  Throws ParseError on Call nodes.
FormulaPtr desugar(const FormulaPtr& f);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

// Free variables in first-occurrence order (quantifiers bind).
std::vector<std::string> free_vars(const FormulaPtr& f);

// Renames free variables; bound occurrences shadow the map.
FormulaPtr subst_free_vars(const FormulaPtr& f,
                           const std::map<std::string, std::string>& ren);

// Canonical printer; parse_formula(to_string(f)) reproduces f.
std::string to_string(const FormulaPtr& f);

bool is_valid_identifier(const std::string& name);

}  // namespace qsyn
