#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsyn/dfa.hpp"
#include "qsyn/formula.hpp"

namespace qsyn {

// ---------------------------------------------------------------------------
// Error-type formulas: interval patterns of assumption violation, over an
// indicator variable that is true exactly where the assumption holds.
// ---------------------------------------------------------------------------

FormulaPtr local_err(const std::string& a);                 // true^<!a>
FormulaPtr count_err(const std::string& a, unsigned k);     // scount !a > k
FormulaPtr burst_err(const std::string& a, unsigned k);     // [[!a]] && slen >= k
FormulaPtr has_burst_err(const std::string& a, unsigned k); // <>BurstErr
FormulaPtr has_no_recovery(const std::string& a, unsigned b);  // []([[a]] => slen < b-1)
FormulaPtr recovery_err(const std::string& a, unsigned b, const FormulaPtr& err);

// ---------------------------------------------------------------------------
// Error-scope formulas: where violations are forbidden.
// ---------------------------------------------------------------------------

FormulaPtr never_in_past(const FormulaPtr& err);                    // !<>Err
FormulaPtr never_in_suffix(const FormulaPtr& err);                  // !(true^Err)
FormulaPtr never_in_past_len(unsigned b, const FormulaPtr& err);    // bounded window
FormulaPtr never_in_suffix_len(unsigned b, const FormulaPtr& err);

// ---------------------------------------------------------------------------
// The robustness criteria catalog
// ---------------------------------------------------------------------------

enum class CriterionKind {
  AssumeFalse,
  BeCorrect,
  BeCurrentlyCorrect,
  ResCnt,
  ResCntInt,
  ResBurst,
  ResBurstInt,
  LenCnt,
  LenCntInt,
  LenBurst,
  LenBurstInt,
  AssumeTrue,
};

struct Criterion {
  CriterionKind kind;
  unsigned k = 1;
  unsigned b = 1;
};

const char* to_string(CriterionKind kind);
std::optional<CriterionKind> criterion_kind_by_name(const std::string& name);
bool criterion_takes_parameters(CriterionKind kind);
std::vector<CriterionKind> all_criterion_kinds();
std::string criterion_label(const Criterion& c);

// The criterion's formula template over an indicator variable.
FormulaPtr criterion_formula(const Criterion& c, const std::string& a);

// ---------------------------------------------------------------------------
// Cascade composition and robust-spec lowering
// ---------------------------------------------------------------------------

// D << <Ind(D_1,w_1), ...> = D && /\ pref(EP(w_i) <=> D_i).
// Indicator names must be fresh with respect to the free variables of every
// formula involved, and pairwise distinct.
FormulaPtr cascade(const FormulaPtr& d,
                   const std::vector<std::pair<FormulaPtr, std::string>>& bindings);

struct RobustSpec {
  FormulaPtr assumption;   // D_A over (I, O)
  FormulaPtr commitment;   // D_C over (I, O)
  Criterion criterion;
  std::string indicator = "A";
};

struct LoweredSpec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  // includes the indicator
  FormulaPtr hard;
  FormulaPtr soft;
};

// Produces the synthesis problem: the indicator becomes an output bound to
// the assumption by a hard cascade constraint, the commitment must hold
// whenever the relaxed assumption does, and the commitment itself is the
// soft requirement.
//   hard = (Rb(A) => D_C) && pref(EP(A) <=> D_A),  soft = D_C
LoweredSpec lower(const RobustSpec& spec, const std::vector<std::string>& inputs,
                  const std::vector<std::string>& outputs);

// ---------------------------------------------------------------------------
// Implication-lattice verification
// ---------------------------------------------------------------------------

struct ImplicationResult {
  Criterion lhs;
  Criterion rhs;
  bool valid = false;
  // shortest indicator word violating lhs => rhs, when invalid
  std::vector<bool> counterexample;
};

// Checks validity(lhs => rhs) over the one-variable indicator alphabet for
// each pair, extracting a counterexample word when the implication fails.
std::vector<ImplicationResult> lattice_check(
    const std::vector<std::pair<Criterion, Criterion>>& pairs);

// The implication lattice edges (lower criterion implies higher), with the
// two parameters instantiated at (k, b).
std::vector<std::pair<Criterion, Criterion>> lattice_edges(unsigned k, unsigned b);

}  // namespace qsyn
