#include "qsyn/robust.hpp"

#include <algorithm>
#include <set>

#include "qsyn/compile.hpp"
#include "qsyn/errors.hpp"

namespace qsyn {

FormulaPtr local_err(const std::string& a) {
  return f_chop(f_true(), f_point(prop_not(prop_var(a))));
}

FormulaPtr count_err(const std::string& a, unsigned k) {
  return f_scount(prop_not(prop_var(a)), CmpOp::Gt, k);
}

FormulaPtr burst_err(const std::string& a, unsigned k) {
  return f_and(f_all(prop_not(prop_var(a))), f_slen(CmpOp::Ge, k));
}

FormulaPtr has_burst_err(const std::string& a, unsigned k) {
  return f_diamond(burst_err(a, k));
}

FormulaPtr has_no_recovery(const std::string& a, unsigned b) {
  if (b < 1) throw InterfaceError("recovery period must be positive");
  return f_box(f_implies(f_all(prop_var(a)), f_slen(CmpOp::Lt, b - 1)));
}

FormulaPtr recovery_err(const std::string& a, unsigned b, const FormulaPtr& err) {
  return f_and(err, has_no_recovery(a, b));
}

FormulaPtr never_in_past(const FormulaPtr& err) { return f_not(f_diamond(err)); }

FormulaPtr never_in_suffix(const FormulaPtr& err) {
  return f_not(f_chop(f_true(), err));
}

FormulaPtr never_in_past_len(unsigned b, const FormulaPtr& err) {
  if (b < 1) throw InterfaceError("scope window must be positive");
  return f_not(f_diamond(f_and(f_slen(CmpOp::Le, b - 1), err)));
}

FormulaPtr never_in_suffix_len(unsigned b, const FormulaPtr& err) {
  if (b < 1) throw InterfaceError("scope window must be positive");
  return f_not(f_chop(f_true(), f_and(f_slen(CmpOp::Le, b - 1), err)));
}

const char* to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AssumeFalse: return "AssumeFalse";
    case CriterionKind::BeCorrect: return "BeCorrect";
    case CriterionKind::BeCurrentlyCorrect: return "BeCurrentlyCorrect";
    case CriterionKind::ResCnt: return "ResCnt";
    case CriterionKind::ResCntInt: return "ResCntInt";
    case CriterionKind::ResBurst: return "ResBurst";
    case CriterionKind::ResBurstInt: return "ResBurstInt";
    case CriterionKind::LenCnt: return "LenCnt";
    case CriterionKind::LenCntInt: return "LenCntInt";
    case CriterionKind::LenBurst: return "LenBurst";
    case CriterionKind::LenBurstInt: return "LenBurstInt";
    case CriterionKind::AssumeTrue: return "AssumeTrue";
  }
  return "?";
}

std::optional<CriterionKind> criterion_kind_by_name(const std::string& name) {
  for (CriterionKind k : all_criterion_kinds())
    if (name == to_string(k)) return k;
  return std::nullopt;
}

bool criterion_takes_parameters(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::AssumeFalse:
    case CriterionKind::BeCorrect:
    case CriterionKind::BeCurrentlyCorrect:
    case CriterionKind::AssumeTrue:
      return false;
    default:
      return true;
  }
}

std::vector<CriterionKind> all_criterion_kinds() {
  return {CriterionKind::AssumeFalse, CriterionKind::BeCorrect,
          CriterionKind::BeCurrentlyCorrect, CriterionKind::ResCnt,
          CriterionKind::ResCntInt, CriterionKind::ResBurst,
          CriterionKind::ResBurstInt, CriterionKind::LenCnt,
          CriterionKind::LenCntInt, CriterionKind::LenBurst,
          CriterionKind::LenBurstInt, CriterionKind::AssumeTrue};
}

std::string criterion_label(const Criterion& c) {
  std::string s = to_string(c.kind);
  if (criterion_takes_parameters(c.kind))
    s += "(" + std::to_string(c.k) + "," + std::to_string(c.b) + ")";
  return s;
}

FormulaPtr criterion_formula(const Criterion& c, const std::string& a) {
  switch (c.kind) {
    case CriterionKind::AssumeFalse:
      return f_false();
    case CriterionKind::BeCorrect:
      return never_in_past(local_err(a));
    case CriterionKind::BeCurrentlyCorrect:
      return never_in_suffix(local_err(a));
    case CriterionKind::ResCnt:
      return never_in_past(recovery_err(a, c.b, count_err(a, c.k)));
    case CriterionKind::ResCntInt:
      return never_in_suffix(recovery_err(a, c.b, count_err(a, c.k)));
    case CriterionKind::ResBurst:
      return never_in_past(recovery_err(a, c.b, has_burst_err(a, c.k)));
    case CriterionKind::ResBurstInt:
      return never_in_suffix(recovery_err(a, c.b, has_burst_err(a, c.k)));
    case CriterionKind::LenCnt:
      return never_in_past_len(c.b, count_err(a, c.k));
    case CriterionKind::LenCntInt:
      return never_in_suffix_len(c.b, count_err(a, c.k));
    case CriterionKind::LenBurst:
      return never_in_past_len(c.b, has_burst_err(a, c.k));
    case CriterionKind::LenBurstInt:
      return never_in_suffix_len(c.b, has_burst_err(a, c.k));
    case CriterionKind::AssumeTrue:
      return f_true();
  }
  return f_true();
}

FormulaPtr cascade(const FormulaPtr& d,
                   const std::vector<std::pair<FormulaPtr, std::string>>& bindings) {
  std::set<std::string> used;
  for (const auto& v : free_vars(d)) used.insert(v);
  for (const auto& [di, wi] : bindings)
    for (const auto& v : free_vars(di)) used.insert(v);
  std::set<std::string> indicators;
  for (const auto& [di, wi] : bindings) {
    if (used.count(wi))
      throw InterfaceError("indicator collides with existing variable: " + wi);
    if (!indicators.insert(wi).second)
      throw InterfaceError("duplicate indicator variable: " + wi);
  }
  FormulaPtr out = d;
  for (const auto& [di, wi] : bindings)
    out = f_and(out, f_pref(f_iff(f_ep(prop_var(wi)), di)));
  return out;
}

LoweredSpec lower(const RobustSpec& spec, const std::vector<std::string>& inputs,
                  const std::vector<std::string>& outputs) {
  const std::string& a = spec.indicator;
  for (const auto& f : {spec.assumption, spec.commitment})
    for (const auto& v : free_vars(f))
      if (v == a) throw InterfaceError("indicator collides with existing variable: " + a);
  if (std::find(inputs.begin(), inputs.end(), a) != inputs.end() ||
      std::find(outputs.begin(), outputs.end(), a) != outputs.end())
    throw InterfaceError("indicator collides with declared variable: " + a);

  LoweredSpec out;
  out.inputs = inputs;
  out.outputs = outputs;
  out.outputs.push_back(a);
  FormulaPtr rb = criterion_formula(spec.criterion, a);
  // The indicator binding is a hard constraint of its own; the commitment
  // is owed exactly where the relaxed assumption holds.
  out.hard = f_and(f_implies(rb, spec.commitment),
                   f_pref(f_iff(f_ep(prop_var(a)), spec.assumption)));
  out.soft = spec.commitment;
  return out;
}

std::vector<ImplicationResult> lattice_check(
    const std::vector<std::pair<Criterion, Criterion>>& pairs) {
  std::vector<ImplicationResult> results;
  results.reserve(pairs.size());
  const std::string a = "A";
  Alphabet env{{a}};
  for (const auto& [lhs, rhs] : pairs) {
    ImplicationResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    FormulaPtr impl = f_implies(criterion_formula(lhs, a), criterion_formula(rhs, a));
    Dfa bad = compile(f_not(impl), env);
    auto witness = shortest_accepted(bad);
    r.valid = !witness.has_value();
    if (witness)
      for (uint32_t letter : *witness) r.counterexample.push_back((letter & 1u) != 0);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<std::pair<Criterion, Criterion>> lattice_edges(unsigned k, unsigned b) {
  using K = CriterionKind;
  auto c = [&](K kind) { return Criterion{kind, k, b}; };
  return {
      {c(K::AssumeFalse), c(K::BeCorrect)},
      {c(K::BeCorrect), c(K::ResCnt)},
      {c(K::BeCorrect), c(K::BeCurrentlyCorrect)},
      {c(K::ResCnt), c(K::LenCnt)},
      {c(K::ResCnt), c(K::ResCntInt)},
      {c(K::LenCnt), c(K::ResBurst)},
      {c(K::LenCnt), c(K::LenCntInt)},
      {c(K::ResCntInt), c(K::ResBurstInt)},
      {c(K::ResCntInt), c(K::LenCntInt)},
      {c(K::ResBurst), c(K::ResBurstInt)},
      {c(K::ResBurstInt), c(K::LenBurstInt)},
      {c(K::LenCntInt), c(K::LenBurstInt)},
      {c(K::LenBurstInt), c(K::AssumeTrue)},
      {c(K::BeCurrentlyCorrect), c(K::AssumeTrue)},
  };
}

}  // namespace qsyn
