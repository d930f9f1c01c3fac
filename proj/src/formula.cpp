#include "qsyn/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "qsyn/errors.hpp"

namespace qsyn {

namespace {

PropPtr mk_prop(PropKind k, std::string v = {}, PropPtr l = nullptr,
                PropPtr r = nullptr) {
  auto p = std::make_shared<Prop>();
  p->kind = k;
  p->var = std::move(v);
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

std::shared_ptr<Formula> mk(FormulaKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

}  // namespace

PropPtr prop_false() {
  static const PropPtr p = mk_prop(PropKind::False);
  return p;
}
PropPtr prop_true() {
  static const PropPtr p = mk_prop(PropKind::True);
  return p;
}
PropPtr prop_var(std::string name) { return mk_prop(PropKind::Var, std::move(name)); }
PropPtr prop_not(PropPtr a) { return mk_prop(PropKind::Not, {}, std::move(a)); }
PropPtr prop_and(PropPtr a, PropPtr b) {
  return mk_prop(PropKind::And, {}, std::move(a), std::move(b));
}
PropPtr prop_or(PropPtr a, PropPtr b) {
  return mk_prop(PropKind::Or, {}, std::move(a), std::move(b));
}
PropPtr prop_implies(PropPtr a, PropPtr b) {
  return mk_prop(PropKind::Implies, {}, std::move(a), std::move(b));
}
PropPtr prop_iff(PropPtr a, PropPtr b) {
  return mk_prop(PropKind::Iff, {}, std::move(a), std::move(b));
}

bool prop_equal(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case PropKind::False:
    case PropKind::True:
      return true;
    case PropKind::Var:
      return a->var == b->var;
    case PropKind::Not:
      return prop_equal(a->lhs, b->lhs);
    default:
      return prop_equal(a->lhs, b->lhs) && prop_equal(a->rhs, b->rhs);
  }
}

void collect_prop_vars(const PropPtr& p, std::vector<std::string>& out) {
  if (!p) return;
  if (p->kind == PropKind::Var) {
    if (std::find(out.begin(), out.end(), p->var) == out.end()) out.push_back(p->var);
    return;
  }
  collect_prop_vars(p->lhs, out);
  collect_prop_vars(p->rhs, out);
}

PropPtr subst_prop_vars(const PropPtr& p, const std::map<std::string, std::string>& ren) {
  if (!p) return p;
  switch (p->kind) {
    case PropKind::False:
    case PropKind::True:
      return p;
    case PropKind::Var: {
      auto it = ren.find(p->var);
      return it == ren.end() ? p : prop_var(it->second);
    }
    case PropKind::Not:
      return prop_not(subst_prop_vars(p->lhs, ren));
    case PropKind::And:
      return prop_and(subst_prop_vars(p->lhs, ren), subst_prop_vars(p->rhs, ren));
    case PropKind::Or:
      return prop_or(subst_prop_vars(p->lhs, ren), subst_prop_vars(p->rhs, ren));
    case PropKind::Implies:
      return prop_implies(subst_prop_vars(p->lhs, ren), subst_prop_vars(p->rhs, ren));
    case PropKind::Iff:
      return prop_iff(subst_prop_vars(p->lhs, ren), subst_prop_vars(p->rhs, ren));
  }
  return p;
}

namespace {

// Propositional precedence, loosest first: <=> => || && ! atom
int prop_prec(PropKind k) {
  switch (k) {
    case PropKind::Iff: return 0;
    case PropKind::Implies: return 1;
    case PropKind::Or: return 2;
    case PropKind::And: return 3;
    case PropKind::Not: return 4;
    default: return 5;
  }
}

void print_prop(std::ostringstream& os, const PropPtr& p, int parent_prec) {
  int prec = prop_prec(p->kind);
  bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (p->kind) {
    case PropKind::False: os << "false"; break;
    case PropKind::True: os << "true"; break;
    case PropKind::Var: os << p->var; break;
    case PropKind::Not:
      os << '!';
      print_prop(os, p->lhs, prec + 1);
      break;
    case PropKind::And:
      print_prop(os, p->lhs, prec);
      os << " && ";
      print_prop(os, p->rhs, prec + 1);
      break;
    case PropKind::Or:
      print_prop(os, p->lhs, prec);
      os << " || ";
      print_prop(os, p->rhs, prec + 1);
      break;
    case PropKind::Implies:
      print_prop(os, p->lhs, prec + 1);
      os << " => ";
      print_prop(os, p->rhs, prec);
      break;
    case PropKind::Iff:
      print_prop(os, p->lhs, prec);
      os << " <=> ";
      print_prop(os, p->rhs, prec + 1);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const PropPtr& p) {
  std::ostringstream os;
  print_prop(os, p, 0);
  return os.str();
}

bool cmp_eval(CmpOp op, long lhs, long rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

FormulaPtr f_point(PropPtr p) {
  auto f = mk(FormulaKind::Point);
  f->prop = std::move(p);
  return f;
}
FormulaPtr f_all_but_last(PropPtr p) {
  auto f = mk(FormulaKind::AllButLast);
  f->prop = std::move(p);
  return f;
}
FormulaPtr f_all(PropPtr p) {
  auto f = mk(FormulaKind::All);
  f->prop = std::move(p);
  return f;
}
FormulaPtr f_unit(PropPtr p) {
  auto f = mk(FormulaKind::Unit);
  f->prop = std::move(p);
  return f;
}
FormulaPtr f_chop(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FormulaKind::Chop);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_not(FormulaPtr a) {
  auto f = mk(FormulaKind::Not);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FormulaKind::And);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FormulaKind::Or);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_ex(std::string var, FormulaPtr a) {
  auto f = mk(FormulaKind::Ex);
  f->var = std::move(var);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_allq(std::string var, FormulaPtr a) {
  auto f = mk(FormulaKind::AllQ);
  f->var = std::move(var);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_slen(CmpOp op, unsigned c) {
  auto f = mk(FormulaKind::SLen);
  f->cmp = op;
  f->bound = c;
  return f;
}
FormulaPtr f_scount(PropPtr p, CmpOp op, unsigned c) {
  auto f = mk(FormulaKind::SCount);
  f->prop = std::move(p);
  f->cmp = op;
  f->bound = c;
  return f;
}
FormulaPtr f_sdur(PropPtr p, CmpOp op, unsigned c) {
  auto f = mk(FormulaKind::SDur);
  f->prop = std::move(p);
  f->cmp = op;
  f->bound = c;
  return f;
}
FormulaPtr f_true() {
  static const FormulaPtr f = mk(FormulaKind::TrueF);
  return f;
}
FormulaPtr f_false() {
  static const FormulaPtr f = mk(FormulaKind::FalseF);
  return f;
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FormulaKind::Implies);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  auto f = mk(FormulaKind::Iff);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_pt() {
  static const FormulaPtr f = mk(FormulaKind::Pt);
  return f;
}
FormulaPtr f_ext() {
  static const FormulaPtr f = mk(FormulaKind::Ext);
  return f;
}
FormulaPtr f_diamond(FormulaPtr a) {
  auto f = mk(FormulaKind::Diamond);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_box(FormulaPtr a) {
  auto f = mk(FormulaKind::Box);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_pref(FormulaPtr a) {
  auto f = mk(FormulaKind::Pref);
  f->lhs = std::move(a);
  return f;
}
FormulaPtr f_ep(PropPtr p) {
  auto f = mk(FormulaKind::EP);
  f->prop = std::move(p);
  return f;
}
FormulaPtr f_kbounded(FormulaPtr a, unsigned window) {
  auto f = mk(FormulaKind::KBounded);
  f->lhs = std::move(a);
  f->bound = window;
  return f;
}
FormulaPtr f_call(std::string name, std::vector<std::string> args) {
  auto f = mk(FormulaKind::Call);
  f->var = std::move(name);
  f->args = std::move(args);
  return f;
}

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Point:
    case FormulaKind::AllButLast:
    case FormulaKind::All:
    case FormulaKind::Unit:
    case FormulaKind::SLen:
    case FormulaKind::SCount:
    case FormulaKind::SDur:
    case FormulaKind::TrueF:
      return f;
    case FormulaKind::Chop:
      return f_chop(desugar(f->lhs), desugar(f->rhs));
    case FormulaKind::Not:
      return f_not(desugar(f->lhs));
    case FormulaKind::And:
      return f_and(desugar(f->lhs), desugar(f->rhs));
    case FormulaKind::Or:
      return f_or(desugar(f->lhs), desugar(f->rhs));
    case FormulaKind::Ex:
      return f_ex(f->var, desugar(f->lhs));
    case FormulaKind::AllQ:
      return f_allq(f->var, desugar(f->lhs));
    case FormulaKind::FalseF:
      return f_not(f_true());
    case FormulaKind::Implies:
      return f_or(f_not(desugar(f->lhs)), desugar(f->rhs));
    case FormulaKind::Iff: {
      FormulaPtr a = desugar(f->lhs), b = desugar(f->rhs);
      return f_and(f_or(f_not(a), b), f_or(f_not(b), a));
    }
    case FormulaKind::Pt:
      return f_point(prop_true());
    case FormulaKind::Ext:
      return f_not(f_point(prop_true()));
    case FormulaKind::Diamond:
      return f_chop(f_true(), f_chop(desugar(f->lhs), f_true()));
    case FormulaKind::Box:
      return f_not(f_chop(f_true(), f_chop(f_not(desugar(f->lhs)), f_true())));
    case FormulaKind::Pref:
      return f_not(f_chop(f_not(desugar(f->lhs)), f_true()));
    case FormulaKind::EP:
      return f_chop(f_true(), f_point(f->prop));
    case FormulaKind::KBounded: {
      // (slen < n => D) && (true^slen=n => true^(slen=n && D))
      FormulaPtr d = desugar(f->lhs);
      unsigned n = f->bound;
      FormulaPtr shorter = f_or(f_not(f_slen(CmpOp::Lt, n)), d);
      FormulaPtr window = f_or(f_not(f_chop(f_true(), f_slen(CmpOp::Eq, n))),
                               f_chop(f_true(), f_and(f_slen(CmpOp::Eq, n), d)));
      return f_and(shorter, window);
    }
    case FormulaKind::Call:
      throw ParseError("unexpanded macro call: " + f->var);
  }
  return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->var != b->var || a->cmp != b->cmp || a->bound != b->bound ||
      a->args != b->args)
    return false;
  if (!prop_equal(a->prop, b->prop)) return false;
  if ((a->lhs == nullptr) != (b->lhs == nullptr)) return false;
  if (a->lhs && !formula_equal(a->lhs, b->lhs)) return false;
  if ((a->rhs == nullptr) != (b->rhs == nullptr)) return false;
  if (a->rhs && !formula_equal(a->rhs, b->rhs)) return false;
  return true;
}

namespace {

void free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                   std::vector<std::string>& out) {
  if (!f) return;
  auto add = [&](const std::string& v) {
    if (bound.count(v)) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (f->prop) {
    std::vector<std::string> pv;
    collect_prop_vars(f->prop, pv);
    for (auto& v : pv) add(v);
  }
  if (f->kind == FormulaKind::Ex || f->kind == FormulaKind::AllQ) {
    bool was_bound = bound.count(f->var) > 0;
    bound.insert(f->var);
    free_vars_rec(f->lhs, bound, out);
    if (!was_bound) bound.erase(f->var);
    return;
  }
  if (f->kind == FormulaKind::Call)
    for (auto& v : f->args) add(v);
  free_vars_rec(f->lhs, bound, out);
  free_vars_rec(f->rhs, bound, out);
}

}  // namespace

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  free_vars_rec(f, bound, out);
  return out;
}

FormulaPtr subst_free_vars(const FormulaPtr& f,
                           const std::map<std::string, std::string>& ren) {
  if (!f || ren.empty()) return f;
  auto g = std::make_shared<Formula>(*f);
  if (f->prop) g->prop = subst_prop_vars(f->prop, ren);
  if (f->kind == FormulaKind::Ex || f->kind == FormulaKind::AllQ) {
    std::map<std::string, std::string> inner = ren;
    inner.erase(f->var);  // binder shadows
    g->lhs = subst_free_vars(f->lhs, inner);
    return g;
  }
  if (f->kind == FormulaKind::Call) {
    for (auto& arg : g->args) {
      auto it = ren.find(arg);
      if (it != ren.end()) arg = it->second;
    }
    return g;
  }
  if (f->lhs) g->lhs = subst_free_vars(f->lhs, ren);
  if (f->rhs) g->rhs = subst_free_vars(f->rhs, ren);
  return g;
}

namespace {

// Formula precedence, loosest first: <=> => || && ^ unary
int formula_prec(FormulaKind k) {
  switch (k) {
    case FormulaKind::Iff: return 0;
    case FormulaKind::Implies: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Chop: return 4;
    case FormulaKind::Not:
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      return 5;
    case FormulaKind::Ex:
    case FormulaKind::AllQ:
      return -1;  // always parenthesised when nested
    default: return 6;
  }
}

void print_formula(std::ostringstream& os, const FormulaPtr& f, int parent_prec) {
  int prec = formula_prec(f->kind);
  bool paren = prec < parent_prec;
  if (paren) os << '(';
  switch (f->kind) {
    case FormulaKind::Point:
      os << '<';
      print_prop(os, f->prop, 0);
      os << '>';
      break;
    case FormulaKind::AllButLast:
      os << '[';
      print_prop(os, f->prop, 0);
      os << ']';
      break;
    case FormulaKind::All:
      os << "[[";
      print_prop(os, f->prop, 0);
      os << "]]";
      break;
    case FormulaKind::Unit:
      os << "{{";
      print_prop(os, f->prop, 0);
      os << "}}";
      break;
    case FormulaKind::Chop:
      print_formula(os, f->lhs, prec + 1);
      os << " ^ ";
      print_formula(os, f->rhs, prec);  // right-associative
      break;
    case FormulaKind::Not:
      os << '!';
      print_formula(os, f->lhs, prec + 1);
      break;
    case FormulaKind::And:
      print_formula(os, f->lhs, prec);
      os << " && ";
      print_formula(os, f->rhs, prec + 1);
      break;
    case FormulaKind::Or:
      print_formula(os, f->lhs, prec);
      os << " || ";
      print_formula(os, f->rhs, prec + 1);
      break;
    case FormulaKind::Ex:
      os << "ex " << f->var << ". ";
      print_formula(os, f->lhs, 0);
      break;
    case FormulaKind::AllQ:
      os << "all " << f->var << ". ";
      print_formula(os, f->lhs, 0);
      break;
    case FormulaKind::SLen:
      os << "slen " << to_string(f->cmp) << ' ' << f->bound;
      break;
    case FormulaKind::SCount:
      os << "scount ";
      print_prop(os, f->prop, 4);  // atom or !atom without parens
      os << ' ' << to_string(f->cmp) << ' ' << f->bound;
      break;
    case FormulaKind::SDur:
      os << "sdur ";
      print_prop(os, f->prop, 4);
      os << ' ' << to_string(f->cmp) << ' ' << f->bound;
      break;
    case FormulaKind::TrueF: os << "true"; break;
    case FormulaKind::FalseF: os << "false"; break;
    case FormulaKind::Implies:
      print_formula(os, f->lhs, prec + 1);
      os << " => ";
      print_formula(os, f->rhs, prec);
      break;
    case FormulaKind::Iff:
      print_formula(os, f->lhs, prec);
      os << " <=> ";
      print_formula(os, f->rhs, prec + 1);
      break;
    case FormulaKind::Pt: os << "pt"; break;
    case FormulaKind::Ext: os << "ext"; break;
    case FormulaKind::Diamond:
      os << "<>";
      print_formula(os, f->lhs, prec + 1);
      break;
    case FormulaKind::Box:
      os << "[]";
      print_formula(os, f->lhs, prec + 1);
      break;
    case FormulaKind::Pref:
      os << "pref(";
      print_formula(os, f->lhs, 0);
      os << ')';
      break;
    case FormulaKind::EP:
      os << "EP(";
      print_prop(os, f->prop, 0);
      os << ')';
      break;
    case FormulaKind::KBounded:
      os << "KBOUNDED(";
      print_formula(os, f->lhs, 0);
      os << ", " << f->bound << ')';
      break;
    case FormulaKind::Call: {
      os << f->var << '(';
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) os << ", ";
        os << f->args[i];
      }
      os << ')';
      break;
    }
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula(os, f, 0);
  return os.str();
}

bool is_valid_identifier(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace qsyn
