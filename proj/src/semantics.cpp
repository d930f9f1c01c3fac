#include "qsyn/semantics.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsyn/errors.hpp"

namespace qsyn {

namespace {

size_t var_index(const Word& w, const std::string& name) {
  for (size_t i = 0; i < w.env.size(); ++i)
    if (w.env[i] == name) return i;
  throw InterfaceError("variable not in environment: " + name);
}

bool eval_prop_rec(const Word& w, size_t i, const PropPtr& phi) {
  switch (phi->kind) {
    case PropKind::False: return false;
    case PropKind::True: return true;
    case PropKind::Var: return w.var_at(i, var_index(w, phi->var));
    case PropKind::Not: return !eval_prop_rec(w, i, phi->lhs);
    case PropKind::And:
      return eval_prop_rec(w, i, phi->lhs) && eval_prop_rec(w, i, phi->rhs);
    case PropKind::Or:
      return eval_prop_rec(w, i, phi->lhs) || eval_prop_rec(w, i, phi->rhs);
    case PropKind::Implies:
      return !eval_prop_rec(w, i, phi->lhs) || eval_prop_rec(w, i, phi->rhs);
    case PropKind::Iff:
      return eval_prop_rec(w, i, phi->lhs) == eval_prop_rec(w, i, phi->rhs);
  }
  return false;
}

// Enumerates p-variants of the whole word (assignments of p at every
// position, as the quantifier clause ranges over dom(sigma)) and reports
// whether the predicate held for some / for all of them.
bool quantify(const Word& w, size_t b, size_t e, const std::string& p,
              const FormulaPtr& body, bool existential) {
  Word v = w;
  size_t idx;
  auto found = std::find(v.env.begin(), v.env.end(), p);
  if (found == v.env.end()) {
    idx = v.env.size();
    v.env.push_back(p);
  } else {
    idx = static_cast<size_t>(found - v.env.begin());
  }
  size_t n = v.size();
  if (n > 8 * sizeof(unsigned long long))
    throw ResourceError("quantifier enumeration word too long");
  unsigned long long total = 1ull << n;
  for (unsigned long long assign = 0; assign < total; ++assign) {
    for (size_t i = 0; i < n; ++i) {
      if ((assign >> i) & 1ull)
        v.letters[i] = w.letters[i] | (1u << idx);
      else
        v.letters[i] = w.letters[i] & ~(1u << idx);
    }
    bool sat = eval(v, b, e, body);
    if (existential && sat) return true;
    if (!existential && !sat) return false;
  }
  return !existential;
}

}  // namespace

bool eval_prop(const Word& w, size_t i, const PropPtr& phi) {
  if (i >= w.size()) throw std::out_of_range("position out of range");
  return eval_prop_rec(w, i, phi);
}

bool eval(const Word& w, size_t b, size_t e, const FormulaPtr& d) {
  if (b > e || e >= w.size()) throw std::out_of_range("interval out of range");
  switch (d->kind) {
    case FormulaKind::Point:
      return b == e && eval_prop_rec(w, b, d->prop);
    case FormulaKind::AllButLast: {
      if (b >= e) return false;
      for (size_t i = b; i < e; ++i)
        if (!eval_prop_rec(w, i, d->prop)) return false;
      return true;
    }
    case FormulaKind::All: {
      for (size_t i = b; i <= e; ++i)
        if (!eval_prop_rec(w, i, d->prop)) return false;
      return true;
    }
    case FormulaKind::Unit:
      return e == b + 1 && eval_prop_rec(w, b, d->prop);
    case FormulaKind::Chop: {
      for (size_t i = b; i <= e; ++i)
        if (eval(w, b, i, d->lhs) && eval(w, i, e, d->rhs)) return true;
      return false;
    }
    case FormulaKind::Not: return !eval(w, b, e, d->lhs);
    case FormulaKind::And: return eval(w, b, e, d->lhs) && eval(w, b, e, d->rhs);
    case FormulaKind::Or: return eval(w, b, e, d->lhs) || eval(w, b, e, d->rhs);
    case FormulaKind::Ex: return quantify(w, b, e, d->var, d->lhs, true);
    case FormulaKind::AllQ: return quantify(w, b, e, d->var, d->lhs, false);
    case FormulaKind::SLen:
      return cmp_eval(d->cmp, static_cast<long>(e - b), d->bound);
    case FormulaKind::SCount: {
      long n = 0;
      for (size_t i = b; i <= e; ++i) n += eval_prop_rec(w, i, d->prop);
      return cmp_eval(d->cmp, n, d->bound);
    }
    case FormulaKind::SDur: {
      long n = 0;
      for (size_t i = b; i < e; ++i) n += eval_prop_rec(w, i, d->prop);
      return cmp_eval(d->cmp, n, d->bound);
    }
    case FormulaKind::TrueF: return true;
    case FormulaKind::FalseF: return false;
    case FormulaKind::Implies:
      return !eval(w, b, e, d->lhs) || eval(w, b, e, d->rhs);
    case FormulaKind::Iff:
      return eval(w, b, e, d->lhs) == eval(w, b, e, d->rhs);
    case FormulaKind::Pt: return b == e;
    case FormulaKind::Ext: return b != e;
    case FormulaKind::Diamond: {
      for (size_t bb = b; bb <= e; ++bb)
        for (size_t ee = bb; ee <= e; ++ee)
          if (eval(w, bb, ee, d->lhs)) return true;
      return false;
    }
    case FormulaKind::Box: {
      for (size_t bb = b; bb <= e; ++bb)
        for (size_t ee = bb; ee <= e; ++ee)
          if (!eval(w, bb, ee, d->lhs)) return false;
      return true;
    }
    case FormulaKind::Pref: {
      for (size_t ee = b; ee <= e; ++ee)
        if (!eval(w, b, ee, d->lhs)) return false;
      return true;
    }
    case FormulaKind::EP: return eval_prop_rec(w, e, d->prop);
    case FormulaKind::KBounded: {
      size_t n = d->bound;
      if (e - b < n) return eval(w, b, e, d->lhs);
      return eval(w, e - n, e, d->lhs);
    }
    case FormulaKind::Call:
      throw ParseError("cannot evaluate unexpanded macro call: " + d->var);
  }
  return false;
}

bool whole_word(const Word& w, const FormulaPtr& d) {
  return eval(w, 0, w.size() - 1, d);
}

bool point_sat(const Word& w, size_t i, const FormulaPtr& d) {
  return eval(w, 0, i, d);
}

void enumerate_words(const std::vector<std::string>& env, size_t max_len,
                     const std::function<void(const Word&)>& visit) {
  size_t k = env.size();
  Word w;
  w.env = env;
  for (size_t len = 1; len <= max_len; ++len) {
    w.letters.assign(len, 0);
    for (;;) {
      visit(w);
      // odometer with the leftmost letter most significant
      size_t pos = len;
      while (pos > 0) {
        --pos;
        if (w.letters[pos] + 1 < (1u << k)) {
          ++w.letters[pos];
          std::fill(w.letters.begin() + pos + 1, w.letters.end(), 0u);
          break;
        }
        if (pos == 0) goto next_len;
      }
    }
  next_len:;
  }
}

std::vector<Word> all_words(const std::vector<std::string>& env, size_t max_len) {
  std::vector<Word> out;
  enumerate_words(env, max_len, [&](const Word& w) { out.push_back(w); });
  return out;
}

}  // namespace qsyn
