#include "qsyn/compile.hpp"

#include <algorithm>
#include <cassert>

#include "qsyn/errors.hpp"

namespace qsyn {

bool prop_on_letter(const PropPtr& phi, const Alphabet& alphabet, uint32_t letter) {
  switch (phi->kind) {
    case PropKind::False: return false;
    case PropKind::True: return true;
    case PropKind::Var: {
      int idx = alphabet.index_of(phi->var);
      if (idx < 0) throw InterfaceError("unknown variable: " + phi->var);
      return (letter >> idx) & 1u;
    }
    case PropKind::Not: return !prop_on_letter(phi->lhs, alphabet, letter);
    case PropKind::And:
      return prop_on_letter(phi->lhs, alphabet, letter) &&
             prop_on_letter(phi->rhs, alphabet, letter);
    case PropKind::Or:
      return prop_on_letter(phi->lhs, alphabet, letter) ||
             prop_on_letter(phi->rhs, alphabet, letter);
    case PropKind::Implies:
      return !prop_on_letter(phi->lhs, alphabet, letter) ||
             prop_on_letter(phi->rhs, alphabet, letter);
    case PropKind::Iff:
      return prop_on_letter(phi->lhs, alphabet, letter) ==
             prop_on_letter(phi->rhs, alphabet, letter);
  }
  return false;
}

namespace {

Dfa canonical(const Dfa& a) { return minimize(drop_empty_word(a)); }

// <phi>: 1-letter words whose letter satisfies phi.
Dfa compile_point(const PropPtr& phi, const Alphabet& env) {
  DfaBuilder b(env);
  uint32_t init = b.add_state(false);
  uint32_t acc = b.add_state(true);
  uint32_t dead = b.add_state(false);
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    b.set_target(init, l, prop_on_letter(phi, env, l) ? acc : dead);
    b.set_target(acc, l, dead);
    b.set_target(dead, l, dead);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

// [phi]: words of length >= 2 with phi at every position but the last.
Dfa compile_all_but_last(const PropPtr& phi, const Alphabet& env) {
  // State tracks (all letters so far except the current one satisfy phi,
  // current letter satisfies phi, at least two letters read).
  DfaBuilder b(env);
  uint32_t init = b.add_state(false);
  uint32_t one_t = b.add_state(false);   // 1 letter, phi holds at it
  uint32_t one_f = b.add_state(false);   // 1 letter, phi fails at it
  uint32_t ok_t = b.add_state(true);     // >=2, prefix ok, last phi
  uint32_t ok_f = b.add_state(true);     // >=2, prefix ok, last !phi
  uint32_t dead = b.add_state(false);
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    bool p = prop_on_letter(phi, env, l);
    b.set_target(init, l, p ? one_t : one_f);
    b.set_target(one_t, l, p ? ok_t : ok_f);
    b.set_target(one_f, l, dead);
    b.set_target(ok_t, l, p ? ok_t : ok_f);
    b.set_target(ok_f, l, dead);
    b.set_target(dead, l, dead);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

// [[phi]]: phi at every position.
Dfa compile_all(const PropPtr& phi, const Alphabet& env) {
  DfaBuilder b(env);
  uint32_t init = b.add_state(false);
  uint32_t good = b.add_state(true);
  uint32_t dead = b.add_state(false);
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    bool p = prop_on_letter(phi, env, l);
    b.set_target(init, l, p ? good : dead);
    b.set_target(good, l, p ? good : dead);
    b.set_target(dead, l, dead);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

// {{phi}}: exactly two letters, phi at the first.
Dfa compile_unit(const PropPtr& phi, const Alphabet& env) {
  DfaBuilder b(env);
  uint32_t init = b.add_state(false);
  uint32_t mid = b.add_state(false);
  uint32_t acc = b.add_state(true);
  uint32_t dead = b.add_state(false);
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    b.set_target(init, l, prop_on_letter(phi, env, l) ? mid : dead);
    b.set_target(mid, l, acc);
    b.set_target(acc, l, dead);
    b.set_target(dead, l, dead);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

// One-letter-overlap concatenation: the shared point is read by both sides.
Dfa compile_chop(const Dfa& a1, const Dfa& a2) {
  assert(a1.alphabet == a2.alphabet);
  Nfa nfa;
  nfa.alphabet = a1.alphabet;
  size_t n1 = a1.state_count();
  nfa.initials = {a1.initial};
  nfa.accepting.assign(n1 + a2.state_count(), 0);
  for (size_t s = 0; s < a2.state_count(); ++s)
    nfa.accepting[n1 + s] = a2.accepting[s];
  nfa.transitions.resize(n1 + a2.state_count());
  for (size_t s = 0; s < n1; ++s) {
    for (const auto& [cube, target] : a1.transitions[s]) {
      nfa.transitions[s].push_back({cube, target});
      if (a1.accepting[target]) {
        // letter also consumed by a2 from its initial state
        for (const auto& [cube2, target2] : a2.transitions[a2.initial]) {
          bool ok = false;
          uint32_t both_mask = cube.mask & cube2.mask;
          ok = (cube.bits & both_mask) == (cube2.bits & both_mask);
          if (ok)
            nfa.transitions[s].push_back(
                {Cube{cube.bits | cube2.bits, cube.mask | cube2.mask},
                 static_cast<uint32_t>(n1 + target2)});
        }
      }
    }
  }
  for (size_t s = 0; s < a2.state_count(); ++s)
    for (const auto& [cube, target] : a2.transitions[s])
      nfa.transitions[n1 + s].push_back({cube, static_cast<uint32_t>(n1 + target)});
  return determinize(nfa);
}

// slen cmp c: counts letters read, saturating once every comparison
// against c is settled.
Dfa compile_slen(CmpOp op, unsigned c, const Alphabet& env) {
  uint32_t cap = c + 2;  // letters read, j letters => slen = j-1
  DfaBuilder b(env);
  for (uint32_t j = 0; j <= cap; ++j)
    b.add_state(j >= 1 && cmp_eval(op, static_cast<long>(j) - 1, c));
  for (uint32_t j = 0; j <= cap; ++j)
    for (uint32_t l = 0; l < env.letter_count(); ++l)
      b.set_target(j, l, std::min(j + 1, cap));
  b.set_initial(0);
  return std::move(b).finish();
}

// scount phi cmp c over [0, e]: counts positions including the last.
Dfa compile_scount(const PropPtr& phi, CmpOp op, unsigned c, const Alphabet& env) {
  uint32_t cap = c + 1;
  DfaBuilder b(env);
  // state = (count, started); the start state is separate only to keep the
  // empty word unaccepted before normalisation.
  uint32_t init = b.add_state(false);
  std::vector<uint32_t> cnt(cap + 1);
  for (uint32_t n = 0; n <= cap; ++n) cnt[n] = b.add_state(cmp_eval(op, n, c));
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    uint32_t inc = prop_on_letter(phi, env, l) ? 1 : 0;
    b.set_target(init, l, cnt[std::min(inc, cap)]);
    for (uint32_t n = 0; n <= cap; ++n)
      b.set_target(cnt[n], l, cnt[std::min(n + inc, cap)]);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

// sdur phi cmp c over [0, e]: counts positions excluding the last, tracked
// with a one-letter lookbehind flag.
Dfa compile_sdur(const PropPtr& phi, CmpOp op, unsigned c, const Alphabet& env) {
  uint32_t cap = c + 1;
  DfaBuilder b(env);
  uint32_t init = b.add_state(false);
  // state (d, f): d = count excluding the last letter, f = phi at the last
  std::vector<std::vector<uint32_t>> st(cap + 1, std::vector<uint32_t>(2));
  for (uint32_t d = 0; d <= cap; ++d)
    for (uint32_t f = 0; f < 2; ++f) st[d][f] = b.add_state(cmp_eval(op, d, c));
  for (uint32_t l = 0; l < env.letter_count(); ++l) {
    uint32_t p = prop_on_letter(phi, env, l) ? 1 : 0;
    b.set_target(init, l, st[0][p]);
    for (uint32_t d = 0; d <= cap; ++d)
      for (uint32_t f = 0; f < 2; ++f)
        b.set_target(st[d][f], l, st[std::min(d + f, cap)][p]);
  }
  b.set_initial(init);
  return std::move(b).finish();
}

std::string fresh_var(const Alphabet& env, const std::string& base) {
  if (env.index_of(base) < 0) return base;
  for (int i = 0;; ++i) {
    std::string name = base + "_" + std::to_string(i);
    if (env.index_of(name) < 0) return name;
  }
}

Dfa compile_core(const FormulaPtr& d, const Alphabet& env);

Dfa compile_quantifier(const FormulaPtr& d, const Alphabet& env, bool existential) {
  // Compile the body over an extended alphabet with a fresh name for the
  // bound variable, then project it away again.
  std::string fresh = fresh_var(env, d->var);
  FormulaPtr body = d->lhs;
  if (fresh != d->var) body = subst_free_vars(body, {{d->var, fresh}});
  Alphabet ext = env;
  ext.vars.push_back(fresh);
  if (existential) {
    Dfa inner = compile_core(body, ext);
    return canonical(project(inner, fresh));
  }
  // all p. D = !(ex p. !D)
  Dfa inner = compile_core(f_not(body), ext);
  return canonical(complement(canonical(project(inner, fresh))));
}

Dfa compile_core(const FormulaPtr& d, const Alphabet& env) {
  switch (d->kind) {
    case FormulaKind::Point: return canonical(compile_point(d->prop, env));
    case FormulaKind::AllButLast:
      return canonical(compile_all_but_last(d->prop, env));
    case FormulaKind::All: return canonical(compile_all(d->prop, env));
    case FormulaKind::Unit: return canonical(compile_unit(d->prop, env));
    case FormulaKind::Chop:
      return canonical(compile_chop(compile_core(d->lhs, env), compile_core(d->rhs, env)));
    case FormulaKind::Not:
      return canonical(complement(compile_core(d->lhs, env)));
    case FormulaKind::And:
      return canonical(
          product(compile_core(d->lhs, env), compile_core(d->rhs, env), Combine::And));
    case FormulaKind::Or:
      return canonical(
          product(compile_core(d->lhs, env), compile_core(d->rhs, env), Combine::Or));
    case FormulaKind::Ex: return compile_quantifier(d, env, true);
    case FormulaKind::AllQ: return compile_quantifier(d, env, false);
    case FormulaKind::SLen: return canonical(compile_slen(d->cmp, d->bound, env));
    case FormulaKind::SCount:
      return canonical(compile_scount(d->prop, d->cmp, d->bound, env));
    case FormulaKind::SDur:
      return canonical(compile_sdur(d->prop, d->cmp, d->bound, env));
    case FormulaKind::TrueF: return canonical(universal_dfa(env));
    default:
      throw ParseError("compile_core: formula not desugared");
  }
}

}  // namespace

Dfa compile(const FormulaPtr& d, const Alphabet& env) {
  FormulaPtr core = desugar(d);
  for (const auto& v : free_vars(core))
    if (env.index_of(v) < 0)
      throw InterfaceError("free variable not in alphabet: " + v);
  return compile_core(core, env);
}

bool validity(const FormulaPtr& d, const Alphabet& env) {
  return is_universal(compile(d, env));
}

}  // namespace qsyn
