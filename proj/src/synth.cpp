#include "qsyn/synth.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qsyn/errors.hpp"

namespace qsyn {

Alphabet IoSignature::alphabet() const {
  Alphabet a;
  a.vars = inputs;
  a.vars.insert(a.vars.end(), outputs.begin(), outputs.end());
  return a;
}

namespace {

void check_signature(const Dfa& dfa, const IoSignature& io) {
  if (!(dfa.alphabet == io.alphabet()))
    throw InterfaceError("automaton alphabet does not match io signature");
}

// The reject state of a supervisor DFA: the unique non-accepting state.
// Supervisor languages are prefix-closed with an accepting initial state.
std::optional<uint32_t> find_reject(const Dfa& dfa) {
  std::optional<uint32_t> reject;
  for (uint32_t s = 0; s < dfa.state_count(); ++s) {
    if (dfa.accepting[s]) continue;
    if (reject) throw InterfaceError("supervisor has several non-accepting states");
    reject = s;
  }
  if (reject)
    for (uint32_t l = 0; l < dfa.alphabet.letter_count(); ++l)
      if (dfa.step(*reject, l) != *reject)
        throw InterfaceError("reject state is not a sink");
  return reject;
}

}  // namespace

void Supervisor::check_invariants() const {
  check_signature(dfa, io);
  if (reject) {
    for (uint32_t l = 0; l < dfa.alphabet.letter_count(); ++l)
      if (dfa.step(*reject, l) != *reject)
        throw InterfaceError("reject state is not a sink");
    if (dfa.accepting[*reject]) throw InterfaceError("reject state is accepting");
  }
  for (uint32_t s = 0; s < dfa.state_count(); ++s) {
    if (!state_ok(s)) continue;
    for (uint32_t in = 0; in < io.input_letters(); ++in) {
      bool some = false;
      for (uint32_t out = 0; out < io.output_letters() && !some; ++out)
        some = allows(s, in, out);
      if (!some) throw InterfaceError("supervisor is blocking");
    }
  }
}

bool Supervisor::is_deterministic() const {
  for (uint32_t s = 0; s < dfa.state_count(); ++s) {
    if (!state_ok(s)) continue;
    for (uint32_t in = 0; in < io.input_letters(); ++in) {
      int count = 0;
      for (uint32_t out = 0; out < io.output_letters(); ++out)
        if (allows(s, in, out) && ++count > 1) return false;
    }
  }
  return true;
}

uint32_t Controller::respond(uint32_t state, uint32_t in) const {
  for (uint32_t out = 0; out < io.output_letters(); ++out)
    if (allows(state, in, out)) return out;
  throw InterfaceError("controller has no allowed output");
}

// ---------------------------------------------------------------------------
// MPS: greatest fixpoint of the safety game
// ---------------------------------------------------------------------------

std::optional<Supervisor> mps(const Dfa& hard, const IoSignature& io) {
  check_signature(hard, io);
  // Make the initial state unenterable so the empty-word prefix can be
  // treated as unconditionally safe.
  Dfa arena = hard;
  {
    bool reentered = false;
    for (size_t s = 0; s < arena.state_count() && !reentered; ++s)
      for (const auto& [cube, target] : arena.transitions[s])
        if (target == arena.initial) {
          reentered = true;
          break;
        }
    if (reentered) {
      uint32_t fresh = static_cast<uint32_t>(arena.state_count());
      arena.accepting.push_back(arena.accepting[arena.initial]);
      arena.transitions.push_back(arena.transitions[arena.initial]);
      arena.initial = fresh;
    }
  }

  size_t n = arena.state_count();
  uint32_t in_count = io.input_letters();
  uint32_t out_count = io.output_letters();
  std::vector<char> safe(n);
  for (uint32_t s = 0; s < n; ++s)
    safe[s] = arena.accepting[s] || s == arena.initial;

  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t s = 0; s < n; ++s) {
      if (!safe[s]) continue;
      bool ok = true;
      for (uint32_t in = 0; in < in_count && ok; ++in) {
        bool some = false;
        for (uint32_t out = 0; out < out_count && !some; ++out)
          some = safe[arena.step(s, io.joint(in, out))];
        ok = some;
      }
      if (!ok) {
        safe[s] = 0;
        changed = true;
      }
    }
  }
  if (!safe[arena.initial]) return std::nullopt;

  // Keep the winning region, redirect everything else to a fresh reject sink.
  DfaBuilder builder(arena.alphabet);
  std::vector<int32_t> renum(n, -1);
  uint32_t count = 0;
  for (uint32_t s = 0; s < n; ++s)
    if (safe[s]) renum[s] = static_cast<int32_t>(count++);
  for (uint32_t s = 0; s < n; ++s)
    if (safe[s]) builder.add_state(true);
  uint32_t reject = builder.add_state(false);
  for (uint32_t s = 0; s < n; ++s) {
    if (!safe[s]) continue;
    for (uint32_t l = 0; l < arena.alphabet.letter_count(); ++l) {
      uint32_t t = arena.step(s, l);
      builder.set_target(static_cast<uint32_t>(renum[s]), l,
                         safe[t] ? static_cast<uint32_t>(renum[t]) : reject);
    }
  }
  for (uint32_t l = 0; l < arena.alphabet.letter_count(); ++l)
    builder.set_target(reject, l, reject);
  builder.set_initial(static_cast<uint32_t>(renum[arena.initial]));

  Supervisor sup;
  sup.dfa = minimize(std::move(builder).finish());
  sup.io = io;
  sup.reject = find_reject(sup.dfa);
  sup.check_invariants();
  return sup;
}

// ---------------------------------------------------------------------------
// MPHOS: horizon-bounded value iteration over the soft-monitor product
// ---------------------------------------------------------------------------

Supervisor mphos(const Supervisor& sup, const Dfa& soft, const SynthParams& params,
                 MphosTable* table) {
  check_signature(sup.dfa, sup.io);
  check_signature(soft, sup.io);
  if (params.horizon < 1) throw InterfaceError("horizon must be at least 1");
  const IoSignature& io = sup.io;
  uint32_t letters = sup.dfa.alphabet.letter_count();
  uint32_t in_count = io.input_letters();
  uint32_t out_count = io.output_letters();

  // Reachable product arena (supervisor x soft monitor), through allowed
  // transitions only.
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::vector<std::pair<uint32_t, uint32_t>> states;
  std::deque<uint32_t> todo;
  auto intern = [&](uint32_t q, uint32_t m) {
    auto [it, fresh] = ids.try_emplace({q, m}, 0);
    if (fresh) {
      it->second = static_cast<uint32_t>(states.size());
      states.push_back({q, m});
      todo.push_back(it->second);
    }
    return it->second;
  };
  uint32_t initial = intern(sup.dfa.initial, soft.initial);
  std::vector<std::vector<uint32_t>> next;
  std::vector<std::vector<char>> allowed;
  std::vector<std::vector<char>> reward;
  while (!todo.empty()) {
    uint32_t id = todo.front();
    todo.pop_front();
    auto [q, m] = states[id];
    if (next.size() <= id) {
      next.resize(states.size());
      allowed.resize(states.size());
      reward.resize(states.size());
    }
    next[id].assign(letters, 0);
    allowed[id].assign(letters, 0);
    reward[id].assign(letters, 0);
    for (uint32_t l = 0; l < letters; ++l) {
      uint32_t tq = sup.dfa.step(q, l);
      if (!sup.state_ok(tq)) continue;
      uint32_t tm = soft.step(m, l);
      allowed[id][l] = 1;
      reward[id][l] = soft.accepting[tm] ? 1 : 0;
      next[id][l] = intern(tq, tm);
    }
    // interning may have grown the state list
    if (next.size() < states.size()) {
      next.resize(states.size());
      allowed.resize(states.size());
      reward.resize(states.size());
    }
  }
  size_t n = states.size();

  // Val(s, 0) = 0
  // Val(s, p+1) = mean over inputs of max over allowed outputs of
  //                 reward + discount * Val(next, p)
  std::vector<double> value(n, 0.0), fresh(n, 0.0);
  double input_weight = 1.0 / static_cast<double>(in_count);
  for (unsigned round = 0; round < params.horizon; ++round) {
    for (uint32_t s = 0; s < n; ++s) {
      double sum = 0.0;
      for (uint32_t in = 0; in < in_count; ++in) {
        double best = -1.0;
        for (uint32_t out = 0; out < out_count; ++out) {
          uint32_t l = io.joint(in, out);
          if (!allowed[s][l]) continue;
          double score = reward[s][l] + params.discount * value[next[s][l]];
          if (score > best) best = score;
        }
        sum += best;
      }
      fresh[s] = sum * input_weight;
    }
    value.swap(fresh);
  }

  // Retain outputs within delta of the best final score per (state, input).
  std::vector<std::vector<std::vector<uint32_t>>> retained(n);
  DfaBuilder builder(sup.dfa.alphabet);
  for (uint32_t s = 0; s < n; ++s) builder.add_state(true);
  uint32_t reject = builder.add_state(false);
  for (uint32_t l = 0; l < letters; ++l) builder.set_target(reject, l, reject);
  for (uint32_t s = 0; s < n; ++s) {
    retained[s].resize(in_count);
    for (uint32_t in = 0; in < in_count; ++in) {
      double best = -1.0;
      for (uint32_t out = 0; out < out_count; ++out) {
        uint32_t l = io.joint(in, out);
        if (!allowed[s][l]) continue;
        double score = reward[s][l] + params.discount * value[next[s][l]];
        if (score > best) best = score;
      }
      for (uint32_t out = 0; out < out_count; ++out) {
        uint32_t l = io.joint(in, out);
        bool keep = false;
        if (allowed[s][l]) {
          double score = reward[s][l] + params.discount * value[next[s][l]];
          keep = score >= best - params.delta;
        }
        if (keep) {
          retained[s][in].push_back(out);
          builder.set_target(s, l, next[s][l]);
        } else {
          builder.set_target(s, l, reject);
        }
      }
    }
  }
  builder.set_initial(initial);

  if (table) {
    table->states = states;
    table->next = next;
    table->allowed = allowed;
    table->reward = reward;
    table->value = value;
    table->retained = retained;
    table->initial = initial;
  }

  Supervisor out;
  out.dfa = minimize(std::move(builder).finish());
  out.io = io;
  out.reject = find_reject(out.dfa);
  out.check_invariants();
  return out;
}

// ---------------------------------------------------------------------------
// Determinization by output order
// ---------------------------------------------------------------------------

namespace {

// Rank table: position r holds the r-th best output valuation.
std::vector<uint32_t> output_ranking(const IoSignature& io,
                                     const std::vector<OutputLiteral>& order) {
  std::vector<OutputLiteral> lits = order;
  std::vector<char> listed(io.outputs.size(), 0);
  for (const auto& lit : lits) {
    int idx = -1;
    for (size_t i = 0; i < io.outputs.size(); ++i)
      if (io.outputs[i] == lit.var) idx = static_cast<int>(i);
    if (idx < 0) throw InterfaceError("unknown output variable in order: " + lit.var);
    if (listed[idx])
      throw InterfaceError("output variable listed twice in order: " + lit.var);
    listed[idx] = 1;
  }
  // unlisted outputs are appended as negative literals, declaration order
  for (size_t i = 0; i < io.outputs.size(); ++i)
    if (!listed[i]) lits.push_back({io.outputs[i], false});

  std::vector<uint32_t> outs(io.output_letters());
  for (uint32_t o = 0; o < outs.size(); ++o) outs[o] = o;
  auto satisfies = [&](uint32_t valuation, const OutputLiteral& lit) {
    int idx = 0;
    for (size_t i = 0; i < io.outputs.size(); ++i)
      if (io.outputs[i] == lit.var) idx = static_cast<int>(i);
    bool bit = (valuation >> idx) & 1u;
    return bit == lit.positive;
  };
  std::sort(outs.begin(), outs.end(), [&](uint32_t a, uint32_t b) {
    for (const auto& lit : lits) {
      bool sa = satisfies(a, lit), sb = satisfies(b, lit);
      if (sa != sb) return sa;  // satisfying the earlier literal wins
    }
    return false;
  });
  return outs;
}

}  // namespace

Controller det_by_order(const Supervisor& sup, const std::vector<OutputLiteral>& order) {
  std::vector<uint32_t> ranking = output_ranking(sup.io, order);
  uint32_t letters = sup.dfa.alphabet.letter_count();
  DfaBuilder builder(sup.dfa.alphabet);
  for (uint32_t s = 0; s < sup.dfa.state_count(); ++s)
    builder.add_state(sup.dfa.accepting[s]);
  uint32_t reject = sup.reject ? *sup.reject : builder.add_state(false);
  if (!sup.reject)
    for (uint32_t l = 0; l < letters; ++l) builder.set_target(reject, l, reject);
  for (uint32_t s = 0; s < sup.dfa.state_count(); ++s) {
    if (!sup.state_ok(s)) {
      for (uint32_t l = 0; l < letters; ++l) builder.set_target(s, l, sup.dfa.step(s, l));
      continue;
    }
    for (uint32_t in = 0; in < sup.io.input_letters(); ++in) {
      uint32_t chosen = 0;
      bool found = false;
      for (uint32_t out : ranking) {
        if (sup.allows(s, in, out)) {
          chosen = out;
          found = true;
          break;
        }
      }
      if (!found) throw InterfaceError("supervisor is blocking");
      for (uint32_t out = 0; out < sup.io.output_letters(); ++out) {
        uint32_t l = sup.io.joint(in, out);
        builder.set_target(s, l, out == chosen ? sup.dfa.step(s, l) : reject);
      }
    }
  }
  builder.set_initial(sup.dfa.initial);

  Controller cnt;
  cnt.dfa = minimize(std::move(builder).finish());
  cnt.io = sup.io;
  cnt.reject = find_reject(cnt.dfa);
  cnt.check_invariants();
  if (!cnt.is_deterministic())
    throw InterfaceError("determinization left nondeterministic outputs");
  return cnt;
}

bool must_monotone_check(const Dfa& hard1, const Dfa& hard2, const IoSignature& io) {
  auto sup1 = mps(hard1, io);
  auto sup2 = mps(hard2, io);
  if (!sup1) return true;  // nothing to embed
  if (!sup2) return false; // contradicts monotone realizability
  return includes(sup2->dfa, sup1->dfa);
}

std::vector<OutputLiteral> parse_output_order(const std::string& text,
                                              const IoSignature& io) {
  std::vector<OutputLiteral> order;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    // trim
    size_t b = item.find_first_not_of(" \t");
    size_t e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    OutputLiteral lit;
    if (!item.empty() && item[0] == '!') {
      lit.positive = false;
      item = item.substr(1);
    }
    lit.var = item;
    order.push_back(lit);
  }
  // validation happens in output_ranking
  output_ranking(io, order);
  return order;
}

void write_supervisor(std::ostream& os, const Supervisor& sup) {
  os << "kind " << (sup.is_deterministic() ? "controller" : "supervisor") << '\n';
  os << "io " << sup.io.inputs.size();
  for (const auto& v : sup.io.inputs) os << ' ' << v;
  os << ' ' << sup.io.outputs.size();
  for (const auto& v : sup.io.outputs) os << ' ' << v;
  os << '\n';
  write_dump(os, sup.dfa);
}

Supervisor read_supervisor(std::istream& is) {
  std::string tok;
  if (!(is >> tok) || tok != "kind") throw ParseError("expected 'kind' header");
  std::string kind;
  if (!(is >> kind) || (kind != "controller" && kind != "supervisor"))
    throw ParseError("bad supervisor kind");
  if (!(is >> tok) || tok != "io") throw ParseError("expected 'io' header");
  Supervisor sup;
  size_t nin = 0, nout = 0;
  if (!(is >> nin)) throw ParseError("bad io header");
  sup.io.inputs.resize(nin);
  for (auto& v : sup.io.inputs)
    if (!(is >> v)) throw ParseError("bad io header");
  if (!(is >> nout)) throw ParseError("bad io header");
  sup.io.outputs.resize(nout);
  for (auto& v : sup.io.outputs)
    if (!(is >> v)) throw ParseError("bad io header");
  sup.dfa = read_dump(is);
  sup.reject = find_reject(sup.dfa);
  sup.check_invariants();
  return sup;
}

}  // namespace qsyn
