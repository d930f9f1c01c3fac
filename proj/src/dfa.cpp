#include "qsyn/dfa.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>

#include "qsyn/errors.hpp"

namespace qsyn {

int Alphabet::index_of(const std::string& name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}

std::string Cube::to_string(size_t nvars) const {
  std::string s(nvars, 'X');
  for (size_t i = 0; i < nvars; ++i)
    if ((mask >> i) & 1u) s[i] = ((bits >> i) & 1u) ? '1' : '0';
  return s;
}

Cube Cube::parse(const std::string& text) {
  Cube c;
  for (size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '0': c.mask |= 1u << i; break;
      case '1':
        c.mask |= 1u << i;
        c.bits |= 1u << i;
        break;
      case 'X':
      case 'x':
        break;
      default:
        throw ParseError(std::string("bad cube character: ") + text[i]);
    }
  }
  return c;
}

uint32_t Dfa::step(uint32_t state, uint32_t letter) const {
  for (const auto& [cube, target] : transitions[state])
    if (cube.matches(letter)) return target;
  throw InterfaceError("transition function not total");
}

uint32_t Dfa::run(const std::vector<uint32_t>& letters) const {
  uint32_t s = initial;
  for (uint32_t l : letters) s = step(s, l);
  return s;
}

void Dfa::check_well_formed() const {
  if (initial >= state_count() || transitions.size() != state_count())
    throw InterfaceError("malformed automaton");
  for (size_t s = 0; s < state_count(); ++s) {
    std::vector<char> seen(alphabet.letter_count(), 0);
    for (const auto& [cube, target] : transitions[s]) {
      if (target >= state_count()) throw InterfaceError("cube target out of range");
      for (uint32_t l = 0; l < alphabet.letter_count(); ++l)
        if (cube.matches(l)) {
          if (seen[l]) throw InterfaceError("overlapping cubes");
          seen[l] = 1;
        }
    }
    for (uint32_t l = 0; l < alphabet.letter_count(); ++l)
      if (!seen[l]) throw InterfaceError("cube cover not total");
  }
}

// --------------------------------------------------------------------------
// Dense-row builder and canonical cube compression
// --------------------------------------------------------------------------

namespace {

// Shannon-style recursive compression of a dense row into disjoint cubes.
// Splitting always follows variable order, so the cube list is canonical
// for a given row.
void compress_rec(const std::vector<uint32_t>& row, uint32_t prefix_bits,
                  uint32_t prefix_mask, uint32_t offset, uint32_t span,
                  size_t var_index,
                  std::vector<std::pair<Cube, uint32_t>>& out) {
  bool uniform = true;
  for (uint32_t i = 1; i < span && uniform; ++i)
    uniform = row[offset + i] == row[offset];
  if (uniform) {
    out.push_back({Cube{prefix_bits, prefix_mask}, row[offset]});
    return;
  }
  uint32_t half = span / 2;
  uint32_t bit = 1u << var_index;
  // With letters enumerated numerically, variable var_index toggles every
  // `half` entries exactly when half == bit.
  assert(half == bit);
  compress_rec(row, prefix_bits, prefix_mask | bit, offset, half, var_index - 1, out);
  compress_rec(row, prefix_bits | bit, prefix_mask | bit, offset + half, half,
               var_index - 1, out);
}

std::vector<std::pair<Cube, uint32_t>> compress_row(const std::vector<uint32_t>& row,
                                                    size_t nvars) {
  std::vector<std::pair<Cube, uint32_t>> out;
  if (row.size() == 1) {
    out.push_back({Cube{}, row[0]});
    return out;
  }
  compress_rec(row, 0, 0, 0, static_cast<uint32_t>(row.size()), nvars - 1, out);
  return out;
}

}  // namespace

DfaBuilder::DfaBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

uint32_t DfaBuilder::add_state(bool accepting) {
  accepting_.push_back(accepting ? 1 : 0);
  rows_.emplace_back(alphabet_.letter_count(), 0u);
  return static_cast<uint32_t>(accepting_.size() - 1);
}

void DfaBuilder::set_target(uint32_t state, uint32_t letter, uint32_t target) {
  rows_[state][letter] = target;
}

Dfa DfaBuilder::finish() && {
  Dfa d;
  d.alphabet = std::move(alphabet_);
  d.initial = initial_;
  d.accepting = std::move(accepting_);
  d.transitions.reserve(rows_.size());
  for (const auto& row : rows_)
    d.transitions.push_back(compress_row(row, d.alphabet.var_count()));
  return d;
}

// --------------------------------------------------------------------------
// Language operations
// --------------------------------------------------------------------------

bool accepts(const Dfa& a, const Word& w) {
  if (w.size() == 0) throw InterfaceError("words must be nonempty");
  return a.accepting[a.run(word_letters(a, w))] != 0;
}

std::vector<uint32_t> word_letters(const Dfa& a, const Word& w) {
  // Remap the word's environment onto the automaton alphabet.
  std::vector<int> map(w.env.size());
  for (size_t i = 0; i < w.env.size(); ++i) {
    map[i] = a.alphabet.index_of(w.env[i]);
    if (map[i] < 0) throw InterfaceError("word variable not in alphabet: " + w.env[i]);
  }
  std::vector<uint32_t> letters(w.size(), 0);
  for (size_t pos = 0; pos < w.size(); ++pos)
    for (size_t i = 0; i < w.env.size(); ++i)
      if (w.var_at(pos, i)) letters[pos] |= 1u << map[i];
  return letters;
}

std::string format_word(const Alphabet& alphabet, const std::vector<uint32_t>& letters) {
  std::ostringstream os;
  for (size_t pos = 0; pos < letters.size(); ++pos) {
    if (pos) os << ' ';
    for (size_t i = 0; i < alphabet.var_count(); ++i)
      os << (((letters[pos] >> i) & 1u) ? '1' : '0');
  }
  return os.str();
}

Dfa product(const Dfa& a, const Dfa& b, Combine op) {
  if (!(a.alphabet == b.alphabet)) throw InterfaceError("alphabet mismatch in product");
  uint32_t letters = a.alphabet.letter_count();
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::deque<std::pair<uint32_t, uint32_t>> todo;
  DfaBuilder builder(a.alphabet);
  auto intern = [&](uint32_t sa, uint32_t sb) {
    auto [it, fresh] = ids.try_emplace({sa, sb}, 0);
    if (fresh) {
      bool acc = op == Combine::And ? (a.accepting[sa] && b.accepting[sb])
                                    : (a.accepting[sa] || b.accepting[sb]);
      it->second = builder.add_state(acc);
      todo.push_back({sa, sb});
    }
    return it->second;
  };
  intern(a.initial, b.initial);
  while (!todo.empty()) {
    auto [sa, sb] = todo.front();
    todo.pop_front();
    uint32_t src = ids[{sa, sb}];
    for (uint32_t l = 0; l < letters; ++l)
      builder.set_target(src, l, intern(a.step(sa, l), b.step(sb, l)));
  }
  return std::move(builder).finish();
}

Dfa complement(const Dfa& a) {
  Dfa c = a;
  for (auto& f : c.accepting) f = f ? 0 : 1;
  return c;
}

namespace {

bool initial_reentered(const Dfa& a) {
  for (size_t s = 0; s < a.state_count(); ++s)
    for (const auto& [cube, target] : a.transitions[s])
      if (target == a.initial) return true;
  return false;
}

}  // namespace

Dfa drop_empty_word(const Dfa& a) {
  if (!a.accepting[a.initial]) return a;
  Dfa d = a;
  if (!initial_reentered(a)) {
    d.accepting[d.initial] = 0;
    return d;
  }
  // Duplicate the initial state with the flag cleared.
  uint32_t fresh = static_cast<uint32_t>(d.state_count());
  d.accepting.push_back(0);
  d.transitions.push_back(d.transitions[d.initial]);
  d.initial = fresh;
  return d;
}

namespace {

// Removes variable `idx` from a cube, shifting higher bits down.
Cube cube_remove_var(const Cube& c, int idx) {
  uint32_t low = (1u << idx) - 1;
  Cube r;
  r.bits = (c.bits & low) | ((c.bits >> 1) & ~low);
  r.mask = (c.mask & low) | ((c.mask >> 1) & ~low);
  return r;
}

}  // namespace

Dfa determinize(const Nfa& nfa) {
  uint32_t letters = nfa.alphabet.letter_count();
  std::map<std::vector<uint32_t>, uint32_t> ids;
  std::deque<std::vector<uint32_t>> todo;
  DfaBuilder builder(nfa.alphabet);
  auto intern = [&](std::vector<uint32_t> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto [it, fresh] = ids.try_emplace(set, 0);
    if (fresh) {
      if (ids.size() > kSubsetStateCap)
        throw ResourceError("subset construction exceeded state cap");
      bool acc = false;
      for (uint32_t s : set) acc = acc || nfa.accepting[s];
      it->second = builder.add_state(acc);
      todo.push_back(it->first);
    }
    return it->second;
  };
  intern(nfa.initials);
  std::vector<uint32_t> next;
  while (!todo.empty()) {
    std::vector<uint32_t> set = todo.front();
    todo.pop_front();
    uint32_t src = ids[set];
    for (uint32_t l = 0; l < letters; ++l) {
      next.clear();
      for (uint32_t s : set)
        for (const auto& [cube, target] : nfa.transitions[s])
          if (cube.matches(l)) next.push_back(target);
      builder.set_target(src, l, intern(next));
    }
  }
  return std::move(builder).finish();
}

Dfa project(const Dfa& a, const std::string& p) {
  int idx = a.alphabet.index_of(p);
  if (idx < 0) throw InterfaceError("unknown variable in projection: " + p);
  Nfa nfa;
  nfa.alphabet.vars = a.alphabet.vars;
  nfa.alphabet.vars.erase(nfa.alphabet.vars.begin() + idx);
  nfa.initials = {a.initial};
  nfa.accepting = a.accepting;
  nfa.transitions.resize(a.state_count());
  for (size_t s = 0; s < a.state_count(); ++s)
    for (const auto& [cube, target] : a.transitions[s])
      nfa.transitions[s].push_back({cube_remove_var(cube, idx), target});
  return determinize(nfa);
}

// --------------------------------------------------------------------------
// Minimization: reachable restriction + Hopcroft + BFS renumbering
// --------------------------------------------------------------------------

namespace {

Dfa restrict_reachable(const Dfa& a) {
  std::vector<int32_t> renum(a.state_count(), -1);
  std::deque<uint32_t> todo{a.initial};
  renum[a.initial] = 0;
  uint32_t count = 1;
  uint32_t letters = a.alphabet.letter_count();
  while (!todo.empty()) {
    uint32_t s = todo.front();
    todo.pop_front();
    for (uint32_t l = 0; l < letters; ++l) {
      uint32_t t = a.step(s, l);
      if (renum[t] < 0) {
        renum[t] = static_cast<int32_t>(count++);
        todo.push_back(t);
      }
    }
  }
  DfaBuilder builder(a.alphabet);
  std::vector<uint32_t> order(count);
  for (size_t s = 0; s < a.state_count(); ++s)
    if (renum[s] >= 0) order[static_cast<size_t>(renum[s])] = static_cast<uint32_t>(s);
  for (uint32_t i = 0; i < count; ++i) builder.add_state(a.accepting[order[i]]);
  for (uint32_t i = 0; i < count; ++i)
    for (uint32_t l = 0; l < letters; ++l)
      builder.set_target(i, l, static_cast<uint32_t>(renum[a.step(order[i], l)]));
  builder.set_initial(0);
  return std::move(builder).finish();
}

}  // namespace

Dfa minimize(const Dfa& a0) {
  Dfa a = restrict_reachable(a0);
  size_t n = a.state_count();
  uint32_t letters = a.alphabet.letter_count();

  // Dense transition and inverse tables.
  std::vector<uint32_t> delta(n * letters);
  std::vector<std::vector<uint32_t>> preds(n * letters);
  for (uint32_t s = 0; s < n; ++s)
    for (const auto& [cube, target] : a.transitions[s])
      for (uint32_t l = 0; l < letters; ++l)
        if (cube.matches(l)) {
          delta[s * letters + l] = target;
          preds[target * letters + l].push_back(s);
        }

  // Hopcroft partition refinement.
  std::vector<uint32_t> block_of(n, 0);
  std::vector<std::vector<uint32_t>> blocks;
  {
    std::vector<uint32_t> acc, rej;
    for (uint32_t s = 0; s < n; ++s) (a.accepting[s] ? acc : rej).push_back(s);
    if (!acc.empty()) blocks.push_back(std::move(acc));
    if (!rej.empty()) blocks.push_back(std::move(rej));
    for (uint32_t b = 0; b < blocks.size(); ++b)
      for (uint32_t s : blocks[b]) block_of[s] = b;
  }
  std::deque<std::pair<uint32_t, uint32_t>> worklist;  // (block, letter)
  std::vector<char> in_worklist;
  auto push_work = [&](uint32_t b, uint32_t l) {
    if (in_worklist.size() < blocks.size() * letters)
      in_worklist.resize(blocks.size() * letters, 0);
    if (!in_worklist[b * letters + l]) {
      in_worklist[b * letters + l] = 1;
      worklist.push_back({b, l});
    }
  };
  for (uint32_t b = 0; b < blocks.size(); ++b)
    for (uint32_t l = 0; l < letters; ++l) push_work(b, l);

  std::vector<uint32_t> touched;
  while (!worklist.empty()) {
    auto [splitter, l] = worklist.front();
    worklist.pop_front();
    in_worklist[splitter * letters + l] = 0;

    // X = states with delta(s, l) in splitter
    touched.clear();
    std::vector<uint32_t> hits;
    for (uint32_t t : blocks[splitter])
      for (uint32_t s : preds[t * letters + l]) hits.push_back(s);
    if (hits.empty()) continue;

    std::vector<std::vector<uint32_t>> moved(blocks.size());
    for (uint32_t s : hits) {
      uint32_t b = block_of[s];
      if (moved[b].empty()) touched.push_back(b);
      moved[b].push_back(s);
    }
    for (uint32_t b : touched) {
      std::sort(moved[b].begin(), moved[b].end());
      moved[b].erase(std::unique(moved[b].begin(), moved[b].end()), moved[b].end());
      if (moved[b].size() == blocks[b].size()) continue;  // no split
      // Split block b into moved[b] and the rest.
      std::vector<uint32_t> rest;
      rest.reserve(blocks[b].size() - moved[b].size());
      std::vector<char> is_moved(n, 0);
      for (uint32_t s : moved[b]) is_moved[s] = 1;
      for (uint32_t s : blocks[b])
        if (!is_moved[s]) rest.push_back(s);
      uint32_t nb = static_cast<uint32_t>(blocks.size());
      blocks[b] = std::move(moved[b]);
      blocks.push_back(std::move(rest));
      for (uint32_t s : blocks[nb]) block_of[s] = nb;
      in_worklist.resize(blocks.size() * letters, 0);
      for (uint32_t ll = 0; ll < letters; ++ll) {
        if (in_worklist[b * letters + ll]) {
          push_work(nb, ll);
        } else {
          // enqueue the smaller half
          if (blocks[b].size() <= blocks[nb].size())
            push_work(b, ll);
          else
            push_work(nb, ll);
        }
      }
    }
  }

  // Quotient automaton, renumbered by BFS from the initial block.
  size_t nb = blocks.size();
  std::vector<int32_t> bfs_id(nb, -1);
  std::deque<uint32_t> todo{block_of[a.initial]};
  bfs_id[block_of[a.initial]] = 0;
  uint32_t count = 1;
  std::vector<uint32_t> order{block_of[a.initial]};
  while (!todo.empty()) {
    uint32_t b = todo.front();
    todo.pop_front();
    uint32_t rep = blocks[b][0];
    for (uint32_t l = 0; l < letters; ++l) {
      uint32_t tb = block_of[delta[rep * letters + l]];
      if (bfs_id[tb] < 0) {
        bfs_id[tb] = static_cast<int32_t>(count++);
        order.push_back(tb);
        todo.push_back(tb);
      }
    }
  }
  DfaBuilder builder(a.alphabet);
  for (uint32_t i = 0; i < count; ++i)
    builder.add_state(a.accepting[blocks[order[i]][0]]);
  for (uint32_t i = 0; i < count; ++i) {
    uint32_t rep = blocks[order[i]][0];
    for (uint32_t l = 0; l < letters; ++l)
      builder.set_target(
          i, l, static_cast<uint32_t>(bfs_id[block_of[delta[rep * letters + l]]]));
  }
  builder.set_initial(0);
  return std::move(builder).finish();
}

// --------------------------------------------------------------------------
// Queries
// --------------------------------------------------------------------------

namespace {

// States reachable by reading at least one letter.
std::vector<char> reachable_after_letter(const Dfa& a) {
  std::vector<char> seen(a.state_count(), 0);
  std::deque<uint32_t> todo;
  uint32_t letters = a.alphabet.letter_count();
  for (uint32_t l = 0; l < letters; ++l) {
    uint32_t t = a.step(a.initial, l);
    if (!seen[t]) {
      seen[t] = 1;
      todo.push_back(t);
    }
  }
  while (!todo.empty()) {
    uint32_t s = todo.front();
    todo.pop_front();
    for (uint32_t l = 0; l < letters; ++l) {
      uint32_t t = a.step(s, l);
      if (!seen[t]) {
        seen[t] = 1;
        todo.push_back(t);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_empty(const Dfa& a) {
  auto seen = reachable_after_letter(a);
  for (size_t s = 0; s < a.state_count(); ++s)
    if (seen[s] && a.accepting[s]) return false;
  return true;
}

bool is_universal(const Dfa& a) {
  auto seen = reachable_after_letter(a);
  for (size_t s = 0; s < a.state_count(); ++s)
    if (seen[s] && !a.accepting[s]) return false;
  return true;
}

bool includes(const Dfa& a, const Dfa& b) {
  return is_empty(product(b, complement(a), Combine::And));
}

bool equivalent(const Dfa& a, const Dfa& b) {
  return includes(a, b) && includes(b, a);
}

std::optional<std::vector<uint32_t>> shortest_accepted(const Dfa& a) {
  uint32_t letters = a.alphabet.letter_count();
  constexpr int64_t kUnseen = -2, kRoot = -1;
  std::vector<int64_t> pred(a.state_count(), kUnseen);
  std::vector<uint32_t> via(a.state_count(), 0);
  std::deque<uint32_t> todo;
  auto trace = [&](uint32_t t) {
    std::vector<uint32_t> w;
    int64_t cur = t;
    for (;;) {
      w.push_back(via[static_cast<size_t>(cur)]);
      if (pred[static_cast<size_t>(cur)] == kRoot) break;
      cur = pred[static_cast<size_t>(cur)];
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (uint32_t l = 0; l < letters; ++l) {
    uint32_t t = a.step(a.initial, l);
    if (pred[t] == kUnseen) {
      pred[t] = kRoot;
      via[t] = l;
      if (a.accepting[t]) return trace(t);
      todo.push_back(t);
    }
  }
  while (!todo.empty()) {
    uint32_t s = todo.front();
    todo.pop_front();
    for (uint32_t l = 0; l < letters; ++l) {
      uint32_t t = a.step(s, l);
      if (pred[t] == kUnseen) {
        pred[t] = s;
        via[t] = l;
        if (a.accepting[t]) return trace(t);
        todo.push_back(t);
      }
    }
  }
  return std::nullopt;
}

bool identical(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet == b.alphabet) || a.initial != b.initial ||
      a.accepting != b.accepting || a.state_count() != b.state_count())
    return false;
  for (size_t s = 0; s < a.state_count(); ++s) {
    if (a.transitions[s].size() != b.transitions[s].size()) return false;
    for (size_t i = 0; i < a.transitions[s].size(); ++i) {
      const auto& [ca, ta] = a.transitions[s][i];
      const auto& [cb, tb] = b.transitions[s][i];
      if (ca.bits != cb.bits || ca.mask != cb.mask || ta != tb) return false;
    }
  }
  return true;
}

Dfa universal_dfa(Alphabet alphabet) {
  DfaBuilder builder(alphabet);
  uint32_t init = builder.add_state(false);
  uint32_t acc = builder.add_state(true);
  for (uint32_t l = 0; l < alphabet.letter_count(); ++l) {
    builder.set_target(init, l, acc);
    builder.set_target(acc, l, acc);
  }
  builder.set_initial(init);
  return std::move(builder).finish();
}

Dfa empty_dfa(Alphabet alphabet) {
  DfaBuilder builder(alphabet);
  uint32_t init = builder.add_state(false);
  for (uint32_t l = 0; l < alphabet.letter_count(); ++l) builder.set_target(init, l, init);
  builder.set_initial(init);
  return std::move(builder).finish();
}

// --------------------------------------------------------------------------
// Dump formats
// --------------------------------------------------------------------------

void write_dump(std::ostream& os, const Dfa& a) {
  os << "dfa " << a.alphabet.var_count() << ' ' << a.state_count() << ' '
     << a.initial << '\n';
  os << "vars";
  for (const auto& v : a.alphabet.vars) os << ' ' << v;
  os << '\n';
  os << "acc";
  for (size_t s = 0; s < a.state_count(); ++s)
    if (a.accepting[s]) os << ' ' << s;
  os << '\n';
  for (size_t s = 0; s < a.state_count(); ++s)
    for (const auto& [cube, target] : a.transitions[s])
      os << "t " << s << ' ' << cube.to_string(a.alphabet.var_count()) << ' '
         << target << '\n';
}

Dfa read_dump(std::istream& is) {
  std::string tok;
  size_t nvars = 0, nstates = 0;
  uint32_t initial = 0;
  if (!(is >> tok) || tok != "dfa") throw ParseError("expected 'dfa' header");
  if (!(is >> nvars >> nstates >> initial)) throw ParseError("bad dfa header");
  if (!(is >> tok) || tok != "vars") throw ParseError("expected 'vars' line");
  Dfa d;
  d.alphabet.vars.resize(nvars);
  for (auto& v : d.alphabet.vars)
    if (!(is >> v)) throw ParseError("missing variable name");
  d.initial = initial;
  d.accepting.assign(nstates, 0);
  d.transitions.resize(nstates);
  if (!(is >> tok) || tok != "acc") throw ParseError("expected 'acc' line");
  // acceptance ids up to the first 't'
  while (is >> tok) {
    if (tok == "t") break;
    size_t id = 0;
    try {
      id = std::stoul(tok);
    } catch (const std::exception&) {
      throw ParseError("bad acc id: " + tok);
    }
    if (id >= nstates) throw ParseError("acc id out of range");
    d.accepting[id] = 1;
  }
  while (is) {
    if (tok != "t") break;
    size_t src, dst;
    std::string cube;
    if (!(is >> src >> cube >> dst)) throw ParseError("bad transition line");
    if (src >= nstates || dst >= nstates || cube.size() != nvars)
      throw ParseError("bad transition line");
    d.transitions[src].push_back({Cube::parse(cube), static_cast<uint32_t>(dst)});
    if (!(is >> tok)) break;
  }
  d.check_well_formed();
  return d;
}

void write_dot(std::ostream& os, const Dfa& a, const std::string& name) {
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  init [shape=point];\n  init -> s" << a.initial << ";\n";
  for (size_t s = 0; s < a.state_count(); ++s)
    if (a.accepting[s]) os << "  s" << s << " [shape=doublecircle];\n";
  for (size_t s = 0; s < a.state_count(); ++s)
    for (const auto& [cube, target] : a.transitions[s])
      os << "  s" << s << " -> s" << target << " [label=\""
         << cube.to_string(a.alphabet.var_count()) << "\"];\n";
  os << "}\n";
}

}  // namespace qsyn
