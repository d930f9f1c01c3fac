#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsyn/semantics.hpp"

namespace qsyn {

// Ordered variable set.  A letter is a bit vector with bit i = vars[i].
struct Alphabet {
  std::vector<std::string> vars;

  size_t var_count() const { return vars.size(); }
  uint32_t letter_count() const { return 1u << vars.size(); }
  int index_of(const std::string& name) const;
  bool operator==(const Alphabet& other) const { return vars == other.vars; }
};

// Ternary mask over the alphabet: a letter matches iff its fixed bits agree.
struct Cube {
  uint32_t bits = 0;
  uint32_t mask = 0;  // 1 = fixed, 0 = don't care

  bool matches(uint32_t letter) const { return (letter & mask) == bits; }
  std::string to_string(size_t nvars) const;
  static Cube parse(const std::string& text);
};

// Total deterministic finite automaton with cube-compressed transitions.
// Languages are read over nonempty words only; whether the empty word is
// "accepted" (initial state flagged accepting) is normalised away by
// drop_empty_word before language-level comparisons.
struct Dfa {
  Alphabet alphabet;
  uint32_t initial = 0;
  std::vector<char> accepting;
  std::vector<std::vector<std::pair<Cube, uint32_t>>> transitions;

  size_t state_count() const { return accepting.size(); }
  uint32_t step(uint32_t state, uint32_t letter) const;
  uint32_t run(const std::vector<uint32_t>& letters) const;

  // Checks cube disjointness/totality per state; throws InterfaceError.
  void check_well_formed() const;
};

// Builder with dense per-state rows, compressed into cubes on finish().
class DfaBuilder {
 public:
  explicit DfaBuilder(Alphabet alphabet);
  uint32_t add_state(bool accepting);
  void set_target(uint32_t state, uint32_t letter, uint32_t target);
  void set_initial(uint32_t state) { initial_ = state; }
  Dfa finish() &&;

 private:
  Alphabet alphabet_;
  uint32_t initial_ = 0;
  std::vector<char> accepting_;
  std::vector<std::vector<uint32_t>> rows_;
};

// Nondeterministic automaton used internally by chop and projection.
struct Nfa {
  Alphabet alphabet;
  std::vector<uint32_t> initials;
  std::vector<char> accepting;
  // overlapping cubes allowed; all matches are successors
  std::vector<std::vector<std::pair<Cube, uint32_t>>> transitions;

  size_t state_count() const { return accepting.size(); }
};

// Subset-construction state cap.  Exceeding it raises ResourceError.
inline constexpr size_t kSubsetStateCap = 1u << 20;

bool accepts(const Dfa& a, const Word& w);

enum class Combine { And, Or };
Dfa product(const Dfa& a, const Dfa& b, Combine op);
Dfa complement(const Dfa& a);  // flips every acceptance flag

// Removes the empty word from the represented language without touching the
// nonempty part (duplicates a re-entered accepting initial state if needed).
Dfa drop_empty_word(const Dfa& a);

// Existential projection: removes variable p, L = {w | some p-extension in L(a)}.
Dfa project(const Dfa& a, const std::string& p);

Dfa determinize(const Nfa& nfa);

// Canonical minimal automaton: unreachable states dropped, Hopcroft
// refinement, states renumbered in BFS order from the initial state.
Dfa minimize(const Dfa& a);

// Language queries over nonempty words.
bool is_empty(const Dfa& a);
bool is_universal(const Dfa& a);
bool equivalent(const Dfa& a, const Dfa& b);
// includes(a, b) iff L(b) is a subset of L(a)
bool includes(const Dfa& a, const Dfa& b);

// Shortest accepted nonempty word, if any (BFS, lowest letter first).
std::optional<std::vector<uint32_t>> shortest_accepted(const Dfa& a);

// Structural identity modulo nothing: same alphabet, states, flags, cubes.
bool identical(const Dfa& a, const Dfa& b);

Dfa universal_dfa(Alphabet alphabet);   // all nonempty words
Dfa empty_dfa(Alphabet alphabet);       // no words

// Line-based text dump: "dfa <nvars> <nstates> <initial>", "vars <names...>",
// "acc <ids...>", then one "t <src> <cube> <dst>" per cube.
void write_dump(std::ostream& os, const Dfa& a);
Dfa read_dump(std::istream& is);

void write_dot(std::ostream& os, const Dfa& a, const std::string& name = "dfa");

std::vector<uint32_t> word_letters(const Dfa& a, const Word& w);
std::string format_word(const Alphabet& alphabet, const std::vector<uint32_t>& letters);

}  // namespace qsyn
