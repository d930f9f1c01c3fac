#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsyn/dfa.hpp"

namespace qsyn {

// Input/output split of an alphabet.  The automaton alphabet must list the
// inputs first, then the outputs, both in declaration order.
struct IoSignature {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  size_t input_count() const { return inputs.size(); }
  size_t output_count() const { return outputs.size(); }
  uint32_t input_letters() const { return 1u << inputs.size(); }
  uint32_t output_letters() const { return 1u << outputs.size(); }
  uint32_t joint(uint32_t in, uint32_t out) const {
    return in | (out << inputs.size());
  }
  Alphabet alphabet() const;
};

// Output-nondeterministic Mealy machine as a DFA with a unique reject sink:
// every state except the reject is accepting, and from every accepting state
// each input admits at least one output that avoids the reject.
struct Supervisor {
  Dfa dfa;
  IoSignature io;
  std::optional<uint32_t> reject;  // absent when every output is allowed

  bool state_ok(uint32_t s) const { return !reject || s != *reject; }
  bool allows(uint32_t state, uint32_t in, uint32_t out) const {
    return state_ok(dfa.step(state, io.joint(in, out)));
  }
  // throws InterfaceError if blocking or reject is not a proper sink
  void check_invariants() const;
  bool is_deterministic() const;
};

// A deterministic supervisor: at most one allowed output per (state, input).
struct Controller : Supervisor {
  // the unique allowed output; throws if the controller is in the reject state
  uint32_t respond(uint32_t state, uint32_t in) const;
};

struct SynthParams {
  unsigned horizon = 50;
  double discount = 0.9;
  double delta = 1e-4;
};

// One output literal of a determinization order; positive prefers the
// variable true, negative prefers it false.
struct OutputLiteral {
  std::string var;
  bool positive = true;
};

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

// Maximally permissive supervisor realizing invariance of `hard`: greatest
// fixpoint of the safety game over the formula automaton, minimized.
// Returns nullopt when unrealizable.
std::optional<Supervisor> mps(const Dfa& hard, const IoSignature& io);

// Diagnostic surface for the value-iteration stage (used by tests that
// compare against a brute-force expectimax).
struct MphosTable {
  // arena = reachable product of supervisor and soft monitor
  std::vector<std::pair<uint32_t, uint32_t>> states;  // (sup state, soft state)
  std::vector<std::vector<uint32_t>> next;     // dense: state x joint letter
  std::vector<std::vector<char>> allowed;      // dense: state x joint letter
  std::vector<std::vector<char>> reward;       // 1 iff soft monitor accepts next
  std::vector<double> value;                   // after the final round
  // retained output sets, indexed [state][input]
  std::vector<std::vector<std::vector<uint32_t>>> retained;
  uint32_t initial = 0;
};

// Prunes the supervisor to the outputs whose one-step reward plus discounted
// future value lies within params.delta of the best, per state and input.
// The reward counts transitions after which the soft monitor accepts.
Supervisor mphos(const Supervisor& sup, const Dfa& soft, const SynthParams& params,
                 MphosTable* table = nullptr);

// Resolves remaining nondeterminism by a lexicographic output order.  Listed
// literals come first; unlisted output variables are appended as negative
// literals in declaration order.
Controller det_by_order(const Supervisor& sup, const std::vector<OutputLiteral>& order);

// Test harness for the monotonicity property: given valid(hard1 => hard2),
// the supervisor of the weaker requirement embeds the stronger one's
// language: L(mps(hard1)) subset of L(mps(hard2)).
bool must_monotone_check(const Dfa& hard1, const Dfa& hard2, const IoSignature& io);

std::vector<OutputLiteral> parse_output_order(const std::string& text,
                                              const IoSignature& io);

// Serialization: dfa dump plus "kind" and "io" header lines.
void write_supervisor(std::ostream& os, const Supervisor& sup);
Supervisor read_supervisor(std::istream& is);

}  // namespace qsyn
