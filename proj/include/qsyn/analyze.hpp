#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsyn/synth.hpp"

namespace qsyn {

// Discrete-time Markov chain with an accepting-state labelling.
struct Dtmc {
  uint32_t initial = 0;
  std::vector<std::vector<std::pair<double, uint32_t>>> rows;
  std::vector<char> accepting;

  size_t state_count() const { return rows.size(); }
  void check_well_formed() const;  // rows sum to 1 within 1e-12
};

enum class Dominance { LeftDominates, RightDominates, MustEquivalent, Incomparable };

struct DominanceResult {
  Dominance verdict = Dominance::MustEquivalent;
  // input words witnessing non-inclusion: in MustInp(left) but not right,
  // and vice versa; empty when the respective inclusion holds
  std::vector<std::vector<uint32_t>> left_only_witness;
  std::vector<std::vector<uint32_t>> right_only_witness;
};

const char* to_string(Dominance d);

// MustInp(sup, commit): input words all of whose supervisor-compatible
// completions satisfy the commitment.  Computed as the input-projection
// complement of L(sup) /\ L(!commit); result ranges over the input alphabet.
Dfa must_inputs(const Supervisor& sup, const Dfa& commit);

// Compares MustInp sets of two supervisors over the same signature.
// LeftDominates means MustInp(right) is strictly inside MustInp(left).
DominanceResult must_dominance(const Supervisor& left, const Supervisor& right,
                               const Dfa& commit);

// Closed loop of a controller under iid uniform inputs, producted with a
// property monitor; accepting states are those whose monitor half accepts.
Dtmc build_dtmc(const Controller& cnt, const Dfa& prop);

// Long-run fraction of time spent in accepting states from the initial
// state: bottom-SCC decomposition, per-BSCC stationary distribution and
// reachability-weighted combination.
double long_run_value(const Dtmc& m);

struct SimulationStep {
  uint32_t input = 0;
  uint32_t output = 0;
  std::vector<bool> verdicts;  // one per property, in argument order
};

// Steps the controller over the input trace; each property verdict at step t
// is point satisfaction of the property on the joint prefix through t.
std::vector<SimulationStep> simulate(
    const Controller& cnt, const std::vector<uint32_t>& inputs,
    const std::vector<std::pair<std::string, Dfa>>& props);

// MRMC-style export: ".tra" transition list and ".lab" accepting labels.
void write_tra(std::ostream& os, const Dtmc& m);
void write_lab(std::ostream& os, const Dtmc& m);

// Trace CSV: header row of variable names, then rows of 0/1 values.
std::vector<uint32_t> read_trace_csv(std::istream& is,
                                     const std::vector<std::string>& columns);
void write_trace_csv(std::ostream& os, const IoSignature& io,
                     const std::vector<SimulationStep>& steps,
                     const std::vector<std::string>& prop_names);

}  // namespace qsyn
