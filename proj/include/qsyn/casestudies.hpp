#pragma once

#include <string>

#include "qsyn/robust.hpp"

namespace qsyn {

// n-cell synchronous bus arbiter: inputs r1..rn, outputs a1..an.
// Commitment: mutual exclusion, no lost requests, no spurious grants, and a
// k-cycle response bound per cell.  Assumption: at most i simultaneous
// requests at the current cycle.
struct ArbiterParams {
  unsigned cells = 4;         // n
  unsigned response = 3;      // k
  unsigned max_requests = 2;  // i
};

struct CaseStudy {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  FormulaPtr assumption;
  FormulaPtr commitment;
};

CaseStudy arbiter_spec(const ArbiterParams& p);

// Commitment only (for realizability probes of the unconditional spec).
FormulaPtr arbiter_commit(const ArbiterParams& p);
FormulaPtr arbiter_assume(const ArbiterParams& p);
PropPtr atmost_requests(unsigned n, unsigned i);

// Mine pump controller: inputs HH2O (high water), HCH4 (methane), output
// PumpOn.  Assumptions bound pump capacity and methane behaviour; the
// commitment is pump safety plus a bound on sustained high water.  Every
// conjunct is windowed to its recent past so that it can recover from
// violations; a window value n restricts a formula to the last n+1 points.
struct MinepumpParams {
  unsigned water = 8;       // w
  unsigned capacity = 2;    // epsilon
  unsigned separation = 6;  // zeta
  unsigned persistence = 2; // kappa
  // per-conjunct window lengths
  unsigned window_capacity = 9;
  unsigned window_separation = 10;
  unsigned window_persistence = 9;
  unsigned window_commit = 9;
};

CaseStudy minepump_spec(const MinepumpParams& p);

// QSF sources structured like the tool's input files, with the assumption
// and commitment bound to indicators A and C and the named criterion in the
// hard requirement.
std::string arbiter_qsf(const ArbiterParams& p, const Criterion& criterion);
std::string minepump_qsf(const MinepumpParams& p, const Criterion& criterion);

}  // namespace qsyn
