#pragma once

#include "qsyn/dfa.hpp"
#include "qsyn/formula.hpp"

namespace qsyn {

// Builds the minimal formula automaton: L(compile(d, env)) is exactly the
// set of nonempty words over 2^env satisfying d.  Accepts sugar (desugars
// first).  Free variables of d must lie in env; quantified variables are
// compiled on a temporarily extended alphabet and projected away.
Dfa compile(const FormulaPtr& d, const Alphabet& env);

// Validity over nonempty words: |= d iff compile(d) is universal.
bool validity(const FormulaPtr& d, const Alphabet& env);

// Evaluates a propositional formula on a letter of the given alphabet.
bool prop_on_letter(const PropPtr& phi, const Alphabet& alphabet, uint32_t letter);

}  // namespace qsyn
