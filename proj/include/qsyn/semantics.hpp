#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qsyn/formula.hpp"

namespace qsyn {

// A nonempty finite word over valuations of an ordered variable environment.
// Bit i of a letter is the value of env[i].
struct Word {
  std::vector<std::string> env;
  std::vector<uint32_t> letters;

  size_t size() const { return letters.size(); }
  bool var_at(size_t pos, size_t var_index) const {
    return (letters[pos] >> var_index) & 1u;
  }
};

// Truth of a propositional formula at position i.  Throws InterfaceError on
// unknown variables, std::out_of_range on bad positions.
bool eval_prop(const Word& w, size_t i, const PropPtr& phi);

// The satisfaction relation on interval [b, e], 0 <= b <= e < |w|.  This is
// the reference implementation used as an oracle against the compiler: every
// clause follows its defining semantics directly (sugar included), with no
// automaton construction and no sharing with the compilation path.
bool eval(const Word& w, size_t b, size_t e, const FormulaPtr& d);

// sigma |= D  iff  sigma,[0,|sigma|-1] |= D
bool whole_word(const Word& w, const FormulaPtr& d);

// sigma,i |= D  iff  sigma,[0,i] |= D
bool point_sat(const Word& w, size_t i, const FormulaPtr& d);

// Visits every word over 2^env of length 1..max_len exactly once, shorter
// words first, letter sequences in lexicographic order within a length.
void enumerate_words(const std::vector<std::string>& env, size_t max_len,
                     const std::function<void(const Word&)>& visit);

std::vector<Word> all_words(const std::vector<std::string>& env, size_t max_len);

}  // namespace qsyn
