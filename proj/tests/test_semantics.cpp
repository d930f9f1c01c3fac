#include "doctest.h"
#include "qsyn/semantics.hpp"

using namespace qsyn;

namespace {

Word make_word(std::vector<std::string> env, std::vector<uint32_t> letters) {
  Word w;
  w.env = std::move(env);
  w.letters = std::move(letters);
  return w;
}

}  // namespace

TEST_CASE("eval_prop basics") {
  Word w = make_word({"p"}, {1});
  CHECK(eval_prop(w, 0, prop_var("p")));

  Word empty = make_word({"p"}, {0});
  CHECK(eval_prop(empty, 0, prop_not(prop_var("p"))));

  Word pq = make_word({"p", "q"}, {0b01, 0b10});
  CHECK_FALSE(eval_prop(pq, 1, prop_and(prop_var("p"), prop_var("q"))));
  CHECK_THROWS_AS(eval_prop(pq, 2, prop_var("p")), std::out_of_range);
}

TEST_CASE("slen and counting terms") {
  Word w = make_word({"p"}, {0, 1, 0});
  CHECK(eval(w, 0, 2, f_slen(CmpOp::Eq, 2)));
  CHECK_FALSE(eval(w, 0, 1, f_slen(CmpOp::Eq, 2)));

  // scount counts positions including the last
  Word a = make_word({"A"}, {1, 1, 0, 1});
  CHECK(eval(a, 0, 3, f_scount(prop_not(prop_var("A")), CmpOp::Gt, 0)));
  CHECK_FALSE(eval(a, 0, 3, f_scount(prop_not(prop_var("A")), CmpOp::Gt, 1)));

  // sdur excludes the last position
  CHECK(eval(a, 2, 3, f_sdur(prop_not(prop_var("A")), CmpOp::Eq, 1)));
  CHECK(eval(a, 0, 2, f_sdur(prop_var("A"), CmpOp::Eq, 2)));
}

TEST_CASE("chop splits with a shared point") {
  // D' = true^<!req>^(slen=1) || true^<ack>: holds at a point iff the
  // current point has ack or the previous point lacks req.
  FormulaPtr d = f_or(
      f_chop(f_true(), f_chop(f_point(prop_not(prop_var("req"))), f_slen(CmpOp::Eq, 1))),
      f_chop(f_true(), f_point(prop_var("ack"))));
  // previous point lacks req
  Word w = make_word({"req", "ack"}, {0b00, 0b00});
  CHECK(eval(w, 0, 1, d));
  // current ack
  Word w2 = make_word({"req", "ack"}, {0b01, 0b10});
  CHECK(eval(w2, 0, 1, d));
  // previous point has req and no current ack
  Word w3 = make_word({"req", "ack"}, {0b01, 0b00});
  CHECK_FALSE(eval(w3, 0, 1, d));
  // exhaustive cross-check of the reading
  enumerate_words({"req", "ack"}, 4, [&](const Word& v) {
    for (size_t i = 0; i < v.size(); ++i) {
      bool expect = v.var_at(i, 1) || (i >= 1 && !v.var_at(i - 1, 0));
      CHECK(point_sat(v, i, d) == expect);
    }
  });
}

TEST_CASE("whole word and point satisfaction") {
  Word any = make_word({"p"}, {0, 1});
  CHECK(whole_word(any, f_true()));

  Word one = make_word({"p"}, {1});
  CHECK(whole_word(one, f_point(prop_true())));
  Word two = make_word({"p"}, {1, 1});
  CHECK_FALSE(whole_word(two, f_point(prop_true())));

  // scount !A <= 3 on an all-A word
  Word a4 = make_word({"A"}, {1, 1, 1, 1});
  CHECK(whole_word(a4, f_scount(prop_not(prop_var("A")), CmpOp::Le, 3)));
}

TEST_CASE("quantifier ranges over whole-word variants") {
  // ex p. <p> on a 1-letter word is always true
  Word w = make_word({"q"}, {0});
  CHECK(eval(w, 0, 0, f_ex("p", f_point(prop_var("p")))));
  // all p. <p> is false (the p=0 variant refutes it)
  CHECK_FALSE(eval(w, 0, 0, f_allq("p", f_point(prop_var("p")))));
  // ex p. ([[p]] && scount p = 2) over length 2
  Word w2 = make_word({"q"}, {1, 0});
  CHECK(eval(w2, 0, 1, f_ex("p", f_and(f_all(prop_var("p")),
                                       f_scount(prop_var("p"), CmpOp::Eq, 2)))));
}

TEST_CASE("sugar kinds evaluate by their defining semantics") {
  Word w = make_word({"p"}, {1, 0, 1});
  // pt / ext
  CHECK(eval(w, 1, 1, f_pt()));
  CHECK_FALSE(eval(w, 0, 1, f_pt()));
  CHECK(eval(w, 0, 1, f_ext()));
  // <>: some subinterval; []: all subintervals
  CHECK(eval(w, 0, 2, f_diamond(f_point(prop_not(prop_var("p"))))));
  CHECK_FALSE(eval(w, 0, 2, f_box(f_point(prop_var("p")))));
  // pref: all prefixes
  CHECK(eval(w, 0, 2, f_pref(f_slen(CmpOp::Le, 5))));
  CHECK_FALSE(eval(w, 0, 2, f_pref(f_point(prop_var("p")))));
  // EP looks at the last point
  CHECK(eval(w, 0, 2, f_ep(prop_var("p"))));
  CHECK_FALSE(eval(w, 0, 1, f_ep(prop_var("p"))));
  // KBOUNDED switches to the suffix window once long enough
  FormulaPtr kb = f_kbounded(f_all(prop_var("p")), 1);
  CHECK(eval(w, 0, 0, kb));        // short: whole interval
  CHECK_FALSE(eval(w, 0, 1, kb));  // window [0,1] has !p at 1
  CHECK_FALSE(eval(w, 0, 2, kb));  // window [1,2] has !p at 1
  Word w2 = make_word({"p"}, {0, 1, 1});
  CHECK(eval(w2, 0, 2, kb));  // window [1,2] all p
}

TEST_CASE("desugared formulas agree with direct sugar evaluation") {
  std::vector<FormulaPtr> sugared = {
      f_pt(),
      f_ext(),
      f_false(),
      f_diamond(f_point(prop_var("p"))),
      f_box(f_ep(prop_var("p"))),
      f_pref(f_ep(prop_var("p"))),
      f_ep(prop_and(prop_var("p"), prop_var("q"))),
      f_implies(f_ep(prop_var("p")), f_ep(prop_var("q"))),
      f_iff(f_ep(prop_var("p")), f_ep(prop_var("q"))),
      f_kbounded(f_all(prop_var("p")), 2),
  };
  for (const auto& f : sugared) {
    FormulaPtr core = desugar(f);
    enumerate_words({"p", "q"}, 4, [&](const Word& w) {
      for (size_t b = 0; b < w.size(); ++b)
        for (size_t e = b; e < w.size(); ++e)
          CHECK(eval(w, b, e, f) == eval(w, b, e, core));
    });
  }
}

TEST_CASE("enumerate_words counts") {
  size_t n1 = 0;
  enumerate_words({"p"}, 1, [&](const Word&) { ++n1; });
  CHECK(n1 == 2);
  size_t n2 = 0;
  enumerate_words({"p"}, 2, [&](const Word&) { ++n2; });
  CHECK(n2 == 6);
  size_t n3 = 0;
  enumerate_words({"p", "q"}, 3, [&](const Word&) { ++n3; });
  CHECK(n3 == 84);
  // no duplicates
  auto words = all_words({"p"}, 3);
  for (size_t i = 0; i < words.size(); ++i)
    for (size_t j = i + 1; j < words.size(); ++j)
      CHECK((words[i].size() != words[j].size() || words[i].letters != words[j].letters));
}

TEST_CASE("chop right unit up to the shared point") {
  // eval(D ^ <true>) == eval(D) on anchored intervals
  FormulaPtr d = f_scount(prop_var("p"), CmpOp::Ge, 1);
  enumerate_words({"p"}, 4, [&](const Word& w) {
    for (size_t e = 0; e < w.size(); ++e)
      CHECK(eval(w, 0, e, f_chop(d, f_point(prop_true()))) == eval(w, 0, e, d));
  });
}
