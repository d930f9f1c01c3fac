#include "doctest.h"
#include "qsyn/formula.hpp"

using namespace qsyn;

TEST_CASE("desugar produces the defining expansions") {
  // pref(D) = !((!D)^true)
  FormulaPtr d = f_ep(prop_var("w"));
  FormulaPtr pref = desugar(f_pref(d));
  FormulaPtr expect = f_not(f_chop(f_not(desugar(d)), f_true()));
  CHECK(formula_equal(pref, expect));

  // EP(w) = true^<w>
  CHECK(formula_equal(desugar(f_ep(prop_var("w"))),
                      f_chop(f_true(), f_point(prop_var("w")))));

  // pt = <true>
  CHECK(formula_equal(desugar(f_pt()), f_point(prop_true())));
}

TEST_CASE("desugar is idempotent") {
  std::vector<FormulaPtr> fs = {
      f_kbounded(f_box(f_all(prop_var("p"))), 4),
      f_iff(f_diamond(f_pt()), f_pref(f_ext())),
      f_ex("p", f_implies(f_ep(prop_var("p")), f_false())),
      f_chop(f_slen(CmpOp::Ge, 2), f_sdur(prop_var("q"), CmpOp::Lt, 1)),
  };
  for (const auto& f : fs) {
    FormulaPtr once = desugar(f);
    CHECK(formula_equal(once, desugar(once)));
  }
}

TEST_CASE("free variables respect binders") {
  // ex p. (<p> ^ EP(q))
  FormulaPtr f = f_ex("p", f_chop(f_point(prop_var("p")), f_ep(prop_var("q"))));
  auto fv = free_vars(f);
  CHECK(fv == std::vector<std::string>{"q"});

  // shadowing: ex p. (<p> && ex p. <p>) has no free vars
  FormulaPtr g = f_ex("p", f_and(f_point(prop_var("p")),
                                 f_ex("p", f_point(prop_var("p")))));
  CHECK(free_vars(g).empty());
}

TEST_CASE("substitution renames free occurrences only") {
  FormulaPtr f = f_and(f_point(prop_var("p")), f_ex("p", f_point(prop_var("p"))));
  FormulaPtr g = subst_free_vars(f, {{"p", "r"}});
  CHECK(formula_equal(
      g, f_and(f_point(prop_var("r")), f_ex("p", f_point(prop_var("p"))))));
}

TEST_CASE("printer emits expected surface syntax") {
  CHECK(to_string(f_chop(f_true(), f_point(prop_var("ack")))) == "true ^ <ack>");
  CHECK(to_string(f_scount(prop_not(prop_var("A")), CmpOp::Le, 3)) == "scount !A <= 3");
  CHECK(to_string(f_kbounded(f_ep(prop_var("C")), 8)) == "KBOUNDED(EP(C), 8)");
  CHECK(to_string(f_not(f_chop(f_not(f_true()), f_true()))) == "!(!true ^ true)");
}

TEST_CASE("identifier validation") {
  CHECK(is_valid_identifier("r1"));
  CHECK(is_valid_identifier("HH2O"));
  CHECK_FALSE(is_valid_identifier("1r"));
  CHECK_FALSE(is_valid_identifier(""));
  CHECK_FALSE(is_valid_identifier("a-b"));
}
