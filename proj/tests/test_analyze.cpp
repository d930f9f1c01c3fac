#include <random>
#include <sstream>

#include "doctest.h"
#include "qsyn/analyze.hpp"
#include "qsyn/errors.hpp"
#include "qsyn/casestudies.hpp"
#include "qsyn/compile.hpp"
#include "qsyn/robust.hpp"
#include "qsyn/semantics.hpp"

using namespace qsyn;

namespace {

Dfa monitor(const FormulaPtr& f, const IoSignature& io) {
  return compile(f, io.alphabet());
}

}  // namespace

TEST_CASE("must_inputs of a trivial commitment is everything") {
  IoSignature io{{"i"}, {"o"}};
  auto sup = mps(monitor(f_true(), io), io);
  REQUIRE(sup.has_value());
  Dfa must = must_inputs(*sup, monitor(f_true(), io));
  CHECK(must.alphabet.vars == std::vector<std::string>{"i"});
  CHECK(is_universal(must));
}

TEST_CASE("must_inputs agrees with brute-force output quantification") {
  // 2-cell arbiter with BeCorrect
  ArbiterParams p{2, 2, 1};
  CaseStudy cs = arbiter_spec(p);
  RobustSpec rs{cs.assumption, cs.commitment, Criterion{CriterionKind::BeCorrect}, "A"};
  LoweredSpec low = lower(rs, cs.inputs, cs.outputs);
  IoSignature io{low.inputs, low.outputs};
  auto sup = mps(monitor(low.hard, io), io);
  REQUIRE(sup.has_value());
  Dfa commit = monitor(low.soft, io);
  Dfa must = must_inputs(*sup, commit);

  // brute force over input words of length <= 4
  std::vector<uint32_t> cur;
  auto check_word = [&](const std::vector<uint32_t>& ii) {
    bool expect = true;
    std::vector<uint32_t> oo(ii.size(), 0);
    auto rec = [&](auto&& self, uint32_t state, size_t idx) -> void {
      if (!expect) return;
      if (idx == ii.size()) {
        Word w;
        w.env = io.alphabet().vars;
        for (size_t t = 0; t < ii.size(); ++t)
          w.letters.push_back(io.joint(ii[t], oo[t]));
        if (!whole_word(w, low.soft)) expect = false;
        return;
      }
      for (uint32_t out = 0; out < io.output_letters(); ++out) {
        uint32_t next = sup->dfa.step(state, io.joint(ii[idx], out));
        if (!sup->state_ok(next)) continue;
        oo[idx] = out;
        self(self, next, idx + 1);
      }
    };
    rec(rec, sup->dfa.initial, 0);
    uint32_t got = must.initial;
    for (uint32_t in : ii) got = must.step(got, in);
    CHECK(static_cast<bool>(must.accepting[got]) == expect);
  };
  auto gen = [&](auto&& self) -> void {
    if (!cur.empty()) check_word(cur);
    if (cur.size() == 4) return;
    for (uint32_t in = 0; in < io.input_letters(); ++in) {
      cur.push_back(in);
      self(self);
      cur.pop_back();
    }
  };
  gen(gen);
}

TEST_CASE("must_dominance verdicts") {
  IoSignature io{{"i"}, {"o"}};
  auto sup = mps(monitor(f_true(), io), io);
  REQUIRE(sup.has_value());
  Dfa commit = monitor(f_ep(prop_var("o")), io);
  // identical supervisors are equivalent
  auto self = must_dominance(*sup, *sup, commit);
  CHECK(self.verdict == Dominance::MustEquivalent);

  // a deterministic refinement must-dominates its supervisor
  Controller cnt = det_by_order(*sup, {{"o", true}});
  auto refined = must_dominance(*sup, cnt, commit);
  CHECK((refined.verdict == Dominance::RightDominates ||
         refined.verdict == Dominance::MustEquivalent));
  // here it is strict: the controller always grants
  CHECK(refined.verdict == Dominance::RightDominates);
  CHECK_FALSE(refined.right_only_witness.empty());
}

TEST_CASE("dtmc construction under uniform inputs") {
  IoSignature io{{"i1", "i2"}, {"o"}};
  auto sup = mps(monitor(f_true(), io), io);
  REQUIRE(sup.has_value());
  Controller cnt = det_by_order(*sup, {});
  Dtmc chain = build_dtmc(cnt, monitor(f_true(), io));
  chain.check_well_formed();
  for (const auto& row : chain.rows) {
    double total = 0;
    for (const auto& [p, t] : row) {
      CHECK(p >= 0.25 - 1e-12);  // multiples of 1/4, possibly merged
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(long_run_value(chain) == doctest::Approx(1.0));
}

TEST_CASE("long_run_value closed forms") {
  // single absorbing accepting state
  Dtmc one;
  one.initial = 0;
  one.rows = {{{1.0, 0}}};
  one.accepting = {1};
  CHECK(long_run_value(one) == doctest::Approx(1.0));

  // period-2 chain alternating accepting/rejecting
  Dtmc two;
  two.initial = 0;
  two.rows = {{{1.0, 1}}, {{1.0, 0}}};
  two.accepting = {1, 0};
  CHECK(long_run_value(two) == doctest::Approx(0.5).epsilon(1e-12));

  // transient split into two absorbing states
  Dtmc split;
  split.initial = 0;
  split.rows = {{{0.25, 1}, {0.75, 2}}, {{1.0, 1}}, {{1.0, 2}}};
  split.accepting = {0, 1, 0};
  CHECK(long_run_value(split) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("long_run_value agrees with Monte Carlo") {
  // random 12-state chain with out-degree 3
  std::mt19937 rng(99);
  Dtmc m;
  m.initial = 0;
  size_t n = 12;
  std::uniform_int_distribution<uint32_t> pick(0, n - 1);
  std::bernoulli_distribution acc(0.5);
  for (size_t s = 0; s < n; ++s) {
    std::map<uint32_t, double> row;
    for (int e = 0; e < 3; ++e) row[pick(rng)] += 1.0 / 3.0;
    m.rows.emplace_back(row.size(), std::pair<double, uint32_t>{0, 0});
    size_t i = 0;
    for (auto& [t, p] : row) m.rows.back()[i++] = {p, t};
    m.accepting.push_back(acc(rng));
  }
  double exact = long_run_value(m);

  std::mt19937 sim(7);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  uint32_t state = m.initial;
  long hits = 0;
  const long steps = 1000000;
  for (long t = 0; t < steps; ++t) {
    double r = coin(sim);
    for (const auto& [p, target] : m.rows[state]) {
      if (r < p) {
        state = target;
        break;
      }
      r -= p;
    }
    hits += m.accepting[state];
  }
  CHECK(std::abs(exact - double(hits) / steps) < 3e-3);
}

TEST_CASE("simulation runs the closed loop and reports verdicts") {
  ArbiterParams p{2, 2, 2};
  CaseStudy cs = arbiter_spec(p);
  IoSignature io{cs.inputs, cs.outputs};
  auto sup = mps(monitor(cs.commitment, io), io);
  REQUIRE(sup.has_value());
  Controller cnt = det_by_order(*sup, parse_output_order("a1,a2", io));

  // no requests: no spurious grants
  std::vector<uint32_t> quiet(6, 0);
  PropPtr no_spurious = prop_and(prop_implies(prop_var("a1"), prop_var("r1")),
                                 prop_implies(prop_var("a2"), prop_var("r2")));
  auto steps = simulate(cnt, quiet, {{"NoSpurious", monitor(f_ep(no_spurious), io)}});
  CHECK(steps.size() == 6);
  for (const auto& step : steps) {
    CHECK(step.output == 0);
    CHECK(step.verdicts[0]);
  }

  // length-1 trace gives length-1 output
  auto one = simulate(cnt, {0b11}, {});
  CHECK(one.size() == 1);

  // verdicts match the oracle on the produced joint trace
  std::vector<uint32_t> busy = {0b01, 0b11, 0b10, 0b11, 0b11};
  FormulaPtr mutex = f_ep(prop_not(prop_and(prop_var("a1"), prop_var("a2"))));
  auto run = simulate(cnt, busy, {{"Mutex", monitor(mutex, io)}});
  Word joint;
  joint.env = io.alphabet().vars;
  for (const auto& step : run) joint.letters.push_back(io.joint(step.input, step.output));
  for (size_t t = 0; t < run.size(); ++t)
    CHECK(run[t].verdicts[0] == point_sat(joint, t, mutex));
}

TEST_CASE("trace csv round trip") {
  IoSignature io{{"r1", "r2"}, {"a1", "a2"}};
  std::istringstream csv("r2,r1\n0,1\n1,1\n0,0\n");
  std::vector<uint32_t> inputs = read_trace_csv(csv, io.inputs);
  REQUIRE(inputs.size() == 3);
  CHECK(inputs[0] == 0b01);  // r1=1 r2=0
  CHECK(inputs[1] == 0b11);
  CHECK(inputs[2] == 0b00);

  std::istringstream bad("r1\n1\n");
  CHECK_THROWS_AS(read_trace_csv(bad, io.inputs), ParseError);
}

TEST_CASE("mrmc-style export") {
  Dtmc two;
  two.initial = 0;
  two.rows = {{{0.5, 0}, {0.5, 1}}, {{1.0, 0}}};
  two.accepting = {0, 1};
  std::ostringstream tra, lab;
  write_tra(tra, two);
  write_lab(lab, two);
  CHECK(tra.str().find("STATES 2") == 0);
  CHECK(tra.str().find("TRANSITIONS 3") != std::string::npos);
  CHECK(tra.str().find("0 1 0.5") != std::string::npos);
  CHECK(lab.str().find("1 target") != std::string::npos);
}

TEST_CASE("stronger criteria are must-dominated at the supervisor level") {
  // 4-cell arbiter: the supervisor for the relaxed point criterion
  // dominates the one for the never-violated-in-the-past criterion.
  ArbiterParams p{4, 3, 2};
  CaseStudy cs = arbiter_spec(p);
  auto build = [&](CriterionKind kind) {
    RobustSpec rs{cs.assumption, cs.commitment, Criterion{kind, 1, 3}, "A"};
    LoweredSpec low = lower(rs, cs.inputs, cs.outputs);
    IoSignature io{low.inputs, low.outputs};
    auto sup = mps(compile(low.hard, io.alphabet()), io);
    REQUIRE(sup.has_value());
    return *sup;
  };
  Supervisor be_correct = build(CriterionKind::BeCorrect);
  Supervisor currently = build(CriterionKind::BeCurrentlyCorrect);
  Dfa commit = compile(cs.commitment, be_correct.dfa.alphabet);
  DominanceResult res = must_dominance(be_correct, currently, commit);
  CHECK(res.verdict == Dominance::RightDominates);
  CHECK_FALSE(res.right_only_witness.empty());
}
