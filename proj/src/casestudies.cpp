#include "qsyn/casestudies.hpp"

#include <sstream>

#include "qsyn/errors.hpp"

namespace qsyn {

namespace {

std::string rvar(unsigned i) { return "r" + std::to_string(i + 1); }
std::string avar(unsigned i) { return "a" + std::to_string(i + 1); }

FormulaPtr conjoin(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
  return out;
}

}  // namespace

PropPtr atmost_requests(unsigned n, unsigned i) {
  // disjunction over request valuations with at most i bits set
  PropPtr out = nullptr;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<unsigned>(__builtin_popcount(mask)) > i) continue;
    PropPtr term = nullptr;
    for (unsigned j = 0; j < n; ++j) {
      PropPtr lit = ((mask >> j) & 1u) ? prop_var(rvar(j)) : prop_not(prop_var(rvar(j)));
      term = term ? prop_and(term, lit) : lit;
    }
    out = out ? prop_or(out, term) : term;
  }
  return out ? out : prop_false();
}

FormulaPtr arbiter_assume(const ArbiterParams& p) {
  return f_ep(atmost_requests(p.cells, p.max_requests));
}

FormulaPtr arbiter_commit(const ArbiterParams& p) {
  unsigned n = p.cells, k = p.response;
  std::vector<FormulaPtr> parts;

  // Mutex(n): grants are mutually exclusive at the current cycle
  PropPtr mutex = prop_true();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      mutex = prop_and(mutex, prop_not(prop_and(prop_var(avar(i)), prop_var(avar(j)))));
  parts.push_back(f_ep(mutex));

  // NoLoss(n): some grant whenever some request
  PropPtr any_req = prop_false();
  PropPtr any_ack = prop_false();
  for (unsigned i = 0; i < n; ++i) {
    any_req = prop_or(any_req, prop_var(rvar(i)));
    any_ack = prop_or(any_ack, prop_var(avar(i)));
  }
  parts.push_back(f_ep(prop_implies(any_req, any_ack)));

  // NoSpurious(n): grants only to requesting cells
  PropPtr spurious = prop_true();
  for (unsigned i = 0; i < n; ++i)
    spurious = prop_and(spurious, prop_implies(prop_var(avar(i)), prop_var(rvar(i))));
  parts.push_back(f_ep(spurious));

  // Resp(r, a, k): a cell requesting continuously through the last k cycles
  // was granted at least once within them
  for (unsigned i = 0; i < n; ++i) {
    FormulaPtr sustained =
        f_chop(f_true(), f_and(f_all(prop_var(rvar(i))), f_slen(CmpOp::Eq, k - 1)));
    FormulaPtr granted = f_chop(
        f_true(),
        f_and(f_scount(prop_var(avar(i)), CmpOp::Gt, 0), f_slen(CmpOp::Eq, k - 1)));
    parts.push_back(f_implies(sustained, granted));
  }
  return conjoin(parts);
}

CaseStudy arbiter_spec(const ArbiterParams& p) {
  if (p.cells < 1 || p.response < 1 || p.max_requests > p.cells)
    throw InterfaceError("bad arbiter parameters");
  CaseStudy cs;
  for (unsigned i = 0; i < p.cells; ++i) cs.inputs.push_back(rvar(i));
  for (unsigned i = 0; i < p.cells; ++i) cs.outputs.push_back(avar(i));
  cs.assumption = arbiter_assume(p);
  cs.commitment = arbiter_commit(p);
  return cs;
}

CaseStudy minepump_spec(const MinepumpParams& p) {
  if (p.water < 1 || p.capacity < 1 || p.separation < 1 || p.persistence < 1 ||
      p.window_capacity < 1 || p.window_separation < 1 || p.window_persistence < 1 ||
      p.window_commit < 1)
    throw InterfaceError("bad minepump parameters");
  PropPtr water = prop_var("HH2O");
  PropPtr methane = prop_var("HCH4");
  PropPtr pump = prop_var("PumpOn");

  // Pump capacity: after the pump runs on high water for capacity cycles,
  // the water is no longer high at the next point.
  FormulaPtr pumpcap = f_box(f_not(
      f_and(f_slen(CmpOp::Eq, p.capacity),
            f_chop(f_all_but_last(prop_and(pump, water)), f_point(water)))));
  // Methane release: leaks are separated by more than `separation` cycles
  // and never persist more than `persistence` cycles.
  FormulaPtr methane_sep = f_box(f_implies(
      f_chop(f_all_but_last(methane),
             f_chop(f_all_but_last(prop_not(methane)), f_point(methane))),
      f_slen(CmpOp::Gt, p.separation)));
  FormulaPtr methane_persist =
      f_box(f_implies(f_all(methane), f_slen(CmpOp::Lt, p.persistence)));

  // Safety: pump off under methane or when the water is not high.
  FormulaPtr safety = f_all(prop_implies(prop_or(methane, prop_not(water)), prop_not(pump)));
  // Water bound: the water level is never high for more than `water` cycles.
  FormulaPtr waterbound = f_box(f_implies(f_all(water), f_slen(CmpOp::Lt, p.water)));

  CaseStudy cs;
  cs.inputs = {"HH2O", "HCH4"};
  cs.outputs = {"PumpOn"};
  cs.assumption = conjoin({f_kbounded(pumpcap, p.window_capacity),
                           f_kbounded(methane_sep, p.window_separation),
                           f_kbounded(methane_persist, p.window_persistence)});
  cs.commitment = conjoin({f_kbounded(safety, p.window_commit),
                           f_kbounded(waterbound, p.window_commit)});
  return cs;
}

// ---------------------------------------------------------------------------
// QSF emission
// ---------------------------------------------------------------------------

namespace {

std::string join_vars(const std::vector<std::string>& vars) {
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i];
  }
  return out;
}

std::string criterion_call(const Criterion& c) {
  std::string s = to_string(c.kind);
  s += "(A";
  if (criterion_takes_parameters(c.kind))
    s += ", " + std::to_string(c.k) + ", " + std::to_string(c.b);
  s += ")";
  return s;
}

}  // namespace

std::string arbiter_qsf(const ArbiterParams& p, const Criterion& criterion) {
  unsigned n = p.cells;
  std::ostringstream os;
  os << "#qsf \"arbiter\"\n";
  os << "interface{\n";
  os << "  input " << join_vars([&] {
    std::vector<std::string> v;
    for (unsigned i = 0; i < n; ++i) v.push_back(rvar(i));
    return v;
  }()) << ";\n";
  os << "  output " << join_vars([&] {
    std::vector<std::string> v;
    for (unsigned i = 0; i < n; ++i) v.push_back(avar(i));
    v.push_back("A");
    v.push_back("C");
    return v;
  }()) << ";\n";
  os << "  constant k = " << p.response << ";\n";
  os << "}\n";
  os << "definitions{\n";
  os << "  // grants are mutually exclusive\n";
  os << "  dc exclusion(){\n    true^<";
  {
    bool first = true;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) {
        if (!first) os << " && ";
        os << "!(" << avar(i) << " && " << avar(j) << ")";
        first = false;
      }
    if (first) os << "true";
  }
  os << ">;\n  }\n";
  os << "  dc noloss(){\n    true^<(";
  for (unsigned i = 0; i < n; ++i) os << (i ? " || " : "") << rvar(i);
  os << ") => (";
  for (unsigned i = 0; i < n; ++i) os << (i ? " || " : "") << avar(i);
  os << ")>;\n  }\n";
  os << "  // a grant is given only to a requesting cell\n";
  os << "  dc nospurious(a, r){\n    true^<a => r>;\n  }\n";
  os << "  // k cycle response, slen = k-1\n";
  os << "  dc response(r, a){\n"
     << "    true^([[r]] && slen = k-1) => true^(scount a > 0 && slen = k-1);\n"
     << "  }\n";
  os << "  dc ArbAssume(){\n    true^<";
  {
    // at most max_requests of the n request lines
    bool first_term = true;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<unsigned>(__builtin_popcount(mask)) > p.max_requests) continue;
      os << (first_term ? "" : " || ") << "(";
      for (unsigned j = 0; j < n; ++j)
        os << (j ? " && " : "") << (((mask >> j) & 1u) ? "" : "!") << rvar(j);
      os << ")";
      first_term = false;
    }
  }
  os << ">;\n  }\n";
  os << "  dc ArbCommit(){\n    exclusion() && noloss()";
  for (unsigned i = 0; i < n; ++i)
    os << " &&\n    nospurious(" << avar(i) << ", " << rvar(i) << ")";
  for (unsigned i = 0; i < n; ++i)
    os << " &&\n    response(" << rvar(i) << ", " << avar(i) << ")";
  os << ";\n  }\n";
  os << "}\n";
  os << "indefinitions{\n  A : ArbAssume();\n  C : ArbCommit();\n}\n";
  os << "hardreq{\n  useind A, C;\n  " << criterion_call(criterion) << " => EP(C);\n}\n";
  os << "softreq{\n  useind C;\n  (C);\n}\n";
  return os.str();
}

std::string minepump_qsf(const MinepumpParams& p, const Criterion& criterion) {
  std::ostringstream os;
  os << "#qsf \"minepump\"\n";
  os << "interface{\n";
  os << "  input HH2O, HCH4;\n";
  os << "  output PumpOn, A, C;\n";
  os << "  constant w = " << p.water << ", epsilon = " << p.capacity
     << ", zeta = " << p.separation << ", kappa = " << p.persistence << ";\n";
  os << "  constant ncap = " << p.window_capacity << ", nsep = " << p.window_separation
     << ", nper = " << p.window_persistence << ", nreq = " << p.window_commit << ";\n";
  os << "}\n";
  os << "definitions{\n";
  os << "  // methane leaks are separated by more than zeta cycles\n";
  os << "  dc methane1(){\n"
     << "    KBOUNDED([]([HCH4]^[!HCH4]^<HCH4> => slen > zeta), nsep);\n  }\n";
  os << "  // a methane leak never persists more than kappa cycles\n";
  os << "  dc methane2(){\n    KBOUNDED([]([[HCH4]] => slen < kappa), nper);\n  }\n";
  os << "  // pumping on high water for epsilon cycles clears it\n";
  os << "  dc pumpcap(){\n"
     << "    KBOUNDED([]!(slen = epsilon && ([PumpOn && HH2O]^<HH2O>)), ncap);\n  }\n";
  os << "  dc MineAssume(){\n    pumpcap() && methane1() && methane2();\n  }\n";
  os << "  // pump off under methane or without high water\n";
  os << "  dc safety(){\n    KBOUNDED([[(HCH4 || !HH2O) => !PumpOn]], nreq);\n  }\n";
  os << "  // water is never high for more than w cycles\n";
  os << "  dc waterbound(){\n    KBOUNDED([]([[HH2O]] => slen < w), nreq);\n  }\n";
  os << "  dc MineCommit(){\n    safety() && waterbound();\n  }\n";
  os << "}\n";
  os << "indefinitions{\n  A : MineAssume();\n  C : MineCommit();\n}\n";
  os << "hardreq{\n  useind A, C;\n  " << criterion_call(criterion) << " => EP(C);\n}\n";
  os << "softreq{\n  useind C;\n  (C);\n}\n";
  return os.str();
}

}  // namespace qsyn
