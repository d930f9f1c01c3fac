#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qsyn/analyze.hpp"
#include "qsyn/casestudies.hpp"
#include "qsyn/compile.hpp"
#include "qsyn/errors.hpp"
#include "qsyn/parser.hpp"
#include "qsyn/robust.hpp"
#include "qsyn/semantics.hpp"
#include "qsyn/synth.hpp"

namespace {

using namespace qsyn;

constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitUnrealizable = 4;
constexpr int kExitInterface = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos) names.push_back(item.substr(b, e - b + 1));
  }
  return names;
}

Criterion parse_criterion(const std::string& name, unsigned k, unsigned b) {
  auto kind = criterion_kind_by_name(name);
  if (!kind) throw ParseError("unknown robustness criterion: " + name);
  return Criterion{*kind, k, b};
}

struct SynthProblem {
  IoSignature io;
  FormulaPtr hard;
  FormulaPtr soft;
};

// Reads a spec file.  Without a criterion the hard/soft requirements are
// taken verbatim; with one, the file must bind indicators A (assumption) and
// C (commitment) and the requirement pair becomes
//   hard = (Rb(A) => EP(C)) + indicator constraints, soft = EP(C) + cascade.
SynthProblem load_problem(const std::string& path, const std::string& criterion_name,
                          unsigned k, unsigned b) {
  SpecFile spec = parse_spec(read_file(path));
  if (!criterion_name.empty()) {
    Criterion crit = parse_criterion(criterion_name, k, b);
    if (!spec.indicator_def("A") || !spec.indicator_def("C"))
      throw ParseError("criterion synthesis needs indicators A and C in indefinitions");
    spec.hard_useind = {"A", "C"};
    spec.soft_useind = {"C"};
    spec.hard_req = f_implies(criterion_formula(crit, "A"), f_ep(prop_var("C")));
    spec.soft_req = f_ep(prop_var("C"));
  }
  ExpandedSpec expanded = expand(spec);
  SynthProblem prob;
  prob.io = IoSignature{expanded.inputs, expanded.outputs};
  prob.hard = expanded.hard;
  prob.soft = expanded.soft;
  return prob;
}

void write_artifact(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

int cmd_compile(const std::string& spec_path, const std::string& formula,
                const std::string& vars, const std::string& emit,
                const std::string& out_path) {
  Dfa automaton;
  if (!formula.empty()) {
    std::vector<std::string> env = split_names(vars);
    FormulaPtr f = parse_formula(formula, env);
    automaton = compile(f, Alphabet{env});
  } else if (!spec_path.empty()) {
    SynthProblem prob = load_problem(spec_path, "", 1, 1);
    automaton = compile(prob.hard, prob.io.alphabet());
  } else {
    throw ParseError("compile needs a spec file or --formula");
  }
  std::ostringstream os;
  if (emit == "dot")
    write_dot(os, automaton);
  else
    write_dump(os, automaton);
  if (!out_path.empty())
    write_artifact(out_path, os.str());
  else
    std::cout << os.str();
  std::cout << "states " << automaton.state_count() << "\n";
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& criterion_name,
              unsigned k, unsigned b, const SynthParams& params,
              const std::string& order_text, const std::string& stage,
              const std::string& out_path) {
  SynthProblem prob = load_problem(spec_path, criterion_name, k, b);
  Dfa hard = compile(prob.hard, prob.io.alphabet());
  auto sup = mps(hard, prob.io);
  if (!sup) {
    std::string label =
        criterion_name.empty() ? std::string("hard requirement") : criterion_name;
    throw UnrealizableError("Unrealizable: " + label);
  }
  Supervisor result = *sup;
  if (stage == "mphos" || stage == "controller") {
    Dfa soft = compile(prob.soft, prob.io.alphabet());
    result = mphos(result, soft, params);
  }
  if (stage == "controller" || stage == "detmps") {
    auto order = parse_output_order(order_text, prob.io);
    result = det_by_order(result, order);
  }
  std::ostringstream os;
  write_supervisor(os, result);
  if (!out_path.empty())
    write_artifact(out_path, os.str());
  else
    std::cout << os.str();
  std::cout << "realizable\nstates " << result.dfa.state_count() << "\n";
  return 0;
}

Dfa commit_monitor(const Supervisor& sup, const std::string& formula) {
  FormulaPtr f = parse_formula(formula, sup.dfa.alphabet.vars);
  return compile(f, sup.dfa.alphabet);
}

int cmd_dominance(const std::string& left_path, const std::string& right_path,
                  const std::string& commit_formula) {
  std::ifstream lin(left_path), rin(right_path);
  if (!lin) throw ParseError("cannot open file: " + left_path);
  if (!rin) throw ParseError("cannot open file: " + right_path);
  Supervisor left = read_supervisor(lin);
  Supervisor right = read_supervisor(rin);
  Dfa commit = commit_monitor(left, commit_formula);
  DominanceResult res = must_dominance(left, right, commit);
  std::cout << to_string(res.verdict) << "\n";
  Alphabet input_alphabet{left.io.inputs};
  for (const auto& w : res.left_only_witness)
    std::cout << "left-only input word: " << format_word(input_alphabet, w) << "\n";
  for (const auto& w : res.right_only_witness)
    std::cout << "right-only input word: " << format_word(input_alphabet, w) << "\n";
  return 0;
}

int cmd_expect(const std::string& cnt_path, const std::string& prop_formula,
               const std::string& tra_path, const std::string& lab_path) {
  std::ifstream in(cnt_path);
  if (!in) throw ParseError("cannot open file: " + cnt_path);
  Supervisor sup = read_supervisor(in);
  if (!sup.is_deterministic())
    throw InterfaceError("expected a deterministic controller");
  Controller cnt;
  static_cast<Supervisor&>(cnt) = sup;
  Dtmc chain = build_dtmc(cnt, commit_monitor(sup, prop_formula));
  if (!tra_path.empty()) {
    std::ostringstream os;
    write_tra(os, chain);
    write_artifact(tra_path, os.str());
  }
  if (!lab_path.empty()) {
    std::ostringstream os;
    write_lab(os, chain);
    write_artifact(lab_path, os.str());
  }
  std::printf("%.6f\n", long_run_value(chain));
  return 0;
}

int cmd_simulate(const std::string& cnt_path, const std::string& trace_path,
                 const std::vector<std::string>& prop_args,
                 const std::string& out_path) {
  std::ifstream in(cnt_path);
  if (!in) throw ParseError("cannot open file: " + cnt_path);
  Supervisor sup = read_supervisor(in);
  if (!sup.is_deterministic())
    throw InterfaceError("expected a deterministic controller");
  Controller cnt;
  static_cast<Supervisor&>(cnt) = sup;

  std::ifstream trace_in(trace_path);
  if (!trace_in) throw ParseError("cannot open file: " + trace_path);
  std::vector<uint32_t> inputs = read_trace_csv(trace_in, cnt.io.inputs);

  std::vector<std::pair<std::string, Dfa>> props;
  std::vector<std::string> names;
  for (const auto& arg : prop_args) {
    size_t eq = arg.find('=');
    if (eq == std::string::npos)
      throw ParseError("property must be name=formula: " + arg);
    std::string name = arg.substr(0, eq);
    props.push_back({name, commit_monitor(sup, arg.substr(eq + 1))});
    names.push_back(name);
  }
  auto steps = simulate(cnt, inputs, props);
  std::ostringstream os;
  write_trace_csv(os, cnt.io, steps, names);
  if (!out_path.empty())
    write_artifact(out_path, os.str());
  else
    std::cout << os.str();
  return 0;
}

int cmd_lattice(unsigned k, unsigned b) {
  auto edges = lattice_edges(k, b);
  // the equivalence node is checked in both directions
  edges.push_back({Criterion{CriterionKind::ResBurst, k, b},
                   Criterion{CriterionKind::LenBurst, k, b}});
  edges.push_back({Criterion{CriterionKind::LenBurst, k, b},
                   Criterion{CriterionKind::ResBurst, k, b}});
  auto results = lattice_check(edges);
  std::cout << "lhs\trhs\tverdict\tcounterexample\n";
  bool all_valid = true;
  for (const auto& r : results) {
    std::cout << criterion_label(r.lhs) << '\t' << criterion_label(r.rhs) << '\t'
              << (r.valid ? "VALID" : "INVALID") << '\t';
    if (!r.valid) {
      all_valid = false;
      for (bool bit : r.counterexample) std::cout << (bit ? '1' : '0');
    }
    std::cout << '\n';
  }
  std::cout << (all_valid ? "all implications valid\n" : "some implications failed\n");
  return 0;
}

int cmd_gen(const std::string& which, const std::string& out_path,
            const std::string& criterion_name, unsigned ck, unsigned cb,
            const ArbiterParams& ap, const MinepumpParams& mp) {
  Criterion crit = parse_criterion(criterion_name, ck, cb);
  std::string text;
  if (which == "arbiter")
    text = arbiter_qsf(ap, crit);
  else if (which == "minepump")
    text = minepump_qsf(mp, crit);
  else
    throw ParseError("unknown generator: " + which);
  if (!out_path.empty())
    write_artifact(out_path, text);
  else
    std::cout << text;
  return 0;
}

int cmd_eval(const std::string& formula, const std::string& vars,
             const std::string& word_text) {
  std::vector<std::string> env = split_names(vars);
  FormulaPtr f = parse_formula(formula, env);
  Word w;
  w.env = env;
  for (const auto& letter : split_names(word_text)) {
    if (letter.size() != env.size())
      throw ParseError("letter width does not match variable count: " + letter);
    uint32_t bits = 0;
    for (size_t i = 0; i < letter.size(); ++i) {
      if (letter[i] == '1')
        bits |= 1u << i;
      else if (letter[i] != '0')
        throw ParseError("letters must be 0/1 strings");
    }
    w.letters.push_back(bits);
  }
  if (w.letters.empty()) throw ParseError("word must be nonempty");
  std::cout << (whole_word(w, f) ? "sat" : "unsat") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval-logic controller synthesis"};
  app.require_subcommand(1);

  // compile
  std::string spec_path, formula, vars, emit = "dump", out_path;
  auto* compile_cmd = app.add_subcommand("compile", "compile a formula automaton");
  compile_cmd->add_option("spec", spec_path, "spec file (.qsf)");
  compile_cmd->add_option("--formula", formula, "formula text instead of a spec");
  compile_cmd->add_option("--vars", vars, "comma-separated variables for --formula");
  compile_cmd->add_option("--emit", emit, "dump|dot")
      ->check(CLI::IsMember({"dump", "dot"}));
  compile_cmd->add_option("--out", out_path, "output file");

  // synth
  std::string synth_spec, criterion_name, order_text, stage = "mps", synth_out;
  unsigned crit_k = 1, crit_b = 1;
  SynthParams params;
  auto* synth_cmd = app.add_subcommand("synth", "synthesize a supervisor/controller");
  synth_cmd->add_option("spec", synth_spec, "spec file (.qsf)")->required();
  synth_cmd->add_option("--criterion", criterion_name, "robustness criterion name");
  synth_cmd->add_option("--k", crit_k, "criterion count parameter K");
  synth_cmd->add_option("--b", crit_b, "criterion window parameter B");
  synth_cmd->add_option("--horizon", params.horizon, "value-iteration horizon");
  synth_cmd->add_option("--discount", params.discount, "discount factor");
  synth_cmd->add_option("--delta", params.delta, "tie tolerance");
  synth_cmd->add_option("--order", order_text, "output order literals, e.g. a1,a2,!a3");
  synth_cmd->add_option("--stage", stage, "mps|detmps|mphos|controller")
      ->check(CLI::IsMember({"mps", "detmps", "mphos", "controller"}));
  synth_cmd->add_option("--out", synth_out, "output file");

  // dominance
  std::string dom_left, dom_right, dom_commit;
  auto* dom_cmd = app.add_subcommand("dominance", "compare supervisors by must inputs");
  dom_cmd->add_option("left", dom_left, "supervisor file")->required();
  dom_cmd->add_option("right", dom_right, "supervisor file")->required();
  dom_cmd->add_option("--commit", dom_commit, "commitment formula")->required();

  // expect
  std::string exp_cnt, exp_prop, exp_tra, exp_lab;
  auto* exp_cmd = app.add_subcommand("expect", "long-run expected property value");
  exp_cmd->add_option("controller", exp_cnt, "controller file")->required();
  exp_cmd->add_option("--prop", exp_prop, "property formula")->required();
  exp_cmd->add_option("--tra", exp_tra, "write the chain in .tra format");
  exp_cmd->add_option("--lab", exp_lab, "write accepting labels in .lab format");

  // simulate
  std::string sim_cnt, sim_trace, sim_out;
  std::vector<std::string> sim_props;
  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop trace simulation");
  sim_cmd->add_option("controller", sim_cnt, "controller file")->required();
  sim_cmd->add_option("--trace", sim_trace, "input trace CSV")->required();
  sim_cmd->add_option("--prop", sim_props, "property columns, name=formula");
  sim_cmd->add_option("--out", sim_out, "output CSV");

  // lattice
  unsigned lat_k = 1, lat_b = 3;
  auto* lat_cmd = app.add_subcommand("lattice", "verify the criteria implication lattice");
  lat_cmd->add_option("--k", lat_k, "count parameter K");
  lat_cmd->add_option("--b", lat_b, "window parameter B");

  // gen
  std::string gen_which, gen_out, gen_criterion = "BeCurrentlyCorrect";
  unsigned gen_ck = 1, gen_cb = 3;
  ArbiterParams ap;
  MinepumpParams mp;
  auto* gen_cmd = app.add_subcommand("gen", "generate a case-study spec file");
  gen_cmd->add_option("which", gen_which, "arbiter|minepump")->required();
  gen_cmd->add_option("--out", gen_out, "output file");
  gen_cmd->add_option("--criterion", gen_criterion, "criterion in the hard requirement");
  gen_cmd->add_option("--ck", gen_ck, "criterion K");
  gen_cmd->add_option("--cb", gen_cb, "criterion B");
  gen_cmd->add_option("--n", ap.cells, "arbiter cells");
  gen_cmd->add_option("--k", ap.response, "arbiter response bound");
  gen_cmd->add_option("--i", ap.max_requests, "arbiter concurrent request bound");
  gen_cmd->add_option("--w", mp.water, "minepump water bound");
  gen_cmd->add_option("--eps", mp.capacity, "minepump pump capacity");
  gen_cmd->add_option("--zeta", mp.separation, "minepump methane separation");
  gen_cmd->add_option("--kappa", mp.persistence, "minepump methane persistence");
  gen_cmd->add_option("--wcap", mp.window_capacity, "pump-capacity window");
  gen_cmd->add_option("--wsep", mp.window_separation, "methane-separation window");
  gen_cmd->add_option("--wper", mp.window_persistence, "methane-persistence window");
  gen_cmd->add_option("--wreq", mp.window_commit, "commitment window");

  // eval
  std::string eval_formula, eval_vars, eval_word;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula on a word");
  eval_cmd->add_option("--formula", eval_formula, "formula text")->required();
  eval_cmd->add_option("--vars", eval_vars, "comma-separated variables")->required();
  eval_cmd->add_option("--word", eval_word, "comma-separated 0/1 letters")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile_cmd) return cmd_compile(spec_path, formula, vars, emit, out_path);
    if (*synth_cmd)
      return cmd_synth(synth_spec, criterion_name, crit_k, crit_b, params, order_text,
                       stage, synth_out);
    if (*dom_cmd) return cmd_dominance(dom_left, dom_right, dom_commit);
    if (*exp_cmd) return cmd_expect(exp_cnt, exp_prop, exp_tra, exp_lab);
    if (*sim_cmd) return cmd_simulate(sim_cnt, sim_trace, sim_props, sim_out);
    if (*lat_cmd) return cmd_lattice(lat_k, lat_b);
    if (*gen_cmd) return cmd_gen(gen_which, gen_out, gen_criterion, gen_ck, gen_cb, ap, mp);
    if (*eval_cmd) return cmd_eval(eval_formula, eval_vars, eval_word);
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line) std::cerr << " at " << e.line << ":" << e.col;
    std::cerr << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const UnrealizableError& e) {
    std::cerr << e.what() << "\n";
    return kExitUnrealizable;
  } catch (const InterfaceError& e) {
    std::cerr << "interface mismatch: " << e.what() << "\n";
    return kExitInterface;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
