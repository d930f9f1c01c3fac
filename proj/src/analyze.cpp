#include "qsyn/analyze.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qsyn/errors.hpp"

namespace qsyn {

void Dtmc::check_well_formed() const {
  if (initial >= state_count() || accepting.size() != state_count())
    throw InterfaceError("malformed Markov chain");
  for (const auto& row : rows) {
    double sum = 0.0;
    for (const auto& [p, t] : row) {
      if (p < 0.0 || t >= state_count()) throw InterfaceError("bad transition row");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InterfaceError("row does not sum to 1");
  }
}

const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::LeftDominates: return "LeftDominates";
    case Dominance::RightDominates: return "RightDominates";
    case Dominance::MustEquivalent: return "MustEquivalent";
    case Dominance::Incomparable: return "Incomparable";
  }
  return "?";
}

Dfa must_inputs(const Supervisor& sup, const Dfa& commit) {
  if (!(commit.alphabet == sup.dfa.alphabet))
    throw InterfaceError("commitment alphabet does not match supervisor");
  // bad = joint words allowed by the supervisor that violate the commitment
  Dfa bad = product(sup.dfa, complement(commit), Combine::And);
  // project away the output variables one at a time, minimizing between
  // steps to keep the subset constructions small
  Dfa projected = std::move(bad);
  for (auto it = sup.io.outputs.rbegin(); it != sup.io.outputs.rend(); ++it)
    projected = minimize(drop_empty_word(project(projected, *it)));
  // inputs with no violating completion
  return minimize(drop_empty_word(complement(projected)));
}

DominanceResult must_dominance(const Supervisor& left, const Supervisor& right,
                               const Dfa& commit) {
  if (left.io.inputs != right.io.inputs || left.io.outputs != right.io.outputs)
    throw InterfaceError("supervisors have different signatures");
  Dfa ml = must_inputs(left, commit);
  Dfa mr = must_inputs(right, commit);
  bool left_in_right = includes(mr, ml);
  bool right_in_left = includes(ml, mr);
  DominanceResult result;
  if (left_in_right && right_in_left) {
    result.verdict = Dominance::MustEquivalent;
  } else if (right_in_left) {
    result.verdict = Dominance::LeftDominates;
  } else if (left_in_right) {
    result.verdict = Dominance::RightDominates;
  } else {
    result.verdict = Dominance::Incomparable;
  }
  if (!left_in_right) {
    auto w = shortest_accepted(product(ml, complement(mr), Combine::And));
    if (w) result.left_only_witness.push_back(*w);
  }
  if (!right_in_left) {
    auto w = shortest_accepted(product(mr, complement(ml), Combine::And));
    if (w) result.right_only_witness.push_back(*w);
  }
  return result;
}

Dtmc build_dtmc(const Controller& cnt, const Dfa& prop) {
  if (!(prop.alphabet == cnt.dfa.alphabet))
    throw InterfaceError("property alphabet does not match controller");
  if (!cnt.is_deterministic())
    throw InterfaceError("expected deterministic controller");
  uint32_t in_count = cnt.io.input_letters();
  double p = 1.0 / static_cast<double>(in_count);

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
  std::vector<std::pair<uint32_t, uint32_t>> states;
  std::deque<uint32_t> todo;
  auto intern = [&](uint32_t q, uint32_t m) {
    auto [it, fresh] = ids.try_emplace({q, m}, 0);
    if (fresh) {
      it->second = static_cast<uint32_t>(states.size());
      states.push_back({q, m});
      todo.push_back(it->second);
    }
    return it->second;
  };
  Dtmc chain;
  chain.initial = intern(cnt.dfa.initial, prop.initial);
  while (!todo.empty()) {
    uint32_t id = todo.front();
    todo.pop_front();
    auto [q, m] = states[id];
    if (chain.rows.size() <= id) chain.rows.resize(states.size());
    std::map<uint32_t, double> row;
    for (uint32_t in = 0; in < in_count; ++in) {
      uint32_t out = cnt.respond(q, in);
      uint32_t letter = cnt.io.joint(in, out);
      row[intern(cnt.dfa.step(q, letter), prop.step(m, letter))] += p;
    }
    if (chain.rows.size() < states.size()) chain.rows.resize(states.size());
    for (const auto& [t, pr] : row) chain.rows[id].push_back({pr, t});
  }
  chain.accepting.resize(states.size());
  for (uint32_t id = 0; id < states.size(); ++id)
    chain.accepting[id] = prop.accepting[states[id].second];
  chain.check_well_formed();
  return chain;
}

// ---------------------------------------------------------------------------
// Long-run value: BSCC decomposition + stationary distributions
// ---------------------------------------------------------------------------

namespace {

// Iterative Tarjan SCC in topological (reverse finish) order.
struct SccResult {
  std::vector<uint32_t> component;  // state -> component id
  uint32_t count = 0;
};

SccResult strongly_connected_components(const Dtmc& m) {
  size_t n = m.state_count();
  SccResult res;
  res.component.assign(n, 0);
  std::vector<int64_t> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<uint32_t> stack;
  int64_t next_index = 0;

  struct Frame {
    uint32_t v;
    size_t edge;
  };
  for (uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < m.rows[f.v].size()) {
        uint32_t w = m.rows[f.v][f.edge].second;
        ++f.edge;
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        uint32_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          for (;;) {
            uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            res.component[w] = res.count;
            if (w == v) break;
          }
          ++res.count;
        }
      }
    }
  }
  return res;
}

// Stationary distribution of an irreducible chain restricted to `members`.
// Dense Gaussian elimination for small components, damped power iteration
// (same fixed point, aperiodic) for large ones.
std::vector<double> stationary_distribution(const Dtmc& m,
                                            const std::vector<uint32_t>& members) {
  size_t k = members.size();
  std::vector<int64_t> local(m.state_count(), -1);
  for (size_t i = 0; i < k; ++i) local[members[i]] = static_cast<int64_t>(i);

  if (k == 1) return {1.0};

  if (k <= 512) {
    // solve pi (P - I) = 0 with sum(pi) = 1, via transposed system
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (size_t j = 0; j < k; ++j) {
      for (const auto& [p, t] : m.rows[members[j]]) {
        int64_t lt = local[t];
        assert(lt >= 0);
        a[static_cast<size_t>(lt)][j] += p;
      }
      a[j][j] -= 1.0;
    }
    // replace last equation with normalisation
    for (size_t j = 0; j < k; ++j) a[k - 1][j] = 1.0;
    a[k - 1][k] = 1.0;
    // gaussian elimination with partial pivoting
    for (size_t col = 0; col < k; ++col) {
      size_t pivot = col;
      for (size_t r = col + 1; r < k; ++r)
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      std::swap(a[col], a[pivot]);
      if (std::abs(a[col][col]) < 1e-300)
        throw InterfaceError("singular stationary system");
      for (size_t r = 0; r < k; ++r) {
        if (r == col) continue;
        double factor = a[r][col] / a[col][col];
        if (factor == 0.0) continue;
        for (size_t c = col; c <= k; ++c) a[r][c] -= factor * a[col][c];
      }
    }
    std::vector<double> pi(k);
    for (size_t i = 0; i < k; ++i) pi[i] = a[i][k] / a[i][i];
    return pi;
  }

  // large component: power iteration on the lazy chain (P + I) / 2
  std::vector<double> pi(k, 1.0 / static_cast<double>(k)), fresh(k);
  for (int iter = 0; iter < 2000000; ++iter) {
    std::fill(fresh.begin(), fresh.end(), 0.0);
    for (size_t i = 0; i < k; ++i) {
      fresh[i] += 0.5 * pi[i];
      for (const auto& [p, t] : m.rows[members[i]])
        fresh[static_cast<size_t>(local[t])] += 0.5 * p * pi[i];
    }
    double diff = 0.0;
    for (size_t i = 0; i < k; ++i) diff += std::abs(fresh[i] - pi[i]);
    pi.swap(fresh);
    if (diff < 1e-14) break;
  }
  // report the residual if the iteration stalled
  double residual = 0.0;
  {
    std::vector<double> once(k, 0.0);
    for (size_t i = 0; i < k; ++i)
      for (const auto& [p, t] : m.rows[members[i]])
        once[static_cast<size_t>(local[t])] += p * pi[i];
    for (size_t i = 0; i < k; ++i) residual += std::abs(once[i] - pi[i]);
  }
  if (residual > 1e-10)
    throw InterfaceError("stationary distribution did not converge, residual " +
                         std::to_string(residual));
  return pi;
}

}  // namespace

double long_run_value(const Dtmc& m) {
  m.check_well_formed();
  size_t n = m.state_count();
  SccResult scc = strongly_connected_components(m);

  // bottom components have no edge leaving them
  std::vector<char> bottom(scc.count, 1);
  for (uint32_t s = 0; s < n; ++s)
    for (const auto& [p, t] : m.rows[s])
      if (scc.component[t] != scc.component[s]) bottom[scc.component[s]] = 0;

  std::vector<std::vector<uint32_t>> members(scc.count);
  for (uint32_t s = 0; s < n; ++s) members[scc.component[s]].push_back(s);

  // long-run accepting fraction inside each bottom component
  std::vector<double> bscc_value(scc.count, 0.0);
  for (uint32_t c = 0; c < scc.count; ++c) {
    if (!bottom[c]) continue;
    std::vector<double> pi = stationary_distribution(m, members[c]);
    double v = 0.0;
    for (size_t i = 0; i < members[c].size(); ++i)
      if (m.accepting[members[c][i]]) v += pi[i];
    bscc_value[c] = v;
  }

  // absorption probabilities from the initial state, solved iteratively on
  // the transient part (value iteration with geometric convergence)
  std::vector<double> value(n, 0.0);
  for (uint32_t s = 0; s < n; ++s)
    if (bottom[scc.component[s]]) value[s] = bscc_value[scc.component[s]];
  std::vector<char> transient(n);
  for (uint32_t s = 0; s < n; ++s) transient[s] = !bottom[scc.component[s]];
  for (int iter = 0; iter < 1000000; ++iter) {
    double diff = 0.0;
    for (uint32_t s = 0; s < n; ++s) {
      if (!transient[s]) continue;
      double v = 0.0;
      for (const auto& [p, t] : m.rows[s]) v += p * value[t];
      diff = std::max(diff, std::abs(v - value[s]));
      value[s] = v;
    }
    if (diff < 1e-14) break;
  }
  return value[m.initial];
}

std::vector<SimulationStep> simulate(
    const Controller& cnt, const std::vector<uint32_t>& inputs,
    const std::vector<std::pair<std::string, Dfa>>& props) {
  for (const auto& [name, prop] : props)
    if (!(prop.alphabet == cnt.dfa.alphabet))
      throw InterfaceError("property '" + name + "' alphabet mismatch");
  std::vector<SimulationStep> steps;
  steps.reserve(inputs.size());
  uint32_t q = cnt.dfa.initial;
  std::vector<uint32_t> prop_state(props.size());
  for (size_t i = 0; i < props.size(); ++i) prop_state[i] = props[i].second.initial;
  for (uint32_t in : inputs) {
    if (in >= cnt.io.input_letters()) throw InterfaceError("input letter out of range");
    SimulationStep step;
    step.input = in;
    step.output = cnt.respond(q, in);
    uint32_t letter = cnt.io.joint(in, step.output);
    q = cnt.dfa.step(q, letter);
    if (!cnt.state_ok(q)) throw InterfaceError("controller entered the reject state");
    for (size_t i = 0; i < props.size(); ++i) {
      prop_state[i] = props[i].second.step(prop_state[i], letter);
      step.verdicts.push_back(props[i].second.accepting[prop_state[i]] != 0);
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

void write_tra(std::ostream& os, const Dtmc& m) {
  size_t transitions = 0;
  for (const auto& row : m.rows) transitions += row.size();
  os << "STATES " << m.state_count() << '\n';
  os << "TRANSITIONS " << transitions << '\n';
  for (uint32_t s = 0; s < m.state_count(); ++s)
    for (const auto& [p, t] : m.rows[s]) {
      std::ostringstream val;
      val.precision(17);
      val << p;
      os << s << ' ' << t << ' ' << val.str() << '\n';
    }
}

void write_lab(std::ostream& os, const Dtmc& m) {
  os << "#DECLARATION\ntarget\n#END\n";
  for (uint32_t s = 0; s < m.state_count(); ++s)
    if (m.accepting[s]) os << s << " target\n";
}

std::vector<uint32_t> read_trace_csv(std::istream& is,
                                     const std::vector<std::string>& columns) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty trace file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      size_t b = cell.find_first_not_of(" \t\r");
      size_t e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return cells;
  };
  std::vector<std::string> header = split(line);
  std::vector<int> where(columns.size(), -1);
  for (size_t i = 0; i < columns.size(); ++i)
    for (size_t j = 0; j < header.size(); ++j)
      if (header[j] == columns[i]) where[i] = static_cast<int>(j);
  for (size_t i = 0; i < columns.size(); ++i)
    if (where[i] < 0) throw ParseError("trace is missing column '" + columns[i] + "'");
  // every header column must be one of the requested variables
  for (const auto& h : header)
    if (std::find(columns.begin(), columns.end(), h) == columns.end())
      throw ParseError("unexpected trace column '" + h + "'");

  std::vector<uint32_t> letters;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("wrong number of cells in trace row", lineno);
    uint32_t letter = 0;
    for (size_t i = 0; i < columns.size(); ++i) {
      const std::string& cell = cells[static_cast<size_t>(where[i])];
      if (cell == "1")
        letter |= 1u << i;
      else if (cell != "0")
        throw ParseError("trace cells must be 0 or 1", lineno);
    }
    letters.push_back(letter);
  }
  return letters;
}

void write_trace_csv(std::ostream& os, const IoSignature& io,
                     const std::vector<SimulationStep>& steps,
                     const std::vector<std::string>& prop_names) {
  bool first = true;
  for (const auto& v : io.inputs) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  for (const auto& v : io.outputs) os << ',' << v;
  for (const auto& name : prop_names) os << ',' << name;
  os << '\n';
  for (const auto& step : steps) {
    first = true;
    for (size_t i = 0; i < io.inputs.size(); ++i) {
      os << (first ? "" : ",") << ((step.input >> i) & 1u);
      first = false;
    }
    for (size_t i = 0; i < io.outputs.size(); ++i) os << ',' << ((step.output >> i) & 1u);
    for (bool v : step.verdicts) os << ',' << (v ? 1 : 0);
    os << '\n';
  }
}

}  // namespace qsyn
