#include "qsyn/parser.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstring>
#include <set>

#include "qsyn/errors.hpp"
#include "qsyn/robust.hpp"

namespace qsyn {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  unsigned long value = 0;  // Number
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { tokenize(); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void tokenize() {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (text_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    static const char* puncts[] = {"<=>", "=>", "<=", ">=", "&&", "||",
                                   "(",  ")",  "{",  "}",  "[",  "]",
                                   "<",  ">",  "=",  "!",  "^",  ".",
                                   ",",  ";",  ":",  "-",  "+",  "#"};
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) ||
                                    text_[j] == '_'))
          ++j;
        t.kind = Tok::Ident;
        t.text = text_.substr(i, j - i);
        advance(j - i);
        tokens_.push_back(std::move(t));
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        t.kind = Tok::Number;
        t.text = text_.substr(i, j - i);
        t.value = std::stoul(t.text);
        advance(j - i);
        tokens_.push_back(std::move(t));
        continue;
      }
      if (c == '"') {
        size_t j = i + 1;
        while (j < text_.size() && text_[j] != '"') ++j;
        if (j >= text_.size()) throw ParseError("unterminated string", line, col);
        t.kind = Tok::String;
        t.text = text_.substr(i + 1, j - i - 1);
        advance(j - i + 1);
        tokens_.push_back(std::move(t));
        continue;
      }
      bool matched = false;
      for (const char* p : puncts) {
        size_t len = std::strlen(p);
        if (text_.compare(i, len, p) == 0) {
          t.kind = Tok::Punct;
          t.text = p;
          advance(len);
          tokens_.push_back(std::move(t));
          matched = true;
          break;
        }
      }
      if (!matched)
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    tokens_.push_back(std::move(end));
  }

  const std::string& text_;
  std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Recursive-descent parser
//
// Formula precedence, tightest to loosest:
//   prefix ! <> [] ; chop ^ (right-assoc) ; && ; || ; => ; <=>
// Quantifiers scope maximally to the right.
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string text, const std::map<std::string, unsigned>* constants)
      : text_(std::move(text)), lexer_(text_), constants_(constants) {}

  // -- token helpers --------------------------------------------------------

  const Token& peek(size_t ahead = 0) const {
    size_t idx = std::min(pos_ + ahead, lexer_.tokens().size() - 1);
    return lexer_.tokens()[idx];
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool at_punct(const char* p) const {
    return peek().kind == Tok::Punct && peek().text == p;
  }
  bool at_ident(const char* name) const {
    return peek().kind == Tok::Ident && peek().text == name;
  }
  bool accept_punct(const char* p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }
  void expect_punct(const char* p) {
    if (!accept_punct(p)) fail(std::string("expected '") + p + "'");
  }
  std::string expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what);
    return next().text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.line, t.col);
  }

  bool at_end() const { return peek().kind == Tok::End; }

  // -- constant expressions -------------------------------------------------

  unsigned parse_const_expr() {
    long value = parse_const_atom();
    while (at_punct("+") || at_punct("-")) {
      bool minus = next().text == "-";
      long rhs = parse_const_atom();
      value += minus ? -rhs : rhs;
    }
    if (value < 0) fail("negative constant");
    return static_cast<unsigned>(value);
  }

  long parse_const_atom() {
    if (peek().kind == Tok::Number) return static_cast<long>(next().value);
    if (peek().kind == Tok::Ident) {
      const Token& t = peek();
      if (!constants_ || !constants_->count(t.text))
        fail("unknown constant '" + t.text + "'");
      next();
      return static_cast<long>(constants_->at(t.text));
    }
    fail("expected constant");
  }

  // -- propositional formulas -----------------------------------------------

  PropPtr parse_prop() { return parse_prop_iff(); }

  PropPtr parse_prop_iff() {
    PropPtr lhs = parse_prop_implies();
    while (accept_punct("<=>")) lhs = prop_iff(lhs, parse_prop_implies());
    return lhs;
  }
  PropPtr parse_prop_implies() {
    PropPtr lhs = parse_prop_or();
    if (accept_punct("=>")) return prop_implies(lhs, parse_prop_implies());
    return lhs;
  }
  PropPtr parse_prop_or() {
    PropPtr lhs = parse_prop_and();
    while (accept_punct("||")) lhs = prop_or(lhs, parse_prop_and());
    return lhs;
  }
  PropPtr parse_prop_and() {
    PropPtr lhs = parse_prop_unary();
    while (accept_punct("&&")) lhs = prop_and(lhs, parse_prop_unary());
    return lhs;
  }
  PropPtr parse_prop_unary() {
    if (accept_punct("!")) return prop_not(parse_prop_unary());
    if (accept_punct("(")) {
      PropPtr p = parse_prop();
      expect_punct(")");
      return p;
    }
    if (at_ident("true")) {
      next();
      return prop_true();
    }
    if (at_ident("false")) {
      next();
      return prop_false();
    }
    if (peek().kind == Tok::Ident) return prop_var(next().text);
    fail("expected propositional formula");
  }

  // A propositional atom for scount/sdur: var, !atom or parenthesised prop.
  PropPtr parse_prop_atom() {
    if (accept_punct("!")) return prop_not(parse_prop_atom());
    if (accept_punct("(")) {
      PropPtr p = parse_prop();
      expect_punct(")");
      return p;
    }
    if (at_ident("true")) {
      next();
      return prop_true();
    }
    if (at_ident("false")) {
      next();
      return prop_false();
    }
    if (peek().kind == Tok::Ident) return prop_var(next().text);
    fail("expected proposition");
  }

  // -- interval formulas ----------------------------------------------------

  FormulaPtr parse_formula() { return parse_iff(); }

  FormulaPtr parse_iff() {
    FormulaPtr lhs = parse_implies();
    while (accept_punct("<=>")) lhs = f_iff(lhs, parse_implies());
    return lhs;
  }
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (accept_punct("=>")) return f_implies(lhs, parse_implies());
    return lhs;
  }
  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (accept_punct("||")) lhs = f_or(lhs, parse_and());
    return lhs;
  }
  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_chop();
    while (accept_punct("&&")) lhs = f_and(lhs, parse_chop());
    return lhs;
  }
  FormulaPtr parse_chop() {
    FormulaPtr lhs = parse_unary();
    if (accept_punct("^")) return f_chop(lhs, parse_chop());
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (accept_punct("!")) return f_not(parse_unary());
    if (at_punct("<") && peek(1).kind == Tok::Punct && peek(1).text == ">") {
      next();
      next();
      return f_diamond(parse_unary());
    }
    if (at_punct("[") && peek(1).kind == Tok::Punct && peek(1).text == "]") {
      next();
      next();
      return f_box(parse_unary());
    }
    if (at_ident("ex") || at_ident("all")) {
      bool existential = next().text == "ex";
      std::string var = expect_ident("quantified variable");
      expect_punct(".");
      FormulaPtr body = parse_formula();  // maximal scope to the right
      return existential ? f_ex(var, body) : f_allq(var, body);
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    if (accept_punct("(")) {
      FormulaPtr f = parse_formula();
      expect_punct(")");
      return f;
    }
    if (accept_punct("<")) {
      PropPtr p = parse_prop();
      expect_punct(">");
      return f_point(p);
    }
    if (at_punct("[")) {
      next();
      if (accept_punct("[")) {
        PropPtr p = parse_prop();
        expect_punct("]");
        expect_punct("]");
        return f_all(p);
      }
      PropPtr p = parse_prop();
      expect_punct("]");
      return f_all_but_last(p);
    }
    if (at_punct("{")) {
      next();
      expect_punct("{");
      PropPtr p = parse_prop();
      expect_punct("}");
      expect_punct("}");
      return f_unit(p);
    }
    if (at_ident("true")) {
      next();
      return f_true();
    }
    if (at_ident("false")) {
      next();
      return f_false();
    }
    if (at_ident("pt")) {
      next();
      return f_pt();
    }
    if (at_ident("ext")) {
      next();
      return f_ext();
    }
    if (at_ident("slen")) {
      next();
      CmpOp op = parse_cmp();
      return f_slen(op, parse_const_expr());
    }
    if (at_ident("scount")) {
      next();
      PropPtr p = parse_prop_atom();
      CmpOp op = parse_cmp();
      return f_scount(p, op, parse_const_expr());
    }
    if (at_ident("sdur")) {
      next();
      PropPtr p = parse_prop_atom();
      CmpOp op = parse_cmp();
      return f_sdur(p, op, parse_const_expr());
    }
    if (at_ident("pref")) {
      next();
      expect_punct("(");
      FormulaPtr f = parse_formula();
      expect_punct(")");
      return f_pref(f);
    }
    if (at_ident("EP")) {
      next();
      expect_punct("(");
      PropPtr p = parse_prop();
      expect_punct(")");
      return f_ep(p);
    }
    if (at_ident("KBOUNDED")) {
      next();
      expect_punct("(");
      FormulaPtr f = parse_formula();
      expect_punct(",");
      unsigned n = parse_const_expr();
      expect_punct(")");
      return f_kbounded(f, n);
    }
    if (peek().kind == Tok::Ident) {
      std::string name = next().text;
      if (at_punct("(")) return parse_call(name);
      // bare variable in formula position: holds at the current point
      return f_ep(prop_var(name));
    }
    fail("expected formula");
  }

  CmpOp parse_cmp() {
    if (accept_punct("<=")) return CmpOp::Le;
    if (accept_punct(">=")) return CmpOp::Ge;
    if (accept_punct("<")) return CmpOp::Lt;
    if (accept_punct(">")) return CmpOp::Gt;
    if (accept_punct("=")) return CmpOp::Eq;
    fail("expected comparison operator");
  }

  // Builtin robustness vocabulary expands inline; anything else becomes a
  // Call node resolved during spec expansion.
  FormulaPtr parse_call(const std::string& name) {
    expect_punct("(");
    if (auto crit = criterion_kind_by_name(name)) {
      std::string var = expect_ident("indicator variable");
      unsigned k = 1, b = 1;
      if (criterion_takes_parameters(*crit)) {
        expect_punct(",");
        k = parse_const_expr();
        expect_punct(",");
        b = parse_const_expr();
      }
      expect_punct(")");
      return criterion_formula(Criterion{*crit, k, b}, var);
    }
    if (name == "LocalErr") {
      std::string var = expect_ident("variable");
      expect_punct(")");
      return local_err(var);
    }
    if (name == "CountErr" || name == "BurstErr" || name == "HasBurstErr" ||
        name == "HasNoRecovery") {
      std::string var = expect_ident("variable");
      expect_punct(",");
      unsigned k = parse_const_expr();
      expect_punct(")");
      if (name == "CountErr") return count_err(var, k);
      if (name == "BurstErr") return burst_err(var, k);
      if (name == "HasBurstErr") return has_burst_err(var, k);
      return has_no_recovery(var, k);
    }
    if (name == "RecoveryErr") {
      std::string var = expect_ident("variable");
      expect_punct(",");
      unsigned b = parse_const_expr();
      expect_punct(",");
      FormulaPtr err = parse_formula();
      expect_punct(")");
      return recovery_err(var, b, err);
    }
    if (name == "NeverInPast" || name == "NeverInSuffix") {
      FormulaPtr err = parse_formula();
      expect_punct(")");
      return name == "NeverInPast" ? never_in_past(err) : never_in_suffix(err);
    }
    if (name == "NeverInPastLen" || name == "NeverInSuffixLen") {
      unsigned b = parse_const_expr();
      expect_punct(",");
      FormulaPtr err = parse_formula();
      expect_punct(")");
      return name == "NeverInPastLen" ? never_in_past_len(b, err)
                                      : never_in_suffix_len(b, err);
    }
    // user macro call: variable-name arguments
    std::vector<std::string> args;
    if (!at_punct(")")) {
      for (;;) {
        args.push_back(expect_ident("argument variable"));
        if (!accept_punct(",")) break;
      }
    }
    expect_punct(")");
    return f_call(name, std::move(args));
  }

  // -- spec files -----------------------------------------------------------

  SpecFile parse_spec_file() {
    SpecFile spec;
    if (accept_punct("#")) {
      std::string tag = expect_ident("qsf tag");
      if (tag != "qsf") fail("expected '#qsf'");
      if (peek().kind != Tok::String) fail("expected spec name string");
      spec.name = next().text;
    }
    constants_ = &spec.constants;
    while (!at_end()) {
      std::string block = expect_ident("block name");
      expect_punct("{");
      if (block == "interface")
        parse_interface(spec);
      else if (block == "definitions")
        parse_definitions(spec);
      else if (block == "indefinitions")
        parse_indefinitions(spec);
      else if (block == "hardreq")
        parse_requirement(spec, true);
      else if (block == "softreq")
        parse_requirement(spec, false);
      else
        fail("unknown block '" + block + "'");
      expect_punct("}");
    }
    if (!spec.hard_req) throw ParseError("missing hardreq block");
    if (!spec.soft_req) spec.soft_req = f_true();
    return spec;
  }

  void parse_interface(SpecFile& spec) {
    auto declare = [&](const std::string& v) {
      if (!is_valid_identifier(v)) fail("invalid identifier '" + v + "'");
      bool dup = std::find(spec.inputs.begin(), spec.inputs.end(), v) != spec.inputs.end() ||
                 std::find(spec.outputs.begin(), spec.outputs.end(), v) != spec.outputs.end() ||
                 spec.constants.count(v) > 0;
      if (dup) fail("duplicate declaration of '" + v + "'");
    };
    while (!at_punct("}")) {
      std::string what = expect_ident("interface declaration");
      if (what == "input" || what == "output") {
        for (;;) {
          std::string v = expect_ident("variable name");
          declare(v);
          if (at_ident("monitor")) {  // tolerated annotation
            next();
            expect_ident("monitor tag");
          }
          (what == "input" ? spec.inputs : spec.outputs).push_back(v);
          if (!accept_punct(",")) break;
        }
        expect_punct(";");
      } else if (what == "constant") {
        for (;;) {
          std::string v = expect_ident("constant name");
          declare(v);
          expect_punct("=");
          spec.constants[v] = parse_const_expr();
          if (!accept_punct(",")) break;
        }
        expect_punct(";");
      } else {
        fail("unknown interface declaration '" + what + "'");
      }
    }
  }

  void parse_definitions(SpecFile& spec) {
    while (!at_punct("}")) {
      std::string dc = expect_ident("'dc'");
      if (dc != "dc") fail("expected 'dc'");
      std::string name = expect_ident("definition name");
      if (spec.definitions.count(name)) fail("duplicate definition '" + name + "'");
      expect_punct("(");
      SpecFile::Definition def;
      if (!at_punct(")")) {
        for (;;) {
          def.params.push_back(expect_ident("parameter name"));
          if (!accept_punct(",")) break;
        }
      }
      expect_punct(")");
      expect_punct("{");
      def.body = parse_formula();
      expect_punct(";");
      expect_punct("}");
      spec.definitions[name] = std::move(def);
    }
  }

  void parse_indefinitions(SpecFile& spec) {
    while (!at_punct("}")) {
      std::string var = expect_ident("indicator variable");
      for (const auto& [w, f] : spec.indicator_defs)
        if (w == var) fail("duplicate indicator '" + var + "'");
      expect_punct(":");
      FormulaPtr f = parse_formula();
      expect_punct(";");
      spec.indicator_defs.push_back({var, f});
    }
  }

  void parse_requirement(SpecFile& spec, bool hard) {
    std::vector<std::string>& used = hard ? spec.hard_useind : spec.soft_useind;
    if (at_ident("useind")) {
      next();
      for (;;) {
        used.push_back(expect_ident("indicator name"));
        if (!accept_punct(",")) break;
      }
      expect_punct(";");
    }
    FormulaPtr f = parse_formula();
    expect_punct(";");
    (hard ? spec.hard_req : spec.soft_req) = f;
  }

 private:
  std::string text_;
  Lexer lexer_;
  size_t pos_ = 0;
  const std::map<std::string, unsigned>* constants_;
};

}  // namespace

const FormulaPtr* SpecFile::indicator_def(const std::string& name) const {
  for (const auto& [w, f] : indicator_defs)
    if (w == name) return &f;
  return nullptr;
}

SpecFile parse_spec(const std::string& text) {
  Parser p(text, nullptr);
  return p.parse_spec_file();
}

FormulaPtr parse_formula(const std::string& text, const std::vector<std::string>& env,
                         const std::map<std::string, unsigned>& constants) {
  Parser p(text, &constants);
  FormulaPtr f = p.parse_formula();
  if (!p.at_end()) p.fail("trailing input after formula");
  for (const auto& v : free_vars(f))
    if (std::find(env.begin(), env.end(), v) == env.end())
      throw ParseError("unknown variable '" + v + "'");
  return f;
}

namespace {

FormulaPtr expand_calls(const FormulaPtr& f, const SpecFile& spec,
                        std::set<std::string>& active);

FormulaPtr expand_call_node(const FormulaPtr& f, const SpecFile& spec,
                            std::set<std::string>& active) {
  auto it = spec.definitions.find(f->var);
  if (it == spec.definitions.end())
    throw ParseError("unknown definition '" + f->var + "'");
  const SpecFile::Definition& def = it->second;
  if (def.params.size() != f->args.size())
    throw ParseError("arity mismatch in call to '" + f->var + "': expected " +
                     std::to_string(def.params.size()) + " arguments, got " +
                     std::to_string(f->args.size()));
  if (active.count(f->var)) throw ParseError("recursive definition '" + f->var + "'");
  std::map<std::string, std::string> ren;
  for (size_t i = 0; i < def.params.size(); ++i) ren[def.params[i]] = f->args[i];
  active.insert(f->var);
  FormulaPtr body = expand_calls(subst_free_vars(def.body, ren), spec, active);
  active.erase(f->var);
  return body;
}

FormulaPtr expand_calls(const FormulaPtr& f, const SpecFile& spec,
                        std::set<std::string>& active) {
  if (!f) return f;
  if (f->kind == FormulaKind::Call) return expand_call_node(f, spec, active);
  if (!f->lhs && !f->rhs) return f;
  auto g = std::make_shared<Formula>(*f);
  if (f->lhs) g->lhs = expand_calls(f->lhs, spec, active);
  if (f->rhs) g->rhs = expand_calls(f->rhs, spec, active);
  return g;
}

}  // namespace

ExpandedSpec expand(const SpecFile& spec) {
  for (const auto& in : spec.inputs)
    if (std::find(spec.outputs.begin(), spec.outputs.end(), in) != spec.outputs.end())
      throw ParseError("variable declared both input and output: " + in);
  for (const auto& [w, f] : spec.indicator_defs)
    if (std::find(spec.outputs.begin(), spec.outputs.end(), w) == spec.outputs.end())
      throw ParseError("indicator variable must be a declared output: " + w);

  std::set<std::string> active;
  auto build = [&](const FormulaPtr& req, const std::vector<std::string>& useind) {
    FormulaPtr result = expand_calls(req, spec, active);
    for (const auto& w : useind) {
      const FormulaPtr* def = spec.indicator_def(w);
      if (!def) throw ParseError("useind names unknown indicator '" + w + "'");
      FormulaPtr bound = expand_calls(*def, spec, active);
      result = f_and(result, f_pref(f_iff(f_ep(prop_var(w)), bound)));
    }
    return result;
  };

  ExpandedSpec out;
  out.inputs = spec.inputs;
  out.outputs = spec.outputs;
  out.hard = build(spec.hard_req, spec.hard_useind);
  out.soft = build(spec.soft_req, spec.soft_useind);

  std::vector<std::string> declared = spec.inputs;
  declared.insert(declared.end(), spec.outputs.begin(), spec.outputs.end());
  for (const auto& f : {out.hard, out.soft})
    for (const auto& v : free_vars(f))
      if (std::find(declared.begin(), declared.end(), v) == declared.end())
        throw ParseError("undeclared variable '" + v + "' in requirement");
  return out;
}

}  // namespace qsyn
