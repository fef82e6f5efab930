#include "starkc/tptp.hpp"

#include "starkc/version.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace starkc {

namespace {

bool is_lower_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string quote_atom(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string atom_token(const std::string& name) {
  return is_lower_word(name) ? name : quote_atom(name);
}

std::string_view mode_suffix(Mode m) {
  switch (m) {
    case Mode::Succeeds: return "_succeeds";
    case Mode::Fails: return "_fails";
    case Mode::Terminates: return "_terminates";
  }
  return "";
}

} // namespace

ManglingTable ManglingTable::build(const std::vector<Functor>& signature,
                                   const std::vector<PredId>& predicates) {
  ManglingTable t;
  auto claim = [&](const std::string& token, const std::string& what) {
    if (token == "gr") {
      throw Error("mangling collision: " + what + " clashes with the reserved token gr");
    }
    if (t.functor_by_token_.count(token) || t.pred_by_token_.count(token)) {
      throw Error("mangling collision: " + what + " maps to already-used token " + token);
    }
  };
  // FOF symbols carry one arity each, so a name used at several arities gets
  // an _ar<N> suffix on every occurrence.
  auto multi_arity = [](const auto& items, const std::string& name) {
    int arities = 0;
    int seen = -1;
    for (const auto& x : items) {
      if (x.name == name && x.arity != seen) {
        seen = x.arity;
        ++arities;
      }
    }
    return arities > 1;
  };
  for (const auto& f : signature) {
    std::string base = f.name;
    if (multi_arity(signature, f.name)) base += "_ar" + std::to_string(f.arity);
    std::string token = atom_token(base);
    claim(token, "functor " + f.name + "/" + std::to_string(f.arity));
    t.functor_tokens_[f] = token;
    t.functor_by_token_[token] = f;
  }
  for (const auto& p : predicates) {
    std::string base = p.name;
    if (multi_arity(predicates, p.name)) base += "_ar" + std::to_string(p.arity);
    for (Mode m : {Mode::Succeeds, Mode::Fails, Mode::Terminates}) {
      std::string token = base + std::string(mode_suffix(m));
      if (!is_lower_word(token)) token = quote_atom(token);
      claim(token, "predicate " + p.name + "/" + std::to_string(p.arity));
      t.pred_tokens_[{p, m}] = token;
      t.pred_by_token_[token] = {p, m};
    }
  }
  return t;
}

std::string ManglingTable::mangle_var(const std::string& name) { return "X" + name; }

std::string ManglingTable::demangle_var(const std::string& token) {
  if (token.size() > 1 && token[0] == 'X') return token.substr(1);
  return token;
}

const std::string& ManglingTable::functor_token(const Functor& f) const {
  auto it = functor_tokens_.find(f);
  if (it == functor_tokens_.end()) {
    throw Error("functor " + f.name + "/" + std::to_string(f.arity) +
                " is not in the mangling table");
  }
  return it->second;
}

const std::string& ManglingTable::pred_token(const PredId& p, Mode m) const {
  auto it = pred_tokens_.find({p, m});
  if (it == pred_tokens_.end()) {
    throw Error("predicate " + p.name + "/" + std::to_string(p.arity) +
                " is not in the mangling table");
  }
  return it->second;
}

std::optional<Functor> ManglingTable::functor_of_token(const std::string& token) const {
  auto it = functor_by_token_.find(token);
  if (it == functor_by_token_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<PredId, Mode>> ManglingTable::pred_of_token(
    const std::string& token) const {
  auto it = pred_by_token_.find(token);
  if (it == pred_by_token_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

std::string emit_term(const TermPtr& t, const ManglingTable& m) {
  return std::visit(
      overloaded{
          [](const Term::Var& v) { return ManglingTable::mangle_var(v.name); },
          [&](const Term::App& a) {
            std::string s =
                m.functor_token(Functor{a.functor, static_cast<int>(a.args.size())});
            if (!a.args.empty()) {
              s += '(';
              for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) s += ',';
                s += emit_term(a.args[i], m);
              }
              s += ')';
            }
            return s;
          },
      },
      t->node());
}

bool is_binary(const FormulaPtr& f) {
  return f->as<Formula::And>() || f->as<Formula::Or>() || f->as<Formula::Implies>() ||
         f->as<Formula::Iff>();
}

bool is_plain_atom(const FormulaPtr& f) {
  return f->as<Formula::Top>() || f->as<Formula::Bot>() || f->as<Formula::Pred>() ||
         f->as<Formula::Gr>();
}

void emit_rec(const FormulaPtr& f, const ManglingTable& m, std::string& out);

// Operands of binary connectives must be unitary: parenthesize binary
// subformulas, leave atoms, equalities, negations and quantifications bare.
void emit_operand(const FormulaPtr& f, const ManglingTable& m, std::string& out) {
  if (is_binary(f)) {
    out += '(';
    emit_rec(f, m, out);
    out += ')';
  } else {
    emit_rec(f, m, out);
  }
}

void emit_quant(char q, const FormulaPtr& f, const ManglingTable& m, std::string& out) {
  std::vector<std::string> vars;
  FormulaPtr body = f;
  for (;;) {
    if (q == '!' && body->as<Formula::Forall>()) {
      const auto* x = body->as<Formula::Forall>();
      vars.push_back(x->var);
      body = x->body;
    } else if (q == '?' && body->as<Formula::Exists>()) {
      const auto* x = body->as<Formula::Exists>();
      vars.push_back(x->var);
      body = x->body;
    } else {
      break;
    }
  }
  out += q;
  out += " [";
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ',';
    out += ManglingTable::mangle_var(vars[i]);
  }
  out += "] : ";
  if (is_plain_atom(body) || body->as<Formula::Forall>() || body->as<Formula::Exists>() ||
      body->as<Formula::Not>()) {
    emit_rec(body, m, out);
  } else {
    out += '(';
    emit_rec(body, m, out);
    out += ')';
  }
}

void emit_rec(const FormulaPtr& f, const ManglingTable& m, std::string& out) {
  std::visit(
      overloaded{
          [&](const Formula::Top&) { out += "$true"; },
          [&](const Formula::Bot&) { out += "$false"; },
          [&](const Formula::Eq& x) {
            out += emit_term(x.lhs, m) + " = " + emit_term(x.rhs, m);
          },
          [&](const Formula::Pred& x) {
            out += m.pred_token(x.pred, x.mode);
            if (!x.args.empty()) {
              out += '(';
              for (size_t i = 0; i < x.args.size(); ++i) {
                if (i) out += ',';
                out += emit_term(x.args[i], m);
              }
              out += ')';
            }
          },
          [&](const Formula::Gr& x) { out += "gr(" + emit_term(x.arg, m) + ")"; },
          [&](const Formula::Not& x) {
            out += "~ ";
            if (is_plain_atom(x.inner)) {
              emit_rec(x.inner, m, out);
            } else {
              out += '(';
              emit_rec(x.inner, m, out);
              out += ')';
            }
          },
          [&](const Formula::And& x) {
            emit_operand(x.left, m, out);
            out += " & ";
            emit_operand(x.right, m, out);
          },
          [&](const Formula::Or& x) {
            emit_operand(x.left, m, out);
            out += " | ";
            emit_operand(x.right, m, out);
          },
          [&](const Formula::Implies& x) {
            emit_operand(x.left, m, out);
            out += " => ";
            emit_operand(x.right, m, out);
          },
          [&](const Formula::Iff& x) {
            emit_operand(x.left, m, out);
            out += " <=> ";
            emit_operand(x.right, m, out);
          },
          [&](const Formula::Forall&) { emit_quant('!', f, m, out); },
          [&](const Formula::Exists&) { emit_quant('?', f, m, out); },
      },
      f->node());
}

} // namespace

std::string emit_formula(const FormulaPtr& f, const ManglingTable& m) {
  FormulaPtr closed = Formula::forall_many(free_vars(f), f);
  std::string out;
  emit_rec(closed, m, out);
  return out;
}

std::string emit_file(const std::vector<NamedFormula>& obligation, const ManglingTable& m,
                      const FileHeader& header) {
  int conjectures = 0;
  for (const auto& nf : obligation) {
    if (nf.role == NamedFormula::Role::Conjecture) ++conjectures;
  }
  if (conjectures != 1) {
    throw Error("an obligation must contain exactly one conjecture, found " +
                std::to_string(conjectures));
  }
  if (obligation.back().role != NamedFormula::Role::Conjecture) {
    throw Error("the conjecture must be the final formula of the obligation");
  }

  std::string out;
  out += "% program: " + header.program + "\n";
  out += "% fact: " + header.fact;
  if (header.total > 0) {
    out += " (" + std::to_string(header.ordinal) + " of " + std::to_string(header.total) + ")";
  }
  out += "\n";
  out += "% generator: starkc " + std::string(kVersion) + "\n";
  for (const auto& nf : obligation) {
    out += "\n";
    out += "fof(" + atom_token(nf.name) + ",";
    out += nf.role == NamedFormula::Role::Conjecture ? "conjecture" : "axiom";
    out += "," + emit_formula(nf.formula, m) + ").\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation and read-back of the emitted subset.

namespace {

enum class FTok { LowerWord, UpperWord, Quoted, Integer, Defined, Punct, End };

struct FofToken {
  FTok kind = FTok::End;
  std::string text;
  int line = 1;
};

class FofLexer {
public:
  explicit FofLexer(const std::string& text) : text_(text) { advance(); }

  const FofToken& peek() const { return tok_; }
  FofToken next() {
    FofToken t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ < text_.size() && text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    tok_.line = line_;
    if (pos_ >= text_.size()) {
      tok_.kind = FTok::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    auto word = [&](FTok kind) {
      std::string out;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        out += text_[pos_++];
      }
      tok_ = FofToken{kind, out, line_};
    };
    if (std::islower(static_cast<unsigned char>(c))) {
      word(FTok::LowerWord);
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      word(FTok::UpperWord);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      word(FTok::Integer);
      return;
    }
    if (c == '$') {
      ++pos_;
      std::string out = "$";
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        out += text_[pos_++];
      }
      tok_ = FofToken{FTok::Defined, out, line_};
      return;
    }
    if (c == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size() && text_[pos_] != '\'') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
          ++pos_;
          out += text_[pos_++];
          continue;
        }
        if (text_[pos_] == '\n') ++line_;
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) {
        tok_ = FofToken{FTok::Punct, "<unterminated quote>", line_};
        return;
      }
      ++pos_;  // closing quote
      tok_ = FofToken{FTok::Quoted, out, line_};
      return;
    }
    static const char* multi[] = {"<=>", "=>"};
    for (const char* p : multi) {
      size_t n = std::strlen(p);
      if (text_.compare(pos_, n, p) == 0) {
        pos_ += n;
        tok_ = FofToken{FTok::Punct, p, line_};
        return;
      }
    }
    if (std::strchr("()[],.:&|~=!?", c)) {
      ++pos_;
      tok_ = FofToken{FTok::Punct, std::string(1, c), line_};
      return;
    }
    ++pos_;
    tok_ = FofToken{FTok::Punct, std::string("<bad:") + c + ">", line_};
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  FofToken tok_;
};

struct FofParseError {
  int line;
  std::string message;
};

// Recursive-descent over the emitter's FOF subset. Used both by the validator
// (errors collected as diagnostics) and by read_fof (errors thrown).
class FofParser {
public:
  explicit FofParser(const std::string& text) : lex_(text) {}

  std::vector<FofRecord> parse_all(std::vector<Diagnostic>* diags) {
    std::vector<FofRecord> out;
    while (lex_.peek().kind != FTok::End) {
      try {
        out.push_back(parse_clause());
      } catch (const FofParseError& e) {
        if (!diags) throw Error("fof parse error at line " + std::to_string(e.line) + ": " + e.message);
        diags->push_back(Diagnostic{e.line, e.message});
        resync();
      }
    }
    return out;
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    throw FofParseError{lex_.peek().line, msg};
  }

  bool is_punct(const char* p) {
    return lex_.peek().kind == FTok::Punct && lex_.peek().text == p;
  }

  void expect(const char* p, const std::string& what) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "' " + what);
    lex_.next();
  }

  void resync() {
    while (lex_.peek().kind != FTok::End) {
      if (is_punct(".")) {
        lex_.next();
        return;
      }
      lex_.next();
    }
  }

  FofRecord parse_clause() {
    if (lex_.peek().kind != FTok::LowerWord || lex_.peek().text != "fof") {
      fail("expected fof");
    }
    lex_.next();
    expect("(", "after fof");
    FofRecord rec;
    const FofToken name = lex_.peek();
    if (name.kind != FTok::LowerWord && name.kind != FTok::Quoted &&
        name.kind != FTok::Integer) {
      fail("formula name must be a lower word, quoted atom or integer");
    }
    rec.name = lex_.next().text;
    expect(",", "after formula name");
    const FofToken role = lex_.peek();
    if (role.kind != FTok::LowerWord || (role.text != "axiom" && role.text != "conjecture")) {
      fail("role must be axiom or conjecture");
    }
    rec.role = lex_.next().text == "conjecture" ? NamedFormula::Role::Conjecture
                                                : NamedFormula::Role::Axiom;
    expect(",", "after role");
    rec.formula = parse_formula();
    expect(")", "to close fof");
    expect(".", "after fof clause");
    return rec;
  }

  FormulaPtr parse_formula() {
    FormulaPtr left = parse_unit();
    if (is_punct("&") || is_punct("|")) {
      const std::string op = lex_.peek().text;
      FormulaPtr acc = left;
      while (is_punct(op.c_str())) {
        lex_.next();
        FormulaPtr rhs = parse_unit();
        acc = op == "&" ? Formula::and_(acc, rhs) : Formula::or_(acc, rhs);
      }
      if (is_punct("&") || is_punct("|") || is_punct("=>") || is_punct("<=>")) {
        fail("mixed binary connectives need parentheses");
      }
      return acc;
    }
    if (is_punct("=>") || is_punct("<=>")) {
      const bool iff = lex_.peek().text == "<=>";
      lex_.next();
      FormulaPtr rhs = parse_unit();
      if (is_punct("&") || is_punct("|") || is_punct("=>") || is_punct("<=>")) {
        fail("implications are non-associative; use parentheses");
      }
      return iff ? Formula::iff(left, rhs) : Formula::implies(left, rhs);
    }
    return left;
  }

  FormulaPtr parse_unit() {
    if (is_punct("!") || is_punct("?")) {
      const bool universal = lex_.peek().text == "!";
      lex_.next();
      expect("[", "after quantifier");
      std::vector<std::string> vars;
      for (;;) {
        if (lex_.peek().kind != FTok::UpperWord) {
          fail("quantified variables must be upper words");
        }
        vars.push_back(ManglingTable::demangle_var(lex_.next().text));
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect("]", "to close quantifier variables");
      expect(":", "after quantifier variables");
      FormulaPtr body = parse_unit();
      return universal ? Formula::forall_many(vars, body)
                       : Formula::exists_many(vars, body);
    }
    if (is_punct("~")) {
      lex_.next();
      return Formula::not_(parse_unit());
    }
    if (is_punct("(")) {
      lex_.next();
      FormulaPtr f = parse_formula();
      expect(")", "to close formula");
      return f;
    }
    if (lex_.peek().kind == FTok::Defined) {
      const FofToken t = lex_.next();
      if (t.text == "$true") return Formula::top();
      if (t.text == "$false") return Formula::bot();
      throw FofParseError{t.line, "unknown defined constant " + t.text};
    }
    return parse_atom_or_equality();
  }

  FormulaPtr parse_atom_or_equality() {
    const FofToken head = lex_.peek();
    if (head.kind == FTok::UpperWord) {
      TermPtr lhs = parse_term();
      if (!is_punct("=")) fail("a bare variable cannot stand as a formula");
      lex_.next();
      return Formula::eq(lhs, parse_term());
    }
    if (head.kind != FTok::LowerWord && head.kind != FTok::Quoted &&
        head.kind != FTok::Integer) {
      fail("expected an atom, equality or quantified formula");
    }
    // Could be a predicate atom or the left term of an equality; parse the
    // application first and decide on '='.
    const FofToken tok = lex_.next();
    std::vector<TermPtr> args;
    bool had_args = false;
    if (is_punct("(")) {
      had_args = true;
      lex_.next();
      for (;;) {
        args.push_back(parse_term());
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect(")", "to close argument list");
    }
    if (is_punct("=")) {
      lex_.next();
      TermPtr lhs = Term::app(tok.text, args);
      return Formula::eq(lhs, parse_term());
    }
    // Predicate position: demangle.
    if (tok.kind != FTok::LowerWord && tok.kind != FTok::Quoted) {
      fail("predicate tokens must be words");
    }
    if (tok.text == "gr") {
      if (args.size() != 1) fail("gr takes exactly one argument");
      return Formula::gr(args[0]);
    }
    for (Mode m : {Mode::Succeeds, Mode::Fails, Mode::Terminates}) {
      const std::string suffix{mode_suffix(m)};
      if (tok.text.size() > suffix.size() &&
          tok.text.compare(tok.text.size() - suffix.size(), suffix.size(), suffix) == 0) {
        std::string base = tok.text.substr(0, tok.text.size() - suffix.size());
        return Formula::pred(PredId{base, static_cast<int>(args.size())}, m, args);
      }
    }
    (void)had_args;
    fail("predicate token '" + tok.text + "' lacks a mode suffix");
  }

  TermPtr parse_term() {
    const FofToken t = lex_.peek();
    if (t.kind == FTok::UpperWord) {
      lex_.next();
      return Term::var(ManglingTable::demangle_var(t.text));
    }
    if (t.kind == FTok::LowerWord || t.kind == FTok::Quoted || t.kind == FTok::Integer) {
      lex_.next();
      if (is_punct("(")) {
        lex_.next();
        std::vector<TermPtr> args;
        for (;;) {
          args.push_back(parse_term());
          if (is_punct(",")) {
            lex_.next();
            continue;
          }
          break;
        }
        expect(")", "to close argument list");
        return Term::app(t.text, std::move(args));
      }
      return Term::constant(t.text);
    }
    fail("expected a term");
  }

  FofLexer lex_;
};

} // namespace

std::vector<Diagnostic> validate_fof(const std::string& text) {
  std::vector<Diagnostic> diags;
  FofParser(text).parse_all(&diags);
  return diags;
}

std::vector<FofRecord> read_fof(const std::string& text) {
  return FofParser(text).parse_all(nullptr);
}

} // namespace starkc
