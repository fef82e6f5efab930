#include "starkc/reader.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

namespace starkc {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error(span.file + ":" + std::to_string(span.line) + ":" +
            std::to_string(span.column) + ": " + message),
      span_(std::move(span)) {}

namespace {

enum class Tok {
  Atom,     // lower_word or quoted
  Var,      // uppercase/underscore word, or ?name in property files
  Int,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
public:
  Lexer(const std::string& text, std::string file, bool property_mode)
      : text_(text), file_(std::move(file)), property_mode_(property_mode) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  SourceSpan here() const { return tok_.span; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(tok_.span, msg); }

private:
  void advance() {
    skip_layout();
    tok_.span = SourceSpan{file_, line_, col_};
    if (pos_ >= text_.size()) {
      tok_ = Token{Tok::End, "", tok_.span};
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_ = Token{Tok::Int, take_while([](char x) {
                     return std::isdigit(static_cast<unsigned char>(x)) != 0;
                   }),
                   tok_.span};
      return;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      tok_ = Token{Tok::Atom, take_while(is_ident), tok_.span};
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
      tok_ = Token{Tok::Var, take_while(is_ident), tok_.span};
      return;
    }
    if (c == '\'') {
      tok_ = Token{Tok::Atom, take_quoted(), tok_.span};
      return;
    }
    if (property_mode_ && c == '?') {
      bump();
      if (pos_ >= text_.size() || !is_ident(text_[pos_]) ||
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError(tok_.span, "expected a variable name after '?'");
      }
      tok_ = Token{Tok::Var, take_while(is_ident), tok_.span};
      return;
    }
    for (const char* p : multi_puncts()) {
      size_t n = std::strlen(p);
      if (text_.compare(pos_, n, p) == 0) {
        for (size_t i = 0; i < n; ++i) bump();
        tok_ = Token{Tok::Punct, p, tok_.span};
        return;
      }
    }
    if (std::strchr("()[],.;:=&~|", c)) {
      bump();
      tok_ = Token{Tok::Punct, std::string(1, c), tok_.span};
      return;
    }
    throw ParseError(tok_.span, std::string("unexpected character '") + c + "'");
  }

  static const std::vector<const char*>& multi_puncts() {
    static const std::vector<const char*> ps = {"<=>", "=>", ":-", "\\+", "\\/"};
    return ps;
  }

  static bool is_ident(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_layout() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        bump();
      }
      if (pos_ < text_.size() && text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
  }

  template <class Pred>
  std::string take_while(Pred keep) {
    std::string out;
    while (pos_ < text_.size() && keep(text_[pos_])) {
      out += text_[pos_];
      bump();
    }
    return out;
  }

  std::string take_quoted() {
    SourceSpan start{file_, line_, col_};
    bump();  // opening quote
    std::string out;
    for (;;) {
      if (pos_ >= text_.size()) throw ParseError(start, "unterminated quoted atom");
      char c = text_[pos_];
      if (c == '\\') {
        bump();
        if (pos_ >= text_.size()) throw ParseError(start, "unterminated escape");
        char e = text_[pos_];
        if (e == '\\' || e == '\'') {
          out += e;
          bump();
          continue;
        }
        throw ParseError(SourceSpan{file_, line_, col_}, "unsupported escape in quoted atom");
      }
      if (c == '\'') {
        bump();
        return out;
      }
      out += c;
      bump();
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::string file_;
  bool property_mode_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Program files

class ProgramParser {
public:
  ProgramParser(const std::string& text, const std::string& file)
      : lex_(text, file, /*property_mode=*/false) {}

  Program parse() {
    Program p;
    while (lex_.peek().kind != Tok::End) {
      parse_clause(p);
    }
    finish(p);
    return p;
  }

  GoalPtr parse_single_goal() {
    GoalPtr g = parse_body();
    if (lex_.peek().kind != Tok::End && !is_punct(".")) {
      lex_.fail("trailing input after goal");
    }
    return g;
  }

private:
  bool is_punct(const char* p) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }

  void expect_punct(const char* p, const char* what) {
    if (!is_punct(p)) lex_.fail(std::string("expected '") + p + "' " + what);
    lex_.next();
  }

  void parse_clause(Program& p) {
    SourceSpan at = lex_.here();
    TermPtr head = parse_term();
    const auto* app = head->as_app();
    if (!app) throw ParseError(at, "clause head must be an atom");
    if (app->functor == "true" || app->functor == "fail") {
      throw ParseError(at, "'" + app->functor + "' is reserved and cannot head a clause");
    }
    GoalPtr body = Goal::truth();
    if (is_punct(":-")) {
      lex_.next();
      body = parse_body();
    }
    expect_punct(".", "at end of clause");
    p.clauses.push_back(Clause{
        PredId{app->functor, static_cast<int>(app->args.size())}, app->args, body});
  }

  GoalPtr parse_body() { return parse_disj(); }

  GoalPtr parse_disj() {
    GoalPtr left = parse_conj();
    if (is_punct(";")) {
      lex_.next();
      return Goal::disj(left, parse_disj());
    }
    return left;
  }

  GoalPtr parse_conj() {
    GoalPtr left = parse_unary();
    if (is_punct(",")) {
      lex_.next();
      return Goal::conj(left, parse_conj());
    }
    return left;
  }

  GoalPtr parse_unary() {
    if (is_punct("\\+")) {
      lex_.next();
      return Goal::naf(parse_unary());
    }
    if (is_punct("(")) {
      lex_.next();
      GoalPtr g = parse_body();
      expect_punct(")", "to close goal");
      return g;
    }
    return parse_primary();
  }

  GoalPtr parse_primary() {
    SourceSpan at = lex_.here();
    if (lex_.peek().kind == Tok::Atom && lex_.peek().text == "some") {
      return parse_some();
    }
    TermPtr t = parse_term();
    if (is_punct("=")) {
      lex_.next();
      return Goal::eq(t, parse_term());
    }
    if (const auto* v = t->as_var()) {
      throw ParseError(at, "variable '" + v->name + "' cannot stand as a goal");
    }
    const auto* app = t->as_app();
    if (app->functor == "true" && app->args.empty()) return Goal::truth();
    if (app->functor == "fail" && app->args.empty()) return Goal::fail();
    return Goal::atom(PredId{app->functor, static_cast<int>(app->args.size())}, app->args);
  }

  // some(X, G) or some([X,Y], G); the latter nests to unary binders.
  GoalPtr parse_some() {
    lex_.next();  // 'some'
    expect_punct("(", "after some");
    std::vector<std::string> vars;
    if (is_punct("[")) {
      lex_.next();
      for (;;) {
        if (lex_.peek().kind != Tok::Var) lex_.fail("expected a variable in some binder");
        vars.push_back(lex_.next().text);
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect_punct("]", "to close some binder");
    } else {
      if (lex_.peek().kind != Tok::Var) lex_.fail("some expects a variable binder");
      vars.push_back(lex_.next().text);
    }
    expect_punct(",", "between some binder and body");
    GoalPtr body = parse_body();
    expect_punct(")", "to close some");
    for (size_t i = vars.size(); i-- > 0;) body = Goal::some(vars[i], body);
    return body;
  }

  TermPtr parse_term() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Var: {
        if (t.text == "_") return Term::var(fresh_anonymous());
        return Term::var(t.text);
      }
      case Tok::Int:
        return Term::constant(t.text);
      case Tok::Atom: {
        if (!is_punct("(")) return Term::constant(t.text);
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
        expect_punct(")", "to close argument list");
        return Term::app(t.text, std::move(args));
      }
      default:
        throw ParseError(t.span, "expected a term, found '" + t.text + "'");
    }
  }

  std::string fresh_anonymous() { return "_G" + std::to_string(++anon_); }

  // Signature and predicate sets, in first-occurrence order. Called
  // predicates with no clauses are kept (they complete to fail).
  void finish(Program& p) {
    for (const auto& c : p.clauses) {
      add_unique(p.predicates, c.pred);
      for (const auto& t : c.head_args) collect_functors(t, p.signature);
      collect_functors(c.body, p.signature);
    }
    for (const auto& c : p.clauses) {
      std::vector<PredId> called;
      collect_called_preds(c.body, called);
      for (const auto& q : called) add_unique(p.predicates, q);
    }
  }

  Lexer lex_;
  int anon_ = 0;
};

// ---------------------------------------------------------------------------
// Property files

class FactsParser {
public:
  FactsParser(const std::string& text, const std::string& file)
      : lex_(text, file, /*property_mode=*/true) {}

  std::vector<Fact> parse() {
    std::vector<Fact> out;
    while (lex_.peek().kind != Tok::End) {
      out.push_back(parse_decl());
    }
    return out;
  }

private:
  bool is_punct(const char* p) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }

  void expect_punct(const char* p, const char* what) {
    if (!is_punct(p)) lex_.fail(std::string("expected '") + p + "' " + what);
    lex_.next();
  }

  bool at_keyword(const char* kw) const {
    return lex_.peek().kind == Tok::Atom && lex_.peek().text == kw;
  }

  Fact parse_decl() {
    expect_punct(":-", "to begin a declaration");
    SourceSpan at = lex_.here();
    if (lex_.peek().kind != Tok::Atom) lex_.fail("expected lemma, corollary or theorem");
    std::string kw = lex_.next().text;
    FactKind kind;
    if (kw == "lemma") {
      kind = FactKind::Lemma;
    } else if (kw == "corollary") {
      kind = FactKind::Corollary;
    } else if (kw == "theorem") {
      kind = FactKind::Theorem;
    } else {
      throw ParseError(at, "unknown fact kind '" + kw + "'");
    }
    expect_punct("(", "after fact kind");
    std::string name = parse_fact_name();
    expect_punct(",", "after fact name");
    FormulaPtr stmt = parse_statement();
    expect_punct(",", "after statement");
    discard_proof();
    expect_punct(")", "to close declaration");
    expect_punct(".", "at end of declaration");

    // Implicit universal closure over residual free variables.
    std::vector<std::string> frees = free_vars(stmt);
    stmt = Formula::forall_many(frees, stmt);
    return Fact{kind, std::move(name), std::move(stmt)};
  }

  // Qualified name: atom { ':' (atom | integer) }, e.g. add:term:1.
  std::string parse_fact_name() {
    if (lex_.peek().kind != Tok::Atom) lex_.fail("expected a fact name");
    std::string name = lex_.next().text;
    while (is_punct(":")) {
      lex_.next();
      if (lex_.peek().kind != Tok::Atom && lex_.peek().kind != Tok::Int) {
        lex_.fail("expected a name component after ':'");
      }
      name += ":" + lex_.next().text;
    }
    return name;
  }

  // The proof argument: a balanced token blob, discarded.
  void discard_proof() {
    int depth = 0;
    for (;;) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::End) lex_.fail("unterminated proof argument");
      if (t.kind == Tok::Punct) {
        if (t.text == "(" || t.text == "[") ++depth;
        if (t.text == ")" || t.text == "]") {
          if (depth == 0 && t.text == ")") return;
          --depth;
          if (depth < 0) lex_.fail("unbalanced proof argument");
        }
      }
      lex_.next();
    }
  }

  // Precedence: ~ > & > \/ > =>/<=> (implications right-associative);
  // quantifier bodies extend as far right as possible.
  FormulaPtr parse_statement() { return parse_impl(); }

  FormulaPtr parse_impl() {
    FormulaPtr left = parse_or();
    if (is_punct("=>")) {
      lex_.next();
      return Formula::implies(left, parse_impl());
    }
    if (is_punct("<=>")) {
      lex_.next();
      return Formula::iff(left, parse_impl());
    }
    return left;
  }

  FormulaPtr parse_or() {
    FormulaPtr left = parse_and();
    if (is_punct("\\/")) {
      lex_.next();
      return Formula::or_(left, parse_or());
    }
    return left;
  }

  FormulaPtr parse_and() {
    FormulaPtr left = parse_unary();
    if (is_punct("&")) {
      lex_.next();
      return Formula::and_(left, parse_and());
    }
    return left;
  }

  FormulaPtr parse_unary() {
    if (is_punct("~")) {
      lex_.next();
      return Formula::not_(parse_unary());
    }
    if (at_keyword("all") || at_keyword("ex")) {
      return parse_quant();
    }
    return parse_primary();
  }

  FormulaPtr parse_quant() {
    bool universal = lex_.next().text == "all";
    std::vector<std::string> vars;
    if (is_punct("[")) {
      lex_.next();
      for (;;) {
        if (lex_.peek().kind != Tok::Atom) lex_.fail("expected a variable name in binder");
        vars.push_back(lex_.next().text);
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect_punct("]", "to close binder");
    } else {
      if (lex_.peek().kind != Tok::Atom) lex_.fail("expected a variable name in binder");
      vars.push_back(lex_.next().text);
    }
    expect_punct(":", "after binder");
    FormulaPtr body = parse_impl();
    return universal ? Formula::forall_many(vars, body)
                     : Formula::exists_many(vars, body);
  }

  FormulaPtr parse_primary() {
    SourceSpan at = lex_.here();
    if (at_keyword("succeeds")) {
      lex_.next();
      return parse_mode_atom(Mode::Succeeds);
    }
    if (at_keyword("fails")) {
      lex_.next();
      return parse_mode_atom(Mode::Fails);
    }
    if (at_keyword("terminates")) {
      lex_.next();
      return parse_mode_atom(Mode::Terminates);
    }
    if (at_keyword("gr")) {
      lex_.next();
      expect_punct("(", "after gr");
      TermPtr t = parse_fterm();
      expect_punct(")", "to close gr");
      return Formula::gr(t);
    }
    if (is_punct("(")) {
      lex_.next();
      FormulaPtr f = parse_impl();
      expect_punct(")", "to close formula");
      return f;
    }
    TermPtr lhs = parse_fterm();
    if (!is_punct("=")) {
      throw ParseError(at, "expected a statement");
    }
    lex_.next();
    return Formula::eq(lhs, parse_fterm());
  }

  FormulaPtr parse_mode_atom(Mode mode) {
    SourceSpan at = lex_.here();
    if (lex_.peek().kind != Tok::Atom) lex_.fail("expected a predicate atom");
    std::string name = lex_.next().text;
    std::vector<TermPtr> args;
    if (is_punct("(")) {
      lex_.next();
      for (;;) {
        args.push_back(parse_fterm());
        if (is_punct(",")) {
          lex_.next();
          continue;
        }
        break;
      }
      expect_punct(")", "to close argument list");
    }
    (void)at;
    const int arity = static_cast<int>(args.size());
    return Formula::pred(PredId{std::move(name), arity}, mode, std::move(args));
  }

  TermPtr parse_fterm() {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::Var:
        return Term::var(t.text);
      case Tok::Int:
        return Term::constant(t.text);
      case Tok::Atom: {
        if (t.text == "all" || t.text == "ex" || t.text == "succeeds" ||
            t.text == "fails" || t.text == "terminates" || t.text == "gr") {
          throw ParseError(t.span, "'" + t.text + "' is reserved in statements");
        }
        if (!is_punct("(")) return Term::constant(t.text);
        lex_.next();
        std::vector<TermPtr> args;
        for (;;) {
          args.push_back(parse_fterm());
          if (is_punct(",")) {
            lex_.next();
            continue;
          }
          break;
        }
        expect_punct(")", "to close argument list");
        return Term::app(t.text, std::move(args));
      }
      default:
        throw ParseError(t.span, "expected a term, found '" + t.text + "'");
    }
  }

  Lexer lex_;
};

} // namespace

Program parse_program(const std::string& text, const std::string& file) {
  return ProgramParser(text, file).parse();
}

std::vector<Fact> parse_facts(const std::string& text, const std::string& file) {
  return FactsParser(text, file).parse();
}

GoalPtr parse_goal(const std::string& text, const std::string& file) {
  return ProgramParser(text, file).parse_single_goal();
}

} // namespace starkc
