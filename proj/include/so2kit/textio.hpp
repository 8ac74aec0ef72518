#ifndef SO2KIT_TEXTIO_HPP
#define SO2KIT_TEXTIO_HPP

// Text syntax for formulas.
//
//   formula := iff
//   iff     := imp (("<->" | "=") imp)*          left associative
//   imp     := or ("->" imp)?                     right associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | quant | primary
//   quant   := ("exists" | "forall") binder ("," binder)* formula
//   binder  := name ("/" arity)?
//   primary := "(" formula ")" | "0" | "1" | term
//   term    := name ("(" arg ("," arg)* ")")? | "{" bits "}" "(" arg ("," arg)* ")"
//   arg     := term | "0" | "1"
//
// A quantifier body extends as far right as possible. '#' starts a line comment.

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "so2kit/core.hpp"

namespace so2kit {

/// Source position of one parsed atom.
struct TermSpan {
  std::string text;
  int line = 0;
  int column = 0;
};

/// Parsed formula together with the source text and atom positions.
struct SourceFormula {
  std::string text;
  Formula parsed;
  std::vector<TermSpan> spans;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { tokenize(); }

  SourceFormula run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", peek());
    for (const auto& [name, use] : free_uses_)
      if (bound_names_.contains(name)) fail("name '" + name + "' is used free and also bound", use);
    return SourceFormula{std::string(text_), rename_apart(f), std::move(spans_)};
  }

 private:
  enum class Tok { Name, Number, Bits, LParen, RParen, Comma, Slash, Not, And, Or, Imp, Iff, Exists, Forall, End };
  struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
  };

  [[noreturn]] static void fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.line, at.column); }

  void tokenize() {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k, ++i) {
        if (text_[i] == '\n') {
          ++line;
          col = 1;
        } else if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
          ++col;
        }
      }
    };
    auto starts = [&](std::string_view s) { return text_.substr(i, s.size()) == s; };
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '#') {
        while (i < text_.size() && text_[i] != '\n') advance(1);
        continue;
      }
      Token t{Tok::End, "", line, col};
      struct Sym {
        std::string_view s;
        Tok k;
      };
      static constexpr Sym syms[] = {
          {"<->", Tok::Iff}, {"->", Tok::Imp},  {"=", Tok::Iff},    {"~", Tok::Not},    {"!", Tok::Not},
          {"&", Tok::And},   {"|", Tok::Or},    {"(", Tok::LParen}, {")", Tok::RParen}, {",", Tok::Comma},
          {"/", Tok::Slash}, {"¬", Tok::Not},   {"∧", Tok::And},    {"∨", Tok::Or},     {"→", Tok::Imp},
          {"↔", Tok::Iff},   {"∃", Tok::Exists}, {"∀", Tok::Forall}};
      bool matched = false;
      for (const auto& s : syms) {
        if (starts(s.s)) {
          t.kind = s.k;
          t.text = std::string(s.s);
          advance(s.s.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          std::size_t j = i;
          while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_' || text_[j] == '\''))
            ++j;
          t.text = std::string(text_.substr(i, j - i));
          t.kind = t.text == "exists" ? Tok::Exists : t.text == "forall" ? Tok::Forall : Tok::Name;
          advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
          std::size_t j = i;
          while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
          t.kind = Tok::Number;
          t.text = std::string(text_.substr(i, j - i));
          advance(j - i);
        } else if (c == '{') {
          std::size_t j = i + 1;
          while (j < text_.size() && (text_[j] == '0' || text_[j] == '1')) ++j;
          if (j >= text_.size() || text_[j] != '}') fail("malformed truth table literal", t);
          t.kind = Tok::Bits;
          t.text = std::string(text_.substr(i + 1, j - i - 1));
          advance(j + 1 - i);
        } else {
          fail(std::string("unexpected character '") + c + "'", t);
        }
      }
      toks_.push_back(std::move(t));
    }
    toks_.push_back(Token{Tok::End, "end of input", line, col});
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + ", found '" + peek().text + "'", peek());
    return next();
  }

  Formula formula() {
    Formula f = implication();
    while (accept(Tok::Iff)) f = Formula::iff(f, implication());
    return f;
  }

  Formula implication() {
    Formula f = disjunction();
    if (accept(Tok::Imp)) return Formula::implies(f, implication());
    return f;
  }

  Formula disjunction() {
    std::vector<Formula> fs{conjunction()};
    while (accept(Tok::Or)) fs.push_back(conjunction());
    return fs.size() == 1 ? fs.front() : Formula::disj(std::move(fs));
  }

  Formula conjunction() {
    std::vector<Formula> fs{unary()};
    while (accept(Tok::And)) fs.push_back(unary());
    return fs.size() == 1 ? fs.front() : Formula::conj(std::move(fs));
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    if (peek().kind == Tok::Exists || peek().kind == Tok::Forall) return quantified();
    return primary();
  }

  Formula quantified() {
    Quantifier q = next().kind == Tok::Exists ? Quantifier::Exists : Quantifier::Forall;
    std::vector<Var> vars;
    do {
      Token name = expect(Tok::Name, "a variable name");
      int arity = 0;
      if (accept(Tok::Slash)) {
        Token num = expect(Tok::Number, "an arity");
        if (num.text.size() > 2) fail("arity too large", num);
        arity = std::stoi(num.text);
      }
      vars.push_back(Var{name.text, arity});
      bound_names_.insert(name.text);
    } while (accept(Tok::Comma));
    for (const auto& v : vars) scope_[v.name].push_back(v.arity);
    Formula body = formula();
    for (const auto& v : vars) scope_[v.name].pop_back();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::quantified(q, *it, body);
    return body;
  }

  Formula primary() {
    const Token& t = peek();
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Number) {
      Token n = next();
      if (n.text != "0" && n.text != "1") fail("constant must be 0 or 1", n);
      return Formula::constant(n.text == "1");
    }
    if (t.kind == Tok::Name || t.kind == Tok::Bits) {
      Token start = t;
      std::size_t from = pos_;
      Term tm = term();
      std::string text;
      for (std::size_t k = from; k < pos_; ++k) text += toks_[k].text;
      spans_.push_back(TermSpan{text, start.line, start.column});
      return Formula::atom(std::move(tm));
    }
    fail("expected a formula, found '" + t.text + "'", t);
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (!accept(Tok::LParen)) return args;
    do {
      if (peek().kind == Tok::Number) {
        Token n = next();
        if (n.text != "0" && n.text != "1") fail("constant must be 0 or 1", n);
        args.push_back(Term::constant(n.text == "1"));
      } else {
        args.push_back(term());
      }
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    return args;
  }

  Term term() {
    Token head = next();
    if (head.kind == Tok::Bits) {
      auto table = std::make_shared<const TruthTable>(TruthTable::from_string(head.text));
      if (peek().kind != Tok::LParen && table->arity() > 0) fail("truth table literal needs arguments", peek());
      std::vector<Term> args = arguments();
      if (static_cast<int>(args.size()) != table->arity()) fail("truth table literal has the wrong number of arguments", head);
      return Term::table(table, std::move(args));
    }
    if (head.kind != Tok::Name) fail("expected a term, found '" + head.text + "'", head);
    std::vector<Term> args = arguments();
    int arity = static_cast<int>(args.size());
    auto sc = scope_.find(head.text);
    if (sc != scope_.end() && !sc->second.empty()) {
      if (sc->second.back() != arity)
        fail("'" + head.text + "' is bound with arity " + std::to_string(sc->second.back()) + " but used with " +
                 std::to_string(arity) + " arguments",
             head);
    } else {
      auto [it, fresh] = free_arity_.emplace(head.text, arity);
      if (!fresh && it->second != arity)
        fail("'" + head.text + "' is used with arities " + std::to_string(it->second) + " and " + std::to_string(arity),
             head);
      free_uses_.emplace(head.text, head);
    }
    return Term::variable(Var{head.text, arity}, std::move(args));
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::vector<int>> scope_;
  std::map<std::string, int> free_arity_;
  std::map<std::string, Token> free_uses_;
  std::set<std::string> bound_names_;
  std::vector<TermSpan> spans_;
};

inline int precedence(const Formula& f) {
  switch (f.op()) {
    case Op::Exists:
    case Op::Forall:
      return 0;
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
    case Op::And:
      if (f.children().empty()) return 6;
      if (f.children().size() == 1) return precedence(f.child(0));
      return f.op() == Op::Or ? 3 : 4;
    case Op::Not:
      return 5;
    default:
      return 6;
  }
}

inline void print_term(const Term& t, std::string& out) {
  if (t.is_constant()) {
    out += t.value() ? '1' : '0';
    return;
  }
  if (t.is_table())
    out += "{" + t.fixed_table().to_string() + "}";
  else
    out += t.head().name;
  if (t.args().empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i > 0) out += ", ";
    print_term(t.args()[i], out);
  }
  out += ')';
}

inline void print_formula(const Formula& f, std::string& out);

inline void print_child(const Formula& f, bool paren, std::string& out) {
  if (paren) out += '(';
  print_formula(f, out);
  if (paren) out += ')';
}

inline void print_formula(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Atom:
      print_term(f.term(), out);
      return;
    case Op::Const:
      out += f.value() ? '1' : '0';
      return;
    case Op::Not:
      out += '~';
      print_child(f.child(0), precedence(f.child(0)) < 5, out);
      return;
    case Op::Exists:
    case Op::Forall: {
      out += keyword(f.quantifier());
      out += ' ';
      out += to_string(f.var());
      out += ' ';
      const Formula& b = f.body();
      bool bare = b.is_quantifier() || b.op() == Op::Atom || b.op() == Op::Const || b.op() == Op::Not ||
                  precedence(b) == 6;
      print_child(b, !bare, out);
      return;
    }
    default: {
      const auto& kids = f.children();
      if (kids.empty()) {
        out += f.op() == Op::And ? '1' : '0';
        return;
      }
      if (kids.size() == 1) {
        print_formula(kids.front(), out);
        return;
      }
      int p = precedence(f);
      const char* sep = f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : f.op() == Op::Implies ? " -> " : " <-> ";
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += sep;
        print_child(kids[i], precedence(kids[i]) <= p, out);
      }
    }
  }
}

}  // namespace detail

/// Parses formula text; bound variables are renamed apart.
inline Formula parse(std::string_view text) { return detail::Parser(text).run().parsed; }

/// Parses formula text and keeps atom source positions.
inline SourceFormula parse_source(std::string_view text) { return detail::Parser(text).run(); }

/// Renders a formula in the text syntax accepted by parse.
inline std::string print(const Formula& f) {
  std::string out;
  detail::print_formula(f, out);
  return out;
}

inline std::string print(const Term& t) {
  std::string out;
  detail::print_term(t, out);
  return out;
}

}  // namespace so2kit

#endif
