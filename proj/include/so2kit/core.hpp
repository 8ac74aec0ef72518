#ifndef SO2KIT_CORE_HPP
#define SO2KIT_CORE_HPP

// Formula AST for second-order Boolean logic: variables with arities, terms,
// formulas, truth tables and interpretations.
//
// Truth tables use a big-endian index convention everywhere in the library:
// the argument tuple (a1, ..., an) is stored at index sum_i a_i * 2^(n-i), so
// the first argument is the most significant bit.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "so2kit/errors.hpp"

namespace so2kit {

/// A function variable. Arity 0 is a proposition.
struct Var {
  std::string name;
  int arity = 0;

  bool is_proposition() const { return arity == 0; }
  auto operator<=>(const Var&) const = default;
  bool operator==(const Var&) const = default;
};

inline std::string to_string(const Var& v) {
  return v.arity == 0 ? v.name : v.name + "/" + std::to_string(v.arity);
}

/// A Boolean function {0,1}^n -> {0,1} stored as 2^n entries.
class TruthTable {
 public:
  static constexpr int kMaxArity = 30;

  TruthTable() : arity_(0), bits_(1, false) {}
  explicit TruthTable(int arity, bool fill = false) : arity_(check_arity(arity)), bits_(std::size_t{1} << arity, fill) {}

  /// Entry i is bit i of `bits` (arity <= 6).
  static TruthTable from_bits(int arity, std::uint64_t bits) {
    TruthTable t(arity);
    for (std::size_t i = 0; i < t.size(); ++i) t.bits_[i] = ((bits >> i) & 1U) != 0;
    return t;
  }

  template <class F>
  static TruthTable from_function(int arity, F&& fn) {
    TruthTable t(arity);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t.bits_[i] = static_cast<bool>(fn(tuple_of(i, arity)));
    }
    return t;
  }

  /// Parses a string of '0'/'1' characters, entry 0 first.
  static TruthTable from_string(std::string_view s) {
    int arity = 0;
    while ((std::size_t{1} << arity) < s.size()) ++arity;
    if ((std::size_t{1} << arity) != s.size()) throw Error("truth table length must be a power of two");
    TruthTable t(arity);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') throw Error("truth table entries must be 0 or 1");
      t.bits_[i] = s[i] == '1';
    }
    return t;
  }

  static TruthTable constant(int arity, bool value) { return TruthTable(arity, value); }
  static TruthTable identity() { return from_string("01"); }
  static TruthTable negation() { return from_string("10"); }
  static TruthTable nand() { return from_string("1110"); }

  static std::size_t index_of(const std::vector<bool>& tuple) {
    std::size_t idx = 0;
    for (bool b : tuple) idx = (idx << 1) | (b ? 1U : 0U);
    return idx;
  }

  static std::vector<bool> tuple_of(std::size_t index, int arity) {
    std::vector<bool> out(static_cast<std::size_t>(arity));
    for (int i = 0; i < arity; ++i) out[static_cast<std::size_t>(i)] = ((index >> (arity - 1 - i)) & 1U) != 0;
    return out;
  }

  int arity() const { return arity_; }
  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t index) const { return bits_[index]; }
  bool at(const std::vector<bool>& tuple) const { return bits_[index_of(tuple)]; }
  void set(std::size_t index, bool value) { bits_[index] = value; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  bool operator==(const TruthTable&) const = default;
  bool operator<(const TruthTable& o) const {
    if (arity_ != o.arity_) return arity_ < o.arity_;
    return bits_ < o.bits_;
  }

 private:
  static int check_arity(int arity) {
    if (arity < 0 || arity > kMaxArity) throw Error("truth table arity out of range: " + std::to_string(arity));
    return arity;
  }

  int arity_;
  std::vector<bool> bits_;
};

/// A term: a variable applied to argument terms, a constant 0/1, or an
/// anonymous fixed table applied to arguments (produced by instantiate).
class Term {
 public:
  enum class Kind { Variable, Constant, Table };

  Term() : Term(constant(false)) {}

  static Term variable(Var head, std::vector<Term> args = {}) {
    if (static_cast<int>(args.size()) != head.arity)
      throw Error("term " + head.name + " expects " + std::to_string(head.arity) + " arguments, got " +
                  std::to_string(args.size()));
    Term t(Kind::Variable);
    t.head_ = std::move(head);
    t.args_ = std::move(args);
    return t;
  }

  static Term proposition(std::string name) { return variable(Var{std::move(name), 0}); }

  static Term constant(bool value) {
    Term t(Kind::Constant);
    t.value_ = value;
    return t;
  }

  static Term table(std::shared_ptr<const TruthTable> table, std::vector<Term> args) {
    if (static_cast<int>(args.size()) != table->arity()) throw Error("table term argument count mismatch");
    Term t(Kind::Table);
    t.head_ = Var{"", table->arity()};
    t.table_ = std::move(table);
    t.args_ = std::move(args);
    return t;
  }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_table() const { return kind_ == Kind::Table; }
  /// A term headed by a variable of arity 0.
  bool is_proposition() const { return kind_ == Kind::Variable && head_.arity == 0; }
  /// A term headed by a variable or table of arity >= 1.
  bool is_application() const { return kind_ != Kind::Constant && !args_.empty(); }

  const Var& head() const { return head_; }
  bool value() const { return value_; }
  const std::vector<Term>& args() const { return args_; }
  const TruthTable& fixed_table() const { return *table_; }
  const std::shared_ptr<const TruthTable>& table_ptr() const { return table_; }

  friend bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

  static int compare(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    switch (a.kind_) {
      case Kind::Constant:
        return a.value_ == b.value_ ? 0 : (a.value_ ? 1 : -1);
      case Kind::Variable:
        if (a.head_ != b.head_) return a.head_ < b.head_ ? -1 : 1;
        break;
      case Kind::Table:
        if (a.table_ != b.table_ && !(*a.table_ == *b.table_)) return *a.table_ < *b.table_ ? -1 : 1;
        break;
    }
    if (a.args_.size() != b.args_.size()) return a.args_.size() < b.args_.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.args_.size(); ++i) {
      int c = compare(a.args_[i], b.args_[i]);
      if (c != 0) return c;
    }
    return 0;
  }

 private:
  explicit Term(Kind kind) : kind_(kind) {}

  Kind kind_;
  Var head_;
  bool value_ = false;
  std::vector<Term> args_;
  std::shared_ptr<const TruthTable> table_;
};

enum class Op { Atom, Const, Not, And, Or, Implies, Iff, Exists, Forall };
enum class Quantifier { Exists, Forall };

inline Quantifier dual(Quantifier q) { return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists; }
inline const char* keyword(Quantifier q) { return q == Quantifier::Exists ? "exists" : "forall"; }

/// Immutable formula handle with cheap copies; subtrees are shared.
class Formula {
 public:
  Formula() : Formula(constant(true)) {}

  static Formula atom(Term t) {
    Node n(Op::Atom);
    n.term = std::move(t);
    return Formula(std::move(n));
  }
  static Formula prop(std::string name) { return atom(Term::proposition(std::move(name))); }
  static Formula constant(bool v) {
    Node n(Op::Const);
    n.value = v;
    return Formula(std::move(n));
  }
  static Formula negation(Formula f) { return nary(Op::Not, {std::move(f)}); }
  static Formula conj(std::vector<Formula> fs) { return nary(Op::And, std::move(fs)); }
  static Formula disj(std::vector<Formula> fs) { return nary(Op::Or, std::move(fs)); }
  static Formula implies(Formula a, Formula b) { return nary(Op::Implies, {std::move(a), std::move(b)}); }
  static Formula iff(Formula a, Formula b) { return nary(Op::Iff, {std::move(a), std::move(b)}); }
  static Formula exists(Var v, Formula body) { return quantified(Quantifier::Exists, std::move(v), std::move(body)); }
  static Formula forall(Var v, Formula body) { return quantified(Quantifier::Forall, std::move(v), std::move(body)); }
  static Formula quantified(Quantifier q, Var v, Formula body) {
    Node n(q == Quantifier::Exists ? Op::Exists : Op::Forall);
    n.var = std::move(v);
    n.kids.push_back(std::move(body));
    return Formula(std::move(n));
  }

  Op op() const { return n_->op; }
  bool is_quantifier() const { return op() == Op::Exists || op() == Op::Forall; }
  Quantifier quantifier() const { return op() == Op::Exists ? Quantifier::Exists : Quantifier::Forall; }
  const Term& term() const { return n_->term; }
  bool value() const { return n_->value; }
  const std::vector<Formula>& children() const { return n_->kids; }
  const Formula& child(std::size_t i) const { return n_->kids.at(i); }
  const Var& var() const { return n_->var; }
  const Formula& body() const { return n_->kids.front(); }

  /// Identity of the shared node; equal ids imply structural equality.
  const void* id() const { return n_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.n_ == b.n_) return true;
    const Node& x = *a.n_;
    const Node& y = *b.n_;
    if (x.op != y.op || x.kids.size() != y.kids.size()) return false;
    switch (x.op) {
      case Op::Atom:
        return x.term == y.term;
      case Op::Const:
        return x.value == y.value;
      case Op::Exists:
      case Op::Forall:
        if (x.var != y.var) return false;
        break;
      default:
        break;
    }
    for (std::size_t i = 0; i < x.kids.size(); ++i)
      if (!(x.kids[i] == y.kids[i])) return false;
    return true;
  }

 private:
  struct Node {
    explicit Node(Op o) : op(o) {}
    Op op;
    Term term;
    bool value = false;
    Var var;
    std::vector<Formula> kids;
  };

  static Formula nary(Op op, std::vector<Formula> kids) {
    Node n(op);
    n.kids = std::move(kids);
    return Formula(std::move(n));
  }

  explicit Formula(Node n) : n_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> n_;
};

/// A term or its negation.
struct Literal {
  Term term;
  bool positive = true;

  Literal negated() const { return Literal{term, !positive}; }
  Formula to_formula() const {
    Formula a = term.is_constant() ? Formula::constant(term.value()) : Formula::atom(term);
    return positive ? a : Formula::negation(a);
  }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend bool operator<(const Literal& a, const Literal& b) {
    int c = Term::compare(a.term, b.term);
    return c != 0 ? c < 0 : a.positive < b.positive;
  }
};

/// A disjunction of literals; empty means falsum.
using Clause = std::vector<Literal>;

inline Formula clause_formula(const Clause& c) {
  if (c.size() == 1) return c.front().to_formula();
  std::vector<Formula> lits;
  lits.reserve(c.size());
  for (const auto& l : c) lits.push_back(l.to_formula());
  return Formula::disj(std::move(lits));
}

inline Formula cnf_formula(const std::vector<Clause>& clauses) {
  std::vector<Formula> cs;
  cs.reserve(clauses.size());
  for (const auto& c : clauses) cs.push_back(clause_formula(c));
  return Formula::conj(std::move(cs));
}

inline std::optional<Literal> as_literal(const Formula& f) {
  if (f.op() == Op::Atom) return Literal{f.term(), true};
  if (f.op() == Op::Const) return Literal{Term::constant(f.value()), true};
  if (f.op() == Op::Not) {
    const Formula& g = f.child(0);
    if (g.op() == Op::Atom) return Literal{g.term(), false};
    if (g.op() == Op::Const) return Literal{Term::constant(g.value()), false};
  }
  return std::nullopt;
}

inline std::optional<Clause> as_clause(const Formula& f) {
  if (auto l = as_literal(f)) return Clause{*l};
  if (f.op() != Op::Or) return std::nullopt;
  Clause c;
  for (const auto& k : f.children()) {
    auto l = as_literal(k);
    if (!l) return std::nullopt;
    c.push_back(*l);
  }
  return c;
}

/// Reads a quantifier-free formula as CNF: a conjunction of clauses, a single
/// clause, or a single literal. Returns nullopt for any other shape.
inline std::optional<std::vector<Clause>> as_cnf(const Formula& f) {
  if (f.op() != Op::And) {
    auto c = as_clause(f);
    if (!c) return std::nullopt;
    return std::vector<Clause>{*c};
  }
  std::vector<Clause> out;
  for (const auto& k : f.children()) {
    auto c = as_clause(k);
    if (!c) return std::nullopt;
    out.push_back(std::move(*c));
  }
  return out;
}

/// Quantifier prefix and matrix of a formula.
struct Prefix {
  std::vector<std::pair<Quantifier, Var>> quantifiers;
  Formula matrix;
};

inline Prefix split_prefix(const Formula& f) {
  Prefix p;
  Formula cur = f;
  while (cur.is_quantifier()) {
    p.quantifiers.emplace_back(cur.quantifier(), cur.var());
    cur = cur.body();
  }
  p.matrix = cur;
  return p;
}

inline Formula with_prefix(const std::vector<std::pair<Quantifier, Var>>& qs, Formula matrix) {
  for (auto it = qs.rbegin(); it != qs.rend(); ++it) matrix = Formula::quantified(it->first, it->second, std::move(matrix));
  return matrix;
}

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  for (const auto& k : f.children())
    if (!is_quantifier_free(k)) return false;
  return true;
}

/// Prenex: a (possibly empty) quantifier prefix followed by a quantifier-free matrix.
inline bool is_prenex(const Formula& f) { return is_quantifier_free(split_prefix(f).matrix); }

namespace detail {

template <class F>
void for_each_term(const Term& t, F&& fn) {
  fn(t);
  for (const auto& a : t.args()) for_each_term(a, fn);
}

/// Calls fn(term) for every term node (including nested arguments) of atoms in f.
template <class F>
void for_each_term(const Formula& f, F&& fn) {
  if (f.op() == Op::Atom) {
    for_each_term(f.term(), fn);
    return;
  }
  for (const auto& k : f.children()) for_each_term(k, fn);
}

inline void collect_free(const Term& t, const std::set<Var>& bound, std::set<Var>& out) {
  if (t.is_variable() && !bound.contains(t.head())) out.insert(t.head());
  for (const auto& a : t.args()) collect_free(a, bound, out);
}

inline void collect_free(const Formula& f, std::set<Var>& bound, std::set<Var>& out) {
  switch (f.op()) {
    case Op::Atom:
      collect_free(f.term(), bound, out);
      return;
    case Op::Const:
      return;
    case Op::Exists:
    case Op::Forall: {
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      for (const auto& k : f.children()) collect_free(k, bound, out);
  }
}

}  // namespace detail

/// Variables occurring free in f.
inline std::set<Var> free_vars(const Formula& f) {
  std::set<Var> bound, out;
  detail::collect_free(f, bound, out);
  return out;
}

/// Every variable name occurring in f, bound or free.
inline std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  detail::for_each_term(f, [&](const Term& t) {
    if (t.is_variable()) out.insert(t.head().name);
  });
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.is_quantifier()) out.insert(g.var().name);
    for (const auto& k : g.children()) stack.push_back(k);
  }
  return out;
}

/// Generates names of the form base__k that avoid every reserved name.
/// The counter k is shared across bases so generated names are globally ordered.
class FreshNamePool {
 public:
  FreshNamePool() = default;
  explicit FreshNamePool(const Formula& f) { reserve(f); }

  void reserve(const Formula& f) {
    for (auto& n : all_names(f)) used_.insert(n);
  }
  void reserve(const std::string& name) { used_.insert(name); }
  bool is_used(const std::string& name) const { return used_.contains(name); }

  std::string fresh(std::string_view base) {
    std::string stem(base);
    if (auto pos = stem.rfind("__"); pos != std::string::npos && pos + 2 < stem.size() &&
                                     std::all_of(stem.begin() + static_cast<long>(pos) + 2, stem.end(),
                                                 [](char c) { return c >= '0' && c <= '9'; }))
      stem.erase(pos);
    if (stem.empty()) stem = "v";
    for (;;) {
      std::string candidate = stem + "__" + std::to_string(++counter_);
      if (used_.insert(candidate).second) return candidate;
    }
  }

  Var fresh_var(std::string_view base, int arity) { return Var{fresh(base), arity}; }

 private:
  std::set<std::string> used_;
  int counter_ = 0;
};

namespace detail {

inline Term rename_term(const Term& t, const std::map<Var, Var>& sub) {
  if (t.is_constant()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(rename_term(a, sub));
  if (t.is_table()) return Term::table(t.table_ptr(), std::move(args));
  auto it = sub.find(t.head());
  return Term::variable(it == sub.end() ? t.head() : it->second, std::move(args));
}

inline Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f.op()) {
    case Op::Not:
      return Formula::negation(std::move(kids.at(0)));
    case Op::And:
      return Formula::conj(std::move(kids));
    case Op::Or:
      return Formula::disj(std::move(kids));
    case Op::Implies:
      return Formula::implies(std::move(kids.at(0)), std::move(kids.at(1)));
    case Op::Iff:
      return Formula::iff(std::move(kids.at(0)), std::move(kids.at(1)));
    case Op::Exists:
    case Op::Forall:
      return Formula::quantified(f.quantifier(), f.var(), std::move(kids.at(0)));
    default:
      return f;
  }
}

inline Formula rename_apart_rec(const Formula& f, std::map<Var, Var>& sub, std::set<std::string>& taken,
                                FreshNamePool& pool) {
  switch (f.op()) {
    case Op::Atom:
      return Formula::atom(rename_term(f.term(), sub));
    case Op::Const:
      return f;
    case Op::Exists:
    case Op::Forall: {
      Var v = f.var();
      Var nv = v;
      if (!taken.insert(v.name).second) nv = Var{pool.fresh(v.name), v.arity};
      taken.insert(nv.name);
      auto saved = sub.find(v) == sub.end() ? std::optional<Var>{} : std::optional<Var>{sub[v]};
      sub[v] = nv;
      Formula body = rename_apart_rec(f.body(), sub, taken, pool);
      if (saved)
        sub[v] = *saved;
      else
        sub.erase(v);
      return Formula::quantified(f.quantifier(), nv, std::move(body));
    }
    default: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& k : f.children()) kids.push_back(rename_apart_rec(k, sub, taken, pool));
      return rebuild(f, std::move(kids));
    }
  }
}

}  // namespace detail

/// Alpha-renames bound variables so that they are pairwise distinct and
/// distinct from every free variable name. Bound names that are already
/// unique are kept.
inline Formula rename_apart(const Formula& f) {
  FreshNamePool pool(f);
  std::set<std::string> taken;
  for (const auto& v : free_vars(f)) taken.insert(v.name);
  std::map<Var, Var> sub;
  return detail::rename_apart_rec(f, sub, taken, pool);
}

namespace detail {

inline bool alpha_eq_term(const Term& a, const Term& b, const std::map<Var, Var>& ab) {
  if (a.kind() != b.kind() || a.args().size() != b.args().size()) return false;
  if (a.is_constant()) return a.value() == b.value();
  if (a.is_table()) {
    if (!(a.fixed_table() == b.fixed_table())) return false;
  } else {
    auto it = ab.find(a.head());
    const Var& expect = it == ab.end() ? a.head() : it->second;
    if (!(expect == b.head())) return false;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!alpha_eq_term(a.args()[i], b.args()[i], ab)) return false;
  return true;
}

inline bool alpha_eq(const Formula& a, const Formula& b, std::map<Var, Var>& ab) {
  if (a.op() != b.op() || a.children().size() != b.children().size()) return false;
  switch (a.op()) {
    case Op::Atom:
      return alpha_eq_term(a.term(), b.term(), ab);
    case Op::Const:
      return a.value() == b.value();
    case Op::Exists:
    case Op::Forall: {
      if (a.var().arity != b.var().arity) return false;
      auto it = ab.find(a.var());
      std::optional<Var> saved = it == ab.end() ? std::nullopt : std::optional<Var>(it->second);
      ab[a.var()] = b.var();
      bool r = alpha_eq(a.body(), b.body(), ab);
      if (saved)
        ab[a.var()] = *saved;
      else
        ab.erase(a.var());
      return r;
    }
    default:
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!alpha_eq(a.children()[i], b.children()[i], ab)) return false;
      return true;
  }
}

}  // namespace detail

/// Structural equality up to consistent renaming of bound variables.
inline bool alpha_equivalent(const Formula& a, const Formula& b) {
  std::map<Var, Var> ab;
  return detail::alpha_eq(a, b, ab);
}

/// Finite map from variables to truth tables of matching arity.
class Interpretation {
 public:
  Interpretation() = default;

  void assign(const Var& v, TruthTable t) {
    if (t.arity() != v.arity)
      throw BindingError("arity mismatch assigning " + to_string(v) + ": table has arity " + std::to_string(t.arity()));
    map_[v] = std::move(t);
  }
  void assign(const Var& v, bool value) { assign(v, TruthTable::constant(0, value)); }

  bool contains(const Var& v) const { return map_.contains(v); }

  const TruthTable& at(const Var& v) const {
    auto it = map_.find(v);
    if (it == map_.end()) throw BindingError("variable " + to_string(v) + " is not assigned");
    return it->second;
  }

  void erase(const Var& v) { map_.erase(v); }
  std::size_t size() const { return map_.size(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

 private:
  std::map<Var, TruthTable> map_;
};

namespace detail {

// Substitutes var by a fixed table; returns a constant term when every argument is constant.
inline Term instantiate_term(const Term& t, const Var& var, const std::shared_ptr<const TruthTable>& table) {
  if (t.is_constant()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool all_const = true;
  for (const auto& a : t.args()) {
    args.push_back(instantiate_term(a, var, table));
    all_const = all_const && args.back().is_constant();
  }
  bool replace = t.is_variable() && t.head() == var;
  if (!replace && !t.is_table()) return Term::variable(t.head(), std::move(args));
  const auto& tab = replace ? table : t.table_ptr();
  if (all_const) {
    std::vector<bool> tuple;
    for (const auto& a : args) tuple.push_back(a.value());
    return Term::constant(tab->at(tuple));
  }
  return Term::table(tab, std::move(args));
}

inline Formula instantiate_rec(const Formula& f, const Var& var, const std::shared_ptr<const TruthTable>& table) {
  switch (f.op()) {
    case Op::Atom: {
      Term t = instantiate_term(f.term(), var, table);
      return t.is_constant() ? Formula::constant(t.value()) : Formula::atom(std::move(t));
    }
    case Op::Const:
      return f;
    case Op::Exists:
    case Op::Forall:
      if (f.var() == var) return f;
      return Formula::quantified(f.quantifier(), f.var(), instantiate_rec(f.body(), var, table));
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(instantiate_rec(k, var, table));
      return rebuild(f, std::move(kids));
    }
  }
}

}  // namespace detail

/// Replaces the free variable `var` by the fixed function `table`. Terms whose
/// arguments are all constant fold to the table value; other occurrences keep
/// an anonymous fixed-table head.
inline Formula instantiate(const Formula& f, const Var& var, const TruthTable& table) {
  if (table.arity() != var.arity)
    throw BindingError("arity mismatch instantiating " + to_string(var) + " with a table of arity " +
                       std::to_string(table.arity()));
  return detail::instantiate_rec(f, var, std::make_shared<const TruthTable>(table));
}

namespace detail {

struct Desugarer {
  Var zero, one;
  bool used = false;

  Term term(const Term& t) {
    if (t.is_constant()) {
      used = true;
      return Term::variable(t.value() ? one : zero);
    }
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(term(a));
    if (t.is_table()) return Term::table(t.table_ptr(), std::move(args));
    return Term::variable(t.head(), std::move(args));
  }

  static Formula neg(Formula f) { return Formula::negation(std::move(f)); }

  Formula run(const Formula& f) {
    switch (f.op()) {
      case Op::Atom:
        return Formula::atom(term(f.term()));
      case Op::Const:
        used = true;
        return Formula::atom(Term::variable(f.value() ? one : zero));
      case Op::Not:
        return neg(run(f.child(0)));
      case Op::And: {
        if (f.children().empty()) return run(Formula::constant(true));
        std::vector<Formula> kids;
        for (const auto& k : f.children()) kids.push_back(run(k));
        return Formula::conj(std::move(kids));
      }
      case Op::Or: {
        if (f.children().empty()) return run(Formula::constant(false));
        std::vector<Formula> kids;
        for (const auto& k : f.children()) kids.push_back(neg(run(k)));
        return neg(Formula::conj(std::move(kids)));
      }
      case Op::Implies:
        return neg(Formula::conj({run(f.child(0)), neg(run(f.child(1)))}));
      case Op::Iff: {
        Formula a = run(f.child(0));
        Formula b = run(f.child(1));
        return Formula::conj({neg(Formula::conj({a, neg(b)})), neg(Formula::conj({b, neg(a)}))});
      }
      case Op::Exists:
        return Formula::exists(f.var(), run(f.body()));
      case Op::Forall:
        return neg(Formula::exists(f.var(), neg(run(f.body()))));
    }
    return f;
  }
};

}  // namespace detail

/// Rewrites f into the kernel {term, not, and, exists}. Constants become two
/// fresh existential propositions forced by unit conjuncts.
inline Formula desugar(const Formula& f) {
  FreshNamePool pool(f);
  detail::Desugarer d{Var{pool.fresh("zero"), 0}, Var{pool.fresh("one"), 0}};
  Formula body = d.run(f);
  if (!d.used) return body;
  Formula forced = Formula::conj({Formula::negation(Formula::atom(Term::variable(d.zero))),
                                  Formula::atom(Term::variable(d.one)), body});
  return Formula::exists(d.zero, Formula::exists(d.one, forced));
}

}  // namespace so2kit

#endif
