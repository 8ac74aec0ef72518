#ifndef SO2KIT_REDUCTIONS_HPP
#define SO2KIT_REDUCTIONS_HPP

// Formula generators: Turing-machine encodings into existential level-one
// core and Horn formulas, and the nand-gadget rewrite of universal level-one
// 3CNF formulas into core clauses.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "so2kit/core.hpp"
#include "so2kit/errors.hpp"
#include "so2kit/transform.hpp"

namespace so2kit {

struct Transition {
  std::string state;
  std::string read;
  std::string next;
  std::string write;
  int move = 0;  ///< -1, 0 or +1
};

/// Single-tape machine. Symbols are single characters; the tape alphabet is
/// the blank followed by `alphabet`.
struct TMSpec {
  std::vector<std::string> states;
  std::string initial;
  std::string accept;
  std::string reject;
  std::string blank = "_";
  std::vector<std::string> alphabet;
  std::vector<Transition> delta;

  bool is_halting(const std::string& q) const { return q == accept || q == reject; }

  std::vector<std::string> tape_symbols() const {
    std::vector<std::string> out{blank};
    for (const auto& a : alphabet)
      if (a != blank && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
  }

  int state_index(const std::string& q) const {
    auto it = std::find(states.begin(), states.end(), q);
    if (it == states.end()) throw Error("unknown state " + q);
    return static_cast<int>(it - states.begin());
  }

  int symbol_index(const std::string& a) const {
    auto syms = tape_symbols();
    auto it = std::find(syms.begin(), syms.end(), a);
    if (it == syms.end()) throw Error("unknown tape symbol " + a);
    return static_cast<int>(it - syms.begin());
  }

  bool deterministic() const {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& t : delta)
      if (!seen.emplace(t.state, t.read).second) return false;
    return true;
  }

  const Transition* find(const std::string& q, const std::string& a) const {
    for (const auto& t : delta)
      if (t.state == q && t.read == a) return &t;
    return nullptr;
  }

  /// Checks names, moves, halting states without transitions and totality of
  /// the transition function on non-halting states.
  void validate() const {
    for (const auto& q : {initial, accept, reject}) state_index(q);
    if (accept == reject) throw Error("accepting and rejecting states must differ");
    for (const auto& a : tape_symbols())
      if (a.size() != 1) throw Error("tape symbols must be single characters");
    for (const auto& t : delta) {
      state_index(t.state);
      state_index(t.next);
      symbol_index(t.read);
      symbol_index(t.write);
      if (t.move < -1 || t.move > 1) throw Error("moves must be -1, 0 or +1");
      if (is_halting(t.state)) throw Error("halting state " + t.state + " has a transition");
    }
    for (const auto& q : states) {
      if (is_halting(q)) continue;
      for (const auto& a : tape_symbols())
        if (!find(q, a)) throw Error("transition function undefined on (" + q + ", " + a + ")");
    }
  }
};

enum class TMOutcome { Accept, Reject, CapExceeded };

inline const char* to_string(TMOutcome o) {
  return o == TMOutcome::Accept ? "accept" : o == TMOutcome::Reject ? "reject" : "cap_exceeded";
}

struct TMRun {
  TMOutcome outcome = TMOutcome::CapExceeded;
  std::size_t steps = 0;
  int head = 1;                   ///< 1-based head position
  std::string state;
  std::vector<std::string> tape;  ///< cells 1..space_cap
};

/// Simulates the machine on tape cells 1..space_cap with the head on cell 1.
/// Leaving the tape or exceeding a cap yields CapExceeded.
inline TMRun run_tm(const TMSpec& m, const std::string& input, std::size_t time_cap, int space_cap) {
  TMRun run;
  run.state = m.initial;
  if (static_cast<int>(input.size()) > space_cap) return run;
  run.tape.assign(static_cast<std::size_t>(space_cap), m.blank);
  for (std::size_t i = 0; i < input.size(); ++i) {
    std::string a(1, input[i]);
    if (a == m.blank) throw Error("input contains the blank symbol");
    m.symbol_index(a);
    run.tape[i] = a;
  }
  for (;;) {
    if (run.state == m.accept) {
      run.outcome = TMOutcome::Accept;
      return run;
    }
    if (run.state == m.reject) {
      run.outcome = TMOutcome::Reject;
      return run;
    }
    if (run.steps == time_cap) return run;
    const Transition* t = m.find(run.state, run.tape[static_cast<std::size_t>(run.head - 1)]);
    if (!t) throw Error("transition function undefined on (" + run.state + ", " + run.tape[run.head - 1] + ")");
    run.tape[static_cast<std::size_t>(run.head - 1)] = t->write;
    run.state = t->next;
    run.head += t->move;
    ++run.steps;
    if (run.head < 1 || run.head > space_cap) {
      run.outcome = TMOutcome::CapExceeded;
      return run;
    }
  }
}

/// Named test machines for inputs over {0, 1}; blank '_', and '#' marks cell 1.
inline std::vector<std::pair<std::string, TMSpec>> tm_zoo() {
  std::vector<std::pair<std::string, TMSpec>> zoo;
  auto cleanup = [](TMSpec& m) {
    // R: walk right to the first blank; L: walk left erasing up to the marker.
    for (const char* a : {"0", "1", "#"}) m.delta.push_back({"R", a, "R", a, +1});
    m.delta.push_back({"R", "_", "L", "_", -1});
    for (const char* a : {"0", "1", "_"}) m.delta.push_back({"L", a, "L", "_", -1});
    m.delta.push_back({"L", "#", "rej", "_", 0});
  };
  {
    TMSpec m{{"q0", "acc", "rej"}, "q0", "acc", "rej", "_", {"0", "1", "#"}, {}};
    for (const char* a : {"_", "0", "1", "#"}) m.delta.push_back({"q0", a, "acc", a, 0});
    zoo.emplace_back("accept", m);
  }
  {
    TMSpec m{{"q0", "R", "L", "acc", "rej"}, "q0", "acc", "rej", "_", {"0", "1", "#"}, {}};
    m.delta.push_back({"q0", "_", "rej", "_", 0});
    for (const char* a : {"0", "1", "#"}) m.delta.push_back({"q0", a, "R", "#", +1});
    cleanup(m);
    zoo.emplace_back("reject", m);
  }
  {
    TMSpec m{{"q0", "R", "L", "acc", "rej"}, "q0", "acc", "rej", "_", {"0", "1", "#"}, {}};
    m.delta.push_back({"q0", "_", "rej", "_", 0});
    m.delta.push_back({"q0", "1", "acc", "1", 0});
    for (const char* a : {"0", "#"}) m.delta.push_back({"q0", a, "R", "#", +1});
    cleanup(m);
    zoo.emplace_back("first-is-1", m);
  }
  {
    // Accepts inputs with an even number of 1s; E/O erase while scanning.
    TMSpec m{{"q0", "E", "O", "L", "acc", "rej"}, "q0", "acc", "rej", "_", {"0", "1", "#"}, {}};
    m.delta.push_back({"q0", "_", "acc", "_", 0});
    m.delta.push_back({"q0", "0", "E", "#", +1});
    m.delta.push_back({"q0", "1", "O", "#", +1});
    m.delta.push_back({"q0", "#", "E", "#", +1});
    for (const char* a : {"0", "#"}) {
      m.delta.push_back({"E", a, "E", "_", +1});
      m.delta.push_back({"O", a, "O", "_", +1});
    }
    m.delta.push_back({"E", "1", "O", "_", +1});
    m.delta.push_back({"O", "1", "E", "_", +1});
    m.delta.push_back({"E", "_", "acc", "_", 0});
    m.delta.push_back({"O", "_", "L", "_", -1});
    for (const char* a : {"0", "1", "_"}) m.delta.push_back({"L", a, "L", "_", -1});
    m.delta.push_back({"L", "#", "rej", "_", 0});
    zoo.emplace_back("parity", m);
  }
  return zoo;
}

namespace detail {

inline int bits_for(std::size_t n) {
  int k = 1;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

inline void append_bits(std::vector<Term>& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(Term::constant(((value >> i) & 1U) != 0));
}

inline std::vector<Term> props(const std::string& base, int n) {
  std::vector<Term> out;
  for (int i = 1; i <= n; ++i) out.push_back(Term::proposition(base + std::to_string(i)));
  return out;
}

inline QuantifierList forall_all(const std::vector<std::vector<Term>>& groups) {
  QuantifierList qs;
  for (const auto& g : groups)
    for (const auto& t : g) qs.emplace_back(Quantifier::Forall, t.head());
  return qs;
}

}  // namespace detail

/// Space bound and code widths of the polynomial-space encoding. Zero
/// selects the default: p_n = |input| + 1 and minimal widths.
struct PspaceParams {
  int p_n = 0;
  int state_bits = 0;
  int symbol_bits = 0;
};

/// exists f forall v (init & closure & ~reject) over configurations
/// (unary head position; state code; tape codes). True iff m accepts input.
inline Formula encode_pspace_tm(const TMSpec& m, const std::string& input, PspaceParams params = {}) {
  m.validate();
  if (!m.deterministic()) throw Error("machine must be deterministic");
  const int n = static_cast<int>(input.size());
  const int p = params.p_n > 0 ? params.p_n : n + 1;
  if (p < std::max(n, 1)) throw Error("space bound must be at least the input length");
  const auto syms = m.tape_symbols();
  const int kq = params.state_bits > 0 ? params.state_bits : detail::bits_for(m.states.size());
  const int kg = params.symbol_bits > 0 ? params.symbol_bits : detail::bits_for(syms.size());
  if ((std::size_t{1} << kq) < m.states.size() || (std::size_t{1} << kg) < syms.size())
    throw Error("code width too small for an injective coding");
  const int arity = p + kq + kg * p;
  if (arity > TruthTable::kMaxArity) throw InfeasibleError("configuration arity exceeds the table limit");

  TMRun run = run_tm(m, input, std::size_t{1} << 20, p);
  if (run.outcome == TMOutcome::CapExceeded) throw InfeasibleError("machine exceeds the space bound or time cap");
  if (run.outcome == TMOutcome::Reject) {
    bool blank = std::all_of(run.tape.begin(), run.tape.end(), [&](const std::string& a) { return a == m.blank; });
    if (run.head != 1 || !blank) throw Error("rejecting configuration is not blank with the head on cell 1");
  }

  Var f{"f", arity};
  auto v = detail::props("v", kg * p);
  auto config = [&](int head, int state, const std::vector<Term>& tape) {
    std::vector<Term> args;
    for (int j = 1; j <= p; ++j) args.push_back(Term::constant(j == head));
    detail::append_bits(args, static_cast<std::uint64_t>(state), kq);
    args.insert(args.end(), tape.begin(), tape.end());
    return Term::variable(f, args);
  };
  auto tape_codes = [&](const std::vector<int>& cells) {
    std::vector<Term> out;
    for (int c : cells) detail::append_bits(out, static_cast<std::uint64_t>(c), kg);
    return out;
  };
  std::vector<Clause> clauses;
  std::vector<int> init(static_cast<std::size_t>(p), 0);
  for (int i = 0; i < n; ++i) init[i] = m.symbol_index(std::string(1, input[i]));
  clauses.push_back({Literal{config(1, m.state_index(m.initial), tape_codes(init)), true}});
  for (int j = 1; j <= p; ++j)
    for (const auto& t : m.delta) {
      if (j + t.move < 1 || j + t.move > p) continue;
      auto with_cell = [&](const std::string& a) {
        std::vector<Term> tape(v.begin(), v.end());
        std::vector<Term> code;
        detail::append_bits(code, static_cast<std::uint64_t>(m.symbol_index(a)), kg);
        std::copy(code.begin(), code.end(), tape.begin() + kg * (j - 1));
        return tape;
      };
      clauses.push_back({Literal{config(j, m.state_index(t.state), with_cell(t.read)), false},
                         Literal{config(j + t.move, m.state_index(t.next), with_cell(t.write)), true}});
    }
  clauses.push_back({Literal{config(1, m.state_index(m.reject), tape_codes(std::vector<int>(p, 0))), false}});
  QuantifierList qs{{Quantifier::Exists, f}};
  auto rest = detail::forall_all({v});
  qs.insert(qs.end(), rest.begin(), rest.end());
  return with_prefix(qs, cnf_formula(clauses));
}

/// Cell of an extended configuration: a tape symbol, optionally with the
/// head in a state.
struct Cell {
  int state = -1;  ///< -1 when the head is elsewhere
  int symbol = 0;
  auto operator<=>(const Cell&) const = default;
};

using Window = std::array<Cell, 6>;

/// Valid windows: three adjacent cells before and after one step. Windows
/// whose upper row shows a halting head are omitted.
inline std::set<Window> compute_windows(const TMSpec& m) {
  m.validate();
  if (!m.deterministic()) throw Error("windows require a deterministic machine");
  const int ns = static_cast<int>(m.tape_symbols().size());
  const int nq = static_cast<int>(m.states.size());
  std::set<int> enter_left, enter_right;  // states that can move onto a cell from its left / right
  for (const auto& t : m.delta) {
    if (t.move == +1) enter_left.insert(m.state_index(t.next));
    if (t.move == -1) enter_right.insert(m.state_index(t.next));
  }
  std::vector<Cell> cells;
  for (int a = 0; a < ns; ++a) cells.push_back({-1, a});
  for (int q = 0; q < nq; ++q)
    for (int a = 0; a < ns; ++a) cells.push_back({q, a});
  std::set<Window> w;
  for (const auto& c1 : cells)
    for (const auto& c2 : cells)
      for (const auto& c3 : cells) {
        std::array<Cell, 3> top{c1, c2, c3};
        int heads = 0, h = -1;
        for (int i = 0; i < 3; ++i)
          if (top[i].state >= 0) ++heads, h = i;
        if (heads > 1) continue;
        std::array<Cell, 3> bottom{Cell{-1, c1.symbol}, Cell{-1, c2.symbol}, Cell{-1, c3.symbol}};
        if (heads == 0) {
          w.insert({c1, c2, c3, bottom[0], bottom[1], bottom[2]});
          for (int q : enter_left) {
            auto b = bottom;
            b[0].state = q;
            w.insert({c1, c2, c3, b[0], b[1], b[2]});
          }
          for (int q : enter_right) {
            auto b = bottom;
            b[2].state = q;
            w.insert({c1, c2, c3, b[0], b[1], b[2]});
          }
          continue;
        }
        const std::string& q = m.states[static_cast<std::size_t>(top[h].state)];
        if (m.is_halting(q)) continue;
        const Transition* t = m.find(q, m.tape_symbols()[static_cast<std::size_t>(top[h].symbol)]);
        bottom[h].symbol = m.symbol_index(t->write);
        int nh = h + t->move;
        if (nh >= 0 && nh < 3) bottom[nh].state = m.state_index(t->next);
        w.insert({c1, c2, c3, bottom[0], bottom[1], bottom[2]});
      }
  return w;
}

/// One step of an extended configuration by the middle-cell rule of the
/// windows; the outermost cells are copied.
inline std::vector<Cell> window_step(const std::set<Window>& windows, const std::vector<Cell>& config) {
  std::vector<Cell> next = config;
  for (std::size_t i = 1; i + 1 < config.size(); ++i) {
    std::set<Cell> middles;
    for (auto it = windows.lower_bound({config[i - 1], config[i], config[i + 1], Cell{-1, -1}}); it != windows.end(); ++it) {
      const Window& w = *it;
      if (!(w[0] == config[i - 1] && w[1] == config[i] && w[2] == config[i + 1])) break;
      middles.insert(w[4]);
    }
    if (middles.size() != 1) throw Error("windows do not determine the next configuration");
    next[i] = *middles.begin();
  }
  return next;
}

/// exists suc exists f forall t s u v w: f(code; time; position) holds for the
/// symbol of every cell at every timestep, time steps up to 2^p_n - 1 and tape
/// cells 1..2^p_n - 2. True iff m accepts input.
inline Formula encode_exp_tm(const TMSpec& m, const std::string& input, int p_n, int code_bits = 0) {
  m.validate();
  if (!m.deterministic()) throw Error("the exponential-time encoding requires a deterministic machine");
  const int p = p_n;
  if (p < 2 || p > 12) throw Error("p_n must lie in 2..12");
  const int n = static_cast<int>(input.size());
  const std::uint64_t cells = std::uint64_t{1} << p;
  if (static_cast<std::uint64_t>(n) + 2 > cells) throw Error("input does not fit on the tape");
  const auto syms = m.tape_symbols();
  const std::size_t ng = syms.size() + m.states.size() * syms.size();
  const int k = code_bits > 0 ? code_bits : detail::bits_for(ng);
  if ((std::size_t{1} << k) < ng) throw Error("code width too small for an injective coding");

  TMRun run = run_tm(m, input, cells - 1, static_cast<int>(cells) - 2);
  if (run.outcome == TMOutcome::CapExceeded) throw InfeasibleError("machine exceeds 2^p_n - 1 steps or the tape");
  if (run.outcome == TMOutcome::Reject && run.tape[static_cast<std::size_t>(run.head - 1)] != m.blank)
    throw Error("machine must reject while reading a blank");

  auto code = [&](const Cell& c) {
    return static_cast<std::uint64_t>(c.state < 0 ? c.symbol
                                                  : static_cast<int>(syms.size()) * (1 + c.state) + c.symbol);
  };
  Var f{"f", k + 2 * p};
  Var suc{"suc", 2 * p};
  auto t = detail::props("t", p), s = detail::props("s", p), u = detail::props("u", p), v = detail::props("v", p),
       w = detail::props("w", p);
  auto bin = [&](std::uint64_t x) {
    std::vector<Term> out;
    detail::append_bits(out, x, p);
    return out;
  };
  auto fa = [&](const Cell& c, const std::vector<Term>& time, const std::vector<Term>& pos) {
    std::vector<Term> args;
    detail::append_bits(args, code(c), k);
    args.insert(args.end(), time.begin(), time.end());
    args.insert(args.end(), pos.begin(), pos.end());
    return Term::variable(f, args);
  };
  auto sa = [&](const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Term> args = a;
    args.insert(args.end(), b.begin(), b.end());
    return Term::variable(suc, args);
  };
  auto pos = [](const Term& t) { return Literal{t, true}; };
  auto neg = [](const Term& t) { return Literal{t, false}; };
  const Cell blank{-1, 0};
  std::vector<Clause> clauses;

  for (int i = 0; i < p; ++i) {
    std::vector<Term> a(v.begin(), v.begin() + i), b(v.begin(), v.begin() + i);
    a.push_back(Term::constant(false));
    b.push_back(Term::constant(true));
    for (int j = i + 1; j < p; ++j) {
      a.push_back(Term::constant(true));
      b.push_back(Term::constant(false));
    }
    clauses.push_back({pos(sa(a, b))});
  }

  int ell = 1;
  while ((std::uint64_t{1} << ell) <= static_cast<std::uint64_t>(n)) ++ell;
  if (ell > p) throw Error("input does not fit into the initial segment");
  clauses.push_back({pos(fa(blank, bin(0), bin(0)))});
  int x1 = n > 0 ? m.symbol_index(std::string(1, input[0])) : 0;
  clauses.push_back({pos(fa(Cell{m.state_index(m.initial), x1}, bin(0), bin(1)))});
  for (int i = 2; i <= n; ++i)
    clauses.push_back({pos(fa(Cell{-1, m.symbol_index(std::string(1, input[i - 1]))}, bin(0), bin(i)))});
  for (std::uint64_t i = static_cast<std::uint64_t>(std::max(n, 1)) + 1; i < (std::uint64_t{1} << ell); ++i)
    clauses.push_back({pos(fa(blank, bin(0), bin(i)))});
  for (int j = 1; j <= p - ell; ++j) {
    std::vector<Term> a = v;
    a[static_cast<std::size_t>(j - 1)] = Term::constant(true);
    clauses.push_back({pos(fa(blank, bin(0), a))});
  }
  clauses.push_back({neg(fa(Cell{m.state_index(m.reject), 0}, t, u))});

  std::set<std::tuple<Cell, Cell, Cell, Cell>> rules;
  for (const auto& win : compute_windows(m)) rules.emplace(win[0], win[1], win[2], win[4]);
  for (const auto& [a1, a2, a3, b2] : rules)
    clauses.push_back({neg(sa(t, s)), neg(sa(u, v)), neg(sa(v, w)), neg(fa(a1, t, u)), neg(fa(a2, t, v)),
                       neg(fa(a3, t, w)), pos(fa(b2, s, v))});
  clauses.push_back({pos(fa(blank, t, bin(0)))});
  clauses.push_back({pos(fa(blank, t, bin(cells - 1)))});

  QuantifierList qs{{Quantifier::Exists, suc}, {Quantifier::Exists, f}};
  auto rest = detail::forall_all({t, s, u, v, w});
  qs.insert(qs.end(), rest.begin(), rest.end());
  return with_prefix(qs, cnf_formula(clauses));
}

/// Term over the binary g that equals the negation of the clause when g is
/// interpreted as nand.
inline Term nand_of_clause(const Clause& c, const Var& g) {
  if (c.size() > 3) throw FragmentError("nand_of_clause: clause with more than three literals");
  if (g.arity != 2) throw Error("nand_of_clause: g must be binary");
  const Term one = Term::constant(true);
  auto nand = [&](const Term& a, const Term& b) { return Term::variable(g, {a, b}); };
  auto conj = [&](const Term& a, const Term& b) { return nand(nand(a, b), one); };
  if (c.empty()) return one;
  std::vector<Term> negs;
  for (const auto& l : c) negs.push_back(l.positive ? nand(l.term, one) : l.term);
  Term acc = negs[0];
  if (negs.size() == 1) return acc;
  for (std::size_t i = 1; i < negs.size(); ++i) acc = conj(acc, negs[i]);
  return acc;
}

/// Rewrites forall ... exists x theta (theta in 3CNF) into an equivalent
/// universal level-one formula with a simple core matrix: a leading forall g/2
/// and gadget propositions pinning g to nand where it matters.
inline Formula encode_pi1_core(const Formula& phi) {
  if (!is_prenex(phi)) throw FragmentError("encode_pi1_core requires a prenex formula");
  Prefix pre = split_prefix(phi);
  std::size_t i = 0;
  while (i < pre.quantifiers.size() && pre.quantifiers[i].first == Quantifier::Forall) ++i;
  for (std::size_t j = i; j < pre.quantifiers.size(); ++j)
    if (pre.quantifiers[j].first != Quantifier::Exists || pre.quantifiers[j].second.arity != 0)
      throw FragmentError("encode_pi1_core requires forall-block followed by existential propositions");
  auto cnf = as_cnf(pre.matrix);
  if (!cnf) throw FragmentError("encode_pi1_core requires a CNF matrix");
  for (const auto& c : *cnf)
    if (c.size() > 3) throw FragmentError("encode_pi1_core requires a 3CNF matrix");

  FreshNamePool pool(phi);
  Var g = pool.fresh_var("g", 2);
  Var d = pool.fresh_var("d", 0), d2 = pool.fresh_var("dp", 0), e = pool.fresh_var("e", 0), e2 = pool.fresh_var("ep", 0);
  Term zero = Term::constant(false);
  auto gt = [&](const Term& a, const Term& b) { return Term::variable(g, {a, b}); };
  auto prop = [](const Var& x) { return Term::variable(x); };
  std::vector<Clause> out{
      {Literal{gt(zero, zero), false}, Literal{prop(d), true}},
      {Literal{gt(zero, zero), false}, Literal{prop(e), true}},
      {Literal{gt(prop(d), zero), false}, Literal{prop(d2), true}},
      {Literal{gt(zero, prop(e)), false}, Literal{prop(e2), true}},
  };
  for (const auto& c : *cnf)
    out.push_back({Literal{prop(e2), false}, Literal{gt(prop(d2), nand_of_clause(c, g)), true}});
  QuantifierList qs{{Quantifier::Forall, g}};
  qs.insert(qs.end(), pre.quantifiers.begin(), pre.quantifiers.end());
  for (const auto& x : {d, d2, e, e2}) qs.emplace_back(Quantifier::Exists, x);
  return make_simple(with_prefix(qs, cnf_formula(out)));
}

}  // namespace so2kit

#endif
