#ifndef SO2KIT_EVAL_HPP
#define SO2KIT_EVAL_HPP

// Exact semantic evaluation of formulas: the reference oracle.
//
// Each chain of quantifiers is decided by a game-tree search over individual
// truth-table entries. The matrix is evaluated in three-valued (Kleene) logic
// under the partial assignment, and the search branches only on entries the
// matrix actually reads, always in an earliest relevant quantifier block.
// The result equals exhaustive enumeration of all tables of every quantified
// variable.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "so2kit/core.hpp"

namespace so2kit {

/// Enumeration limits shared by the oracle and the decision engines.
struct Caps {
  int eval_arity = 4;         ///< largest quantified arity the oracle enumerates
  int outer_arity = 4;        ///< largest arity in eliminated outer blocks
  int stream_vars = 20;       ///< largest universal block for streaming expansion
  int materialize_vars = 12;  ///< largest universal block for materialized expansion
};

/// Reads overrides from SO2KIT_CAPS, e.g. "eval_arity=3,stream_vars=16".
inline Caps caps_from_env() {
  Caps caps;
  const char* env = std::getenv("SO2KIT_CAPS");
  if (env == nullptr) return caps;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    int value = std::stoi(item.substr(eq + 1));
    if (key == "eval_arity") caps.eval_arity = value;
    else if (key == "outer_arity") caps.outer_arity = value;
    else if (key == "stream_vars") caps.stream_vars = value;
    else if (key == "materialize_vars") caps.materialize_vars = value;
  }
  return caps;
}

namespace detail {

constexpr std::int8_t kU = -1;
// Trailing propositional blocks up to this size are expanded inside the
// three-valued evaluation instead of being branched on.
constexpr std::size_t kTailExpand = 8;

class Evaluator {
 public:
  Evaluator(const Formula& f, const Caps& caps) : caps_(caps) {
    std::map<Var, std::vector<int>> scope;
    for (const auto& v : free_vars(f)) {
      int s = new_slot(v, -1, -1);
      scope[v].push_back(s);
      free_slots_[v] = s;
    }
    root_ = compile(f, scope);
  }

  void bind(const Interpretation& interp) {
    for (const auto& [v, s] : free_slots_) {
      const TruthTable& t = interp.at(v);
      if (t.arity() != v.arity) throw BindingError("arity mismatch for " + to_string(v));
      for (std::size_t i = 0; i < t.size(); ++i) entries_[slots_[s].offset + i] = t[i] ? 1 : 0;
      unknown_[s] = 0;
    }
  }

  bool run() {
    Flags fl;
    fl.chain = -1;
    std::int8_t v = kleene(root_, fl);
    if (v == kU) throw std::logic_error("evaluation left an undetermined value");
    return v == 1;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Slot {
    Var var;
    std::size_t offset;
    int chain;
    int block;
  };
  struct CTerm {
    enum Kind { SlotRef, Const, Table } kind;
    int slot = -1;
    bool value = false;
    const TruthTable* table = nullptr;
    std::vector<int> args;
  };
  struct Block {
    Quantifier q;
    std::vector<int> slots;
  };
  struct Chain {
    std::vector<Block> blocks;
    int matrix = -1;
    std::vector<int> free;
    std::vector<int> tail;
    bool tail_forall = false;
  };
  struct CNode {
    Op op = Op::Const;
    int term = -1;
    bool value = false;
    int chain = -1;
    std::vector<int> kids;
  };
  struct Flags {
    int chain = -1;
    int entry_block = 1 << 30;
    int entry_slot = -1;
    std::size_t entry_index = 0;
    int fn_block = 1 << 30;
    int fn_slot = -1;
  };

  int new_slot(const Var& v, int chain, int block) {
    Slot s{v, entries_.size(), chain, block};
    entries_.resize(entries_.size() + (std::size_t{1} << v.arity), kU);
    slots_.push_back(s);
    unknown_.push_back(std::size_t{1} << v.arity);
    return static_cast<int>(slots_.size()) - 1;
  }

  int compile_term(const Term& t, std::map<Var, std::vector<int>>& scope) {
    CTerm c;
    if (t.is_constant()) {
      c.kind = CTerm::Const;
      c.value = t.value();
    } else {
      for (const auto& a : t.args()) c.args.push_back(compile_term(a, scope));
      if (t.is_table()) {
        c.kind = CTerm::Table;
        c.table = &t.fixed_table();
        tables_.push_back(t.table_ptr());
      } else {
        c.kind = CTerm::SlotRef;
        auto it = scope.find(t.head());
        if (it == scope.end() || it->second.empty()) throw BindingError("unbound variable " + to_string(t.head()));
        c.slot = it->second.back();
      }
    }
    terms_.push_back(std::move(c));
    return static_cast<int>(terms_.size()) - 1;
  }

  int compile(const Formula& f, std::map<Var, std::vector<int>>& scope) {
    CNode n;
    n.op = f.op();
    switch (f.op()) {
      case Op::Atom:
        n.term = compile_term(f.term(), scope);
        break;
      case Op::Const:
        n.value = f.value();
        break;
      case Op::Exists:
      case Op::Forall: {
        int cid = static_cast<int>(chains_.size());
        chains_.emplace_back();
        Chain ch;
        std::vector<Var> pushed;
        Formula cur = f;
        while (cur.is_quantifier()) {
          if (cur.var().arity > caps_.eval_arity)
            throw InfeasibleError("quantified arity " + std::to_string(cur.var().arity) + " of " + to_string(cur.var()) +
                                  " exceeds the enumeration cap " + std::to_string(caps_.eval_arity));
          if (ch.blocks.empty() || ch.blocks.back().q != cur.quantifier()) ch.blocks.push_back(Block{cur.quantifier(), {}});
          int s = new_slot(cur.var(), cid, static_cast<int>(ch.blocks.size()) - 1);
          ch.blocks.back().slots.push_back(s);
          scope[cur.var()].push_back(s);
          pushed.push_back(cur.var());
          cur = cur.body();
        }
        ch.matrix = compile(cur, scope);
        for (const auto& v : pushed) scope[v].pop_back();
        const Block& last = ch.blocks.back();
        bool props = std::all_of(last.slots.begin(), last.slots.end(), [&](int s) { return slots_[s].var.arity == 0; });
        if (props && last.slots.size() <= kTailExpand) {
          ch.tail = last.slots;
          ch.tail_forall = last.q == Quantifier::Forall;
        }
        std::set<int> refs;
        collect_refs(ch.matrix, refs);
        for (int s : refs)
          if (slots_[s].chain != cid) ch.free.push_back(s);
        chains_[cid] = std::move(ch);
        n.chain = cid;
        break;
      }
      default:
        for (const auto& k : f.children()) n.kids.push_back(compile(k, scope));
    }
    nodes_vec_.push_back(std::move(n));
    return static_cast<int>(nodes_vec_.size()) - 1;
  }

  void collect_term_refs(int t, std::set<int>& out) const {
    const CTerm& c = terms_[t];
    if (c.kind == CTerm::SlotRef) out.insert(c.slot);
    for (int a : c.args) collect_term_refs(a, out);
  }

  void collect_refs(int n, std::set<int>& out) const {
    const CNode& c = nodes_vec_[n];
    if (c.op == Op::Atom) collect_term_refs(c.term, out);
    if (c.chain >= 0) out.insert(chains_[c.chain].free.begin(), chains_[c.chain].free.end());
    for (int k : c.kids) collect_refs(k, out);
  }

  void flag_entry(Flags& fl, int slot, std::size_t index) const {
    const Slot& s = slots_[slot];
    if (s.chain != fl.chain || s.block >= fl.entry_block) return;
    fl.entry_block = s.block;
    fl.entry_slot = slot;
    fl.entry_index = index;
  }

  void flag_function(Flags& fl, int slot) const {
    const Slot& s = slots_[slot];
    if (s.chain != fl.chain || s.block >= fl.fn_block) return;
    fl.fn_block = s.block;
    fl.fn_slot = slot;
  }

  std::int8_t term_value(int t, Flags& fl) {
    const CTerm& c = terms_[t];
    if (c.kind == CTerm::Const) return c.value ? 1 : 0;
    std::size_t idx = 0;
    bool known = true;
    for (int a : c.args) {
      std::int8_t v = term_value(a, fl);
      if (v == kU) known = false;
      idx = (idx << 1) | (v == 1 ? 1U : 0U);
    }
    if (c.kind == CTerm::Table) return known ? ((*c.table)[idx] ? 1 : 0) : kU;
    if (!known) {
      if (unknown_[c.slot] > 0) flag_function(fl, c.slot);
      return kU;
    }
    std::int8_t v = entries_[slots_[c.slot].offset + idx];
    if (v == kU) flag_entry(fl, c.slot, idx);
    return v;
  }

  std::int8_t kleene(int n, Flags& fl) {
    const CNode& c = nodes_vec_[n];
    switch (c.op) {
      case Op::Atom:
        return term_value(c.term, fl);
      case Op::Const:
        return c.value ? 1 : 0;
      case Op::Not: {
        std::int8_t v = kleene(c.kids[0], fl);
        return v == kU ? kU : static_cast<std::int8_t>(1 - v);
      }
      case Op::And:
      case Op::Or: {
        std::int8_t absorb = c.op == Op::And ? 0 : 1;
        std::int8_t res = static_cast<std::int8_t>(1 - absorb);
        for (int k : c.kids) {
          std::int8_t v = kleene(k, fl);
          if (v == absorb) return absorb;
          if (v == kU) res = kU;
        }
        return res;
      }
      case Op::Implies: {
        std::int8_t a = kleene(c.kids[0], fl);
        if (a == 0) return 1;
        std::int8_t b = kleene(c.kids[1], fl);
        if (b == 1) return 1;
        return (a == 1 && b == 0) ? 0 : kU;
      }
      case Op::Iff: {
        std::int8_t a = kleene(c.kids[0], fl);
        std::int8_t b = kleene(c.kids[1], fl);
        if (a == kU || b == kU) return kU;
        return a == b ? 1 : 0;
      }
      case Op::Exists:
      case Op::Forall: {
        const Chain& ch = chains_[c.chain];
        bool ready = true;
        for (int s : ch.free) {
          if (unknown_[s] > 0) {
            ready = false;
            flag_function(fl, s);
          }
        }
        if (!ready) return kU;
        return search(c.chain, 0) ? 1 : 0;
      }
    }
    return kU;
  }

  void assign(int slot, std::size_t index, std::int8_t v) {
    std::int8_t& e = entries_[slots_[slot].offset + index];
    if (e == kU && v != kU) --unknown_[slot];
    if (e != kU && v == kU) ++unknown_[slot];
    e = v;
  }

  // Value of the chain matrix with the trailing block expanded as a
  // conjunction (universal) or disjunction (existential).
  std::int8_t matrix_value(const Chain& ch, Flags& fl) {
    if (ch.tail.empty()) return kleene(ch.matrix, fl);
    const std::int8_t absorb = ch.tail_forall ? 0 : 1;
    std::int8_t res = static_cast<std::int8_t>(1 - absorb);
    const std::size_t m = ch.tail.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      for (std::size_t j = 0; j < m; ++j) assign(ch.tail[j], 0, static_cast<std::int8_t>((mask >> j) & 1U));
      std::int8_t v = kleene(ch.matrix, fl);
      if (v == absorb) {
        res = absorb;
        break;
      }
      if (v == kU) res = kU;
    }
    for (int s : ch.tail) assign(s, 0, kU);
    return res;
  }

  bool search(int cid, int floor) {
    ++nodes_;
    const Chain& ch = chains_[cid];
    Flags fl;
    fl.chain = cid;
    std::int8_t v = matrix_value(ch, fl);
    if (v != kU) return v == 1;
    int slot;
    std::size_t index = 0;
    if (fl.entry_slot >= 0 && fl.entry_block <= fl.fn_block) {
      slot = fl.entry_slot;
      index = fl.entry_index;
    } else if (fl.fn_slot >= 0) {
      slot = fl.fn_slot;
      const Slot& s = slots_[slot];
      while (entries_[s.offset + index] != kU) ++index;
    } else {
      throw std::logic_error("undetermined matrix without pending reads");
    }
    int block = slots_[slot].block;
    if (block < floor) throw std::logic_error("search revisited an earlier quantifier block");
    bool exists = ch.blocks[block].q == Quantifier::Exists;
    bool result = !exists;
    for (std::int8_t val = 0; val <= 1; ++val) {
      assign(slot, index, val);
      bool r = search(cid, block);
      assign(slot, index, kU);
      if (r == exists) {
        result = exists;
        break;
      }
    }
    return result;
  }

  Caps caps_;
  std::vector<Slot> slots_;
  std::vector<std::int8_t> entries_;
  std::vector<std::size_t> unknown_;
  std::vector<CTerm> terms_;
  std::vector<CNode> nodes_vec_;
  std::vector<Chain> chains_;
  std::vector<std::shared_ptr<const TruthTable>> tables_;
  std::map<Var, int> free_slots_;
  int root_ = -1;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Truth value of `formula` under `interp`. Every free variable must be
/// assigned. Throws InfeasibleError when a quantified arity exceeds the cap.
inline bool evaluate(const Formula& formula, const Interpretation& interp, const Caps& caps = caps_from_env()) {
  for (const auto& v : free_vars(formula))
    if (!interp.contains(v)) throw BindingError("variable " + to_string(v) + " is not assigned");
  detail::Evaluator ev(formula, caps);
  ev.bind(interp);
  return ev.run();
}

inline bool evaluate(const Formula& formula, const Caps& caps = caps_from_env()) {
  return evaluate(formula, Interpretation{}, caps);
}

/// True iff the formulas agree under every interpretation of their free variables.
inline bool equivalent(const Formula& phi, const Formula& psi, const Caps& caps = caps_from_env()) {
  std::set<Var> fv = free_vars(phi);
  for (const auto& v : free_vars(psi)) fv.insert(v);
  std::vector<std::pair<Quantifier, Var>> qs;
  for (const auto& v : fv) {
    if (v.arity > caps.eval_arity)
      throw InfeasibleError("free arity " + std::to_string(v.arity) + " of " + to_string(v) +
                            " exceeds the enumeration cap " + std::to_string(caps.eval_arity));
    qs.emplace_back(Quantifier::Forall, v);
  }
  return evaluate(with_prefix(qs, Formula::iff(phi, psi)), Interpretation{}, caps);
}

}  // namespace so2kit

#endif
