#ifndef SO2KIT_CLASSIFY_HPP
#define SO2KIT_CLASSIFY_HPP

// Fragment classification: prefix level, clause shape, simpleness,
// uniqueness and braidedness.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "so2kit/core.hpp"

namespace so2kit {

using QuantifierBlock = std::pair<Quantifier, std::vector<Var>>;

/// Maximal same-quantifier blocks of a prenex formula, in prefix order.
inline std::vector<QuantifierBlock> block_structure(const Formula& f) {
  Prefix p = split_prefix(f);
  if (!is_quantifier_free(p.matrix)) throw FragmentError("formula is not in prenex form");
  std::vector<QuantifierBlock> blocks;
  for (const auto& [q, v] : p.quantifiers) {
    if (blocks.empty() || blocks.back().first != q) blocks.emplace_back(q, std::vector<Var>{});
    blocks.back().second.push_back(v);
  }
  return blocks;
}

/// Quantifier kind and 0-based block index of a bound variable.
struct Binding {
  Quantifier q;
  int block;
};

inline std::map<Var, Binding> bindings(const std::vector<QuantifierBlock>& blocks) {
  std::map<Var, Binding> out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (const auto& v : blocks[i].second) out[v] = Binding{blocks[i].first, static_cast<int>(i)};
  return out;
}

enum class PrefixKind { Sigma, Pi, NotPrenex };
enum class PropBlock { Existential, Universal, Absent };

struct FragmentProfile {
  bool is_prenex = false;
  PrefixKind prefix = PrefixKind::NotPrenex;
  int level = 0;
  PropBlock final_prop_block = PropBlock::Absent;
  bool is_cnf = false;
  bool is_horn = false;
  bool is_krom = false;
  bool is_core = false;
  bool is_simple = false;
  bool is_unique = false;
  bool is_braided = false;
  bool is_closed = false;
  std::vector<Var> free_vars;

  std::string prefix_string() const {
    if (prefix == PrefixKind::NotPrenex) return "NotPrenex";
    return std::string(prefix == PrefixKind::Sigma ? "Sigma(" : "Pi(") + std::to_string(level) + ")";
  }
};

inline const char* to_string(PropBlock b) {
  return b == PropBlock::Existential ? "existential" : b == PropBlock::Universal ? "universal" : "absent";
}

namespace detail {

inline bool term_is_simple(const Term& t) {
  for (const auto& a : t.args())
    if (a.is_application()) return false;
  return true;
}

// Every head of arity >= 1 (variable heads only) occurs with one argument tuple.
inline bool formula_is_unique(const Formula& f) {
  std::map<Var, Term> seen;
  bool ok = true;
  for_each_term(f, [&](const Term& t) {
    if (!ok || !t.is_variable() || t.head().arity == 0) return;
    auto [it, fresh] = seen.emplace(t.head(), t);
    if (!fresh && !(it->second == t)) ok = false;
  });
  return ok;
}

inline bool formula_is_simple(const Formula& f) {
  bool ok = true;
  for_each_term(f, [&](const Term& t) { ok = ok && term_is_simple(t); });
  return ok;
}

inline bool is_braided(const std::vector<QuantifierBlock>& blocks, const Formula& matrix) {
  auto bind = bindings(blocks);
  bool ok = true;
  for_each_term(matrix, [&](const Term& t) {
    if (!ok || t.args().empty()) return;
    if (!t.is_variable()) {
      ok = false;
      return;
    }
    auto hb = bind.find(t.head());
    if (hb == bind.end()) {
      ok = false;
      return;
    }
    int lo = hb->second.block;
    int hi = lo + (hb->second.q == Quantifier::Exists ? 1 : 2);
    for (const auto& a : t.args()) {
      if (!a.is_proposition()) {
        ok = false;
        return;
      }
      auto ab = bind.find(a.head());
      if (ab == bind.end() || ab->second.block < lo || ab->second.block > hi) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

}  // namespace detail

/// Computes every fragment flag of a formula.
inline FragmentProfile classify(const Formula& f) {
  FragmentProfile p;
  auto fv = so2kit::free_vars(f);
  p.free_vars.assign(fv.begin(), fv.end());
  p.is_closed = fv.empty();
  p.is_simple = detail::formula_is_simple(f);
  p.is_unique = detail::formula_is_unique(f);

  Prefix pre = split_prefix(f);
  p.is_prenex = is_quantifier_free(pre.matrix);
  if (!p.is_prenex) return p;

  if (auto cnf = as_cnf(pre.matrix)) {
    p.is_cnf = true;
    p.is_horn = true;
    p.is_krom = true;
    for (const auto& c : *cnf) {
      int positives = 0;
      for (const auto& l : c) positives += l.positive ? 1 : 0;
      if (positives > 1) p.is_horn = false;
      if (c.size() > 2) p.is_krom = false;
    }
    p.is_core = p.is_horn && p.is_krom;
  }

  auto blocks = block_structure(f);
  bool trailing = !blocks.empty() &&
                  std::all_of(blocks.back().second.begin(), blocks.back().second.end(),
                              [](const Var& v) { return v.is_proposition(); });
  int k = static_cast<int>(blocks.size()) - (trailing ? 1 : 0);
  if (trailing)
    p.final_prop_block = blocks.back().first == Quantifier::Exists ? PropBlock::Existential : PropBlock::Universal;
  if (k == 0) {
    p.level = 1;
    p.prefix = trailing && blocks.back().first == Quantifier::Exists ? PrefixKind::Pi : PrefixKind::Sigma;
  } else {
    p.level = k;
    p.prefix = blocks.front().first == Quantifier::Exists ? PrefixKind::Sigma : PrefixKind::Pi;
  }
  p.is_braided = p.is_closed && detail::is_braided(blocks, pre.matrix);
  return p;
}

}  // namespace so2kit

#endif
