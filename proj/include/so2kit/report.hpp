#ifndef SO2KIT_REPORT_HPP
#define SO2KIT_REPORT_HPP

// JSON views of profiles, engine reports and machine descriptions.
// Requires nlohmann/json (json.hpp) on the include path.

#include <string>
#include <vector>

#include "json.hpp"
#include "so2kit/classify.hpp"
#include "so2kit/expand.hpp"
#include "so2kit/kromgraph.hpp"
#include "so2kit/reductions.hpp"

namespace so2kit {

using Json = nlohmann::ordered_json;

inline Json to_json(const FragmentProfile& p) {
  Json free = Json::array();
  for (const auto& v : p.free_vars) free.push_back(to_string(v));
  return Json{{"prefix", p.prefix_string()},
              {"level", p.level},
              {"prop_block", to_string(p.final_prop_block)},
              {"prenex", p.is_prenex},
              {"cnf", p.is_cnf},
              {"horn", p.is_horn},
              {"krom", p.is_krom},
              {"core", p.is_core},
              {"simple", p.is_simple},
              {"unique", p.is_unique},
              {"braided", p.is_braided},
              {"closed", p.is_closed},
              {"free_vars", free}};
}

inline Json to_json(const ExpansionStats& s) {
  return Json{{"leaves", s.leaves},         {"y_vars", s.y_vars},       {"universal_vars", s.universal_vars},
              {"clauses", s.clauses},       {"streamed", s.streamed},   {"subsolver", s.subsolver},
              {"verdict", s.verdict}};
}

inline Json component_json(const ImplicationGraph& g, const ComponentDAG& d, int c) {
  Json members = Json::array();
  for (int v : d.members[static_cast<std::size_t>(c)]) members.push_back(g.label(v));
  return Json{{"id", c}, {"members", members}};
}

/// Report of the krom-graph engine: per-condition outcome, the violated
/// conditions with their witnesses, and the marking when the formula is true.
inline Json krom_report(const ImplicationGraph& g, const ComponentDAG& d, const ConditionReport& r) {
  Json j;
  j["engine"] = "krom-graph";
  j["verdict"] = r.holds();
  j["empty_clause"] = r.empty_clause;
  j["conditions"] = Json{{"1", r.cond1}, {"2", r.cond2}, {"3", r.cond3}, {"4", r.cond4}};
  Json violated = Json::array();
  for (int i = 1; i <= 4; ++i)
    if (!(i == 1 ? r.cond1 : i == 2 ? r.cond2 : i == 3 ? r.cond3 : r.cond4)) violated.push_back(i);
  j["violated"] = violated;
  Json w = Json::object();
  if (!r.cond1) {
    Json path = Json::array();
    for (int v : r.path1) path.push_back(g.label(v));
    w["1"] = Json{{"path", path}};
  }
  if (!r.cond2) w["2"] = Json{{"vertex", g.label(r.vertex2)}, {"negation", g.label(r.vertex2 ^ 1)}};
  if (!r.cond3) w["3"] = Json{{"existential", g.label(r.pair3.first)}, {"universal", g.label(r.pair3.second)}};
  if (!r.cond4) {
    Json cyc = Json::array();
    for (int c : r.cycle4) cyc.push_back(component_json(g, d, c));
    w["4"] = Json{{"cycle", cyc}};
  }
  j["witnesses"] = w;
  if (r.holds()) {
    ComponentDAG marked = marking_witness(g);
    Json comps = Json::array();
    for (int c = 0; c < marked.count(); ++c) {
      Json cj = component_json(g, marked, c);
      cj["mark"] = to_string(marked.marks[static_cast<std::size_t>(c)]);
      comps.push_back(cj);
    }
    j["marking"] = comps;
  }
  return j;
}

inline Json to_json(const TMSpec& m) {
  Json delta = Json::array();
  for (const auto& t : m.delta) delta.push_back(Json::array({t.state, t.read, t.next, t.write, t.move}));
  return Json{{"states", m.states}, {"initial", m.initial}, {"accept", m.accept}, {"reject", m.reject},
              {"blank", m.blank},   {"alphabet", m.alphabet}, {"delta", delta}};
}

/// Reads {states, initial, accept, reject, blank, alphabet, delta: [[q, a, q', a', move], ...]}.
inline TMSpec tm_from_json(const Json& j) {
  try {
    TMSpec m;
    m.states = j.at("states").get<std::vector<std::string>>();
    m.initial = j.at("initial").get<std::string>();
    m.accept = j.at("accept").get<std::string>();
    m.reject = j.at("reject").get<std::string>();
    m.blank = j.value("blank", std::string("_"));
    m.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    for (const auto& t : j.at("delta")) {
      if (!t.is_array() || t.size() != 5) throw Error("delta entries must have five fields");
      m.delta.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>(),
                         t[3].get<std::string>(), t[4].get<int>()});
    }
    m.validate();
    return m;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed machine description: ") + e.what());
  }
}

}  // namespace so2kit

#endif
