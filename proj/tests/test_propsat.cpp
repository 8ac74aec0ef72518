#include <gtest/gtest.h>

#include "oracle.hpp"
#include "so2kit/so2kit.hpp"

using namespace so2kit;

namespace {

bool satisfies(const PropCnf& cnf, const std::vector<bool>& m) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int l : c) sat = sat || m[static_cast<std::size_t>(std::abs(l) - 1)] == (l > 0);
    if (!sat) return false;
  }
  return true;
}

}  // namespace

TEST(Scc, CycleIsOneComponent) {
  Digraph g{{1}, {2}, {0}, {}};
  SccResult r = strongly_connected_components(g);
  EXPECT_EQ(r.count, 2);
  EXPECT_EQ(r.comp[0], r.comp[1]);
  EXPECT_EQ(r.comp[1], r.comp[2]);
  EXPECT_NE(r.comp[0], r.comp[3]);
}

TEST(Scc, EdgesPointToLowerIds) {
  gen::Rng rng(51);
  for (int n = 0; n < 500; ++n) {
    int v = gen::uniform(rng, 1, 12);
    Digraph g(static_cast<std::size_t>(v));
    for (int e = gen::uniform(rng, 0, 3 * v); e > 0; --e)
      g[static_cast<std::size_t>(gen::uniform(rng, 0, v - 1))].push_back(gen::uniform(rng, 0, v - 1));
    SccResult r = strongly_connected_components(g);
    for (int a = 0; a < v; ++a)
      for (int b : g[static_cast<std::size_t>(a)]) ASSERT_GE(r.comp[static_cast<std::size_t>(a)], r.comp[static_cast<std::size_t>(b)]);
    Digraph c = condensation(g, r);
    ASSERT_EQ(static_cast<int>(c.size()), r.count);
  }
}

TEST(Scc, DeepPathHasNoRecursionLimit) {
  const int n = 200000;
  Digraph g(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) g[static_cast<std::size_t>(i)].push_back(i + 1);
  g.back().push_back(0);
  EXPECT_EQ(strongly_connected_components(g).count, 1);
}

TEST(HornSat, Examples) {
  EXPECT_FALSE(horn_sat(PropCnf{2, {{1}, {-1, 2}, {-2}}}).sat);
  SatResult empty = horn_sat(PropCnf{0, {}});
  EXPECT_TRUE(empty.sat);
  EXPECT_TRUE(empty.model.empty());
  SatResult r = horn_sat(PropCnf{3, {{1}, {-1, 2}, {-3, -2}}});
  ASSERT_TRUE(r.sat);
  EXPECT_EQ(r.model, (std::vector<bool>{true, true, false}));
}

TEST(HornSat, RejectsNonHorn) { EXPECT_THROW(horn_sat(PropCnf{2, {{1, 2}}}), FragmentError); }

TEST(TwoSat, Examples) {
  EXPECT_FALSE(two_sat(PropCnf{2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}}}).sat);
  EXPECT_TRUE(two_sat(PropCnf{2, {{1, 2}}}).sat);
  EXPECT_THROW(two_sat(PropCnf{3, {{1, 2, 3}}}), FragmentError);
}

TEST(SubsolverProperty, HornAgreesWithSearchAndGivesLeastModel) {
  gen::Rng rng(52);
  for (int n = 0; n < 3000; ++n) {
    PropCnf cnf = gen::random_prop_cnf(rng, 10, 3, true);
    auto ms = oracle::models(cnf);
    SatResult r = horn_sat(cnf);
    ASSERT_EQ(r.sat, !ms.empty());
    if (!r.sat) continue;
    ASSERT_TRUE(satisfies(cnf, r.model));
    for (const auto& m : ms)
      for (std::size_t v = 0; v < m.size(); ++v) ASSERT_LE(r.model[v], m[v]);
  }
}

TEST(SubsolverProperty, TwoSatAgreesWithSearch) {
  gen::Rng rng(53);
  for (int n = 0; n < 3000; ++n) {
    PropCnf cnf = gen::random_prop_cnf(rng, 10, 2, false);
    SatResult r = two_sat(cnf);
    ASSERT_EQ(r.sat, !oracle::models(cnf).empty());
    if (r.sat) {
      ASSERT_TRUE(satisfies(cnf, r.model));
    }
  }
}
