#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace gpdext;
using namespace oracles;

namespace {

  Cochain random_cochain(ModuleBundle const& m, std::size_t n, std::mt19937_64& rng) {
    Cochain c{m.base_ptr(), n, {}};
    for (std::size_t i = 0; i < m.tuples(n).size(); ++i) {
      c.values.push_back(static_cast<Local>(rng() % m.fiber(m.value_fiber(n, i)).size()));
    }
    return c;
  }

}  // namespace

TEST(Cohomology, TupleSpaceSizes) {
  auto const m = trivial_module(pair_groupoid({"u", "v"}), corpus::z(2));
  EXPECT_EQ(m.tuples(0).size(), 2u);
  EXPECT_EQ(m.tuples(1).size(), 4u);
  EXPECT_EQ(m.tuples(2).size(), 8u);
  EXPECT_EQ(m.tuples(3).size(), 16u);
}

TEST(Cohomology, CoboundaryMatchesAlternatingFormula) {
  std::mt19937_64 rng(11);
  for (auto const& [label, m] : modules()) {
    for (std::size_t n = 0; n <= 2; ++n) {
      for (int trial = 0; trial < 25; ++trial) {
        auto const h = random_cochain(m, n, rng);
        EXPECT_EQ(coboundary(m, h), oracle_coboundary(m, h)) << label << " n=" << n;
      }
    }
  }
}

TEST(Cohomology, DSquaredIsTrivialOnRandomCochains) {
  std::mt19937_64 rng(5);
  for (auto const& [label, m] : modules()) {
    for (std::size_t n = 0; n <= 2; ++n) {
      for (int trial = 0; trial < 25; ++trial) {
        auto const h = random_cochain(m, n, rng);
        EXPECT_EQ(coboundary(m, coboundary(m, h)), unit_cochain(m, n + 2)) << label;
      }
    }
  }
}

TEST(Cohomology, H2OfCyclicGroups) {
  // H^2(Z_n, Z_m) with trivial action is Z_gcd(n, m).
  auto const z2z2 = trivial_module(corpus::one_object(corpus::z(2)), corpus::z(2));
  EXPECT_EQ(cohomology_group(z2z2, 2).order(), 2u);
  auto const z2z3 = trivial_module(corpus::one_object(corpus::z(2)), corpus::z(3));
  EXPECT_EQ(cohomology_group(z2z3, 2).order(), 1u);
  auto const z4z2 = trivial_module(corpus::one_object(corpus::z(4)), corpus::z(2));
  EXPECT_EQ(cohomology_group(z4z2, 2).order(), 2u);
  auto const z3z3 = trivial_module(corpus::one_object(corpus::z(3)), corpus::z(3));
  EXPECT_EQ(cohomology_group(z3z3, 2).order(), 3u);
}

TEST(Cohomology, H1IsHomomorphismsForTrivialAction) {
  auto const z2z2 = trivial_module(corpus::one_object(corpus::z(2)), corpus::z(2));
  EXPECT_EQ(cohomology_group(z2z2, 1).order(), 2u);
  auto const z3z3 = trivial_module(corpus::one_object(corpus::z(3)), corpus::z(3));
  EXPECT_EQ(cohomology_group(z3z3, 1).order(), 3u);
  auto const z4z2 = trivial_module(corpus::one_object(corpus::z(4)), corpus::z(2));
  EXPECT_EQ(cohomology_group(z4z2, 1).order(), 2u);
}

TEST(Cohomology, TwistedActionKillsH2) {
  // Z2 acting on Z3 by inversion: H^n vanish for n >= 1 (coprime orders).
  auto const m = inversion_module();
  EXPECT_EQ(cohomology_group(m, 1).order(), 1u);
  EXPECT_EQ(cohomology_group(m, 2).order(), 1u);
  // H^0 is the fixed points, here only the unit.
  EXPECT_EQ(cohomology_group(m, 0).order(), 1u);
}

TEST(Cohomology, PairGroupoidIsCohomologicallyTrivial) {
  // A connected groupoid with trivial vertex groups is equivalent to a point.
  auto const m = trivial_module(pair_groupoid({"u", "v"}), corpus::z(2));
  EXPECT_EQ(cohomology_group(m, 0).order(), 2u);
  EXPECT_EQ(cohomology_group(m, 1).order(), 1u);
  EXPECT_EQ(cohomology_group(m, 2).order(), 1u);
}

TEST(Cohomology, CocyclesAreClosedUnderProducts) {
  auto const m  = trivial_module(corpus::one_object(corpus::z(3)), corpus::z(3));
  auto const zs = cocycles(m, 2);
  std::set<std::vector<Local>> all;
  for (auto const& z : zs) {
    all.insert(z.values);
    EXPECT_TRUE(is_cocycle(m, z));
    EXPECT_TRUE(is_normalized(m, z));
  }
  for (auto const& a : zs) {
    for (auto const& b : zs) {
      EXPECT_TRUE(all.count(pointwise_product(m, a, b).values));
    }
  }
}

TEST(Cohomology, CoboundaryWitnessReconstructs) {
  auto const m = trivial_module(corpus::one_object(corpus::z(4)), corpus::z(2));
  for (auto const& b : coboundaries(m, 2)) {
    auto const h = is_coboundary(m, b);
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(coboundary(m, *h), b);
  }
  auto const h2 = cohomology_group(m, 2);
  EXPECT_FALSE(is_coboundary(m, h2.representatives.back()).has_value());
}

TEST(Cohomology, IsCoboundaryRejectsNonCocycles) {
  auto const m = trivial_module(corpus::one_object(corpus::z(2)), corpus::z(2));
  Cochain    c = unit_cochain(m, 2);
  auto const& t = m.tuples(2);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.has_unit(i)) {
      c.values[i] = 1;
      break;
    }
  }
  try {
    is_coboundary(m, c);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_a_cocycle);
  }
}

TEST(Cohomology, ClassLookupIsConsistent) {
  auto const m  = trivial_module(corpus::one_object(corpus::z(3)), corpus::z(3));
  auto const h2 = cohomology_group(m, 2);
  for (auto const& z : cocycles(m, 2)) {
    auto const k = h2.lookup(z);
    auto const q = pointwise_product(m, z, pointwise_inverse(m, h2.representatives[k]));
    EXPECT_TRUE(is_coboundary(m, q).has_value());
  }
}

TEST(Cohomology, ModuleBundleRejectsNonFunctorialAction) {
  auto              g = share(corpus::one_object(corpus::z(3)));
  auto              b = share(GroupBundle::constant(*g, corpus::z(3)));
  std::vector<Perm> action(g->size(), Perm{0, 1, 2});
  action[g->id("1")] = {0, 2, 1};
  try {
    ModuleBundle(g, b, action);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_bundle);
  }
}
