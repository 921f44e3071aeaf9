#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"

using namespace gpdext;

namespace {

  std::vector<ScalarDomain> domains() {
    return {ScalarDomain::Z(), ScalarDomain::Qi(), ScalarDomain::Zmod(3)};
  }

}  // namespace

TEST(Bridge, PhiIsAnIsomorphism) {
  for (auto const& fx : corpus::bridge_fixtures()) {
    for (auto const& d : domains()) {
      Bridge const br(fx.ext, fx.k, {d});
      auto const   rep = verify_isomorphism(br);
      EXPECT_TRUE(rep.holds()) << fx.label << " over " << d.name() << ": " << rep.summary();
      EXPECT_EQ(rep.basis_pairs, fx.ext.E().size() * fx.ext.E().size());
    }
  }
}

TEST(Bridge, PhiOnBasisElements) {
  // Phi(delta_e) = delta_n delta_x for e = n k(x).
  for (auto const& fx : corpus::bridge_fixtures()) {
    Bridge const br(fx.ext, fx.k, {ScalarDomain::Z()});
    auto const&  b = br.crossed().system().bundle();
    for (Id e = 0; e < fx.ext.E().size(); ++e) {
      auto const [n, x] = br.decomposition(e);
      EXPECT_EQ(fx.ext.E().product(fx.ext.inclusion[fx.ext.G().range_ordinal(x)][n], fx.k[x]), e);
      auto const want = br.crossed().delta(x, b.basis(fx.ext.G().range_ordinal(x), n));
      EXPECT_EQ(br.phi(br.total_basis(e)), want) << fx.label;
    }
  }
}

TEST(Bridge, PhiIsMultiplicativeOnRandomElements) {
  std::mt19937_64 rng(53);
  for (auto const& fx : corpus::bridge_fixtures()) {
    Bridge const br(fx.ext, fx.k, {ScalarDomain::Qi()});
    auto const&  ts = br.total().setting();
    for (int t = 0; t < 50; ++t) {
      auto const f = random_element(ts, rng);
      auto const g = random_element(ts, rng);
      EXPECT_EQ(br.phi(br.total().multiply(f, g)), br.crossed().multiply(br.phi(f), br.phi(g))) << fx.label;
      EXPECT_EQ(br.psi(br.phi(f)), f);
    }
  }
}

TEST(Bridge, FactorizationIdentity) {
  for (auto const& fx : corpus::bridge_fixtures()) {
    Bridge const br(fx.ext, fx.k, {ScalarDomain::Z()});
    auto const   rep = factorization_identity(br);
    EXPECT_TRUE(rep.holds()) << fx.label;
    std::size_t expected = 0;
    for (Id z = 0; z < fx.ext.G().size(); ++z) {
      expected += fx.ext.kernel->fiber(fx.ext.G().range_ordinal(z)).size();
    }
    EXPECT_EQ(rep.targets, expected);
  }
}

TEST(Bridge, FactorizationCountsMatchFiberSize) {
  // In a group every element has |E| factorizations st.
  auto const   fx = corpus::bridge_fixtures().front();
  auto const&  e  = fx.ext.E();
  for (Id target = 0; target < e.size(); ++target) {
    std::size_t n = 0;
    for (auto const& [s, t] : e.composable_pairs()) {
      n += e.product(s, t) == target;
    }
    EXPECT_EQ(n, e.size());
  }
}

TEST(Bridge, StarHomomorphismAndIsometry) {
  for (auto const& fx : corpus::bridge_fixtures()) {
    Bridge const br(fx.ext, fx.k, {ScalarDomain::Qi()});
    auto const   rep = verify_star_homomorphism(br, 7, 200);
    EXPECT_TRUE(rep.holds()) << fx.label;
    EXPECT_EQ(rep.checks, 2 * fx.ext.E().size() + 200);
  }
}

TEST(Bridge, StarNeedsGaussianRationals) {
  auto const   fx = corpus::bridge_fixtures().front();
  Bridge const br(fx.ext, fx.k, {ScalarDomain::Z()});
  try {
    verify_star_homomorphism(br);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_star_factor_system);
  }
}

TEST(Bridge, WrongSideIsRejected) {
  auto const   fx = corpus::bridge_fixtures().front();
  Bridge const br(fx.ext, fx.k, {ScalarDomain::Z()});
  auto const   f = br.crossed().object_unit(fx.ext.G().objects().front());
  try {
    br.phi(f);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::system_mismatch);
  }
}

TEST(Bridge, SectionChangeCarriesAssociatedSystems) {
  for (auto const& fx : corpus::bridge_fixtures()) {
    auto const& e = fx.ext.E();
    auto const& g = fx.ext.G();
    // k2(x) = n_x k(x) for every choice of the kernel element of one arrow.
    for (Id x : g.non_units()) {
      auto const& fiber = fx.ext.inclusion[g.range_ordinal(x)];
      for (Id n : fiber) {
        auto k2 = fx.k;
        k2[x]   = e.product(n, fx.k[x]);
        for (auto const& d : {ScalarDomain::Z(), ScalarDomain::Qi()}) {
          auto const h = section_change(fx.ext, fx.k, k2, {d});
          auto const a = associated_factor_system(fx.ext, fx.k, {d});
          auto const b = associated_factor_system(fx.ext, k2, {d});
          EXPECT_EQ(act_units(h, a), b) << fx.label;
        }
      }
    }
  }
}

TEST(Bridge, RingsPerComponent) {
  auto const g = disjoint_union(corpus::one_object(corpus::z(2), "p"), pair_groupoid({"u", "v"}));
  auto const r = rings_per_object(g, {ScalarDomain::Z(), ScalarDomain::Qi()});
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[g.object_ordinal(g.id("p"))], ScalarDomain::Z());
  EXPECT_EQ(r[g.object_ordinal(g.id("u"))], ScalarDomain::Qi());
  EXPECT_EQ(r[g.object_ordinal(g.id("v"))], ScalarDomain::Qi());
  try {
    rings_per_object(g, {ScalarDomain::Z(), ScalarDomain::Q(), ScalarDomain::Qi()});
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::component_mismatch);
  }
}

TEST(Bridge, MixedRingsOverTwoComponents) {
  // Z2 + pair(u,v) with Z2 kernel, Z on one component and Qi on the other.
  auto const s  = corpus::setting(disjoint_union(corpus::one_object(corpus::z(2), "p"), pair_groupoid({"u", "v"})),
                                  corpus::z(2));
  for (auto const& fs : corpus::valid_systems(s)) {
    auto const   built = build_extension(fs);
    Bridge const br(built.extension, built.section, {ScalarDomain::Z(), ScalarDomain::Qi()});
    EXPECT_TRUE(verify_isomorphism(br).holds());
  }
}
