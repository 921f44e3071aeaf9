#include <gtest/gtest.h>

#include <set>

#include "gpdext/group.hpp"

using namespace gpdext;

namespace {

  std::size_t order_of(FiniteGroup const& g, Local a) {
    std::size_t k = 1;
    for (Local p = a; p != g.unit(); p = g.op(p, a)) {
      ++k;
    }
    return k;
  }

  std::multiset<std::size_t> orders(FiniteGroup const& g) {
    std::multiset<std::size_t> out;
    for (Local a = 0; a < g.size(); ++a) {
      out.insert(order_of(g, a));
    }
    return out;
  }

}  // namespace

TEST(FiniteGroup, CyclicTables) {
  auto const g = FiniteGroup::cyclic(5);
  EXPECT_EQ(g.size(), 5u);
  EXPECT_TRUE(g.is_abelian());
  EXPECT_EQ(g.op(3, 4), 2u);
  EXPECT_EQ(g.inverse(2), 3u);
  EXPECT_EQ(g.name(4), "4");
}

TEST(FiniteGroup, SmallGroupsHaveExpectedOrders) {
  EXPECT_EQ(orders(FiniteGroup::symmetric3()), (std::multiset<std::size_t>{1, 2, 2, 2, 3, 3}));
  EXPECT_EQ(orders(FiniteGroup::dihedral(4)), (std::multiset<std::size_t>{1, 2, 2, 2, 2, 2, 4, 4}));
  EXPECT_EQ(orders(FiniteGroup::quaternion()), (std::multiset<std::size_t>{1, 2, 4, 4, 4, 4, 4, 4}));
  auto const v4 = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
  EXPECT_EQ(orders(v4), (std::multiset<std::size_t>{1, 2, 2, 2}));
}

TEST(FiniteGroup, CentersAndAbelianness) {
  EXPECT_FALSE(FiniteGroup::symmetric3().is_abelian());
  EXPECT_EQ(FiniteGroup::symmetric3().center().size(), 1u);
  EXPECT_EQ(FiniteGroup::dihedral(4).center().size(), 2u);
  EXPECT_EQ(FiniteGroup::quaternion().center().size(), 2u);
}

TEST(FiniteGroup, FromTableRejectsNonGroups) {
  // Not associative: a Latin square without a consistent product.
  std::vector<Local> bad = {0, 1, 2, 1, 0, 0, 2, 2, 1};
  EXPECT_THROW(FiniteGroup::from_table({"e", "a", "b"}, bad, 0), Error);
  try {
    FiniteGroup::from_table({"e", "a"}, {0, 1, 1, 1}, 0);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_group);
  }
}

TEST(FiniteGroup, AutomorphismCounts) {
  EXPECT_EQ(automorphisms(FiniteGroup::cyclic(5)).size(), 4u);
  EXPECT_EQ(automorphisms(FiniteGroup::cyclic(4)).size(), 2u);
  EXPECT_EQ(automorphisms(FiniteGroup::symmetric3()).size(), 6u);
  EXPECT_EQ(automorphisms(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))).size(), 6u);
  EXPECT_EQ(automorphisms(FiniteGroup::quaternion()).size(), 24u);
  EXPECT_EQ(automorphisms(FiniteGroup::dihedral(4)).size(), 8u);
}

TEST(FiniteGroup, IsomorphismsAreHomomorphisms) {
  auto const a = FiniteGroup::cyclic(6);
  auto const b = FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3));
  auto const isos = isomorphisms(a, b);
  EXPECT_EQ(isos.size(), 2u);
  for (auto const& phi : isos) {
    for (Local x = 0; x < a.size(); ++x) {
      for (Local y = 0; y < a.size(); ++y) {
        EXPECT_EQ(phi[a.op(x, y)], b.op(phi[x], phi[y]));
      }
    }
  }
  EXPECT_TRUE(isomorphisms(FiniteGroup::cyclic(4), b).empty());
  EXPECT_TRUE(isomorphisms(FiniteGroup::cyclic(6), FiniteGroup::symmetric3()).empty());
}

TEST(FiniteGroup, GeneratorsGenerate) {
  for (auto const& g : {FiniteGroup::symmetric3(), FiniteGroup::quaternion(), FiniteGroup::dihedral(5)}) {
    auto const      gens = detail::generators(g);
    std::set<Local> seen{g.unit()};
    std::vector<Local> frontier{g.unit()};
    while (!frontier.empty()) {
      std::vector<Local> next;
      for (Local a : frontier) {
        for (Local s : gens) {
          if (seen.insert(g.op(a, s)).second) {
            next.push_back(g.op(a, s));
          }
        }
      }
      frontier = std::move(next);
    }
    EXPECT_EQ(seen.size(), g.size());
  }
}
