// Shared fixtures and brute-force oracles for the test binaries.
#ifndef GPDEXT_TESTS_CORPUS_HPP_
#define GPDEXT_TESTS_CORPUS_HPP_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gpdext/bridge.hpp"
#include "gpdext/crossed.hpp"
#include "gpdext/extension.hpp"

namespace corpus {

  using namespace gpdext;

  template <typename T>
  struct Named {
    std::string label;
    T           value;
  };

  inline Groupoid one_object(FiniteGroup const& g, std::string const& obj = "u") {
    return one_object_groupoid(g, obj);
  }

  inline FiniteGroup z(std::size_t n) {
    return FiniteGroup::cyclic(n);
  }

  inline FiniteGroup z2xz2() {
    return FiniteGroup::direct_product(z(2), z(2));
  }

  //! G x H with (x, h)(y, k) = (xy, hk); units (u, 1) keep the name u and
  //! the other elements are named "x.h".
  inline Groupoid times_group(Groupoid const& g, FiniteGroup const& h) {
    std::size_t const        nh = h.size();
    std::vector<std::string> names;
    std::vector<bool>        is_unit;
    std::vector<Id>          src, rng, inv;
    for (Id x = 0; x < g.size(); ++x) {
      for (Local a = 0; a < nh; ++a) {
        bool const unit = g.is_unit(x) && a == h.unit();
        names.push_back(unit ? g.name(x) : g.name(x) + "." + h.name(a));
        is_unit.push_back(unit);
        src.push_back(static_cast<Id>(g.source(x) * nh + h.unit()));
        rng.push_back(static_cast<Id>(g.range(x) * nh + h.unit()));
        inv.push_back(static_cast<Id>(g.inverse(x) * nh + h.inverse(a)));
      }
    }
    return Groupoid::build(names, is_unit, src, rng, inv, [&](Id p, Id q) {
      return static_cast<Id>(g.product(p / nh, q / nh) * nh + h.op(p % nh, q % nh));
    });
  }

  //! The groupoid corpus: four groups, two pair groupoids, two bundles and
  //! two disjoint unions.
  inline std::vector<Named<Groupoid>> groupoids() {
    std::vector<Named<Groupoid>> out;
    out.push_back({"Z2", one_object(z(2))});
    out.push_back({"Z3", one_object(z(3))});
    out.push_back({"Z4", one_object(z(4))});
    out.push_back({"S3", one_object(FiniteGroup::symmetric3())});
    out.push_back({"pair(u,v)", pair_groupoid({"u", "v"})});
    out.push_back({"pair(u,v,w)", pair_groupoid({"u", "v", "w"})});
    out.push_back({"bundle(Z2,Z3)", bundle_as_groupoid(GroupBundle({"u", "v"}, {z(2), z(3)}))});
    out.push_back({"bundle(S3)", bundle_as_groupoid(GroupBundle({"w"}, {FiniteGroup::symmetric3()}))});
    out.push_back({"Z2+pair(u,v)", disjoint_union(one_object(z(2), "p"), pair_groupoid({"u", "v"}))});
    out.push_back({"Z3+pair(a,b,c)", disjoint_union(one_object(z(3), "w"), pair_groupoid({"a", "b", "c"}))});
    return out;
  }

  struct Mutation {
    std::string                          label;
    std::string                          groupoid;
    Axiom                                axiom;
    std::function<void(GroupoidTables&)> apply;
  };

  //! Twelve single-entry mutations of corpus groupoids, two per axiom.
  inline std::vector<Mutation> mutations() {
    auto prod = [](std::string x, std::string y, std::string p) {
      return [=](GroupoidTables& t) { t.product[{t.index(x), t.index(y)}] = t.index(p); };
    };
    auto inv = [](std::string x, std::string y) {
      return [=](GroupoidTables& t) { t.inverse[t.index(x)] = t.index(y); };
    };
    auto unit = [](std::string x) {
      return [=](GroupoidTables& t) { t.is_unit[t.index(x)] = true; };
    };
    return {
        {"unit flag on 1", "Z2", Axiom::g1, unit("1")},
        {"unit flag on (v,u)", "pair(u,v,w)", Axiom::g1, unit("(v,u)")},
        {"u*1 := 2", "Z3", Axiom::g2, prod("u", "1", "2")},
        {"021*u := 102", "S3", Axiom::g2, prod("021", "u", "102")},
        {"inverse (u,v) := (u,v)", "pair(u,v)", Axiom::g3, inv("(u,v)", "(u,v)")},
        {"inverse (v,u) := (w,u)", "pair(u,v,w)", Axiom::g3, inv("(v,u)", "(w,u)")},
        {"inverse 1 := 1", "Z3", Axiom::g4, inv("1", "1")},
        {"inverse 120 := 120", "S3", Axiom::g4, inv("120", "120")},
        {"(w,v)(v,u) := (w,v)", "pair(u,v,w)", Axiom::g5, prod("(w,v)", "(v,u)", "(w,v)")},
        {"1@v*1@v := 1@u", "bundle(Z2,Z3)", Axiom::g5, prod("1@v", "1@v", "1@u")},
        {"1*1 := 3", "Z4", Axiom::g6, prod("1", "1", "3")},
        {"021*102 := 120", "S3", Axiom::g6, prod("021", "102", "120")},
    };
  }

  inline FactorSettingPtr setting(Groupoid g, GroupBundle const& n) {
    return make_setting(share(std::move(g)), share(n));
  }

  inline FactorSettingPtr setting(Groupoid g, FiniteGroup const& n) {
    auto gp = share(std::move(g));
    return make_setting(gp, share(GroupBundle::constant(*gp, n)));
  }

  //! Small (G, N) pairs spanning abelian and nonabelian fibers, several
  //! objects and two components.
  inline std::vector<Named<FactorSettingPtr>> settings() {
    std::vector<Named<FactorSettingPtr>> out;
    out.push_back({"(Z2,Z2)", setting(one_object(z(2)), z(2))});
    out.push_back({"(Z2,Z3)", setting(one_object(z(2)), z(3))});
    out.push_back({"(Z3,Z2)", setting(one_object(z(3)), z(2))});
    out.push_back({"(Z3,Z3)", setting(one_object(z(3)), z(3))});
    out.push_back({"(Z4,Z2)", setting(one_object(z(4)), z(2))});
    out.push_back({"(Z2,Z2xZ2)", setting(one_object(z(2)), z2xz2())});
    out.push_back({"(Z2,S3)", setting(one_object(z(2)), FiniteGroup::symmetric3())});
    out.push_back({"(Z2xZ2,Z2)", setting(one_object(z2xz2()), z(2))});
    out.push_back({"(pair(u,v),Z2)", setting(pair_groupoid({"u", "v"}), z(2))});
    out.push_back({"(pair(u,v),Z3)", setting(pair_groupoid({"u", "v"}), z(3))});
    out.push_back({"(Z2+pair(u,v),Z2)",
                   setting(disjoint_union(one_object(z(2), "p"), pair_groupoid({"u", "v"})), z(2))});
    return out;
  }

  //! Every outer family L.
  inline std::vector<std::vector<Perm>> outer_families(FactorSetting const& s) {
    auto const&                    c = s.coefficients();
    std::vector<std::vector<Perm>> out;
    for (auto& L : engine::enumerate_iso_families(c, Bounds{})) {
      if (engine::is_outer(c, L)) {
        out.push_back(std::move(L));
      }
    }
    return out;
  }

  //! Every valid factor system of a setting.
  inline std::vector<FactorSystem> valid_systems(FactorSettingPtr const& s) {
    std::vector<FactorSystem> out;
    for (auto const& L : outer_families(*s)) {
      for (auto& sigma : engine::enumerate_cocycles(s->coefficients(), L, ExecutionContext{})) {
        out.push_back({s, {L, std::move(sigma)}});
      }
    }
    return out;
  }

  // Independent checks written directly against the group tables.

  inline bool f1_oracle(FactorSystem const& fs) {
    auto const& g = fs.base();
    for (auto const& [x, y] : g.composable_pairs()) {
      auto const& f  = fs.setting->range_fiber(x);
      Local const s  = fs.sigma(x, y);
      Id const    xy = g.product(x, y);
      for (Local n = 0; n < fs.setting->source_fiber(y).size(); ++n) {
        Local const lhs = fs.L(x)[fs.L(y)[n]];
        Local const rhs = f.op(f.op(s, fs.L(xy)[n]), f.inverse(s));
        if (lhs != rhs) {
          return false;
        }
      }
    }
    return true;
  }

  inline bool f2_oracle(FactorSystem const& fs) {
    auto const& g = fs.base();
    for (auto const& [x, y] : g.composable_pairs()) {
      auto const& f = fs.setting->range_fiber(x);
      for (Id z = 0; z < g.size(); ++z) {
        if (!g.composable(y, z)) {
          continue;
        }
        Local const lhs = f.op(fs.sigma(x, y), fs.sigma(g.product(x, y), z));
        Local const rhs = f.op(fs.L(x)[fs.sigma(y, z)], fs.sigma(x, g.product(y, z)));
        if (lhs != rhs) {
          return false;
        }
      }
    }
    return true;
  }

  inline bool normalized_oracle(FactorSystem const& fs) {
    auto const& g = fs.base();
    for (auto const& [x, y] : g.composable_pairs()) {
      if ((g.is_unit(x) || g.is_unit(y)) && fs.sigma(x, y) != fs.setting->range_fiber(x).unit()) {
        return false;
      }
    }
    for (Id u : g.objects()) {
      if (fs.L(u) != identity_perm(fs.setting->source_fiber(u).size())) {
        return false;
      }
    }
    return true;
  }

  //! Calls visit on every normalized sigma for a fixed L (all fiber values
  //! at non-unit pairs); stops when visit returns true.
  inline bool for_each_sigma(FactorSettingPtr const&                        s,
                             std::vector<Perm> const&                       L,
                             std::function<bool(FactorSystem const&)> const& visit) {
    auto const&              g     = s->base();
    auto const&              pairs = g.composable_pairs();
    FactorSystem             fs{s, {L, engine::unit_sigma(s->coefficients())}};
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!g.is_unit(pairs[i].first) && !g.is_unit(pairs[i].second)) {
        free.push_back(i);
      }
    }
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
      if (k == free.size()) {
        return visit(fs);
      }
      std::size_t const i = free[k];
      for (Local v = 0; v < s->range_fiber(pairs[i].first).size(); ++v) {
        fs.data.sigma[i] = v;
        if (rec(k + 1)) {
          return true;
        }
      }
      return false;
    };
    return rec(0);
  }

  //! Exhaustive search for sigma completing L to a valid system.
  inline bool sigma_exists(FactorSettingPtr const& s, std::vector<Perm> const& L) {
    return for_each_sigma(s, L, [](FactorSystem const& fs) { return f1_oracle(fs) && f2_oracle(fs); });
  }

  //! Brute-force extensions with section over (G, N): products on the set of
  //! pairs (n, x), n in N_{r(x)}, with (n, r(x)) (1, x) = (n, x), N embedded
  //! and j a homomorphism. The free data is (1, x)(m, y) for non-unit x; the
  //! rest follows from (n, x)(m, y) = (n, r(x)) ((1, x)(m, y)).
  struct PairTable {
    //! Element index of (n, x).
    std::map<std::pair<Local, Id>, std::size_t> index;
    std::vector<std::pair<Local, Id>>           elems;
    //! product[a * size + b], or size when not composable.
    std::vector<std::size_t> product;

    std::size_t size() const {
      return elems.size();
    }
  };

  inline PairTable pair_skeleton(FactorSetting const& s) {
    auto const& g = s.base();
    PairTable   t;
    for (Id x = 0; x < g.size(); ++x) {
      for (Local n = 0; n < s.range_fiber(x).size(); ++n) {
        t.index.emplace(std::make_pair(n, x), t.elems.size());
        t.elems.emplace_back(n, x);
      }
    }
    t.product.assign(t.size() * t.size(), t.size());
    return t;
  }

  //! Checks unit laws, inverses and associativity directly on the table.
  inline bool is_groupoid_table(FactorSetting const& s, PairTable const& t) {
    auto const&       g = s.base();
    std::size_t const n = t.size();
    auto              unit_of = [&](Id u) { return t.index.at({s.range_fiber(u).unit(), u}); };
    for (std::size_t a = 0; a < n; ++a) {
      Id const    x = t.elems[a].second;
      std::size_t ra = unit_of(g.range(x)), sa = unit_of(g.source(x));
      if (t.product[ra * n + a] != a || t.product[a * n + sa] != a) {
        return false;
      }
      bool has_inverse = false;
      for (std::size_t b = 0; b < n && !has_inverse; ++b) {
        has_inverse = t.product[a * n + b] == ra && t.product[b * n + a] == sa;
      }
      if (!has_inverse) {
        return false;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t const ab = t.product[a * n + b];
        if (ab == n) {
          continue;
        }
        for (std::size_t c = 0; c < n; ++c) {
          std::size_t const bc = t.product[b * n + c];
          if (bc == n) {
            continue;
          }
          if (t.product[ab * n + c] != t.product[a * n + bc]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  inline std::vector<PairTable> brute_force_extensions(FactorSetting const& s) {
    auto const&       g = s.base();
    PairTable         base = pair_skeleton(s);
    std::size_t const n    = base.size();
    // Free cells: (1, x)(m, y) with x non-unit, s(x) = r(y).
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t a = 0; a < n; ++a) {
      auto const [na, x] = base.elems[a];
      if (g.is_unit(x) || na != s.range_fiber(x).unit()) {
        continue;
      }
      for (std::size_t b = 0; b < n; ++b) {
        if (g.composable(x, base.elems[b].second)) {
          cells.emplace_back(a, b);
        }
      }
    }
    std::vector<PairTable>           out;
    std::vector<Local>               choice(cells.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k < cells.size()) {
        Id const x = base.elems[cells[k].first].second;
        for (Local v = 0; v < s.range_fiber(x).size(); ++v) {
          choice[k] = v;
          rec(k + 1);
        }
        return;
      }
      PairTable t = base;
      std::map<std::pair<std::size_t, std::size_t>, Local> first;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        first[cells[i]] = choice[i];
      }
      for (std::size_t a = 0; a < n; ++a) {
        auto const [na, x] = t.elems[a];
        auto const& f      = s.range_fiber(x);
        for (std::size_t b = 0; b < n; ++b) {
          auto const [nb, y] = t.elems[b];
          if (!g.composable(x, y)) {
            continue;
          }
          Local v;
          if (g.is_unit(x)) {
            v = f.op(na, nb);
          } else {
            v = f.op(na, first.at({t.index.at({f.unit(), x}), b}));
          }
          t.product[a * n + b] = t.index.at({v, g.product(x, y)});
        }
      }
      if (is_groupoid_table(s, t)) {
        out.push_back(std::move(t));
      }
    };
    rec(0);
    return out;
  }

  //! Equivalence of two pair tables: a bijection preserving every fiber
  //! over G, fixing N pointwise and multiplicative. Searched over all
  //! fiberwise permutations.
  inline bool pair_tables_equivalent(FactorSetting const& s, PairTable const& a, PairTable const& b) {
    auto const&       g = s.base();
    std::size_t const n = a.size();
    std::vector<Id>   arrows = g.non_units();
    std::vector<std::size_t> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] = i;
    }
    auto check = [&] {
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          std::size_t const pq = a.product[p * n + q];
          if (pq == n) {
            continue;
          }
          if (b.product[psi[p] * n + psi[q]] != psi[pq]) {
            return false;
          }
        }
      }
      return true;
    };
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
      if (k == arrows.size()) {
        return check();
      }
      Id const                 x = arrows[k];
      std::vector<std::size_t> slots;
      for (Local m = 0; m < s.range_fiber(x).size(); ++m) {
        slots.push_back(a.index.at({m, x}));
      }
      std::vector<std::size_t> perm = slots;
      std::sort(perm.begin(), perm.end());
      do {
        for (std::size_t i = 0; i < slots.size(); ++i) {
          psi[slots[i]] = perm[i];
        }
        if (rec(k + 1)) {
          return true;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      return false;
    };
    return rec(0);
  }

  //! Number of classes of the brute-force extensions.
  inline std::vector<std::size_t> brute_force_classes(FactorSetting const& s, std::vector<PairTable> const& all) {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < all.size(); ++i) {
      bool fresh = true;
      for (std::size_t r : reps) {
        if (pair_tables_equivalent(s, all[r], all[i])) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        reps.push_back(i);
      }
    }
    return reps;
  }

  //! The extension built from a factor system, read back as a pair table
  //! through its canonical section (independently of the product formula).
  inline PairTable as_pair_table(FactorSetting const& s, ExtensionWithSection const& built) {
    PairTable   t     = pair_skeleton(s);
    auto const& e     = built.extension.E();
    auto const  parts = decompose(built.extension, built.section);
    std::size_t const n = t.size();
    std::vector<std::size_t> where(e.size());
    for (Id v = 0; v < e.size(); ++v) {
      where[v] = t.index.at(parts[v]);
    }
    for (auto const& [p, q] : e.composable_pairs()) {
      t.product[where[p] * n + where[q]] = where[e.product(p, q)];
    }
    return t;
  }

  // Fixtures for the ring bridge.

  struct BridgeFixture {
    std::string     label;
    Extension       ext;
    std::vector<Id> k;
  };

  inline std::vector<BridgeFixture> bridge_fixtures() {
    std::vector<BridgeFixture> out;
    {
      // Z4 -> Z2, reduction mod 2; k(1) = 1.
      auto            e = share(one_object(z(4)));
      auto            g = share(one_object(z(2)));
      std::vector<Id> p(e->size());
      for (Id v = 0; v < e->size(); ++v) {
        bool const odd = e->name(v) == "1" || e->name(v) == "3";
        p[v]           = g->id(odd ? "1" : "u");
      }
      auto ext = make_extension(e, g, p);
      std::vector<Id> k(g->size());
      k[g->id("u")] = e->id("u");
      k[g->id("1")] = e->id("1");
      out.push_back({"Z4/Z2", std::move(ext), std::move(k)});
    }
    {
      // S3 -> S3/A3 by the sign; k(1) = the transposition 021.
      auto const      s3 = FiniteGroup::symmetric3();
      auto            e  = share(one_object(s3));
      auto            g  = share(one_object(z(2)));
      std::vector<Id> p(e->size());
      for (Id v = 0; v < e->size(); ++v) {
        std::string const nm = e->is_unit(v) ? std::string("012") : e->name(v);
        int               inversions = 0;
        for (int i = 0; i < 3; ++i) {
          for (int k = i + 1; k < 3; ++k) {
            inversions += nm[i] > nm[k];
          }
        }
        p[v] = g->id(inversions % 2 ? "1" : "u");
      }
      auto            ext = make_extension(e, g, p);
      std::vector<Id> k(g->size());
      k[g->id("u")] = e->id("u");
      k[g->id("1")] = e->id("021");
      out.push_back({"S3/Z2", std::move(ext), std::move(k)});
    }
    {
      // pair(u,v) x Z2 -> pair(u,v); k(x) = (x, 0).
      auto const      pg = pair_groupoid({"u", "v"});
      auto            e  = share(times_group(pg, z(2)));
      auto            g  = share(pg);
      std::vector<Id> p(e->size());
      for (Id v = 0; v < e->size(); ++v) {
        std::string nm = e->name(v);
        auto        dot = nm.rfind('.');
        p[v]            = g->id(dot == std::string::npos ? nm : nm.substr(0, dot));
      }
      auto            ext = make_extension(e, g, p);
      std::vector<Id> k(g->size());
      for (Id x = 0; x < g->size(); ++x) {
        k[x] = g->is_unit(x) ? e->id(g->name(x)) : e->id(g->name(x) + ".0");
      }
      out.push_back({"pair(u,v)xZ2/pair(u,v)", std::move(ext), std::move(k)});
    }
    return out;
  }

  //! Z/5 over one-object Z2 with tau(g,g) = t.
  inline TableFactorSystem z5_system(Local t) {
    auto g   = share(one_object(z(2)));
    auto s   = make_ring_setting(g, TableRingBundle::constant(*g, FiniteRing::zmod(5)));
    auto rfs = TableFactorSystem::trivial(s);
    rfs.tau[g->pair_index(g->id("1"), g->id("1"))] = t;
    return rfs;
  }

  //! Every valid table system of a ring setting.
  inline std::vector<TableFactorSystem> valid_ring_systems(RingSettingPtr<TableRingBundle> const& s) {
    auto const&                    c = s->coefficients();
    std::vector<TableFactorSystem> out;
    for (auto& L : engine::enumerate_iso_families(c, Bounds{})) {
      if (!engine::is_outer(c, L)) {
        continue;
      }
      for (auto& tau : engine::enumerate_cocycles(c, L, ExecutionContext{})) {
        out.push_back({s, L, std::move(tau)});
      }
    }
    return out;
  }

  //! Small table-ring settings: Z/5, Z/4, Z/2[Z2] and Z/3 x Z/3 fibers.
  inline std::vector<Named<RingSettingPtr<TableRingBundle>>> ring_settings() {
    std::vector<Named<RingSettingPtr<TableRingBundle>>> out;
    auto z2g = share(one_object(z(2)));
    auto z3g = share(one_object(z(3)));
    auto pg  = share(pair_groupoid({"u", "v"}));
    out.push_back({"(Z2,Z/5)", make_ring_setting(z2g, TableRingBundle::constant(*z2g, FiniteRing::zmod(5)))});
    out.push_back({"(Z3,Z/7)", make_ring_setting(z3g, TableRingBundle::constant(*z3g, FiniteRing::zmod(7)))});
    out.push_back({"(Z2,Z/4)", make_ring_setting(z2g, TableRingBundle::constant(*z2g, FiniteRing::zmod(4)))});
    out.push_back({"(Z2,Z/2[Z2])", make_ring_setting(z2g, TableRingBundle::constant(*z2g, FiniteRing::group_ring(2, z(2))))});
    out.push_back({"(Z2,Z/3[Z2])", make_ring_setting(z2g, TableRingBundle::constant(*z2g, FiniteRing::group_ring(3, z(2))))});
    out.push_back({"(pair(u,v),Z/3)", make_ring_setting(pg, TableRingBundle::constant(*pg, FiniteRing::zmod(3)))});
    return out;
  }

}  // namespace corpus

#endif  // GPDEXT_TESTS_CORPUS_HPP_
