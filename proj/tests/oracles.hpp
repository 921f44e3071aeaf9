// Independent oracles shared by the unit tests and the acceptance run.
#ifndef GPDEXT_TESTS_ORACLES_HPP_
#define GPDEXT_TESTS_ORACLES_HPP_

#include <stdexcept>

#include "corpus.hpp"

namespace oracles {

  using namespace gpdext;

  struct ModuleFixture {
    std::string  label;
    ModuleBundle module;
  };

  inline ModuleBundle trivial_module(Groupoid g, FiniteGroup const& a) {
    auto gp = share(std::move(g));
    return ModuleBundle::trivial_action(gp, share(GroupBundle::constant(*gp, a)));
  }

  //! Z2 = {u, 1} acting on Z3 by inversion.
  inline ModuleBundle inversion_module() {
    auto              g = share(corpus::one_object(corpus::z(2)));
    auto              b = share(GroupBundle::constant(*g, corpus::z(3)));
    std::vector<Perm> action(g->size());
    action[g->id("u")] = {0, 1, 2};
    action[g->id("1")] = {0, 2, 1};
    return ModuleBundle(g, b, action);
  }

  inline std::vector<ModuleFixture> modules() {
    return {
        {"Z2 on Z2", trivial_module(corpus::one_object(corpus::z(2)), corpus::z(2))},
        {"Z3 on Z3", trivial_module(corpus::one_object(corpus::z(3)), corpus::z(3))},
        {"Z2 on Z3 by inversion", inversion_module()},
        {"pair(u,v) on Z2", trivial_module(pair_groupoid({"u", "v"}), corpus::z(2))},
        {"Z2+pair(u,v) on Z2",
         trivial_module(disjoint_union(corpus::one_object(corpus::z(2), "p"), pair_groupoid({"u", "v"})),
                        corpus::z(2))},
        {"Z2 on Z2xZ2", trivial_module(corpus::one_object(corpus::z(2)), corpus::z2xz2())},
    };
  }

  //! d^n h written out from the alternating formula.
  inline Cochain oracle_coboundary(ModuleBundle const& m, Cochain const& h) {
    auto const&       g  = m.base();
    std::size_t const n  = h.degree;
    auto const&       tn = m.tuples(n);
    auto const&       tm = m.tuples(n + 1);
    Cochain           out{m.base_ptr(), n + 1, {}};
    for (std::size_t i = 0; i < tm.size(); ++i) {
      auto const  x = tm.tuple(i);
      auto const& f = m.fiber(m.value_fiber(n + 1, i));
      auto        value_at = [&](std::vector<Id> const& t) -> Local {
        for (std::size_t j = 0; j < tn.size(); ++j) {
          if (tn.tuple(j) == t) {
            return h.values[j];
          }
        }
        throw std::runtime_error("tuple not found");
      };
      Local acc = f.unit();
      if (n == 0) {
        // (d h)(x) = L_x(h(s(x))) h(r(x))^-1
        Local const a = m.action(x[0])[value_at({g.source(x[0])})];
        Local const b = value_at({g.range(x[0])});
        out.values.push_back(f.op(a, f.inverse(b)));
        continue;
      }
      std::vector<Id> tail(x.begin() + 1, x.end());
      acc = f.op(acc, m.action(x[0])[value_at(tail)]);
      for (std::size_t k = 1; k <= n; ++k) {
        std::vector<Id> t;
        for (std::size_t p = 0; p < x.size(); ++p) {
          if (p == k - 1) {
            t.push_back(g.product(x[p], x[p + 1]));
            ++p;
          } else {
            t.push_back(x[p]);
          }
        }
        Local const v = value_at(t);
        acc           = f.op(acc, k % 2 ? f.inverse(v) : v);
      }
      std::vector<Id> head(x.begin(), x.end() - 1);
      Local const     v = value_at(head);
      acc               = f.op(acc, (n + 1) % 2 ? f.inverse(v) : v);
      out.values.push_back(acc);
    }
    return out;
  }

  //! The four inverse identities, spelled out over the ring tables.
  inline bool inverse_identities_oracle(TableFactorSystem const& rfs) {
    auto const& g   = rfs.base();
    auto const& b   = rfs.bundle();
    auto        tau = [&](Id x, Id y) { return rfs.tau_at(x, y); };
    auto        M   = [&](Id x, Local v) { return rfs.M[x][v]; };
    for (Id x = 0; x < g.size(); ++x) {
      if (tau(x, g.inverse(x)) != M(x, tau(g.inverse(x), x))) {
        return false;
      }
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      auto const& r  = b.fiber(g.range_ordinal(x));
      Id const    z  = g.product(x, y);
      Id const    xi = g.inverse(x), yi = g.inverse(y), zi = g.inverse(z);
      Local const t  = tau(z, yi);
      Local const ti = *r.inverse(tau(x, y));
      if (t != r.mul(ti, M(x, tau(y, yi)))) {
        return false;
      }
      if (r.mul(t, tau(x, xi)) != r.mul(M(z, tau(yi, xi)), tau(z, zi))) {
        return false;
      }
      auto const& src = b.fiber(g.source_ordinal(x));
      for (Local n = 0; n < src.size(); ++n) {
        if (r.mul(t, M(x, n)) != r.mul(M(z, M(yi, n)), t)) {
          return false;
        }
      }
    }
    return true;
  }

  //! d^3 of a 2-cochain chi as fiber elements, indexed by 4-tuples.
  inline bool chi_is_cocycle(FactorSystem const& fs, std::vector<Local> const& chi) {
    auto const& g = fs.base();
    TupleSpace  t3(g, 3);
    TupleSpace  t4(g, 4);
    auto        at = [&](Id a, Id b, Id c) { return chi[t3.index({a, b, c})]; };
    for (std::size_t i = 0; i < t4.size(); ++i) {
      Id const    w = t4.at(i, 0), x = t4.at(i, 1), y = t4.at(i, 2), z = t4.at(i, 3);
      auto const& f = fs.setting->range_fiber(w);
      Local       v = fs.L(w)[at(x, y, z)];
      v             = f.op(v, f.inverse(at(g.product(w, x), y, z)));
      v             = f.op(v, at(w, g.product(x, y), z));
      v             = f.op(v, f.inverse(at(w, x, g.product(y, z))));
      v             = f.op(v, at(w, x, y));
      if (v != f.unit()) {
        return false;
      }
    }
    return true;
  }

  //! chi computed from the definition, with the trailing sigma(x,y)^-1.
  inline std::vector<Local> chi_oracle(FactorSystem const& fs) {
    auto const&        g = fs.base();
    TupleSpace         t3(g, 3);
    std::vector<Local> out;
    for (std::size_t i = 0; i < t3.size(); ++i) {
      Id const    x = t3.at(i, 0), y = t3.at(i, 1), z = t3.at(i, 2);
      auto const& f = fs.setting->range_fiber(x);
      Local       v = fs.L(x)[fs.sigma(y, z)];
      v             = f.op(v, fs.sigma(x, g.product(y, z)));
      v             = f.op(v, f.inverse(fs.sigma(g.product(x, y), z)));
      v             = f.op(v, f.inverse(fs.sigma(x, y)));
      out.push_back(v);
    }
    return out;
  }

  //! Pairs (L, sigma) satisfying (F1), from products of the twist domains.
  inline std::vector<FactorSystem> partial_systems(FactorSettingPtr const& s, std::size_t per_family) {
    auto const&               c = s->coefficients();
    std::vector<FactorSystem> out;
    for (auto const& L : corpus::outer_families(*s)) {
      auto const               doms = engine::twist_domains(c, L);
      std::vector<std::size_t> pos(doms.size(), 0);
      for (std::size_t k = 0; k < per_family; ++k) {
        FactorSystem fs{s, {L, {}}};
        for (std::size_t i = 0; i < doms.size(); ++i) {
          fs.data.sigma.push_back(doms[i][pos[i]]);
        }
        out.push_back(std::move(fs));
        std::size_t i = 0;
        while (i < doms.size() && ++pos[i] == doms[i].size()) {
          pos[i++] = 0;
        }
        if (i == doms.size()) {
          break;
        }
      }
    }
    return out;
  }

  inline corpus::Named<FactorSettingPtr> find_setting(std::string const& label) {
    for (auto& s : corpus::settings()) {
      if (s.label == label) {
        return s;
      }
    }
    throw std::runtime_error("no setting " + label);
  }

}  // namespace oracles

#endif  // GPDEXT_TESTS_ORACLES_HPP_
