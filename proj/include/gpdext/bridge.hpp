#ifndef GPDEXT_BRIDGE_HPP_
#define GPDEXT_BRIDGE_HPP_

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "crossed.hpp"
#include "error.hpp"
#include "extension.hpp"
#include "groupoid.hpp"
#include "ring.hpp"

namespace gpdext {

  using GroupRingSystem  = RingFactorSystem<GroupRingBundle>;
  using GroupRingElement = SectionalElement<GroupRingBundle>;

  //! One scalar domain per object, from one per component (in the order of
  //! component_partition) or a single domain for all. Throws
  //! ComponentMismatch otherwise.
  inline std::vector<ScalarDomain> rings_per_object(Groupoid const& g, std::vector<ScalarDomain> const& rings) {
    auto const part = component_partition(g);
    if (rings.size() == 1) {
      return std::vector<ScalarDomain>(g.nr_objects(), rings.front());
    }
    if (rings.size() != part.blocks.size()) {
      fail(ErrorCode::component_mismatch, std::to_string(rings.size()) + " rings for "
                                              + std::to_string(part.blocks.size()) + " components");
    }
    std::vector<ScalarDomain> out;
    for (std::size_t u = 0; u < g.nr_objects(); ++u) {
      out.push_back(rings[part.block_of[u]]);
    }
    return out;
  }

  //! M_x(f) = f o L_x^-1 and tau(x, y) = delta_sigma(x,y) over R_u[N_u].
  inline GroupRingSystem associated_factor_system(FactorSystem const& fs, std::vector<ScalarDomain> const& rings) {
    auto const& g = fs.base();
    auto        s = make_ring_setting(fs.setting->base_ptr(),
                                      GroupRingBundle::over(fs.setting->bundle(), rings_per_object(g, rings)));
    GroupRingSystem out{s, fs.data.L, {}};
    auto const&     pairs = g.composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out.tau.push_back(s->bundle().basis(g.range_ordinal(pairs[i].first), fs.data.sigma[i]));
    }
    return out;
  }

  inline GroupRingSystem associated_factor_system(Extension const&                 ext,
                                                  std::vector<Id> const&           k,
                                                  std::vector<ScalarDomain> const& rings) {
    return associated_factor_system(extension_from_section(ext, k), rings);
  }

  //! M' = id, tau' = 1 over E with fibers R_lambda (as R_lambda[1]).
  inline GroupRingSystem trivial_factor_system(GroupoidPtr const& e, std::vector<ScalarDomain> const& rings) {
    auto const                          domains = rings_per_object(*e, rings);
    std::vector<GroupRingBundle::Fiber> fibers;
    for (auto const& d : domains) {
      fibers.push_back({d, FiniteGroup::trivial()});
    }
    auto s = make_ring_setting(e, GroupRingBundle(GroupBundle::object_names(*e), std::move(fibers)));
    return GroupRingSystem::trivial(s);
  }

  //! The isomorphism R[E] -> R[N] x_(M,tau) G of one (extension, section,
  //! rings) triple, with the decomposition e = n k(x) precomputed.
  class Bridge {
   public:
    Bridge(Extension ext, std::vector<Id> k, std::vector<ScalarDomain> rings)
        : _ext(std::move(ext)),
          _k(std::move(k)),
          _rings(std::move(rings)),
          _parts(decompose(_ext, _k)),
          _total(trivial_factor_system(_ext.total, _rings)),
          _crossed(associated_factor_system(_ext, _k, _rings)) {
      for (Id v = 0; v < _parts.size(); ++v) {
        _compose.emplace(_parts[v], v);
      }
    }

    Extension const& extension() const noexcept {
      return _ext;
    }

    std::vector<Id> const& section() const noexcept {
      return _k;
    }

    //! R[E] as a crossed product over the trivial system.
    CrossedProduct<GroupRingBundle> const& total() const noexcept {
      return _total;
    }

    CrossedProduct<GroupRingBundle> const& crossed() const noexcept {
      return _crossed;
    }

    //! e = n k(x), as (n, x).
    std::pair<Local, Id> const& decomposition(Id e) const {
      return _parts.at(e);
    }

    //! n k(x).
    Id compose(Local n, Id x) const {
      return _compose.at({n, x});
    }

    //! Phi(f)(x)(n) = f(n k(x)). Throws SystemMismatch for an element not
    //! on E.
    GroupRingElement phi(GroupRingElement const& f) const {
      check(f, _ext.total, _total);
      auto const&      g = _ext.G();
      auto const&      b = _crossed.system().bundle();
      GroupRingElement out{_ext.base, {}};
      for (auto const& [e, a] : f.coeff) {
        auto const [n, x] = _parts[e];
        auto it           = out.coeff.find(x);
        if (it == out.coeff.end()) {
          it = out.coeff.emplace(x, b.zero(g.range_ordinal(x))).first;
        }
        it->second[n] = a.front();
      }
      return out;
    }

    //! Psi(f)(n k(x)) = f(x)(n).
    GroupRingElement psi(GroupRingElement const& f) const {
      check(f, _ext.base, _crossed);
      GroupRingElement out{_ext.total, {}};
      for (auto const& [x, a] : f.coeff) {
        for (Local n = 0; n < a.size(); ++n) {
          if (!scalar::is_zero(a[n])) {
            out.coeff.emplace(compose(n, x), GroupRingValue{a[n]});
          }
        }
      }
      return out;
    }

    //! delta_e in R[E] with coefficient c.
    GroupRingElement total_basis(Id e, Scalar c = Scalar(1)) const {
      auto const& b = _total.system().bundle();
      return homogeneous(_total.setting(), e, b.basis(_ext.E().range_ordinal(e), 0, std::move(c)));
    }

   private:
    static void check(GroupRingElement const& f, GroupoidPtr const& base, CrossedProduct<GroupRingBundle> const& cp) {
      if (f.base != base && !(f.base && *f.base == *base)) {
        fail(ErrorCode::system_mismatch, "element belongs to the other side");
      }
      for (auto const& [x, a] : f.coeff) {
        if (x >= base->size() || !cp.system().bundle().valid_value(base->range_ordinal(x), a)) {
          fail(ErrorCode::system_mismatch, "coefficient outside the fiber");
        }
      }
    }

    Extension                                 _ext;
    std::vector<Id>                           _k;
    std::vector<ScalarDomain>                 _rings;
    std::vector<std::pair<Local, Id>>         _parts;
    std::map<std::pair<Local, Id>, Id>        _compose;
    CrossedProduct<GroupRingBundle>           _total;
    CrossedProduct<GroupRingBundle>           _crossed;
  };

  struct IsoReport {
    std::size_t              basis_pairs    = 0;
    std::size_t              multiplicative = 0;
    std::size_t              additive       = 0;
    bool                     bijective      = false;
    bool                     unit_preserving = false;
    std::vector<std::string> counterexamples;

    bool holds() const noexcept {
      return bijective && unit_preserving && multiplicative == basis_pairs && additive == basis_pairs;
    }

    std::string summary() const {
      return std::to_string(multiplicative) + "/" + std::to_string(basis_pairs) + " basis pairs multiplicative";
    }
  };

  //! Phi on every pair of basis elements delta_s, delta_t of R[E].
  inline IsoReport verify_isomorphism(Bridge const& br) {
    IsoReport   rep;
    auto const& e  = br.extension().E();
    auto const& g  = br.extension().G();
    auto const& cp = br.crossed();
    auto const& b  = cp.system().bundle();
    rep.bijective  = true;
    for (Id s = 0; s < e.size(); ++s) {
      auto const f = br.total_basis(s);
      rep.bijective = rep.bijective && br.psi(br.phi(f)) == f;
    }
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const r = g.range_ordinal(x);
      for (Local n = 0; n < b.fiber(r).group.size(); ++n) {
        auto const f  = cp.delta(x, b.basis(r, n));
        rep.bijective = rep.bijective && br.phi(br.psi(f)) == f;
      }
    }
    rep.unit_preserving = true;
    for (Id u : e.objects()) {
      rep.unit_preserving = rep.unit_preserving && br.phi(br.total().object_unit(u)) == cp.object_unit(br.extension().projection[u]);
    }
    for (Id s = 0; s < e.size(); ++s) {
      for (Id t = 0; t < e.size(); ++t) {
        ++rep.basis_pairs;
        auto const fs = br.total_basis(s), ft = br.total_basis(t);
        if (br.phi(br.total().multiply(fs, ft)) == cp.multiply(br.phi(fs), br.phi(ft))) {
          ++rep.multiplicative;
        } else {
          rep.counterexamples.push_back("(" + e.name(s) + "," + e.name(t) + ")");
        }
        auto const& ts = br.total().setting();
        if (br.phi(add(ts, fs, ft)) == add(cp.setting(), br.phi(fs), br.phi(ft))) {
          ++rep.additive;
        }
      }
    }
    return rep;
  }

  struct FactorizationReport {
    std::size_t              targets = 0;
    std::vector<std::string> mismatches;

    bool holds() const noexcept {
      return mismatches.empty();
    }
  };

  //! {(s,t) in E^(2) : st = n' k(z)} against
  //! {(n k(x), L_x^-1(m) k(y)) : xy = z, n m = n' sigma(x,y)^-1}, set by set.
  inline FactorizationReport factorization_identity(Bridge const& br) {
    auto const&         e  = br.extension().E();
    auto const&         g  = br.extension().G();
    auto const          fs = extension_from_section(br.extension(), br.section());
    auto const&         nb = fs.setting->bundle();
    FactorizationReport rep;
    for (Id z = 0; z < g.size(); ++z) {
      auto const& fz = nb.fiber(g.range_ordinal(z));
      for (Local np = 0; np < fz.size(); ++np) {
        ++rep.targets;
        Id const                      target = br.compose(np, z);
        std::set<std::pair<Id, Id>> lhs, rhs;
        for (Id s = 0; s < e.size(); ++s) {
          for (Id t = 0; t < e.size(); ++t) {
            if (e.product_or_none(s, t) == target) {
              lhs.emplace(s, t);
            }
          }
        }
        for (auto const& [x, y] : g.composable_pairs()) {
          if (g.product(x, y) != z) {
            continue;
          }
          Perm const  linv = invert(fs.L(x));
          Local const sb   = fz.op(np, fz.inverse(fs.sigma(x, y)));
          for (Local n = 0; n < fz.size(); ++n) {
            Local const m = fz.op(fz.inverse(n), sb);
            rhs.emplace(br.compose(n, x), br.compose(linv[m], y));
          }
        }
        if (lhs != rhs) {
          rep.mismatches.push_back(fz.name(np) + " at " + g.name(z));
        }
      }
    }
    return rep;
  }

  struct StarReport {
    std::size_t              checks = 0;
    std::vector<std::string> failures;

    bool holds() const noexcept {
      return failures.empty();
    }
  };

  //! ||Phi(f)||_1 = ||f||_1 and Phi(f*) = Phi(f)* on every basis element
  //! (with coefficients 1 and i) and on `samples` seeded random elements.
  //! Throws NotStarFactorSystem unless every ring is Q(i).
  inline StarReport verify_star_homomorphism(Bridge const& br, std::uint64_t seed = 0, std::size_t samples = 1000) {
    StarStructure const st_e(br.total());
    StarStructure const st_g(br.crossed());
    StarReport          rep;
    auto const&         e     = br.extension().E();
    auto                check = [&](GroupRingElement const& f, std::string const& what) {
      ++rep.checks;
      auto const pf = br.phi(f);
      if (br.phi(st_e.star(f)) != st_g.star(pf)) {
        rep.failures.push_back("star fails on " + what);
      }
      if (!(st_g.norm1(pf) == st_e.norm1(f))) {
        rep.failures.push_back("norm fails on " + what);
      }
    };
    for (Id s = 0; s < e.size(); ++s) {
      check(br.total_basis(s), "d[" + e.name(s) + "]");
      check(br.total_basis(s, Scalar(0, 1)), "i*d[" + e.name(s) + "]");
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
      check(random_element(br.total().setting(), rng), "sample " + std::to_string(i));
    }
    return rep;
  }

  //! For sections k, k2 = n k of one extension, h(x) = delta_{n_x} carries
  //! the first associated system to the second.
  inline std::vector<GroupRingValue> section_change(Extension const&                 ext,
                                                    std::vector<Id> const&           k,
                                                    std::vector<Id> const&           k2,
                                                    std::vector<ScalarDomain> const& rings) {
    check_section(ext, k);
    check_section(ext, k2);
    auto const&                 e       = ext.E();
    auto const&                 g       = ext.G();
    auto const                  domains = rings_per_object(g, rings);
    auto const                  bundle  = GroupRingBundle::over(*ext.kernel, domains);
    std::vector<GroupRingValue> h;
    for (Id x = 0; x < g.size(); ++x) {
      Id const v = e.product(k2[x], e.inverse(k[x]));
      h.push_back(bundle.basis(g.range_ordinal(x), ext.kernel_local[v]));
    }
    return h;
  }

}  // namespace gpdext

#endif  // GPDEXT_BRIDGE_HPP_
