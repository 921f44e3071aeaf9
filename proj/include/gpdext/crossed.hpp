#ifndef GPDEXT_CROSSED_HPP_
#define GPDEXT_CROSSED_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "context.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "ring.hpp"

namespace gpdext {

  //! Pointwise h'(x) h(x) of unit-valued 1-cochains.
  template <typename B>
  std::vector<typename B::Value> multiply_units(RingSetting<B> const&                  s,
                                                std::vector<typename B::Value> const& a,
                                                std::vector<typename B::Value> const& b) {
    std::vector<typename B::Value> out;
    for (Id x = 0; x < s.base().size(); ++x) {
      out.push_back(s.bundle().mul(s.base().range_ordinal(x), a.at(x), b.at(x)));
    }
    return out;
  }

  //! (h.M)_x(n) = h(x) M_x(n) h(x)^-1 and
  //! (h.tau)(x,y) = h(x) M_x(h(y)) tau(x,y) h(xy)^-1. Throws InvalidInput if
  //! h is not a normalized unit-valued 1-cochain or rfs is not valid. Over
  //! group rings h.M must again permute the basis.
  template <typename B>
  RingFactorSystem<B> act_units(std::vector<typename B::Value> const& h, RingFactorSystem<B> const& rfs) {
    auto const& g = rfs.base();
    auto const& b = rfs.bundle();
    if (h.size() != g.size()) {
      fail(ErrorCode::invalid_input, "h has the wrong size");
    }
    if (!check_ring_factor_system(rfs).valid()) {
      fail(ErrorCode::invalid_input, "act_units needs a valid factor system");
    }
    std::vector<typename B::Value> hinv;
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const r = g.range_ordinal(x);
      if (!b.valid_value(r, h[x]) || (g.is_unit(x) && h[x] != b.one(r))) {
        fail(ErrorCode::invalid_input, "h(" + g.name(x) + ") is not admissible");
      }
      auto inv = b.inverse(r, h[x]);
      if (!inv) {
        fail(ErrorCode::invalid_input, "h(" + g.name(x) + ") is not a unit");
      }
      hinv.push_back(std::move(*inv));
    }
    RingFactorSystem<B> out{rfs.setting, {}, {}};
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      auto const        span = b.spanning_set(s);
      Perm              p(span.size());
      for (std::size_t i = 0; i < span.size(); ++i) {
        auto const img = b.mul(r, b.mul(r, h[x], b.apply(rfs.M[x], s, r, span[i])), hinv[x]);
        if constexpr (B::is_table) {
          p[i] = img;
        } else {
          auto const it = std::find_if(img.begin(), img.end(), [](auto const& c) { return !scalar::is_zero(c); });
          Local const at = static_cast<Local>(it - img.begin());
          if (it == img.end() || img != b.basis(r, at)) {
            fail(ErrorCode::invalid_input, "h.M_" + g.name(x) + " does not permute the basis");
          }
          p[i] = at;
        }
      }
      out.M.push_back(std::move(p));
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      Id const          xy = g.product(x, y);
      auto              v  = b.mul(r, h[x], b.apply(rfs.M[x], s, r, h[y]));
      v                    = b.mul(r, b.mul(r, v, rfs.tau_at(x, y)), hinv[xy]);
      out.tau.push_back(std::move(v));
    }
    return out;
  }

  using TableFactorSystem = RingFactorSystem<TableRingBundle>;
  using TableElement      = SectionalElement<TableRingBundle>;

  namespace detail {

    inline engine::TwistedSystem twisted(TableFactorSystem const& rfs) {
      return {rfs.M, rfs.tau};
    }

  }  // namespace detail

  //! h with to' = h.to; psi(a delta_x) = a h(x) delta_x maps the crossed
  //! product of `from` (= h.to) onto that of `to`.
  struct CrossedEquivalence {
    std::vector<Local> h;
    TableFactorSystem  from;
    TableFactorSystem  to;

    TableElement psi(TableElement const& f) const {
      auto const&  g = to.base();
      auto const&  b = to.bundle();
      TableElement out{f.base, {}};
      for (auto const& [x, a] : f.coeff) {
        out.coeff.emplace(x, b.mul(g.range_ordinal(x), a, h[x]));
      }
      return out;
    }
  };

  //! psi is a graded ring isomorphism that is the identity on S_0: checked
  //! on every homogeneous pair built from additive generators of the fibers.
  inline bool verify_graded_iso(CrossedEquivalence const& eq) {
    CrossedProduct<TableRingBundle> const a(eq.from), c(eq.to);
    auto const&                           s = *eq.to.setting;
    auto const&                           g = s.base();
    auto const&                           b = s.bundle();
    std::vector<std::vector<Local>>       gens;
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      gens.push_back(detail::generators(b.fiber(u).additive_group()));
    }
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const r = g.range_ordinal(x);
      if (!b.inverse(r, eq.h[x]) || (g.is_unit(x) && eq.h[x] != b.one(r))) {
        return false;
      }
      for (Local m : gens[r]) {
        if (g.is_unit(x) && eq.psi(a.delta(x, m)) != a.delta(x, m)) {
          return false;
        }
        for (Id y = 0; y < g.size(); ++y) {
          for (Local n : gens[g.range_ordinal(y)]) {
            auto const f = a.delta(x, m), h = a.delta(y, n);
            if (eq.psi(a.multiply(f, h)) != c.multiply(eq.psi(f), eq.psi(h))) {
              return false;
            }
            if (x == y && eq.psi(add(s, f, h)) != add(s, eq.psi(f), eq.psi(h))) {
              return false;
            }
          }
        }
      }
    }
    return true;
  }

  //! Searches C^1(G, R^x) for h with b = h.a. Throws SystemMismatch for
  //! systems over different (G, R) and SearchSpaceTooLarge past the bound.
  inline std::optional<CrossedEquivalence> are_equivalent_crossed(TableFactorSystem const& a,
                                                                  TableFactorSystem const& b,
                                                                  ExecutionContext const&  ctx = {}) {
    if (!a.setting->same_as(*b.setting)) {
      fail(ErrorCode::system_mismatch, "factor systems over different settings");
    }
    for (auto const* s : {&a, &b}) {
      if (!check_ring_factor_system(*s).valid()) {
        fail(ErrorCode::invalid_input, "are_equivalent_crossed needs valid factor systems");
      }
    }
    auto const h = engine::find_equivalence(a.setting->coefficients(), detail::twisted(a),
                                            detail::twisted(b), ctx.bounds);
    if (!h) {
      return std::nullopt;
    }
    CrossedEquivalence out{*h, b, a};
    if (act_units(*h, a) != b || !verify_graded_iso(out)) {
      fail(ErrorCode::invalid_input, "equivalence witness failed verification");
    }
    return out;
  }

  //! Z^2(G, R) orbits under the unit action, grouped by kernel [M].
  inline engine::Classification classify_crossed(RingSettingPtr<TableRingBundle> const& s,
                                                 std::optional<std::vector<Perm>> const& fixed_M = std::nullopt,
                                                 ExecutionContext const&                 ctx     = {}) {
    return engine::classify(s->coefficients(), fixed_M, ctx);
  }

  struct XiObstruction {
    //! xi over the module bundle (Z(R)^x, M).
    Cochain                           xi;
    ModuleBundle                      center;
    bool                              central = false;
    bool                              cocycle = false;
    bool                              trivial = false;
    std::optional<std::vector<Local>> rho;
    std::optional<TableFactorSystem>  repaired;
  };

  //! xi(x,y,z) = M_x(tau(y,z)) tau(x,yz) tau(xy,z)^-1 tau(x,y)^-1 for a pair
  //! satisfying (C1). Throws C1Violated and NotOuter.
  inline XiObstruction xi_obstruction(TableFactorSystem const& partial, ExecutionContext const& ctx = {}) {
    auto const&         c = partial.setting->coefficients();
    engine::Obstruction obs;
    try {
      obs = engine::obstruction(c, detail::twisted(partial), ctx);
    } catch (Error const& e) {
      if (e.code() == ErrorCode::f1_violated) {
        fail(ErrorCode::c1_violated, "(C1) fails");
      }
      throw;
    }
    auto zm = engine::center_module(c, partial.M);
    if (!obs.central) {
      fail(ErrorCode::invalid_input, "xi has a non-central value");
    }
    XiObstruction out{engine::to_central_cochain(c, zm, obs.values, 3), zm};
    out.central = obs.central;
    out.cocycle = obs.cocycle;
    out.trivial = obs.trivial;
    out.rho     = obs.rho;
    if (obs.repaired_sigma) {
      out.repaired = TableFactorSystem{partial.setting, partial.M, *obs.repaired_sigma};
    }
    return out;
  }

  //! (M, tau rho) for rho a 2-cocycle of (Z(R)^x, M) given as ring elements
  //! by pair index. Throws NotCentralUnitCocycle.
  inline TableFactorSystem h2_crossed_action(std::vector<Local> const& rho, TableFactorSystem const& rfs) {
    if (!check_ring_factor_system(rfs).valid()) {
      fail(ErrorCode::invalid_input, "h2_crossed_action needs a valid factor system");
    }
    try {
      auto sys = engine::h2_action(rfs.setting->coefficients(), rho, detail::twisted(rfs));
      return {rfs.setting, std::move(sys.L), std::move(sys.sigma)};
    } catch (Error const& e) {
      if (e.code() == ErrorCode::not_central_cocycle) {
        fail(ErrorCode::not_central_unit_cocycle, e.what());
      }
      throw;
    }
  }

  inline engine::ActionTable h2_crossed_action_table(RingSettingPtr<TableRingBundle> const& s,
                                                     std::vector<Perm> const&               M,
                                                     ExecutionContext const&                ctx = {}) {
    return engine::h2_action_table(s->coefficients(), M, ctx);
  }

  //! Index of a Z/m[N] element in FiniteRing::group_ring(m, N).
  inline Local group_ring_index(BigInt const& m, GroupRingValue const& v) {
    std::size_t const mm = static_cast<std::size_t>(m);
    std::size_t       out = 0;
    for (std::size_t i = v.size(); i-- > 0;) {
      out = out * mm + static_cast<std::size_t>(boost::multiprecision::numerator(v[i].re));
    }
    return static_cast<Local>(out);
  }

  //! The same system with every Z/m[N_u] replaced by its finite ring table.
  //! Throws InvalidInput unless every fiber has Z/m scalars.
  inline TableFactorSystem to_table(RingFactorSystem<GroupRingBundle> const& rfs,
                                    Bounds const&                            bounds = {}) {
    auto const&             b = rfs.bundle();
    std::vector<FiniteRing> rings;
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      auto const& f = b.fiber(u);
      if (f.domain.kind != ScalarKind::zmod) {
        fail(ErrorCode::invalid_input, "table conversion needs Z/m scalars");
      }
      BigInt card = 1;
      for (std::size_t i = 0; i < f.group.size(); ++i) {
        card *= f.domain.modulus;
      }
      check_bound("ring elements", card, BigInt(bounds.max_elements) * bounds.max_elements);
      rings.push_back(FiniteRing::group_ring(static_cast<std::size_t>(f.domain.modulus), f.group));
    }
    auto const&       g = rfs.base();
    auto              s = make_ring_setting(rfs.setting->base_ptr(), TableRingBundle(b.objects(), rings));
    TableFactorSystem out{s, {}, {}};
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const src = g.source_ordinal(x), r = g.range_ordinal(x);
      auto const&       m   = b.fiber(src).domain.modulus;
      Perm              p(rings[src].size());
      GroupRingValue    v = b.zero(src);
      for (Local e = 0; e < p.size(); ++e) {
        std::size_t rest = e;
        for (auto& c : v) {
          c = Scalar(static_cast<long long>(rest % static_cast<std::size_t>(m)));
          rest /= static_cast<std::size_t>(m);
        }
        p[e] = group_ring_index(m, b.apply(rfs.M[x], src, r, v));
      }
      out.M.push_back(std::move(p));
    }
    auto const& pairs = g.composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out.tau.push_back(group_ring_index(b.fiber(g.range_ordinal(pairs[i].first)).domain.modulus, rfs.tau[i]));
    }
    return out;
  }

}  // namespace gpdext

#endif  // GPDEXT_CROSSED_HPP_
