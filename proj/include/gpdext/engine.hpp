#ifndef GPDEXT_ENGINE_HPP_
#define GPDEXT_ENGINE_HPP_

// The classification machinery shared by group extensions and crossed
// products. A coefficient fiber is a finite monoid (a group N_u, or the
// multiplicative monoid of a ring R_u) with its unit group and the central
// units; the "isomorphisms" between fibers are group or ring isomorphisms.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "context.hpp"
#include "error.hpp"
#include "group.hpp"
#include "groupoid.hpp"

namespace gpdext::engine {

  inline constexpr Local no_local = std::numeric_limits<Local>::max();

  struct Fiber {
    std::vector<std::string> names;
    std::vector<Local>       mul;
    //! Addition table for ring fibers; empty for group fibers.
    std::vector<Local> add;
    Local              one = 0;
    //! Element -> inverse, or no_local for non-units.
    std::vector<Local> inverse;
    std::vector<Local> units;
    std::vector<Local> unit_generators;
    std::vector<Local> central_units;
    //! Element -> position in central_units, or no_local.
    std::vector<Local> central_index;
    //! The group of central units; local index i is central_units[i].
    FiniteGroup central_group;

    std::size_t size() const noexcept {
      return names.size();
    }

    Local op(Local a, Local b) const {
      return mul[a * size() + b];
    }

    bool is_unit(Local a) const {
      return inverse[a] != no_local;
    }

    bool is_central_unit(Local a) const {
      return central_index[a] != no_local;
    }

    //! c a c^-1
    Local conjugate(Local c, Local a) const {
      return op(op(c, a), inverse[c]);
    }
  };

  //! Tables of a finite monoid; derives units, inverses, centre and
  //! generators. Throws InvalidInput if the table is not a unital monoid.
  inline Fiber make_fiber(std::vector<std::string> names,
                          std::vector<Local>       mul,
                          std::vector<Local>       add,
                          Local                    one) {
    Fiber        f;
    f.names = std::move(names);
    f.mul   = std::move(mul);
    f.add   = std::move(add);
    f.one   = one;
    std::size_t const n = f.size();
    if (f.mul.size() != n * n || one >= n || (!f.add.empty() && f.add.size() != n * n)) {
      fail(ErrorCode::invalid_input, "malformed fiber tables");
    }
    for (Local a = 0; a < n; ++a) {
      if (f.op(one, a) != a || f.op(a, one) != a) {
        fail(ErrorCode::invalid_input, "fiber one is not a unit element");
      }
    }
    f.inverse.assign(n, no_local);
    for (Local a = 0; a < n; ++a) {
      for (Local b = 0; b < n; ++b) {
        if (f.op(a, b) == one && f.op(b, a) == one) {
          f.inverse[a] = b;
          break;
        }
      }
      if (f.is_unit(a)) {
        f.units.push_back(a);
      }
    }
    f.central_index.assign(n, no_local);
    for (Local c : f.units) {
      bool central = true;
      for (Local a = 0; a < n && central; ++a) {
        central = f.op(c, a) == f.op(a, c);
      }
      if (central) {
        f.central_index[c] = static_cast<Local>(f.central_units.size());
        f.central_units.push_back(c);
      }
    }
    std::vector<bool> in_span(n, false);
    in_span[one] = true;
    std::vector<Local> span{one};
    for (Local u : f.units) {
      if (in_span[u]) {
        continue;
      }
      f.unit_generators.push_back(u);
      for (std::size_t i = 0; i < span.size(); ++i) {
        for (Local g : f.unit_generators) {
          Local const p = f.op(span[i], g);
          if (!in_span[p]) {
            in_span[p] = true;
            span.push_back(p);
          }
        }
      }
    }
    std::size_t const  k = f.central_units.size();
    std::vector<std::string> cnames;
    std::vector<Local>       ctable(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      cnames.push_back(f.names[f.central_units[i]]);
      for (std::size_t j = 0; j < k; ++j) {
        ctable[i * k + j] = f.central_index[f.op(f.central_units[i], f.central_units[j])];
      }
    }
    f.central_group = FiniteGroup::from_table(
        std::move(cnames), std::move(ctable), f.central_index[one]);
    return f;
  }

  inline Fiber fiber_of_group(FiniteGroup const& g) {
    return make_fiber(g.names(), g.table(), {}, g.unit());
  }

  //! Fibers by object ordinal plus, for every ordered pair of objects joined
  //! by an arrow, the sorted list of isomorphisms between their fibers.
  class Coefficients {
   public:
    using IsoFn = std::function<std::vector<Perm>(std::size_t, std::size_t)>;

    Coefficients(GroupoidPtr base, std::vector<Fiber> fibers, IsoFn const& isos)
        : _base(std::move(base)), _fibers(std::move(fibers)) {
      if (_fibers.size() != _base->nr_objects()) {
        fail(ErrorCode::domain_mismatch, "one fiber per object required");
      }
      for (Id x : _base->non_units()) {
        auto const key = std::make_pair(_base->source_ordinal(x), _base->range_ordinal(x));
        if (_isos.count(key) == 0) {
          auto list = isos(key.first, key.second);
          std::sort(list.begin(), list.end());
          _isos.emplace(key, std::move(list));
        }
      }
    }

    Groupoid const& base() const noexcept {
      return *_base;
    }

    GroupoidPtr const& base_ptr() const noexcept {
      return _base;
    }

    Fiber const& fiber(std::size_t ordinal) const {
      return _fibers.at(ordinal);
    }

    Fiber const& range_fiber(Id x) const {
      return _fibers[_base->range_ordinal(x)];
    }

    Fiber const& source_fiber(Id x) const {
      return _fibers[_base->source_ordinal(x)];
    }

    std::vector<Perm> const& iso_candidates(Id x) const {
      return _isos.at({_base->source_ordinal(x), _base->range_ordinal(x)});
    }

    //! |C^1(G, U)|, U the unit bundle.
    BigInt nr_one_cochains() const {
      BigInt n = 1;
      for (Id x : _base->non_units()) {
        n *= range_fiber(x).units.size();
      }
      return n;
    }

    //! |C^1(G, Iso)|.
    BigInt nr_iso_families() const {
      BigInt n = 1;
      for (Id x : _base->non_units()) {
        n *= iso_candidates(x).size();
      }
      return n;
    }

   private:
    GroupoidPtr                                               _base;
    std::vector<Fiber>                                        _fibers;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Perm>> _isos;
  };

  using CoefficientsPtr = std::shared_ptr<Coefficients const>;

  //! (L, sigma): L[x] maps fiber s(x) to fiber r(x); sigma is indexed by
  //! composable pair and takes values in fiber r(x).
  struct TwistedSystem {
    std::vector<Perm>  L;
    std::vector<Local> sigma;

    bool operator==(TwistedSystem const&) const = default;

    //! Serialization used for canonical ordering.
    std::vector<Local> key() const {
      std::vector<Local> k;
      for (auto const& p : L) {
        k.insert(k.end(), p.begin(), p.end());
      }
      k.insert(k.end(), sigma.begin(), sigma.end());
      return k;
    }

    bool operator<(TwistedSystem const& that) const {
      return key() < that.key();
    }
  };

  //! Per-arrow values h(x) in the units of fiber r(x), h(u) = 1.
  using OneCochain = std::vector<Local>;

  inline std::vector<Perm> identity_family(Coefficients const& c) {
    std::vector<Perm> L;
    for (Id x = 0; x < c.base().size(); ++x) {
      L.push_back(identity_perm(c.source_fiber(x).size()));
    }
    return L;
  }

  inline std::vector<Local> unit_sigma(Coefficients const& c) {
    std::vector<Local> s;
    for (auto const& [x, y] : c.base().composable_pairs()) {
      s.push_back(c.range_fiber(x).one);
    }
    return s;
  }

  inline OneCochain unit_one_cochain(Coefficients const& c) {
    OneCochain h;
    for (Id x = 0; x < c.base().size(); ++x) {
      h.push_back(c.range_fiber(x).one);
    }
    return h;
  }

  //! Throws InvalidInput unless h is a normalized unit-valued 1-cochain.
  inline void check_one_cochain(Coefficients const& c, OneCochain const& h) {
    auto const& g = c.base();
    if (h.size() != g.size()) {
      fail(ErrorCode::invalid_input, "1-cochain has the wrong size");
    }
    for (Id x = 0; x < g.size(); ++x) {
      auto const& f = c.range_fiber(x);
      if (h[x] >= f.size() || !f.is_unit(h[x])) {
        fail(ErrorCode::invalid_input, "h(" + g.name(x) + ") is not a unit");
      }
      if (g.is_unit(x) && h[x] != f.one) {
        fail(ErrorCode::invalid_input, "h(" + g.name(x) + ") must be 1");
      }
    }
  }

  inline OneCochain multiply(Coefficients const& c, OneCochain const& a, OneCochain const& b) {
    OneCochain out(a.size());
    for (Id x = 0; x < a.size(); ++x) {
      out[x] = c.range_fiber(x).op(a[x], b[x]);
    }
    return out;
  }

  inline OneCochain inverse(Coefficients const& c, OneCochain const& a) {
    OneCochain out(a.size());
    for (Id x = 0; x < a.size(); ++x) {
      out[x] = c.range_fiber(x).inverse[a[x]];
    }
    return out;
  }

  //! Bijective, preserves multiplication, one and (for rings) addition.
  inline bool is_fiber_iso(Fiber const& a, Fiber const& b, Perm const& p) {
    if (!is_bijection(p, b.size()) || p.size() != a.size() || p[a.one] != b.one) {
      return false;
    }
    for (Local m = 0; m < a.size(); ++m) {
      for (Local n = 0; n < a.size(); ++n) {
        if (p[a.op(m, n)] != b.op(p[m], p[n])) {
          return false;
        }
        if (!a.add.empty() && p[a.add[m * a.size() + n]] != b.add[p[m] * b.size() + p[n]]) {
          return false;
        }
      }
    }
    return true;
  }

  //! Throws StructuralViolation for malformed data: L not an isomorphism,
  //! L_u != id, sigma off its fiber, not a unit, or not normalized.
  inline void check_structure(Coefficients const& c, TwistedSystem const& sys) {
    auto const& g = c.base();
    if (sys.L.size() != g.size() || sys.sigma.size() != g.composable_pairs().size()) {
      fail(ErrorCode::structural_violation, "tables have the wrong size");
    }
    for (Id x = 0; x < g.size(); ++x) {
      auto const& s = c.source_fiber(x);
      if (g.is_unit(x)) {
        if (sys.L[x] != identity_perm(s.size())) {
          fail(ErrorCode::structural_violation, "L_" + g.name(x) + " is not the identity");
        }
      } else if (!is_fiber_iso(s, c.range_fiber(x), sys.L[x])) {
        fail(ErrorCode::structural_violation, "L_" + g.name(x) + " is not an isomorphism");
      }
    }
    auto const& pairs = g.composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y] = pairs[i];
      auto const& f     = c.range_fiber(x);
      std::string const at = "(" + g.name(x) + "," + g.name(y) + ")";
      if (sys.sigma[i] >= f.size() || !f.is_unit(sys.sigma[i])) {
        fail(ErrorCode::structural_violation, "sigma" + at + " is not a unit of its fiber");
      }
      if ((g.is_unit(x) || g.is_unit(y)) && sys.sigma[i] != f.one) {
        fail(ErrorCode::structural_violation, "sigma" + at + " is not normalized");
      }
    }
  }

  struct F1Witness {
    Id    x, y;
    Local n;
  };

  struct F2Witness {
    Id x, y, z;
  };

  inline bool f1_holds_at(Coefficients const&      c,
                          std::vector<Perm> const& L,
                          Id                       x,
                          Id                       y,
                          Local                    s,
                          Local                    n) {
    Id const    xy = c.base().product(x, y);
    auto const& f  = c.range_fiber(x);
    return L[x][L[y][n]] == f.conjugate(s, L[xy][n]);
  }

  //! L_x L_y (n) = sigma(x,y) L_xy(n) sigma(x,y)^-1.
  inline std::vector<F1Witness> f1_violations(Coefficients const& c, TwistedSystem const& sys) {
    std::vector<F1Witness> out;
    auto const&            pairs = c.base().composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y] = pairs[i];
      for (Local n = 0; n < c.source_fiber(y).size(); ++n) {
        if (!f1_holds_at(c, sys.L, x, y, sys.sigma[i], n)) {
          out.push_back({x, y, n});
        }
      }
    }
    return out;
  }

  inline bool f2_holds_at(Coefficients const& c, TwistedSystem const& sys, Id x, Id y, Id z) {
    auto const& g  = c.base();
    auto const& f  = c.range_fiber(x);
    Id const    xy = g.product(x, y), yz = g.product(y, z);
    auto        s  = [&](Id a, Id b) { return sys.sigma[g.pair_index(a, b)]; };
    return f.op(s(x, y), s(xy, z)) == f.op(sys.L[x][s(y, z)], s(x, yz));
  }

  //! sigma(x,y) sigma(xy,z) = L_x(sigma(y,z)) sigma(x,yz).
  inline std::vector<F2Witness> f2_violations(Coefficients const& c, TwistedSystem const& sys) {
    std::vector<F2Witness> out;
    auto const&            g = c.base();
    for (auto const& [x, y] : g.composable_pairs()) {
      for (Id z = 0; z < g.size(); ++z) {
        if (g.composable(y, z) && !f2_holds_at(c, sys, x, y, z)) {
          out.push_back({x, y, z});
        }
      }
    }
    return out;
  }

  inline bool is_valid(Coefficients const& c, TwistedSystem const& sys) {
    return f1_violations(c, sys).empty() && f2_violations(c, sys).empty();
  }

  //! (h.L)_x = h(x) L_x h(x)^-1, (h.sigma)(x,y) = h(x) L_x(h(y)) sigma(x,y) h(xy)^-1.
  inline TwistedSystem act(Coefficients const& c, OneCochain const& h, TwistedSystem const& sys) {
    auto const&   g = c.base();
    TwistedSystem out;
    out.L.resize(g.size());
    for (Id x = 0; x < g.size(); ++x) {
      auto const& f = c.range_fiber(x);
      out.L[x].resize(sys.L[x].size());
      for (Local n = 0; n < sys.L[x].size(); ++n) {
        out.L[x][n] = f.conjugate(h[x], sys.L[x][n]);
      }
    }
    auto const& pairs = g.composable_pairs();
    out.sigma.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y] = pairs[i];
      auto const& f     = c.range_fiber(x);
      Local       v     = f.op(h[x], sys.L[x][h[y]]);
      v                 = f.op(v, sys.sigma[i]);
      out.sigma[i]      = f.op(v, f.inverse[h[g.product(x, y)]]);
    }
    return out;
  }

  //! (h.L) alone; the conjugation action defining kernels.
  inline std::vector<Perm> act_on_family(Coefficients const&      c,
                                         OneCochain const&        h,
                                         std::vector<Perm> const& L) {
    std::vector<Perm> out(L.size());
    for (Id x = 0; x < L.size(); ++x) {
      auto const& f = c.range_fiber(x);
      out[x].resize(L[x].size());
      for (Local n = 0; n < L[x].size(); ++n) {
        out[x][n] = f.conjugate(h[x], L[x][n]);
      }
    }
    return out;
  }

  //! Generators of C^1(G, U): one arrow carrying a generator of its units.
  inline std::vector<OneCochain> one_cochain_generators(Coefficients const& c) {
    std::vector<OneCochain> gens;
    OneCochain const        unit = unit_one_cochain(c);
    for (Id x : c.base().non_units()) {
      for (Local a : c.range_fiber(x).unit_generators) {
        OneCochain h = unit;
        h[x]         = a;
        gens.push_back(std::move(h));
      }
    }
    return gens;
  }

  //! Generators of C^1(G, Z(U)), the stabilizer of any fixed L.
  inline std::vector<OneCochain> central_one_cochain_generators(Coefficients const& c) {
    std::vector<OneCochain> gens;
    OneCochain const        unit = unit_one_cochain(c);
    for (Id x : c.base().non_units()) {
      auto const& f = c.range_fiber(x);
      for (Local a : detail::generators(f.central_group)) {
        OneCochain h = unit;
        h[x]         = f.central_units[a];
        gens.push_back(std::move(h));
      }
    }
    return gens;
  }

  //! Every element of C^1(G, U) in lexicographic order.
  inline std::vector<OneCochain> all_one_cochains(Coefficients const& c, Bounds const& bounds) {
    check_bound("C^1", c.nr_one_cochains(), bounds.max_one_cochains);
    auto const&             nu = c.base().non_units();
    std::vector<OneCochain> out;
    OneCochain              h = unit_one_cochain(c);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == nu.size()) {
        out.push_back(h);
        return;
      }
      for (Local a : c.range_fiber(nu[i]).units) {
        h[nu[i]] = a;
        rec(i + 1);
      }
    };
    rec(0);
    return out;
  }

  //! Per composable pair, the units s with L_x L_y = s L_xy s^-1; the
  //! normalized pairs get {1}. Some set is empty iff L is not outer.
  inline std::vector<std::vector<Local>> twist_domains(Coefficients const&      c,
                                                       std::vector<Perm> const& L) {
    auto const&                     g     = c.base();
    auto const&                     pairs = g.composable_pairs();
    std::vector<std::vector<Local>> out(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y] = pairs[i];
      auto const& f     = c.range_fiber(x);
      if (g.is_unit(x) || g.is_unit(y)) {
        out[i] = {f.one};
        continue;
      }
      for (Local s : f.units) {
        bool ok = true;
        for (Local n = 0; n < c.source_fiber(y).size() && ok; ++n) {
          ok = f1_holds_at(c, L, x, y, s, n);
        }
        if (ok) {
          out[i].push_back(s);
        }
      }
    }
    return out;
  }

  inline bool is_outer(Coefficients const& c, std::vector<Perm> const& L) {
    auto const d = twist_domains(c, L);
    return std::none_of(d.begin(), d.end(), [](auto const& v) { return v.empty(); });
  }

  //! All sigma with (L, sigma) satisfying (F1) and (F2), lexicographically.
  inline std::vector<std::vector<Local>> enumerate_cocycles(Coefficients const&      c,
                                                            std::vector<Perm> const& L,
                                                            ExecutionContext const&  ctx,
                                                            bool first_only = false) {
    auto const& g       = c.base();
    auto const  domains = twist_domains(c, L);
    std::vector<std::vector<Local>> out;
    if (std::any_of(domains.begin(), domains.end(), [](auto const& v) { return v.empty(); })) {
      return out;
    }
    auto const&              pairs = g.composable_pairs();
    std::vector<std::size_t> free;
    std::vector<std::size_t> order(pairs.size(), TupleSpace::npos);
    BigInt                   raw = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!g.is_unit(pairs[i].first) && !g.is_unit(pairs[i].second)) {
        order[i] = free.size();
        free.push_back(i);
        raw *= domains[i].size();
      }
    }
    check_bound("twisted 2-cochains", raw, ctx.bounds.max_cochains);
    TwistedSystem start{L, unit_sigma(c)};
    struct Triple {
      Id x, y, z;
    };
    std::vector<std::vector<Triple>> attached(free.size());
    for (auto const& [x, y] : pairs) {
      if (g.is_unit(x) || g.is_unit(y)) {
        continue;
      }
      for (Id z : g.non_units()) {
        if (!g.composable(y, z)) {
          continue;
        }
        Id const    xy   = g.product(x, y), yz = g.product(y, z);
        std::size_t last = 0;
        for (Id p : {g.pair_index(x, y), g.pair_index(xy, z), g.pair_index(y, z),
                     g.pair_index(x, yz)}) {
          if (order[p] != TupleSpace::npos) {
            last = std::max(last, order[p]);
          }
        }
        attached[last].push_back({x, y, z});
      }
    }
    if (free.empty()) {
      out.push_back(start.sigma);
      return out;
    }
    auto consistent = [&](std::size_t k, TwistedSystem const& sys) {
      for (auto const& t : attached[k]) {
        if (!f2_holds_at(c, sys, t.x, t.y, t.z)) {
          return false;
        }
      }
      return true;
    };
    auto search_from = [&](std::size_t first, bool stop, std::vector<std::vector<Local>>& sink) {
      TwistedSystem sys      = start;
      sys.sigma[free[0]]     = domains[free[0]][first];
      if (!consistent(0, sys)) {
        return;
      }
      std::size_t const        k_max = free.size();
      if (k_max == 1) {
        sink.push_back(sys.sigma);
        return;
      }
      std::vector<std::size_t> next(k_max, 0);
      std::size_t              k = 1;
      while (k > 0) {
        auto const& dom = domains[free[k]];
        if (next[k] == dom.size()) {
          next[k] = 0;
          --k;
          continue;
        }
        sys.sigma[free[k]] = dom[next[k]++];
        if (!consistent(k, sys)) {
          continue;
        }
        if (k + 1 == k_max) {
          sink.push_back(sys.sigma);
          if (stop) {
            return;
          }
        } else {
          ++k;
        }
      }
    };
    std::size_t const width = domains[free[0]].size();
    if (first_only || ctx.workers <= 1) {
      for (std::size_t v = 0; v < width && !(first_only && !out.empty()); ++v) {
        search_from(v, first_only, out);
      }
    } else {
      auto parts = ctx.parallel_map<std::vector<std::vector<Local>>>(width, [&](std::size_t v) {
        std::vector<std::vector<Local>> part;
        search_from(v, false, part);
        return part;
      });
      for (auto& p : parts) {
        out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
      }
    }
    // Domain lists are sorted, so the search order is lexicographic.
    return out;
  }

  //! Every family L in C^1(G, Iso) with L_u = id, lexicographically.
  inline std::vector<std::vector<Perm>> enumerate_iso_families(Coefficients const& c,
                                                               Bounds const&       bounds) {
    check_bound("C^1(G, Iso)", c.nr_iso_families(), bounds.max_iso_families);
    auto const&                    nu = c.base().non_units();
    std::vector<std::vector<Perm>> out;
    std::vector<Perm>              L = identity_family(c);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == nu.size()) {
        out.push_back(L);
        return;
      }
      for (auto const& p : c.iso_candidates(nu[i])) {
        L[nu[i]] = p;
        rec(i + 1);
      }
    };
    rec(0);
    return out;
  }

  //! Forward closure: orbit ids for `items` (sorted, closed under the
  //! generators). Orbit 0 contains items[0]; each orbit's least item comes
  //! first in item order, so the representative is the first member.
  template <typename T, typename Apply>
  std::vector<std::size_t> orbit_partition(std::vector<T> const&          items,
                                           std::vector<OneCochain> const& gens,
                                           Apply&&                        apply) {
    std::map<T, std::size_t> pos;
    for (std::size_t i = 0; i < items.size(); ++i) {
      pos.emplace(items[i], i);
    }
    std::size_t const        unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> orbit(items.size(), unset);
    std::size_t              nr_orbits = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (orbit[i] != unset) {
        continue;
      }
      orbit[i]                       = nr_orbits;
      std::vector<std::size_t> stack = {i};
      while (!stack.empty()) {
        std::size_t const j = stack.back();
        stack.pop_back();
        for (auto const& h : gens) {
          auto it = pos.find(apply(h, items[j]));
          if (it == pos.end()) {
            fail(ErrorCode::invalid_input, "orbit leaves the enumerated set");
          }
          if (orbit[it->second] == unset) {
            orbit[it->second] = nr_orbits;
            stack.push_back(it->second);
          }
        }
      }
      ++nr_orbits;
    }
    return orbit;
  }

  //! h with b = h.a, found by a breadth-first walk of the orbit of a. The
  //! walk is bounded by |C^1|.
  inline std::optional<OneCochain> find_equivalence(Coefficients const&  c,
                                                    TwistedSystem const& a,
                                                    TwistedSystem const& b,
                                                    Bounds const&        bounds) {
    check_bound("C^1", c.nr_one_cochains(), bounds.max_one_cochains);
    auto const gens = one_cochain_generators(c);
    std::map<TwistedSystem, OneCochain> seen;
    seen.emplace(a, unit_one_cochain(c));
    std::vector<TwistedSystem> frontier{a};
    if (a == b) {
      return seen.at(a);
    }
    while (!frontier.empty()) {
      std::vector<TwistedSystem> next;
      for (auto const& s : frontier) {
        OneCochain const h = seen.at(s);
        for (auto const& gen : gens) {
          TwistedSystem t = act(c, gen, s);
          if (seen.count(t) != 0) {
            continue;
          }
          OneCochain ht = multiply(c, gen, h);
          if (t == b) {
            return ht;
          }
          seen.emplace(t, std::move(ht));
          next.push_back(std::move(t));
        }
      }
      frontier = std::move(next);
    }
    return std::nullopt;
  }

  //! (Z(U), L) as a module bundle; fiber local i is central_units[i].
  inline ModuleBundle center_module(Coefficients const& c, std::vector<Perm> const& L) {
    auto const&              g = c.base();
    std::vector<std::string> objects;
    std::vector<FiniteGroup> fibers;
    for (Id u : g.objects()) {
      objects.push_back(g.name(u));
      fibers.push_back(c.fiber(g.object_ordinal(u)).central_group);
    }
    std::vector<Perm> action;
    for (Id x = 0; x < g.size(); ++x) {
      auto const& s = c.source_fiber(x);
      auto const& r = c.range_fiber(x);
      Perm        p(s.central_units.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        Local const img = r.central_index[L[x][s.central_units[i]]];
        if (img == no_local) {
          fail(ErrorCode::structural_violation, "L_" + g.name(x) + " moves the centre");
        }
        p[i] = img;
      }
      action.push_back(std::move(p));
    }
    return ModuleBundle(c.base_ptr(),
                        share(GroupBundle(std::move(objects), std::move(fibers))),
                        std::move(action));
  }

  //! Central 2-cochain (as fiber elements, by pair index) to a Cochain over
  //! the center module, and back.
  inline Cochain to_central_cochain(Coefficients const&       c,
                                    ModuleBundle const&       z,
                                    std::vector<Local> const& values,
                                    std::size_t               degree) {
    auto const& t = z.tuples(degree);
    Cochain     out{c.base_ptr(), degree, std::vector<Local>(t.size())};
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto const& f   = c.fiber(z.value_fiber(degree, i));
      Local const ci  = f.central_index[values[i]];
      if (ci == no_local) {
        fail(ErrorCode::not_central_cocycle, "value is not a central unit");
      }
      out.values[i] = ci;
    }
    return out;
  }

  inline std::vector<Local> from_central_cochain(Coefficients const& c,
                                                 ModuleBundle const& z,
                                                 Cochain const&      h) {
    std::vector<Local> out(h.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = c.fiber(z.value_fiber(h.degree, i)).central_units[h.values[i]];
    }
    return out;
  }

  //! Pointwise sigma^-1 sigma' on composable pairs; the pair order of
  //! Groupoid::composable_pairs coincides with TupleSpace degree 2.
  inline std::vector<Local> quotient(Coefficients const&       c,
                                     std::vector<Local> const& a,
                                     std::vector<Local> const& b) {
    auto const&        pairs = c.base().composable_pairs();
    std::vector<Local> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto const& f = c.range_fiber(pairs[i].first);
      out[i]        = f.op(f.inverse[a[i]], b[i]);
    }
    return out;
  }

  inline std::vector<Local> pointwise(Coefficients const&       c,
                                      std::vector<Local> const& a,
                                      std::vector<Local> const& b) {
    auto const&        pairs = c.base().composable_pairs();
    std::vector<Local> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = c.range_fiber(pairs[i].first).op(a[i], b[i]);
    }
    return out;
  }

  struct Obstruction {
    //! chi(x,y,z) as fiber elements, indexed by composable triple.
    std::vector<Local> values;
    bool               central = false;
    bool               cocycle = false;
    bool               trivial = false;
    //! When trivial: rho with (L, sigma rho) a full system, and that sigma.
    std::optional<std::vector<Local>> rho;
    std::optional<std::vector<Local>> repaired_sigma;
  };

  //! chi(x,y,z) = L_x(sigma(y,z)) sigma(x,yz) sigma(xy,z)^-1 sigma(x,y)^-1.
  inline std::vector<Local> chi_values(Coefficients const& c, TwistedSystem const& sys) {
    auto const& g = c.base();
    TupleSpace  t3(g, 3);
    std::vector<Local> out(t3.size());
    auto s = [&](Id a, Id b) { return sys.sigma[g.pair_index(a, b)]; };
    for (std::size_t i = 0; i < t3.size(); ++i) {
      Id const    x = t3.at(i, 0), y = t3.at(i, 1), z = t3.at(i, 2);
      auto const& f = c.range_fiber(x);
      Id const    xy = g.product(x, y), yz = g.product(y, z);
      Local       v  = f.op(sys.L[x][s(y, z)], s(x, yz));
      v              = f.op(v, f.inverse[s(xy, z)]);
      out[i]         = f.op(v, f.inverse[s(x, y)]);
    }
    return out;
  }

  //! Requires (F1) only. Throws NotOuter if L admits no (F1) partner, and
  //! F1Violated if sigma is not one.
  inline Obstruction obstruction(Coefficients const&     c,
                                 TwistedSystem const&    sys,
                                 ExecutionContext const& ctx = {}) {
    check_structure(c, sys);
    if (!is_outer(c, sys.L)) {
      fail(ErrorCode::not_outer, "no 2-cochain satisfies the twisted action condition");
    }
    if (!f1_violations(c, sys).empty()) {
      fail(ErrorCode::f1_violated, "the twisted action condition fails");
    }
    Obstruction out;
    out.values = chi_values(c, sys);
    auto const  zm = center_module(c, sys.L);
    auto const& t3 = zm.tuples(3);
    out.central    = true;
    for (std::size_t i = 0; i < t3.size(); ++i) {
      out.central = out.central && c.range_fiber(t3.at(i, 0)).is_central_unit(out.values[i]);
    }
    if (!out.central) {
      return out;
    }
    Cochain const chi = to_central_cochain(c, zm, out.values, 3);
    out.cocycle       = is_normalized(zm, chi) && is_cocycle(zm, chi);
    if (!out.cocycle) {
      return out;
    }
    auto witness = is_coboundary(zm, chi, ctx);
    out.trivial  = witness.has_value();
    if (witness) {
      auto const rho      = from_central_cochain(c, zm, pointwise_inverse(zm, *witness));
      out.repaired_sigma  = pointwise(c, sys.sigma, rho);
      out.rho             = rho;
      TwistedSystem fixed{sys.L, *out.repaired_sigma};
      if (!is_valid(c, fixed)) {
        fail(ErrorCode::invalid_input, "repaired system failed verification");
      }
    }
    return out;
  }

  //! (L, sigma rho). Throws NotCentralCocycle unless rho is a central
  //! normalized 2-cocycle for (Z(U), L).
  inline TwistedSystem h2_action(Coefficients const&       c,
                                 std::vector<Local> const& rho,
                                 TwistedSystem const&      sys) {
    auto const zm = center_module(c, sys.L);
    if (rho.size() != sys.sigma.size()) {
      fail(ErrorCode::not_central_cocycle, "rho has the wrong size");
    }
    Cochain const z = to_central_cochain(c, zm, rho, 2);
    if (!is_normalized(zm, z) || !is_cocycle(zm, z)) {
      fail(ErrorCode::not_central_cocycle, "rho is not a normalized 2-cocycle");
    }
    return {sys.L, pointwise(c, sys.sigma, rho)};
  }

  struct ExtClass {
    TwistedSystem representative;
    std::size_t   orbit_size = 0;
    std::size_t   kernel     = 0;
  };

  struct Kernel {
    std::vector<Perm> representative;
    //! Number of families in the conjugation orbit.
    std::size_t              nr_families = 0;
    std::vector<std::size_t> classes;
    std::size_t              h2_order = 0;
    bool                     obstruction_trivial = false;
  };

  struct Classification {
    std::vector<Kernel>   kernels;
    std::vector<ExtClass> classes;
    std::size_t           nr_cocycles    = 0;
    std::size_t           nr_families    = 0;
    BigInt                nr_one_cochains = 0;
  };

  namespace detail {

    inline std::vector<std::size_t> family_orbits(Coefficients const&                   c,
                                                  std::vector<std::vector<Perm>> const& families) {
      return orbit_partition(families, one_cochain_generators(c), [&](auto const& h, auto const& L) {
        return act_on_family(c, h, L);
      });
    }

    inline Kernel kernel_summary(Coefficients const&      c,
                                 std::vector<Perm> const& L,
                                 std::size_t              nr_families,
                                 ExecutionContext const&  ctx) {
      Kernel k;
      k.representative = L;
      k.nr_families    = nr_families;
      auto const zm    = center_module(c, L);
      k.h2_order       = cohomology_group(zm, 2, ctx).order();
      auto const doms  = twist_domains(c, L);
      TwistedSystem partial{L, {}};
      for (auto const& d : doms) {
        partial.sigma.push_back(d.front());
      }
      k.obstruction_trivial = obstruction(c, partial, ctx).trivial;
      return k;
    }

  }  // namespace detail

  //! Ext(G, N) by forward closure over all valid systems. With `fixed`, only
  //! systems with that L are enumerated and orbits are taken under the
  //! stabilizer C^1(G, Z(U)).
  inline Classification classify(Coefficients const&                     c,
                                 std::optional<std::vector<Perm>> const& fixed,
                                 ExecutionContext const&                 ctx = {}) {
    Classification out;
    out.nr_one_cochains = c.nr_one_cochains();
    check_bound("C^1", out.nr_one_cochains, ctx.bounds.max_one_cochains);
    std::vector<std::vector<Perm>> families;
    if (fixed) {
      TwistedSystem probe{*fixed, unit_sigma(c)};
      check_structure(c, probe);
      families.push_back(*fixed);
    } else {
      for (auto& L : enumerate_iso_families(c, ctx.bounds)) {
        if (is_outer(c, L)) {
          families.push_back(std::move(L));
        }
      }
    }
    out.nr_families = families.size();
    if (families.empty()) {
      return out;
    }
    std::vector<std::size_t> fam_orbit;
    std::vector<std::size_t> fam_size;
    if (fixed) {
      fam_orbit = {0};
      if (is_outer(c, *fixed)) {
        // Count the conjugates of L by closure from L alone.
        std::set<std::vector<Perm>> seen{*fixed};
        std::vector<std::vector<Perm>> frontier{*fixed};
        auto const gens = one_cochain_generators(c);
        while (!frontier.empty()) {
          std::vector<std::vector<Perm>> next;
          for (auto const& L : frontier) {
            for (auto const& h : gens) {
              auto M = act_on_family(c, h, L);
              if (seen.insert(M).second) {
                next.push_back(std::move(M));
              }
            }
          }
          frontier = std::move(next);
        }
        fam_size = {seen.size()};
      } else {
        return out;
      }
    } else {
      fam_orbit = detail::family_orbits(c, families);
      fam_size.assign(*std::max_element(fam_orbit.begin(), fam_orbit.end()) + 1, 0);
      for (std::size_t o : fam_orbit) {
        ++fam_size[o];
      }
    }
    std::vector<std::size_t> kernel_first(fam_size.size(), families.size());
    for (std::size_t i = families.size(); i-- > 0;) {
      kernel_first[fam_orbit[i]] = i;
    }
    out.kernels = ctx.parallel_map<Kernel>(fam_size.size(), [&](std::size_t k) {
      return detail::kernel_summary(c, families[kernel_first[k]], fam_size[k], ctx);
    });
    auto per_family = ctx.parallel_map<std::vector<std::vector<Local>>>(
        families.size(), [&](std::size_t i) {
          ExecutionContext inner = ctx;
          inner.workers          = 1;
          return enumerate_cocycles(c, families[i], inner);
        });
    std::vector<TwistedSystem> systems;
    std::vector<std::size_t>   system_kernel;
    for (std::size_t i = 0; i < families.size(); ++i) {
      for (auto& s : per_family[i]) {
        systems.push_back({families[i], std::move(s)});
      }
    }
    std::sort(systems.begin(), systems.end());
    out.nr_cocycles  = systems.size();
    auto const gens  = fixed ? central_one_cochain_generators(c) : one_cochain_generators(c);
    auto const orbit = orbit_partition(systems, gens, [&](auto const& h, auto const& s) {
      return act(c, h, s);
    });
    std::map<std::vector<Perm>, std::size_t> family_index;
    for (std::size_t i = 0; i < families.size(); ++i) {
      family_index.emplace(families[i], i);
    }
    for (std::size_t i = 0; i < systems.size(); ++i) {
      if (orbit[i] == out.classes.size()) {
        std::size_t const k = fam_orbit[family_index.at(systems[i].L)];
        out.classes.push_back({systems[i], 0, k});
        out.kernels[k].classes.push_back(orbit[i]);
      }
      ++out.classes[orbit[i]].orbit_size;
    }
    return out;
  }

  //! The action of H^2(G, Z(U))_L on the fixed-L classes: table[i][j] is the
  //! class of (L, sigma_j rho_i).
  struct ActionTable {
    std::size_t                           h2_order  = 0;
    std::size_t                           ext_order = 0;
    std::vector<std::vector<std::size_t>> table;

    bool is_latin_square() const {
      if (h2_order != ext_order) {
        return false;
      }
      for (std::size_t i = 0; i < h2_order; ++i) {
        std::set<std::size_t> row(table[i].begin(), table[i].end());
        if (row.size() != ext_order) {
          return false;
        }
      }
      for (std::size_t j = 0; j < ext_order; ++j) {
        std::set<std::size_t> col;
        for (std::size_t i = 0; i < h2_order; ++i) {
          col.insert(table[i][j]);
        }
        if (col.size() != h2_order) {
          return false;
        }
      }
      return true;
    }
  };

  inline ActionTable h2_action_table(Coefficients const&      c,
                                     std::vector<Perm> const& L,
                                     ExecutionContext const&  ctx = {}) {
    auto const  fixed = classify(c, L, ctx);
    auto const  zm    = center_module(c, L);
    auto const  h2    = cohomology_group(zm, 2, ctx);
    ActionTable out;
    out.h2_order  = h2.order();
    out.ext_order = fixed.classes.size();
    // Class lookup for every fixed-L cocycle.
    std::vector<TwistedSystem> systems;
    for (auto& s : enumerate_cocycles(c, L, ctx)) {
      systems.push_back({L, std::move(s)});
    }
    std::sort(systems.begin(), systems.end());
    auto const orbit = orbit_partition(systems, central_one_cochain_generators(c),
                                       [&](auto const& h, auto const& s) { return act(c, h, s); });
    std::map<TwistedSystem, std::size_t> class_of;
    for (std::size_t i = 0; i < systems.size(); ++i) {
      class_of.emplace(systems[i], orbit[i]);
    }
    for (auto const& r : h2.representatives) {
      auto const                rho = from_central_cochain(c, zm, r);
      std::vector<std::size_t> row;
      for (auto const& cls : fixed.classes) {
        row.push_back(class_of.at(h2_action(c, rho, cls.representative)));
      }
      out.table.push_back(std::move(row));
    }
    return out;
  }

}  // namespace gpdext::engine

#endif  // GPDEXT_ENGINE_HPP_
