#ifndef GPDEXT_COHOMOLOGY_HPP_
#define GPDEXT_COHOMOLOGY_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bundle.hpp"
#include "context.hpp"
#include "error.hpp"
#include "group.hpp"
#include "groupoid.hpp"

namespace gpdext {

  //! The composable n-tuples of a groupoid in lexicographic order. Degree 0
  //! is the object set: tuple i is the single object objects()[i].
  class TupleSpace {
   public:
    TupleSpace() = default;

    TupleSpace(Groupoid const& g, std::size_t n) : _degree(n), _base(g.size()) {
      if (n == 0) {
        for (Id u : g.objects()) {
          push({u});
        }
        _width = 1;
        return;
      }
      _width = n;
      std::vector<Id> t(n);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
          push(t);
          return;
        }
        for (Id x = 0; x < g.size(); ++x) {
          if (i == 0 || g.source(t[i - 1]) == g.range(x)) {
            t[i] = x;
            rec(i + 1);
          }
        }
      };
      rec(0);
      for (std::size_t i = 0; i < size(); ++i) {
        bool unit = false;
        for (std::size_t j = 0; j < n; ++j) {
          unit = unit || g.is_unit(at(i, j));
        }
        _has_unit.push_back(unit);
      }
    }

    std::size_t degree() const noexcept {
      return _degree;
    }

    std::size_t size() const noexcept {
      return _width == 0 ? 0 : _flat.size() / _width;
    }

    Id at(std::size_t i, std::size_t j) const {
      return _flat[i * _width + j];
    }

    std::vector<Id> tuple(std::size_t i) const {
      return {_flat.begin() + i * _width, _flat.begin() + (i + 1) * _width};
    }

    //! Position of a tuple, or npos when it is not composable.
    std::size_t index(std::vector<Id> const& t) const {
      auto it = _index.find(key(t));
      return it == _index.end() ? npos : it->second;
    }

    //! Normalization forces the value at i to be a unit.
    bool has_unit(std::size_t i) const {
      return _degree > 0 && _has_unit[i];
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

   private:
    std::uint64_t key(std::vector<Id> const& t) const {
      std::uint64_t k = 0;
      for (Id x : t) {
        k = k * (_base + 1) + x + 1;
      }
      return k;
    }

    void push(std::vector<Id> const& t) {
      _index.emplace(key(t), size());
      _flat.insert(_flat.end(), t.begin(), t.end());
    }

    std::size_t                                  _degree = 0;
    std::size_t                                  _base   = 0;
    std::size_t                                  _width  = 0;
    std::vector<Id>                              _flat;
    std::vector<bool>                            _has_unit;
    std::unordered_map<std::uint64_t, std::size_t> _index;
  };

  namespace detail {

    //! call_once-guarded tuple spaces shared by copies of a ModuleBundle.
    struct TupleCache {
      static constexpr std::size_t     max_degree = 6;
      std::array<std::once_flag, max_degree> once;
      std::array<TupleSpace, max_degree>     spaces;

      TupleSpace const& get(Groupoid const& g, std::size_t n) {
        if (n >= max_degree) {
          fail(ErrorCode::invalid_input, "cochain degree too large");
        }
        std::call_once(once[n], [&] { spaces[n] = TupleSpace(g, n); });
        return spaces[n];
      }
    };

  }  // namespace detail

  //! An abelian group bundle A (written multiplicatively) with an action
  //! L_x : A_{s(x)} -> A_{r(x)}.
  class ModuleBundle {
   public:
    //! Throws InvalidBundle unless every fiber is abelian, L_u = id,
    //! L_x L_y = L_xy and each L_x is an isomorphism.
    ModuleBundle(GroupoidPtr base, GroupBundlePtr bundle, std::vector<Perm> action)
        : _base(std::move(base)),
          _bundle(std::move(bundle)),
          _action(std::move(action)),
          _cache(std::make_shared<detail::TupleCache>()) {
      auto const& g = *_base;
      _bundle->check_over(g);
      if (!_bundle->is_abelian()) {
        fail(ErrorCode::invalid_bundle, "module fibers must be abelian");
      }
      if (_action.size() != g.size()) {
        fail(ErrorCode::invalid_bundle, "one action map per element required");
      }
      for (Id x = 0; x < g.size(); ++x) {
        auto const& a = fiber(g.source_ordinal(x));
        auto const& b = fiber(g.range_ordinal(x));
        if (!is_isomorphism(a, b, _action[x])) {
          fail(ErrorCode::invalid_bundle, "L_" + g.name(x) + " is not an isomorphism");
        }
        if (g.is_unit(x) && _action[x] != identity_perm(a.size())) {
          fail(ErrorCode::invalid_bundle, "L_" + g.name(x) + " must be the identity");
        }
      }
      for (auto const& [x, y] : g.composable_pairs()) {
        if (compose(_action[x], _action[y]) != _action[g.product(x, y)]) {
          fail(ErrorCode::invalid_bundle,
               "L_" + g.name(x) + " L_" + g.name(y) + " differs from L_"
                   + g.name(g.product(x, y)));
        }
      }
    }

    //! L_x = id on every arrow; requires equal fibers along arrows.
    static ModuleBundle trivial_action(GroupoidPtr base, GroupBundlePtr bundle) {
      std::vector<Perm> action;
      for (Id x = 0; x < base->size(); ++x) {
        auto const& a = bundle->fiber(base->source_ordinal(x));
        auto const& b = bundle->fiber(base->range_ordinal(x));
        if (!(a == b)) {
          fail(ErrorCode::invalid_bundle, "trivial action needs equal fibers along arrows");
        }
        action.push_back(identity_perm(a.size()));
      }
      return ModuleBundle(std::move(base), std::move(bundle), std::move(action));
    }

    Groupoid const& base() const noexcept {
      return *_base;
    }

    GroupoidPtr const& base_ptr() const noexcept {
      return _base;
    }

    GroupBundle const& bundle() const noexcept {
      return *_bundle;
    }

    FiniteGroup const& fiber(std::size_t ordinal) const {
      return _bundle->fiber(ordinal);
    }

    Perm const& action(Id x) const {
      return _action[x];
    }

    std::vector<Perm> const& actions() const noexcept {
      return _action;
    }

    TupleSpace const& tuples(std::size_t n) const {
      return _cache->get(*_base, n);
    }

    //! Ordinal of the fiber holding the value at tuple i of degree n.
    std::size_t value_fiber(std::size_t n, std::size_t i) const {
      auto const& t = tuples(n);
      return n == 0 ? i : _base->range_ordinal(t.at(i, 0));
    }

   private:
    GroupoidPtr                         _base;
    GroupBundlePtr                      _bundle;
    std::vector<Perm>                   _action;
    std::shared_ptr<detail::TupleCache> _cache;
  };

  //! A map G^(n) -> A with values in A_{r(x_1)}; values[i] is a local index
  //! into that fiber, i running over tuples(n).
  struct Cochain {
    GroupoidPtr        base;
    std::size_t        degree = 0;
    std::vector<Local> values;

    bool operator==(Cochain const& that) const {
      return degree == that.degree && values == that.values;
    }

    bool operator<(Cochain const& that) const {
      return std::tie(degree, values) < std::tie(that.degree, that.values);
    }
  };

  inline Cochain unit_cochain(ModuleBundle const& m, std::size_t n) {
    auto const& t = m.tuples(n);
    Cochain     c{m.base_ptr(), n, {}};
    for (std::size_t i = 0; i < t.size(); ++i) {
      c.values.push_back(m.fiber(m.value_fiber(n, i)).unit());
    }
    return c;
  }

  inline void check_domain(ModuleBundle const& m, Cochain const& h) {
    if (h.base != m.base_ptr() && !(h.base && *h.base == m.base())) {
      fail(ErrorCode::domain_mismatch, "cochain lives on another groupoid");
    }
    if (h.values.size() != m.tuples(h.degree).size()) {
      fail(ErrorCode::domain_mismatch, "cochain table has the wrong size");
    }
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      if (h.values[i] >= m.fiber(m.value_fiber(h.degree, i)).size()) {
        fail(ErrorCode::domain_mismatch, "cochain value out of range");
      }
    }
  }

  //! Values at tuples containing a unit are fiber units.
  inline bool is_normalized(ModuleBundle const& m, Cochain const& h) {
    auto const& t = m.tuples(h.degree);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.has_unit(i) && h.values[i] != m.fiber(m.value_fiber(h.degree, i)).unit()) {
        return false;
      }
    }
    return true;
  }

  //! Pointwise product; an abelian group structure on C^n.
  inline Cochain pointwise_product(ModuleBundle const& m, Cochain const& a, Cochain const& b) {
    Cochain c = a;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      c.values[i] = m.fiber(m.value_fiber(a.degree, i)).op(a.values[i], b.values[i]);
    }
    return c;
  }

  inline Cochain pointwise_inverse(ModuleBundle const& m, Cochain const& a) {
    Cochain c = a;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      c.values[i] = m.fiber(m.value_fiber(a.degree, i)).inverse(a.values[i]);
    }
    return c;
  }

  namespace detail {

    //! One factor of d^n h at a fixed (n+1)-tuple.
    struct Face {
      std::size_t pos;
      bool        apply_action;
      bool        inverted;
    };

    //! d^n h at tuple t, as the list of faces whose product it is. Faces at
    //! tuples containing a unit are kept; their value is read from h.
    inline std::vector<Face> faces(ModuleBundle const& m, std::size_t n, std::size_t t) {
      auto const&       g   = m.base();
      auto const&       tn  = m.tuples(n);
      auto const&       tn1 = m.tuples(n + 1);
      std::vector<Face> out;
      if (n == 0) {
        Id const x = tn1.at(t, 0);
        out.push_back({g.source_ordinal(x), true, false});
        out.push_back({g.range_ordinal(x), false, true});
        return out;
      }
      auto const      tup = tn1.tuple(t);
      std::vector<Id> face(tup.begin() + 1, tup.end());
      out.push_back({tn.index(face), true, false});
      for (std::size_t i = 1; i <= n; ++i) {
        face.assign(tup.begin(), tup.begin() + (i - 1));
        face.push_back(g.product(tup[i - 1], tup[i]));
        face.insert(face.end(), tup.begin() + (i + 1), tup.end());
        out.push_back({tn.index(face), false, i % 2 == 1});
      }
      face.assign(tup.begin(), tup.end() - 1);
      out.push_back({tn.index(face), false, (n + 1) % 2 == 1});
      return out;
    }

    inline Local evaluate(ModuleBundle const&      m,
                          std::size_t              n,
                          std::size_t              t,
                          std::vector<Face> const& fs,
                          std::vector<Local> const& h) {
      Id const    x1  = m.tuples(n + 1).at(t, 0);
      auto const& fib = m.fiber(m.value_fiber(n + 1, t));
      Local       acc = fib.unit();
      for (auto const& f : fs) {
        Local v = h[f.pos];
        if (f.apply_action) {
          v = m.action(x1)[v];
        }
        if (f.inverted) {
          v = fib.inverse(v);
        }
        acc = fib.op(acc, v);
      }
      return acc;
    }

  }  // namespace detail

  //! d^n_L h. Inner faces carry the sign (-1)^i.
  inline Cochain coboundary(ModuleBundle const& m, Cochain const& h) {
    check_domain(m, h);
    std::size_t const n  = h.degree;
    auto const&       tn = m.tuples(n + 1);
    Cochain           out{m.base_ptr(), n + 1, std::vector<Local>(tn.size())};
    for (std::size_t t = 0; t < tn.size(); ++t) {
      out.values[t] = detail::evaluate(m, n, t, detail::faces(m, n, t), h.values);
    }
    return out;
  }

  namespace detail {

    //! All normalized h of degree n with d^n h = target, in lexicographic
    //! order of value tables, or only the first one when `first_only`.
    class CoboundarySolver {
     public:
      CoboundarySolver(ModuleBundle const& m, std::size_t n, Cochain const& target)
          : _m(m), _n(n), _target(target.values) {
        auto const& tn = m.tuples(n);
        _start         = unit_cochain(m, n).values;
        std::vector<std::size_t> order(tn.size(), TupleSpace::npos);
        for (std::size_t i = 0; i < tn.size(); ++i) {
          if (!tn.has_unit(i)) {
            order[i] = _free.size();
            _free.push_back(i);
          }
        }
        _attached.resize(_free.size());
        auto const& tn1 = m.tuples(n + 1);
        for (std::size_t t = 0; t < tn1.size(); ++t) {
          auto        fs   = faces(m, n, t);
          std::size_t last = TupleSpace::npos;
          for (auto const& f : fs) {
            std::size_t const o = order[f.pos];
            if (o != TupleSpace::npos && (last == TupleSpace::npos || o > last)) {
              last = o;
            }
          }
          if (last == TupleSpace::npos) {
            _fixed.push_back({t, std::move(fs)});
          } else {
            _attached[last].push_back({t, std::move(fs)});
          }
        }
      }

      BigInt raw_size() const {
        BigInt s = 1;
        for (std::size_t p : _free) {
          s *= _m.fiber(_m.value_fiber(_n, p)).size();
        }
        return s;
      }

      std::vector<std::vector<Local>> solve(ExecutionContext const& ctx, bool first_only) const {
        check_bound("normalized " + std::to_string(_n) + "-cochains",
                    raw_size(),
                    ctx.bounds.max_cochains);
        std::vector<std::vector<Local>> out;
        for (auto const& c : _fixed) {
          if (evaluate(_m, _n, c.tuple, c.faces, _start) != _target[c.tuple]) {
            return out;
          }
        }
        if (_free.empty()) {
          out.push_back(_start);
          return out;
        }
        std::size_t const width = fiber_size(0);
        if (first_only || ctx.workers <= 1) {
          for (Local v = 0; v < width && !(first_only && !out.empty()); ++v) {
            search_from(v, first_only, out);
          }
          return out;
        }
        auto parts = ctx.parallel_map<std::vector<std::vector<Local>>>(
            width, [&](std::size_t v) {
              std::vector<std::vector<Local>> part;
              search_from(static_cast<Local>(v), false, part);
              return part;
            });
        for (auto& p : parts) {
          out.insert(out.end(),
                     std::make_move_iterator(p.begin()),
                     std::make_move_iterator(p.end()));
        }
        return out;
      }

     private:
      struct Constraint {
        std::size_t       tuple;
        std::vector<Face> faces;
      };

      std::size_t fiber_size(std::size_t k) const {
        return _m.fiber(_m.value_fiber(_n, _free[k])).size();
      }

      bool consistent(std::size_t k, std::vector<Local> const& h) const {
        for (auto const& c : _attached[k]) {
          if (evaluate(_m, _n, c.tuple, c.faces, h) != _target[c.tuple]) {
            return false;
          }
        }
        return true;
      }

      void search_from(Local first,
                       bool  first_only,
                       std::vector<std::vector<Local>>& out) const {
        std::vector<Local> h = _start;
        h[_free[0]]          = first;
        if (!consistent(0, h)) {
          return;
        }
        std::size_t const        k_max = _free.size();
        std::vector<std::size_t> next(k_max, 0);
        std::size_t              k = 1;
        if (k == k_max) {
          out.push_back(h);
          return;
        }
        while (k > 0) {
          if (next[k] == fiber_size(k)) {
            next[k]     = 0;
            h[_free[k]] = _start[_free[k]];
            --k;
            continue;
          }
          h[_free[k]] = static_cast<Local>(next[k]++);
          if (!consistent(k, h)) {
            continue;
          }
          if (k + 1 == k_max) {
            out.push_back(h);
            if (first_only) {
              return;
            }
          } else {
            ++k;
          }
        }
      }

      ModuleBundle const&                  _m;
      std::size_t                          _n;
      std::vector<Local>                   _target;
      std::vector<Local>                   _start;
      std::vector<std::size_t>             _free;
      std::vector<std::vector<Constraint>> _attached;
      std::vector<Constraint>              _fixed;
    };

  }  // namespace detail

  //! Z^n: the normalized n-cochains with d^n h = 1, in canonical order.
  inline std::vector<Cochain> cocycles(ModuleBundle const&     m,
                                       std::size_t             n,
                                       ExecutionContext const& ctx = {}) {
    std::vector<Cochain> out;
    if (n > 0 && m.bundle().is_trivial()) {
      out.push_back(unit_cochain(m, n));
      return out;
    }
    detail::CoboundarySolver solver(m, n, unit_cochain(m, n + 1));
    for (auto& v : solver.solve(ctx, false)) {
      out.push_back({m.base_ptr(), n, std::move(v)});
    }
    return out;
  }

  inline bool is_cocycle(ModuleBundle const& m, Cochain const& z) {
    return coboundary(m, z) == unit_cochain(m, z.degree + 1);
  }

  //! h of degree n - 1 with d h = z, or nothing. Throws NotACocycle unless
  //! z is a normalized cocycle.
  inline std::optional<Cochain> is_coboundary(ModuleBundle const&     m,
                                              Cochain const&          z,
                                              ExecutionContext const& ctx = {}) {
    check_domain(m, z);
    if (z.degree == 0) {
      fail(ErrorCode::invalid_input, "degree-0 cochains are never coboundaries");
    }
    if (!is_normalized(m, z) || !is_cocycle(m, z)) {
      fail(ErrorCode::not_a_cocycle, "input is not a normalized cocycle");
    }
    detail::CoboundarySolver solver(m, z.degree - 1, z);
    auto                     found = solver.solve(ctx, true);
    if (found.empty()) {
      return std::nullopt;
    }
    Cochain h{m.base_ptr(), z.degree - 1, std::move(found.front())};
    if (!(coboundary(m, h) == z)) {
      fail(ErrorCode::invalid_input, "coboundary witness failed verification");
    }
    return h;
  }

  //! B^n as the subgroup of C^n generated by d of the cochains supported at
  //! a single position with a generator value.
  inline std::vector<Cochain> coboundaries(ModuleBundle const& m, std::size_t n) {
    if (n == 0) {
      return {unit_cochain(m, 0)};
    }
    auto const&          tn = m.tuples(n - 1);
    Cochain const        unit = unit_cochain(m, n - 1);
    std::vector<Cochain> gens;
    for (std::size_t i = 0; i < tn.size(); ++i) {
      if (tn.has_unit(i)) {
        continue;
      }
      for (Local a : detail::generators(m.fiber(m.value_fiber(n - 1, i)))) {
        Cochain e   = unit;
        e.values[i] = a;
        gens.push_back(coboundary(m, e));
      }
    }
    std::set<std::vector<Local>> seen;
    Cochain const                start = unit_cochain(m, n);
    std::vector<Cochain>         frontier{start};
    seen.insert(start.values);
    while (!frontier.empty()) {
      std::vector<Cochain> next;
      for (auto const& c : frontier) {
        for (auto const& gen : gens) {
          Cochain p = pointwise_product(m, c, gen);
          if (seen.insert(p.values).second) {
            next.push_back(std::move(p));
          }
        }
      }
      frontier = std::move(next);
    }
    std::vector<Cochain> out;
    for (auto const& v : seen) {
      out.push_back({m.base_ptr(), n, v});
    }
    return out;
  }

  //! H^n = Z^n / B^n. Each class is represented by its lexicographically
  //! least cocycle.
  struct CohomologyGroup {
    std::size_t                              degree = 0;
    std::vector<Cochain>                     representatives;
    std::size_t                              nr_cocycles     = 0;
    std::size_t                              nr_coboundaries = 0;
    std::map<std::vector<Local>, std::size_t> class_of;

    std::size_t order() const noexcept {
      return representatives.size();
    }

    //! Index of the class containing z; throws NotACocycle for non-cocycles.
    std::size_t lookup(Cochain const& z) const {
      auto it = class_of.find(z.values);
      if (it == class_of.end()) {
        fail(ErrorCode::not_a_cocycle, "not among the enumerated cocycles");
      }
      return it->second;
    }
  };

  inline CohomologyGroup cohomology_group(ModuleBundle const&     m,
                                          std::size_t             n,
                                          ExecutionContext const& ctx = {}) {
    CohomologyGroup out;
    out.degree   = n;
    auto const z = cocycles(m, n, ctx);
    out.nr_cocycles = z.size();
    if (n == 0) {
      out.nr_coboundaries = 1;
      for (std::size_t i = 0; i < z.size(); ++i) {
        out.class_of[z[i].values] = i;
        out.representatives.push_back(z[i]);
      }
      return out;
    }
    auto const b        = n > 0 && m.bundle().is_trivial()
                              ? std::vector<Cochain>{unit_cochain(m, n)}
                              : coboundaries(m, n);
    out.nr_coboundaries = b.size();
    for (auto const& c : z) {
      if (out.class_of.count(c.values) != 0) {
        continue;
      }
      std::size_t const k = out.representatives.size();
      out.representatives.push_back(c);
      for (auto const& e : b) {
        out.class_of[pointwise_product(m, c, e).values] = k;
      }
    }
    return out;
  }

}  // namespace gpdext

#endif  // GPDEXT_COHOMOLOGY_HPP_
