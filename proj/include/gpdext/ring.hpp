#ifndef GPDEXT_RING_HPP_
#define GPDEXT_RING_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bundle.hpp"
#include "context.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "group.hpp"
#include "groupoid.hpp"
#include "scalar.hpp"

namespace gpdext {

  //! A finite unital ring by addition and multiplication tables.
  class FiniteRing {
   public:
    //! Throws InvalidRing unless the tables define a unital ring.
    static FiniteRing from_tables(std::vector<std::string> names,
                                  std::vector<Local>       add,
                                  std::vector<Local>       mul,
                                  Local                    zero,
                                  Local                    one) {
      std::size_t const n = names.size();
      if (n == 0 || add.size() != n * n || mul.size() != n * n || zero >= n || one >= n) {
        fail(ErrorCode::invalid_ring, "malformed ring tables");
      }
      FiniteRing r;
      try {
        r._additive = FiniteGroup::from_table(names, add, zero);
      } catch (Error const& e) {
        fail(ErrorCode::invalid_ring, std::string("addition: ") + e.what());
      }
      if (!r._additive.is_abelian()) {
        fail(ErrorCode::invalid_ring, "addition is not commutative");
      }
      r._mul = std::move(mul);
      r._one = one;
      for (Local v : r._mul) {
        if (v >= n) {
          fail(ErrorCode::unresolved_id, "multiplication entry out of range");
        }
      }
      for (Local a = 0; a < n; ++a) {
        if (r.mul(one, a) != a || r.mul(a, one) != a) {
          fail(ErrorCode::invalid_ring, "one is not a multiplicative unit");
        }
        for (Local b = 0; b < n; ++b) {
          for (Local c = 0; c < n; ++c) {
            if (r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c))) {
              fail(ErrorCode::invalid_ring, "multiplication is not associative");
            }
            if (r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c))
                || r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c))) {
              fail(ErrorCode::invalid_ring, "distributivity fails");
            }
          }
        }
      }
      return r;
    }

    //! Z/m with elements "0", ..., "m-1".
    static FiniteRing zmod(std::size_t m) {
      std::vector<std::string> names;
      std::vector<Local>       add(m * m), mul(m * m);
      for (std::size_t a = 0; a < m; ++a) {
        names.push_back(std::to_string(a));
        for (std::size_t b = 0; b < m; ++b) {
          add[a * m + b] = static_cast<Local>((a + b) % m);
          mul[a * m + b] = static_cast<Local>((a * b) % m);
        }
      }
      return from_tables(std::move(names), std::move(add), std::move(mul), 0, m > 1 ? 1 : 0);
    }

    //! Z/m[N]. Element index = sum_n c_n m^n over the group's local indices;
    //! names are "[c_0,c_1,...]".
    static FiniteRing group_ring(std::size_t m, FiniteGroup const& g) {
      std::size_t const k = g.size();
      std::size_t       n = 1;
      for (std::size_t i = 0; i < k; ++i) {
        n *= m;
      }
      auto digits = [&](std::size_t v) {
        std::vector<std::size_t> d(k);
        for (std::size_t i = 0; i < k; ++i) {
          d[i] = v % m;
          v /= m;
        }
        return d;
      };
      auto encode = [&](std::vector<std::size_t> const& d) {
        std::size_t v = 0;
        for (std::size_t i = k; i-- > 0;) {
          v = v * m + d[i];
        }
        return static_cast<Local>(v);
      };
      std::vector<std::string> names;
      std::vector<Local>       add(n * n), mul(n * n);
      for (std::size_t a = 0; a < n; ++a) {
        auto const da = digits(a);
        std::string nm = "[";
        for (std::size_t i = 0; i < k; ++i) {
          nm += (i ? "," : "") + std::to_string(da[i]);
        }
        names.push_back(nm + "]");
        for (std::size_t b = 0; b < n; ++b) {
          auto const               db = digits(b);
          std::vector<std::size_t> s(k), p(k, 0);
          for (std::size_t i = 0; i < k; ++i) {
            s[i] = (da[i] + db[i]) % m;
            for (std::size_t j = 0; j < k; ++j) {
              auto& c = p[g.op(static_cast<Local>(i), static_cast<Local>(j))];
              c       = (c + da[i] * db[j]) % m;
            }
          }
          add[a * n + b] = encode(s);
          mul[a * n + b] = encode(p);
        }
      }
      std::vector<std::size_t> one(k, 0);
      one[g.unit()] = 1 % m;
      return from_tables(std::move(names), std::move(add), std::move(mul), 0, encode(one));
    }

    //! Index of the element c delta_n of Z/m[N].
    static Local group_ring_monomial(std::size_t m, FiniteGroup const& g, Local n, std::size_t c = 1) {
      std::size_t v = c % m;
      for (Local i = 0; i < n; ++i) {
        v *= m;
      }
      (void) g;
      return static_cast<Local>(v);
    }

    std::size_t size() const noexcept {
      return _additive.size();
    }

    Local add(Local a, Local b) const {
      return _additive.op(a, b);
    }

    Local neg(Local a) const {
      return _additive.inverse(a);
    }

    Local mul(Local a, Local b) const {
      return _mul[a * size() + b];
    }

    Local zero() const noexcept {
      return _additive.unit();
    }

    Local one() const noexcept {
      return _one;
    }

    std::string const& name(Local a) const {
      return _additive.name(a);
    }

    std::vector<std::string> const& names() const noexcept {
      return _additive.names();
    }

    Local index(std::string const& nm) const {
      return _additive.index(nm);
    }

    FiniteGroup const& additive_group() const noexcept {
      return _additive;
    }

    std::vector<Local> const& mul_table() const noexcept {
      return _mul;
    }

    //! Ring units: elements with a two-sided inverse.
    std::vector<Local> units() const {
      std::vector<Local> out;
      for (Local a = 0; a < size(); ++a) {
        if (inverse(a)) {
          out.push_back(a);
        }
      }
      return out;
    }

    std::optional<Local> inverse(Local a) const {
      for (Local b = 0; b < size(); ++b) {
        if (mul(a, b) == _one && mul(b, a) == _one) {
          return b;
        }
      }
      return std::nullopt;
    }

    std::vector<Local> center() const {
      std::vector<Local> out;
      for (Local a = 0; a < size(); ++a) {
        bool c = true;
        for (Local b = 0; b < size() && c; ++b) {
          c = mul(a, b) == mul(b, a);
        }
        if (c) {
          out.push_back(a);
        }
      }
      return out;
    }

    bool operator==(FiniteRing const& that) const {
      return _additive == that._additive && _mul == that._mul && _one == that._one;
    }

   private:
    FiniteRing() = default;

    FiniteGroup        _additive;
    std::vector<Local> _mul;
    Local              _one = 0;
  };

  //! Bijections preserving +, x and 1, sorted.
  inline std::vector<Perm> ring_isomorphisms(FiniteRing const& a, FiniteRing const& b) {
    std::vector<Perm> out;
    for (auto& p : isomorphisms(a.additive_group(), b.additive_group())) {
      bool ok = p[a.one()] == b.one();
      for (Local m = 0; m < a.size() && ok; ++m) {
        for (Local n = 0; n < a.size() && ok; ++n) {
          ok = p[a.mul(m, n)] == b.mul(p[m], p[n]);
        }
      }
      if (ok) {
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  //! Fibers given by ring tables. Values are element indices; the
  //! isomorphisms M_x are element permutations.
  class TableRingBundle {
   public:
    using Value = Local;

    static constexpr bool is_table = true;

    TableRingBundle(std::vector<std::string> objects, std::vector<FiniteRing> fibers)
        : _objects(std::move(objects)), _fibers(std::move(fibers)) {
      if (_objects.size() != _fibers.size() || _objects.empty()) {
        fail(ErrorCode::invalid_bundle, "one ring per object required");
      }
      for (std::size_t i = 1; i < _objects.size(); ++i) {
        if (!(_objects[i - 1] < _objects[i])) {
          fail(ErrorCode::invalid_bundle, "objects must be distinct and sorted");
        }
      }
    }

    static TableRingBundle constant(Groupoid const& base, FiniteRing const& r) {
      auto objects = GroupBundle::object_names(base);
      return TableRingBundle(objects, std::vector<FiniteRing>(objects.size(), r));
    }

    std::vector<std::string> const& objects() const noexcept {
      return _objects;
    }

    std::size_t nr_objects() const noexcept {
      return _objects.size();
    }

    FiniteRing const& fiber(std::size_t u) const {
      return _fibers.at(u);
    }

    void check_over(Groupoid const& base) const {
      if (GroupBundle::object_names(base) != _objects) {
        fail(ErrorCode::domain_mismatch, "ring bundle objects differ from the groupoid's");
      }
    }

    Value zero(std::size_t u) const {
      return _fibers[u].zero();
    }

    Value one(std::size_t u) const {
      return _fibers[u].one();
    }

    Value add(std::size_t u, Value a, Value b) const {
      return _fibers[u].add(a, b);
    }

    Value neg(std::size_t u, Value a) const {
      return _fibers[u].neg(a);
    }

    Value mul(std::size_t u, Value a, Value b) const {
      return _fibers[u].mul(a, b);
    }

    bool is_zero(std::size_t u, Value a) const {
      return a == _fibers[u].zero();
    }

    Value apply(Perm const& m, std::size_t, std::size_t, Value a) const {
      return m[a];
    }

    std::optional<Value> inverse(std::size_t u, Value a) const {
      return _fibers[u].inverse(a);
    }

    bool valid_value(std::size_t u, Value a) const {
      return a < _fibers[u].size();
    }

    bool is_iso(std::size_t s, std::size_t r, Perm const& p) const {
      auto const& a = _fibers[s];
      auto const& b = _fibers[r];
      if (p.size() != a.size() || !is_bijection(p, b.size()) || p[a.one()] != b.one()) {
        return false;
      }
      for (Local m = 0; m < a.size(); ++m) {
        for (Local n = 0; n < a.size(); ++n) {
          if (p[a.add(m, n)] != b.add(p[m], p[n]) || p[a.mul(m, n)] != b.mul(p[m], p[n])) {
            return false;
          }
        }
      }
      return true;
    }

    Perm identity_iso(std::size_t u) const {
      return identity_perm(_fibers[u].size());
    }

    //! (C1) is checked on every element.
    std::vector<Value> spanning_set(std::size_t u) const {
      std::vector<Value> out(_fibers[u].size());
      std::iota(out.begin(), out.end(), Value(0));
      return out;
    }

    std::string format(std::size_t u, Value a) const {
      return _fibers[u].name(a);
    }

    bool operator==(TableRingBundle const&) const = default;

   private:
    std::vector<std::string> _objects;
    std::vector<FiniteRing>   _fibers;
  };

  //! Coefficient vector of an element of R[N_u], by local group index.
  using GroupRingValue = std::vector<Scalar>;

  //! Fibers R_u[N_u] over exact scalars. The isomorphisms M_x are induced by
  //! group isomorphisms and stored as permutations of the basis, so that
  //! M(delta_n) = delta_{M[n]}.
  class GroupRingBundle {
   public:
    using Value = GroupRingValue;

    static constexpr bool is_table = false;

    struct Fiber {
      ScalarDomain domain;
      FiniteGroup  group;

      bool operator==(Fiber const&) const = default;
    };

    GroupRingBundle(std::vector<std::string> objects, std::vector<Fiber> fibers)
        : _objects(std::move(objects)), _fibers(std::move(fibers)) {
      if (_objects.size() != _fibers.size() || _objects.empty()) {
        fail(ErrorCode::invalid_bundle, "one ring per object required");
      }
      for (std::size_t i = 1; i < _objects.size(); ++i) {
        if (!(_objects[i - 1] < _objects[i])) {
          fail(ErrorCode::invalid_bundle, "objects must be distinct and sorted");
        }
      }
    }

    //! R[N_u] over every object of the bundle N.
    static GroupRingBundle over(GroupBundle const& n, std::vector<ScalarDomain> const& domains) {
      std::vector<Fiber> fibers;
      for (std::size_t u = 0; u < n.nr_objects(); ++u) {
        fibers.push_back({domains.at(u), n.fiber(u)});
      }
      return GroupRingBundle(n.objects(), std::move(fibers));
    }

    std::vector<std::string> const& objects() const noexcept {
      return _objects;
    }

    std::size_t nr_objects() const noexcept {
      return _objects.size();
    }

    Fiber const& fiber(std::size_t u) const {
      return _fibers.at(u);
    }

    void check_over(Groupoid const& base) const {
      if (GroupBundle::object_names(base) != _objects) {
        fail(ErrorCode::domain_mismatch, "ring bundle objects differ from the groupoid's");
      }
    }

    Value zero(std::size_t u) const {
      return Value(_fibers[u].group.size());
    }

    Value basis(std::size_t u, Local n, Scalar c = Scalar(1)) const {
      Value v = zero(u);
      v[n]    = scalar::reduce(_fibers[u].domain, std::move(c));
      return v;
    }

    Value one(std::size_t u) const {
      return basis(u, _fibers[u].group.unit());
    }

    Value add(std::size_t u, Value const& a, Value const& b) const {
      Value out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = scalar::add(_fibers[u].domain, a[i], b[i]);
      }
      return out;
    }

    Value neg(std::size_t u, Value const& a) const {
      Value out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = scalar::neg(_fibers[u].domain, a[i]);
      }
      return out;
    }

    Value scale(std::size_t u, Scalar const& c, Value const& a) const {
      Value out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = scalar::mul(_fibers[u].domain, c, a[i]);
      }
      return out;
    }

    //! (ab)(k) = sum_{mn = k} a(m) b(n).
    Value mul(std::size_t u, Value const& a, Value const& b) const {
      auto const& f   = _fibers[u];
      Value       out = zero(u);
      for (Local m = 0; m < a.size(); ++m) {
        if (scalar::is_zero(a[m])) {
          continue;
        }
        for (Local n = 0; n < b.size(); ++n) {
          if (scalar::is_zero(b[n])) {
            continue;
          }
          auto& c = out[f.group.op(m, n)];
          c       = scalar::add(f.domain, c, scalar::mul(f.domain, a[m], b[n]));
        }
      }
      return out;
    }

    bool is_zero(std::size_t, Value const& a) const {
      return std::all_of(a.begin(), a.end(), [](auto const& c) { return scalar::is_zero(c); });
    }

    Value apply(Perm const& m, std::size_t, std::size_t r, Value const& a) const {
      Value out = zero(r);
      for (std::size_t n = 0; n < a.size(); ++n) {
        out[m[n]] = a[n];
      }
      return out;
    }

    //! c delta_n is inverted directly; anything else by solving a f = 1
    //! over the fraction field (and, over Z, checking integrality).
    std::optional<Value> inverse(std::size_t u, Value const& a) const {
      auto const& f       = _fibers[u];
      std::size_t support = 0;
      Local       at      = 0;
      for (Local n = 0; n < a.size(); ++n) {
        if (!scalar::is_zero(a[n])) {
          ++support;
          at = n;
        }
      }
      if (support == 0) {
        return std::nullopt;
      }
      if (support == 1) {
        auto c = scalar::inverse(f.domain, a[at]);
        if (!c) {
          return std::nullopt;
        }
        return basis(u, f.group.inverse(at), *c);
      }
      ScalarDomain field = f.domain;
      if (field.kind == ScalarKind::integers) {
        field = ScalarDomain::Q();
      }
      if (!field.is_field()) {
        return std::nullopt;
      }
      auto solution = solve_left_inverse(field, f.group, a);
      if (!solution) {
        return std::nullopt;
      }
      for (auto const& c : *solution) {
        try {
          scalar::check(f.domain, c);
        } catch (Error const&) {
          return std::nullopt;
        }
      }
      if (mul(u, a, *solution) != one(u) || mul(u, *solution, a) != one(u)) {
        return std::nullopt;
      }
      return solution;
    }

    bool valid_value(std::size_t u, Value const& a) const {
      if (a.size() != _fibers[u].group.size()) {
        return false;
      }
      for (auto const& c : a) {
        try {
          scalar::check(_fibers[u].domain, c);
        } catch (Error const&) {
          return false;
        }
      }
      return true;
    }

    bool is_iso(std::size_t s, std::size_t r, Perm const& p) const {
      return _fibers[s].domain == _fibers[r].domain
             && is_isomorphism(_fibers[s].group, _fibers[r].group, p);
    }

    Perm identity_iso(std::size_t u) const {
      return identity_perm(_fibers[u].group.size());
    }

    //! The basis delta_n; (C1) is linear in n, so this suffices.
    std::vector<Value> spanning_set(std::size_t u) const {
      std::vector<Value> out;
      for (Local n = 0; n < _fibers[u].group.size(); ++n) {
        out.push_back(basis(u, n));
      }
      return out;
    }

    std::string format(std::size_t u, Value const& a) const {
      std::string out;
      for (Local n = 0; n < a.size(); ++n) {
        if (scalar::is_zero(a[n])) {
          continue;
        }
        out += (out.empty() ? "" : " + ") + scalar::format(a[n]) + "*d[" + _fibers[u].group.name(n) + "]";
      }
      return out.empty() ? "0" : out;
    }

    //! (sum a_n delta_n)* = sum conj(a_n) delta_{n^-1}.
    Value star(std::size_t u, Value const& a) const {
      auto const& g   = _fibers[u].group;
      Value       out = zero(u);
      for (Local n = 0; n < a.size(); ++n) {
        out[g.inverse(n)] = scalar::conj(a[n]);
      }
      return out;
    }

    //! sum_n |a_n|.
    RadicalSum norm(std::size_t, Value const& a) const {
      RadicalSum s;
      for (auto const& c : a) {
        s = s + RadicalSum::abs(c);
      }
      return s;
    }

    bool operator==(GroupRingBundle const&) const = default;

   private:
    //! Gaussian elimination on the matrix of left multiplication by a.
    static std::optional<Value> solve_left_inverse(ScalarDomain const& d,
                                                   FiniteGroup const&  g,
                                                   Value const&        a) {
      std::size_t const                k = g.size();
      std::vector<std::vector<Scalar>> m(k, std::vector<Scalar>(k + 1));
      // (a b)(z) = sum_y a(z y^-1) b(y)
      for (Local z = 0; z < k; ++z) {
        for (Local y = 0; y < k; ++y) {
          m[z][y] = a[g.op(z, g.inverse(y))];
        }
        m[z][k] = Scalar(z == g.unit() ? 1 : 0);
      }
      for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && scalar::is_zero(m[piv][col])) {
          ++piv;
        }
        if (piv == k) {
          return std::nullopt;
        }
        std::swap(m[piv], m[col]);
        auto const inv = *scalar::inverse(d, m[col][col]);
        for (auto& v : m[col]) {
          v = scalar::mul(d, v, inv);
        }
        for (std::size_t row = 0; row < k; ++row) {
          if (row == col || scalar::is_zero(m[row][col])) {
            continue;
          }
          Scalar const f = m[row][col];
          for (std::size_t j = 0; j <= k; ++j) {
            m[row][j] = scalar::sub(d, m[row][j], scalar::mul(d, f, m[col][j]));
          }
        }
      }
      Value out(k);
      for (std::size_t i = 0; i < k; ++i) {
        out[i] = m[i][k];
      }
      return out;
    }

    std::vector<std::string> _objects;
    std::vector<Fiber>       _fibers;
  };

  //! (G, R). For table rings also carries the engine's coefficient data.
  template <typename B>
  class RingSetting {
   public:
    RingSetting(GroupoidPtr base, std::shared_ptr<B const> bundle)
        : _base(std::move(base)), _bundle(std::move(bundle)) {
      _bundle->check_over(*_base);
      if constexpr (B::is_table) {
        std::vector<engine::Fiber> fibers;
        for (std::size_t u = 0; u < _bundle->nr_objects(); ++u) {
          auto const& r = _bundle->fiber(u);
          fibers.push_back(engine::make_fiber(r.names(), r.mul_table(),
                                              r.additive_group().table(), r.one()));
        }
        auto const& b = *_bundle;
        _coeff        = std::make_shared<engine::Coefficients const>(
            _base, std::move(fibers), [&b](std::size_t s, std::size_t r) {
              return ring_isomorphisms(b.fiber(s), b.fiber(r));
            });
      }
    }

    Groupoid const& base() const noexcept {
      return *_base;
    }

    GroupoidPtr const& base_ptr() const noexcept {
      return _base;
    }

    B const& bundle() const noexcept {
      return *_bundle;
    }

    std::shared_ptr<B const> const& bundle_ptr() const noexcept {
      return _bundle;
    }

    //! Table rings only.
    engine::Coefficients const& coefficients() const {
      if (!_coeff) {
        fail(ErrorCode::invalid_input, "classification needs table-ring fibers");
      }
      return *_coeff;
    }

    bool same_as(RingSetting const& that) const {
      return this == &that || (*_base == *that._base && *_bundle == *that._bundle);
    }

   private:
    GroupoidPtr              _base;
    std::shared_ptr<B const> _bundle;
    engine::CoefficientsPtr  _coeff;
  };

  template <typename B>
  using RingSettingPtr = std::shared_ptr<RingSetting<B> const>;

  template <typename B>
  RingSettingPtr<B> make_ring_setting(GroupoidPtr base, B bundle) {
    return std::make_shared<RingSetting<B> const>(std::move(base),
                                                  std::make_shared<B const>(std::move(bundle)));
  }

  //! (M, tau) for (G, R); tau is indexed by Groupoid::composable_pairs().
  template <typename B>
  struct RingFactorSystem {
    using Value = typename B::Value;

    RingSettingPtr<B>  setting;
    std::vector<Perm>  M;
    std::vector<Value> tau;

    Groupoid const& base() const {
      return setting->base();
    }

    B const& bundle() const {
      return setting->bundle();
    }

    Value const& tau_at(Id x, Id y) const {
      Id const i = base().pair_index(x, y);
      if (i == no_id) {
        fail(ErrorCode::not_composable, "tau outside G^(2)");
      }
      return tau[i];
    }

    static RingFactorSystem trivial(RingSettingPtr<B> s) {
      RingFactorSystem out{s, {}, {}};
      auto const&      g = s->base();
      for (Id x = 0; x < g.size(); ++x) {
        out.M.push_back(s->bundle().identity_iso(g.source_ordinal(x)));
      }
      for (auto const& [x, y] : g.composable_pairs()) {
        out.tau.push_back(s->bundle().one(g.range_ordinal(x)));
      }
      return out;
    }

    bool operator==(RingFactorSystem const& that) const {
      return setting->same_as(*that.setting) && M == that.M && tau == that.tau;
    }
  };

  //! A finitely supported f with f(x) in R_{r(x)}; zero values are not
  //! stored.
  template <typename B>
  struct SectionalElement {
    using Value = typename B::Value;

    GroupoidPtr           base;
    std::map<Id, Value>   coeff;

    bool operator==(SectionalElement const& that) const {
      return coeff == that.coeff;
    }
  };

  template <typename B>
  SectionalElement<B> homogeneous(RingSetting<B> const& s, Id x, typename B::Value a) {
    SectionalElement<B> f{s.base_ptr(), {}};
    if (!s.bundle().is_zero(s.base().range_ordinal(x), a)) {
      f.coeff.emplace(x, std::move(a));
    }
    return f;
  }

  template <typename B>
  SectionalElement<B> add(RingSetting<B> const& s, SectionalElement<B> const& f, SectionalElement<B> const& g) {
    SectionalElement<B> out = f;
    for (auto const& [x, b] : g.coeff) {
      std::size_t const u  = s.base().range_ordinal(x);
      auto              it = out.coeff.find(x);
      if (it == out.coeff.end()) {
        out.coeff.emplace(x, b);
      } else {
        it->second = s.bundle().add(u, it->second, b);
        if (s.bundle().is_zero(u, it->second)) {
          out.coeff.erase(it);
        }
      }
    }
    return out;
  }

  template <typename B>
  SectionalElement<B> negate(RingSetting<B> const& s, SectionalElement<B> const& f) {
    SectionalElement<B> out = f;
    for (auto& [x, a] : out.coeff) {
      a = s.bundle().neg(s.base().range_ordinal(x), a);
    }
    return out;
  }

  struct RingFactorReport {
    bool                     satisfies_c1 = false;
    bool                     satisfies_c2 = false;
    std::vector<std::string> c1_failures;
    std::vector<std::string> c2_failures;

    bool valid() const noexcept {
      return satisfies_c1 && satisfies_c2;
    }
  };

  namespace detail {

    template <typename B>
    std::string pair_name(Groupoid const& g, Id x, Id y) {
      return "(" + g.name(x) + "," + g.name(y) + ")";
    }

  }  // namespace detail

  //! Throws StructuralViolation for malformed M or unnormalized tau and
  //! TauNotUnit for a non-invertible tau value; reports (C1), (C2).
  template <typename B>
  RingFactorReport check_ring_factor_system(RingFactorSystem<B> const& rfs) {
    auto const& g = rfs.base();
    auto const& b = rfs.bundle();
    if (rfs.M.size() != g.size() || rfs.tau.size() != g.composable_pairs().size()) {
      fail(ErrorCode::structural_violation, "tables have the wrong size");
    }
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      if (g.is_unit(x) ? rfs.M[x] != b.identity_iso(s) : !b.is_iso(s, r, rfs.M[x])) {
        fail(ErrorCode::structural_violation, "M_" + g.name(x) + " is not admissible");
      }
    }
    std::vector<typename B::Value> tau_inv;
    auto const&                    pairs = g.composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y] = pairs[i];
      std::size_t const u = g.range_ordinal(x);
      if (!b.valid_value(u, rfs.tau[i])) {
        fail(ErrorCode::structural_violation, "tau" + detail::pair_name<B>(g, x, y) + " is malformed");
      }
      if ((g.is_unit(x) || g.is_unit(y)) && rfs.tau[i] != b.one(u)) {
        fail(ErrorCode::structural_violation, "tau" + detail::pair_name<B>(g, x, y) + " is not normalized");
      }
      auto inv = b.inverse(u, rfs.tau[i]);
      if (!inv) {
        fail(ErrorCode::tau_not_unit, "tau" + detail::pair_name<B>(g, x, y) + " is not a unit");
      }
      tau_inv.push_back(std::move(*inv));
    }
    RingFactorReport rep;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto const [x, y]   = pairs[i];
      Id const          xy = g.product(x, y);
      std::size_t const u  = g.range_ordinal(x);
      std::size_t const s  = g.source_ordinal(y);
      std::size_t const m  = g.range_ordinal(y);
      for (auto const& n : b.spanning_set(s)) {
        auto const lhs = b.apply(rfs.M[x], m, u, b.apply(rfs.M[y], s, m, n));
        auto const rhs = b.mul(u, b.mul(u, rfs.tau[i], b.apply(rfs.M[xy], s, u, n)), tau_inv[i]);
        if (lhs != rhs) {
          rep.c1_failures.push_back(detail::pair_name<B>(g, x, y) + " at " + b.format(s, n));
        }
      }
      for (Id z = 0; z < g.size(); ++z) {
        if (!g.composable(y, z)) {
          continue;
        }
        Id const   yz  = g.product(y, z);
        auto const lhs = b.mul(u, rfs.tau[i], rfs.tau_at(xy, z));
        auto const rhs = b.mul(u, b.apply(rfs.M[x], m, u, rfs.tau_at(y, z)), rfs.tau_at(x, yz));
        if (lhs != rhs) {
          rep.c2_failures.push_back("(" + g.name(x) + "," + g.name(y) + "," + g.name(z) + ")");
        }
      }
    }
    rep.satisfies_c1 = rep.c1_failures.empty();
    rep.satisfies_c2 = rep.c2_failures.empty();
    return rep;
  }

  //! R x_(M,tau) G after a one-time validity check.
  template <typename B>
  class CrossedProduct {
   public:
    using Value   = typename B::Value;
    using Element = SectionalElement<B>;

    //! Throws InvalidFactorSystem unless (C1) and (C2) hold.
    explicit CrossedProduct(RingFactorSystem<B> rfs) : _rfs(std::move(rfs)) {
      if (!check_ring_factor_system(_rfs).valid()) {
        fail(ErrorCode::invalid_factor_system, "(C1) or (C2) fails");
      }
    }

    RingFactorSystem<B> const& system() const noexcept {
      return _rfs;
    }

    RingSetting<B> const& setting() const {
      return *_rfs.setting;
    }

    //! (fg)(z) = sum_{xy = z} f(x) M_x(g(y)) tau(x, y).
    Element multiply(Element const& f, Element const& g) const {
      check_carrier(f);
      check_carrier(g);
      auto const& gp = _rfs.base();
      auto const& b  = _rfs.bundle();
      Element     out{_rfs.setting->base_ptr(), {}};
      for (auto const& [x, a] : f.coeff) {
        std::size_t const u = gp.range_ordinal(x);
        std::size_t const s = gp.source_ordinal(x);
        for (auto const& [y, c] : g.coeff) {
          Id const z = gp.product_or_none(x, y);
          if (z == no_id) {
            continue;
          }
          auto term = b.mul(u, b.mul(u, a, b.apply(_rfs.M[x], s, u, c)), _rfs.tau_at(x, y));
          auto it   = out.coeff.find(z);
          if (it == out.coeff.end()) {
            out.coeff.emplace(z, std::move(term));
          } else {
            it->second = b.add(u, it->second, term);
          }
        }
      }
      for (auto it = out.coeff.begin(); it != out.coeff.end();) {
        if (b.is_zero(gp.range_ordinal(it->first), it->second)) {
          it = out.coeff.erase(it);
        } else {
          ++it;
        }
      }
      return out;
    }

    Element delta(Id x, Value a) const {
      return homogeneous(*_rfs.setting, x, std::move(a));
    }

    //! 1_{R_u} delta_u.
    Element object_unit(Id u) const {
      return delta(u, _rfs.bundle().one(_rfs.base().object_ordinal(u)));
    }

   private:
    void check_carrier(Element const& f) const {
      auto const& base = _rfs.setting->base_ptr();
      if (f.base != base && !(f.base && *f.base == *base)) {
        fail(ErrorCode::carrier_mismatch, "element lives on another groupoid");
      }
      for (auto const& [x, a] : f.coeff) {
        if (x >= base->size() || !_rfs.bundle().valid_value(base->range_ordinal(x), a)) {
          fail(ErrorCode::carrier_mismatch, "coefficient outside R_{r(x)}");
        }
      }
    }

    RingFactorSystem<B> _rfs;
  };

  //! Elements of the groupoid ring R[G] over a single scalar domain.
  struct GroupoidRingElement {
    GroupoidPtr             base;
    std::map<Id, Scalar>    coeff;

    bool operator==(GroupoidRingElement const& that) const {
      return coeff == that.coeff;
    }
  };

  //! (fg)(z) = sum_{xy = z} f(x) g(y). Throws CarrierMismatch for elements
  //! on different groupoids.
  inline GroupoidRingElement groupoid_ring_multiply(ScalarDomain const&        d,
                                                    GroupoidRingElement const& f,
                                                    GroupoidRingElement const& g) {
    if (f.base != g.base && !(f.base && g.base && *f.base == *g.base)) {
      fail(ErrorCode::carrier_mismatch, "elements live on different groupoids");
    }
    auto const&         gp = *f.base;
    GroupoidRingElement out{f.base, {}};
    for (Id z = 0; z < gp.size(); ++z) {
      Scalar acc;
      for (auto const& [x, a] : f.coeff) {
        for (auto const& [y, b] : g.coeff) {
          if (gp.product_or_none(x, y) == z) {
            acc = scalar::add(d, acc, scalar::mul(d, a, b));
          }
        }
      }
      if (!scalar::is_zero(acc)) {
        out.coeff.emplace(z, acc);
      }
    }
    return out;
  }

  struct RemarkReport {
    std::size_t              checks = 0;
    std::vector<std::string> violations;

    bool holds() const noexcept {
      return violations.empty();
    }
  };

  //! The four consequences of (C1), (C2) on inverses, for every arrow, every
  //! composable pair and every spanning element.
  template <typename B>
  RemarkReport verify_remark_identities(RingFactorSystem<B> const& rfs) {
    auto const&  g = rfs.base();
    auto const&  b = rfs.bundle();
    RemarkReport rep;
    auto         M = [&](Id x, typename B::Value const& v) {
      return b.apply(rfs.M[x], g.source_ordinal(x), g.range_ordinal(x), v);
    };
    auto tau = [&](Id x, Id y) -> typename B::Value const& { return rfs.tau_at(x, y); };
    for (Id x = 0; x < g.size(); ++x) {
      Id const xi = g.inverse(x);
      ++rep.checks;
      if (tau(x, xi) != M(x, tau(xi, x))) {
        rep.violations.push_back("apb1 at " + g.name(x));
      }
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      Id const          z  = g.product(x, y);
      Id const          yi = g.inverse(y), xi = g.inverse(x), zi = g.inverse(z);
      std::size_t const u  = g.range_ordinal(x);
      auto const        tz = tau(z, yi);
      auto const        ti = b.inverse(u, tau(x, y));
      if (!ti) {
        fail(ErrorCode::tau_not_unit, "tau" + detail::pair_name<B>(g, x, y) + " is not a unit");
      }
      std::string const at = " at " + detail::pair_name<B>(g, x, y);
      ++rep.checks;
      if (tz != b.mul(u, *ti, M(x, tau(y, yi)))) {
        rep.violations.push_back("apb2" + at);
      }
      ++rep.checks;
      if (b.mul(u, tz, tau(x, xi)) != b.mul(u, M(z, tau(yi, xi)), tau(z, zi))) {
        rep.violations.push_back("apb3" + at);
      }
      for (auto const& n : b.spanning_set(g.source_ordinal(x))) {
        ++rep.checks;
        if (b.mul(u, tz, M(x, n)) != b.mul(u, M(z, M(yi, n)), tz)) {
          rep.violations.push_back("apb4" + at + " on " + b.format(g.source_ordinal(x), n));
        }
      }
    }
    return rep;
  }

  //! Throws NotStarFactorSystem unless every fiber is a Q(i) group ring,
  //! each M_x commutes with * and preserves the norm, and tau^-1 = tau*.
  inline void check_star_factor_system(RingFactorSystem<GroupRingBundle> const& rfs) {
    auto const& g = rfs.base();
    auto const& b = rfs.bundle();
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      if (b.fiber(u).domain.kind != ScalarKind::gaussian_rationals) {
        fail(ErrorCode::not_star_factor_system, "the *-layer needs Gaussian-rational scalars");
      }
    }
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      for (auto const& n : b.spanning_set(s)) {
        auto const m = b.apply(rfs.M[x], s, r, n);
        if (b.apply(rfs.M[x], s, r, b.star(s, n)) != b.star(r, m) || !(b.norm(r, m) == b.norm(s, n))) {
          fail(ErrorCode::not_star_factor_system, "M_" + g.name(x) + " is not an isometric *-map");
        }
      }
    }
    auto const& pairs = g.composable_pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::size_t const u   = g.range_ordinal(pairs[i].first);
      auto const        inv = b.inverse(u, rfs.tau[i]);
      if (!inv || *inv != b.star(u, rfs.tau[i])) {
        fail(ErrorCode::not_star_factor_system,
             "tau" + detail::pair_name<GroupRingBundle>(g, pairs[i].first, pairs[i].second)
                 + "^-1 != tau*");
      }
    }
  }

  //! The involution and l1 norm of a *-factor system's crossed product.
  class StarStructure {
   public:
    using Element = SectionalElement<GroupRingBundle>;

    explicit StarStructure(CrossedProduct<GroupRingBundle> const& cp) : _cp(cp) {
      check_star_factor_system(cp.system());
      auto const& rfs = cp.system();
      auto const& g   = rfs.base();
      for (Id x = 0; x < g.size(); ++x) {
        _tau_inv.push_back(
            *rfs.bundle().inverse(g.range_ordinal(x), rfs.tau_at(x, g.inverse(x))));
      }
    }

    //! f*(x) = tau(x, x^-1)^-1 M_x(f(x^-1))*.
    Element star(Element const& f) const {
      auto const& rfs = _cp.system();
      auto const& g   = rfs.base();
      auto const& b   = rfs.bundle();
      Element     out{rfs.setting->base_ptr(), {}};
      for (auto const& [y, a] : f.coeff) {
        Id const          x = g.inverse(y);
        std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
        auto              v = b.mul(r, _tau_inv[x], b.star(r, b.apply(rfs.M[x], s, r, a)));
        if (!b.is_zero(r, v)) {
          out.coeff.emplace(x, std::move(v));
        }
      }
      return out;
    }

    //! sum_x sum_n |f(x)(n)|.
    RadicalSum norm1(Element const& f) const {
      auto const& rfs = _cp.system();
      RadicalSum  s;
      for (auto const& [x, a] : f.coeff) {
        s = s + rfs.bundle().norm(rfs.base().range_ordinal(x), a);
      }
      return s;
    }

    CrossedProduct<GroupRingBundle> const& crossed_product() const noexcept {
      return _cp;
    }

   private:
    CrossedProduct<GroupRingBundle> const& _cp;
    std::vector<GroupRingValue>            _tau_inv;
  };

  //! Seeded random element with coefficients re, im in [-bound, bound] on a
  //! random support. Only the raw engine output is used, so sequences are
  //! identical across standard libraries.
  inline SectionalElement<GroupRingBundle> random_element(RingSetting<GroupRingBundle> const& s,
                                                          std::mt19937_64&                    rng,
                                                          std::size_t                         max_support = 3,
                                                          long long                           bound       = 2) {
    auto const&                       g = s.base();
    auto const&                       b = s.bundle();
    SectionalElement<GroupRingBundle> f{s.base_ptr(), {}};
    auto pick = [&](std::uint64_t n) { return rng() % n; };
    std::size_t const terms = 1 + pick(max_support);
    for (std::size_t t = 0; t < terms; ++t) {
      Id const          x = static_cast<Id>(pick(g.size()));
      std::size_t const u = g.range_ordinal(x);
      auto const&       fib = b.fiber(u);
      Local const       n = static_cast<Local>(pick(fib.group.size()));
      long long const   re = static_cast<long long>(pick(2 * bound + 1)) - bound;
      long long const   im = fib.domain.kind == ScalarKind::gaussian_rationals
                                 ? static_cast<long long>(pick(2 * bound + 1)) - bound
                                 : 0;
      f = add(s, f, homogeneous(s, x, b.basis(u, n, Scalar(Rational(re), Rational(im)))));
    }
    return f;
  }

}  // namespace gpdext

#endif  // GPDEXT_RING_HPP_
