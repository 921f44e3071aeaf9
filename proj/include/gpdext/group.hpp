#ifndef GPDEXT_GROUP_HPP_
#define GPDEXT_GROUP_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace gpdext {

  //! Local index of an element inside a finite group, ring or fiber.
  using Local = std::uint32_t;

  //! A bijection between two finite fibers, stored as the image of each
  //! local index.
  using Perm = std::vector<Local>;

  inline Perm identity_perm(std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), Local(0));
    return p;
  }

  inline Perm compose(Perm const& outer, Perm const& inner) {
    Perm out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
      out[i] = outer[inner[i]];
    }
    return out;
  }

  inline Perm invert(Perm const& p) {
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[p[i]] = static_cast<Local>(i);
    }
    return out;
  }

  inline bool is_bijection(Perm const& p, std::size_t codomain_size) {
    if (p.size() != codomain_size) {
      return false;
    }
    std::vector<bool> seen(codomain_size, false);
    for (Local v : p) {
      if (v >= codomain_size || seen[v]) {
        return false;
      }
      seen[v] = true;
    }
    return true;
  }

  //! A finite group given by its Cayley table. Element names are kept in the
  //! order supplied; the unit is the element with index `unit()`.
  class FiniteGroup {
   public:
    FiniteGroup() : FiniteGroup(trivial()) {}

    //! Validates the group axioms and throws InvalidGroup on failure.
    static FiniteGroup from_table(std::vector<std::string> names,
                                  std::vector<Local>       table,
                                  Local                    unit) {
      std::size_t const n = names.size();
      if (n == 0 || table.size() != n * n || unit >= n) {
        fail(ErrorCode::invalid_group, "malformed Cayley table");
      }
      for (Local v : table) {
        if (v >= n) {
          fail(ErrorCode::unresolved_id, "Cayley table entry out of range");
        }
      }
      FiniteGroup g(0);
      g._names = std::move(names);
      g._table = std::move(table);
      g._unit  = unit;
      for (std::size_t i = 0; i < n; ++i) {
        if (g._index.emplace(g._names[i], static_cast<Local>(i)).second == false) {
          fail(ErrorCode::invalid_group, "duplicate element name " + g._names[i]);
        }
      }
      for (Local a = 0; a < n; ++a) {
        if (g.op(unit, a) != a || g.op(a, unit) != a) {
          fail(ErrorCode::invalid_group, "unit law fails at " + g._names[a]);
        }
        for (Local b = 0; b < n; ++b) {
          for (Local c = 0; c < n; ++c) {
            if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c))) {
              fail(ErrorCode::invalid_group,
                   "associativity fails at (" + g._names[a] + ","
                       + g._names[b] + "," + g._names[c] + ")");
            }
          }
        }
      }
      g._inverse.assign(n, n);
      for (Local a = 0; a < n; ++a) {
        for (Local b = 0; b < n; ++b) {
          if (g.op(a, b) == unit && g.op(b, a) == unit) {
            g._inverse[a] = b;
            break;
          }
        }
        if (g._inverse[a] == n) {
          fail(ErrorCode::invalid_group, "no inverse for " + g._names[a]);
        }
      }
      return g;
    }

    static FiniteGroup trivial(std::string name = "1") {
      FiniteGroup g(0);
      g._names   = {std::move(name)};
      g._table   = {0};
      g._unit    = 0;
      g._inverse = {0};
      g._index.emplace(g._names[0], Local(0));
      return g;
    }

    //! Z_n with elements named "0", ..., "n-1".
    static FiniteGroup cyclic(std::size_t n) {
      std::vector<std::string> names;
      std::vector<Local>       table(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
          table[i * n + j] = static_cast<Local>((i + j) % n);
        }
      }
      return from_table(std::move(names), std::move(table), 0);
    }

    //! S_3 as permutations of {0,1,2}; names are the one-line images, "012"
    //! being the unit.
    static FiniteGroup symmetric3() {
      std::vector<std::array<int, 3>> perms;
      std::array<int, 3>              p = {0, 1, 2};
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      std::vector<std::string> names;
      for (auto const& q : perms) {
        names.push_back(std::to_string(q[0]) + std::to_string(q[1])
                        + std::to_string(q[2]));
      }
      std::size_t const  n = perms.size();
      std::vector<Local> table(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          // (pq)(k) = p(q(k))
          std::array<int, 3> r{};
          for (int k = 0; k < 3; ++k) {
            r[k] = perms[i][perms[j][k]];
          }
          auto it = std::find(perms.begin(), perms.end(), r);
          table[i * n + j] = static_cast<Local>(it - perms.begin());
        }
      }
      return from_table(std::move(names), std::move(table), 0);
    }

    //! D_n of order 2n: "r<i>" is rotation by i, "s<i>" the reflection
    //! s r^i.
    static FiniteGroup dihedral(std::size_t n) {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back("r" + std::to_string(i));
      }
      for (std::size_t i = 0; i < n; ++i) {
        names.push_back("s" + std::to_string(i));
      }
      std::size_t const  m = 2 * n;
      std::vector<Local> table(m * m);
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          // s^e r^i . s^f r^j = s^(e+f) r^((-1)^f i + j)
          std::size_t const e = a / n, i = a % n, f = b / n, j = b % n;
          std::size_t const k = (f ? n - i : i) % n;
          table[a * m + b]    = static_cast<Local>(((e + f) % 2) * n + (k + j) % n);
        }
      }
      return from_table(std::move(names), std::move(table), 0);
    }

    //! Q_8 = {1, -1, i, -i, j, -j, k, -k}.
    static FiniteGroup quaternion() {
      std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
      // unit products: [a][b] = sign, index into {1,i,j,k}
      int const          sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
      int const          unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
      std::vector<Local> table(64);
      for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
          int const s = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * sign[a / 2][b / 2];
          table[a * 8 + b] = static_cast<Local>(2 * unit[a / 2][b / 2] + (s < 0 ? 1 : 0));
        }
      }
      return from_table(std::move(names), std::move(table), 0);
    }

    static FiniteGroup direct_product(FiniteGroup const& a, FiniteGroup const& b) {
      std::vector<std::string> names;
      std::size_t const        na = a.size(), nb = b.size(), n = na * nb;
      for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
          names.push_back(a.name(i) + "." + b.name(j));
        }
      }
      std::vector<Local> table(n * n);
      for (Local x = 0; x < n; ++x) {
        for (Local y = 0; y < n; ++y) {
          Local const i = a.op(x / nb, y / nb);
          Local const j = b.op(x % nb, y % nb);
          table[x * n + y] = static_cast<Local>(i * nb + j);
        }
      }
      return from_table(std::move(names),
                        std::move(table),
                        static_cast<Local>(a.unit() * nb + b.unit()));
    }

    std::size_t size() const noexcept {
      return _names.size();
    }

    Local op(Local a, Local b) const {
      return _table[a * size() + b];
    }

    Local inverse(Local a) const {
      return _inverse[a];
    }

    Local unit() const noexcept {
      return _unit;
    }

    std::string const& name(Local a) const {
      return _names.at(a);
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    std::vector<Local> const& table() const noexcept {
      return _table;
    }

    Local index(std::string const& nm) const {
      auto it = _index.find(nm);
      if (it == _index.end()) {
        fail(ErrorCode::unresolved_id, "no group element named " + nm);
      }
      return it->second;
    }

    std::optional<Local> find(std::string const& nm) const {
      auto it = _index.find(nm);
      if (it == _index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    bool is_abelian() const {
      for (Local a = 0; a < size(); ++a) {
        for (Local b = a + 1; b < size(); ++b) {
          if (op(a, b) != op(b, a)) {
            return false;
          }
        }
      }
      return true;
    }

    bool is_central(Local a) const {
      for (Local b = 0; b < size(); ++b) {
        if (op(a, b) != op(b, a)) {
          return false;
        }
      }
      return true;
    }

    std::vector<Local> center() const {
      std::vector<Local> out;
      for (Local a = 0; a < size(); ++a) {
        if (is_central(a)) {
          out.push_back(a);
        }
      }
      return out;
    }

    std::size_t order_of(Local a) const {
      std::size_t k = 1;
      for (Local p = a; p != _unit; p = op(p, a)) {
        ++k;
      }
      return k;
    }

    //! a b a^-1
    Local conjugate(Local a, Local b) const {
      return op(op(a, b), inverse(a));
    }

    //! The subgroup on `elements` (which must contain the unit and be closed),
    //! with elements re-indexed in the order given.
    FiniteGroup subgroup(std::vector<Local> const& elements) const {
      std::map<Local, Local> pos;
      for (std::size_t i = 0; i < elements.size(); ++i) {
        pos[elements[i]] = static_cast<Local>(i);
      }
      std::vector<std::string> names;
      for (Local e : elements) {
        names.push_back(name(e));
      }
      std::size_t const  n = elements.size();
      std::vector<Local> table(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          auto it = pos.find(op(elements[i], elements[j]));
          if (it == pos.end()) {
            fail(ErrorCode::invalid_group, "subset is not closed");
          }
          table[i * n + j] = it->second;
        }
      }
      auto u = pos.find(_unit);
      if (u == pos.end()) {
        fail(ErrorCode::invalid_group, "subset misses the unit");
      }
      return from_table(std::move(names), std::move(table), u->second);
    }

    bool operator==(FiniteGroup const& that) const {
      return _names == that._names && _table == that._table
             && _unit == that._unit;
    }

   private:
    explicit FiniteGroup(int) {}

    std::vector<std::string>     _names;
    std::vector<Local>           _table;
    Local                        _unit = 0;
    std::vector<Local>           _inverse;
    std::map<std::string, Local> _index;
  };

  namespace detail {

    //! Greedy generating set: walk elements in index order and keep every
    //! element outside the span of those kept so far.
    inline std::vector<Local> generators(FiniteGroup const& g) {
      std::vector<Local> gens;
      std::vector<bool>  in_span(g.size(), false);
      in_span[g.unit()] = true;
      for (Local a = 0; a < g.size(); ++a) {
        if (in_span[a]) {
          continue;
        }
        gens.push_back(a);
        std::vector<Local> frontier;
        for (Local b = 0; b < g.size(); ++b) {
          if (in_span[b]) {
            frontier.push_back(b);
          }
        }
        while (!frontier.empty()) {
          std::vector<Local> next;
          for (Local b : frontier) {
            for (Local x : gens) {
              Local const c = g.op(b, x);
              if (!in_span[c]) {
                in_span[c] = true;
                next.push_back(c);
              }
            }
          }
          frontier = std::move(next);
        }
      }
      return gens;
    }

    //! Extends an assignment of generator images to a map on all of `a`, by
    //! breadth-first search over right multiplication by generators. Returns
    //! nullopt when the assignment is inconsistent or not a bijective
    //! homomorphism.
    inline std::optional<Perm> extend_to_isomorphism(FiniteGroup const&        a,
                                                     FiniteGroup const&        b,
                                                     std::vector<Local> const& gens,
                                                     std::vector<Local> const& images) {
      Local const        undef = static_cast<Local>(b.size());
      Perm               phi(a.size(), undef);
      std::vector<Local> frontier = {a.unit()};
      phi[a.unit()]               = b.unit();
      while (!frontier.empty()) {
        std::vector<Local> next;
        for (Local x : frontier) {
          for (std::size_t i = 0; i < gens.size(); ++i) {
            Local const y  = a.op(x, gens[i]);
            Local const im = b.op(phi[x], images[i]);
            if (phi[y] == undef) {
              phi[y] = im;
              next.push_back(y);
            } else if (phi[y] != im) {
              return std::nullopt;
            }
          }
        }
        frontier = std::move(next);
      }
      if (!is_bijection(phi, b.size())) {
        return std::nullopt;
      }
      for (Local x = 0; x < a.size(); ++x) {
        for (Local y = 0; y < a.size(); ++y) {
          if (phi[a.op(x, y)] != b.op(phi[x], phi[y])) {
            return std::nullopt;
          }
        }
      }
      return phi;
    }

  }  // namespace detail

  //! All group isomorphisms a -> b, in lexicographic order of their image
  //! tables.
  inline std::vector<Perm> isomorphisms(FiniteGroup const& a, FiniteGroup const& b) {
    std::vector<Perm> out;
    if (a.size() != b.size()) {
      return out;
    }
    auto const         gens = detail::generators(a);
    std::vector<Local> images(gens.size(), 0);
    std::vector<std::vector<Local>> candidates(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::size_t const ord = a.order_of(gens[i]);
      for (Local y = 0; y < b.size(); ++y) {
        if (b.order_of(y) == ord) {
          candidates[i].push_back(y);
        }
      }
    }
    std::vector<std::size_t> choice(gens.size(), 0);
    // odometer over candidate images
    while (true) {
      bool exhausted = false;
      for (auto const& c : candidates) {
        if (c.empty()) {
          exhausted = true;
        }
      }
      if (exhausted) {
        break;
      }
      for (std::size_t i = 0; i < gens.size(); ++i) {
        images[i] = candidates[i][choice[i]];
      }
      if (auto phi = detail::extend_to_isomorphism(a, b, gens, images)) {
        out.push_back(std::move(*phi));
      }
      std::size_t i = 0;
      for (; i < gens.size(); ++i) {
        if (++choice[i] < candidates[i].size()) {
          break;
        }
        choice[i] = 0;
      }
      if (i == gens.size()) {
        break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  inline std::vector<Perm> automorphisms(FiniteGroup const& g) {
    return isomorphisms(g, g);
  }

  inline bool is_isomorphism(FiniteGroup const& a, FiniteGroup const& b, Perm const& phi) {
    if (phi.size() != a.size() || !is_bijection(phi, b.size())) {
      return false;
    }
    for (Local x = 0; x < a.size(); ++x) {
      for (Local y = 0; y < a.size(); ++y) {
        if (phi[a.op(x, y)] != b.op(phi[x], phi[y])) {
          return false;
        }
      }
    }
    return true;
  }

}  // namespace gpdext

#endif  // GPDEXT_GROUP_HPP_
