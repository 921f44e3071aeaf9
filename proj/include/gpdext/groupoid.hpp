#ifndef GPDEXT_GROUPOID_HPP_
#define GPDEXT_GROUPOID_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "group.hpp"

namespace gpdext {

  //! Index of an element of a groupoid. Indices follow the lexicographic
  //! order of element names.
  using Id = std::uint32_t;

  inline constexpr Id no_id = std::numeric_limits<Id>::max();

  //! Raw, unvalidated structure tables. Units are the elements flagged in
  //! `is_unit`; the product is a partial map.
  struct GroupoidTables {
    std::vector<std::string>       names;
    std::vector<bool>              is_unit;
    std::vector<Id>                source;
    std::vector<Id>                range;
    std::vector<Id>                inverse;
    std::map<std::pair<Id, Id>, Id> product;

    std::size_t size() const noexcept {
      return names.size();
    }

    Id index(std::string const& nm) const {
      auto it = std::find(names.begin(), names.end(), nm);
      if (it == names.end()) {
        fail(ErrorCode::unresolved_id, "no element named " + nm);
      }
      return static_cast<Id>(it - names.begin());
    }
  };

  //! Composability is the requirement that the product be defined exactly
  //! on pairs (x, y) with s(x) = r(y); G1 to G6 are the groupoid axioms.
  enum class Axiom { composability, g1, g2, g3, g4, g5, g6 };

  inline char const* to_string(Axiom a) noexcept {
    switch (a) {
      case Axiom::composability: return "Composability";
      case Axiom::g1: return "G1";
      case Axiom::g2: return "G2";
      case Axiom::g3: return "G3";
      case Axiom::g4: return "G4";
      case Axiom::g5: return "G5";
      case Axiom::g6: return "G6";
    }
    return "?";
  }

  struct Violation {
    Axiom                    axiom;
    std::vector<std::string> witness;
  };

  struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const noexcept {
      return violations.empty();
    }

    bool cites(Axiom a) const {
      return std::any_of(violations.begin(), violations.end(), [a](auto const& v) {
        return v.axiom == a;
      });
    }

    std::set<Axiom> axioms() const {
      std::set<Axiom> out;
      for (auto const& v : violations) {
        out.insert(v.axiom);
      }
      return out;
    }
  };

  //! Checks every axiom on every tuple and records each failure with its
  //! witness. (G4) is skipped where (G3) fails, and (G6) is skipped on
  //! triples passing through a product entry that fails (G2) or (G5). Throws UnresolvedId when a table refers to an index that does
  //! not exist or a source/range that is not a unit.
  inline ValidationReport validate_groupoid(GroupoidTables const& t) {
    std::size_t const n = t.size();
    if (t.is_unit.size() != n || t.source.size() != n || t.range.size() != n
        || t.inverse.size() != n) {
      fail(ErrorCode::unresolved_id, "table sizes do not match the element set");
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (t.source[x] >= n || t.range[x] >= n || t.inverse[x] >= n) {
        fail(ErrorCode::unresolved_id, "reference out of range at " + t.names[x]);
      }
      if (!t.is_unit[t.source[x]] || !t.is_unit[t.range[x]]) {
        fail(ErrorCode::unresolved_id,
             "source or range of " + t.names[x] + " is not an object");
      }
    }
    for (auto const& [xy, z] : t.product) {
      if (xy.first >= n || xy.second >= n || z >= n) {
        fail(ErrorCode::unresolved_id, "product entry out of range");
      }
    }
    auto const& nm  = t.names;
    auto        mul = [&](Id x, Id y) -> Id {
      auto it = t.product.find({x, y});
      return it == t.product.end() ? no_id : it->second;
    };

    ValidationReport report;
    auto             add = [&](Axiom a, std::vector<std::string> w) {
      report.violations.push_back({a, std::move(w)});
    };

    for (Id x = 0; x < n; ++x) {
      for (Id y = 0; y < n; ++y) {
        bool const defined    = mul(x, y) != no_id;
        bool const composable = t.source[x] == t.range[y];
        if (defined != composable) {
          add(Axiom::composability, {nm[x], nm[y]});
        }
      }
    }
    for (Id u = 0; u < n; ++u) {
      if (t.is_unit[u] && (t.range[u] != u || t.source[u] != u)) {
        add(Axiom::g1, {nm[u]});
      }
    }
    // Product entries that already break a unit law or the endpoint rule.
    // Associativity is not evaluated through them.
    std::set<std::pair<Id, Id>> bad;
    for (Id z = 0; z < n; ++z) {
      if (mul(t.range[z], z) != z || mul(z, t.source[z]) != z) {
        add(Axiom::g2, {nm[z]});
        if (mul(t.range[z], z) != z) {
          bad.insert({t.range[z], z});
        }
        if (mul(z, t.source[z]) != z) {
          bad.insert({z, t.source[z]});
        }
      }
    }
    std::vector<bool> g3_ok(n, true);
    for (Id z = 0; z < n; ++z) {
      Id const zi = t.inverse[z];
      if (t.range[zi] != t.source[z] || t.source[zi] != t.range[z]) {
        add(Axiom::g3, {nm[z]});
        g3_ok[z] = false;
      }
    }
    for (Id z = 0; z < n; ++z) {
      Id const zi = t.inverse[z];
      if (g3_ok[z] && (mul(zi, z) != t.source[z] || mul(z, zi) != t.range[z])) {
        add(Axiom::g4, {nm[z]});
      }
    }
    for (auto const& [xy, p] : t.product) {
      auto const [x, y] = xy;
      if (t.source[x] == t.range[y]
          && (t.range[p] != t.range[x] || t.source[p] != t.source[y])) {
        add(Axiom::g5, {nm[x], nm[y]});
        bad.insert(xy);
      }
    }
    auto clean = [&](Id x, Id y) { return !bad.count({x, y}); };
    for (Id x = 0; x < n; ++x) {
      for (Id y = 0; y < n; ++y) {
        if (t.source[x] != t.range[y]) {
          continue;
        }
        for (Id z = 0; z < n; ++z) {
          if (t.source[y] != t.range[z]) {
            continue;
          }
          Id const xy = mul(x, y), yz = mul(y, z);
          if (xy == no_id || yz == no_id) {
            continue;
          }
          Id const l = mul(xy, z), r = mul(x, yz);
          if (l == no_id || r == no_id) {
            continue;
          }
          if (!clean(x, y) || !clean(y, z) || !clean(xy, z) || !clean(x, yz)) {
            continue;
          }
          if (l != r) {
            add(Axiom::g6, {nm[x], nm[y], nm[z]});
          }
        }
      }
    }
    return report;
  }

  //! A validated finite groupoid. Immutable; element indices follow the
  //! lexicographic order of names and units carry the names of their
  //! objects.
  class Groupoid {
   public:
    static Groupoid from_tables(GroupoidTables tables) {
      auto const report = validate_groupoid(tables);
      if (!report.empty()) {
        auto const& v = report.violations.front();
        std::string w;
        for (auto const& s : v.witness) {
          w += (w.empty() ? "" : ",") + s;
        }
        fail(ErrorCode::invalid_groupoid,
             std::string(to_string(v.axiom)) + " fails at (" + w + ")");
      }
      return Groupoid(std::move(tables));
    }

    //! Builds and validates a groupoid from a list of element names, unit
    //! flags, source/range/inverse maps and a total product function on
    //! composable pairs.
    template <typename Product>
    static Groupoid build(std::vector<std::string> const& names,
                          std::vector<bool> const&        is_unit,
                          std::vector<Id> const&          source,
                          std::vector<Id> const&          range,
                          std::vector<Id> const&          inverse,
                          Product&&                       product) {
      GroupoidTables t;
      t.names   = names;
      t.is_unit = is_unit;
      t.source  = source;
      t.range   = range;
      t.inverse = inverse;
      for (Id x = 0; x < names.size(); ++x) {
        for (Id y = 0; y < names.size(); ++y) {
          if (source[x] == range[y]) {
            t.product[{x, y}] = product(x, y);
          }
        }
      }
      return from_tables(std::move(t));
    }

    std::size_t size() const noexcept {
      return _names.size();
    }

    std::string const& name(Id x) const {
      return _names.at(x);
    }

    std::vector<std::string> const& names() const noexcept {
      return _names;
    }

    Id id(std::string const& nm) const {
      auto it = _index.find(nm);
      if (it == _index.end()) {
        fail(ErrorCode::unresolved_id, "no element named " + nm);
      }
      return it->second;
    }

    bool contains(std::string const& nm) const {
      return _index.count(nm) != 0;
    }

    Id source(Id x) const {
      return _source[x];
    }

    Id range(Id x) const {
      return _range[x];
    }

    Id inverse(Id x) const {
      return _inverse[x];
    }

    bool is_unit(Id x) const {
      return _object_ordinal[x] != no_id;
    }

    bool composable(Id x, Id y) const {
      return _source[x] == _range[y];
    }

    //! Throws NotComposable when s(x) != r(y).
    Id product(Id x, Id y) const {
      Id const p = _product[x * size() + y];
      if (p == no_id) {
        fail(ErrorCode::not_composable, "(" + name(x) + "," + name(y) + ")");
      }
      return p;
    }

    //! no_id when the pair is not composable.
    Id product_or_none(Id x, Id y) const {
      return _product[x * size() + y];
    }

    //! Units in canonical order; these are the objects.
    std::vector<Id> const& objects() const noexcept {
      return _objects;
    }

    std::size_t nr_objects() const noexcept {
      return _objects.size();
    }

    //! Position of the unit u in objects().
    std::size_t object_ordinal(Id u) const {
      Id const o = _object_ordinal.at(u);
      if (o == no_id) {
        fail(ErrorCode::unresolved_id, name(u) + " is not an object");
      }
      return o;
    }

    std::size_t source_ordinal(Id x) const {
      return _object_ordinal[_source[x]];
    }

    std::size_t range_ordinal(Id x) const {
      return _object_ordinal[_range[x]];
    }

    std::vector<Id> const& non_units() const noexcept {
      return _non_units;
    }

    //! G^(2) in lexicographic order.
    std::vector<std::pair<Id, Id>> const& composable_pairs() const noexcept {
      return _pairs;
    }

    //! Index into composable_pairs(), or no_id.
    Id pair_index(Id x, Id y) const {
      return _pair_index[x * size() + y];
    }

    GroupoidTables tables() const {
      GroupoidTables t;
      t.names   = _names;
      t.is_unit.resize(size());
      for (Id x = 0; x < size(); ++x) {
        t.is_unit[x] = is_unit(x);
      }
      t.source  = _source;
      t.range   = _range;
      t.inverse = _inverse;
      for (auto const& [x, y] : _pairs) {
        t.product[{x, y}] = product(x, y);
      }
      return t;
    }

    bool operator==(Groupoid const& that) const {
      return _names == that._names && _source == that._source
             && _range == that._range && _inverse == that._inverse
             && _product == that._product && _objects == that._objects;
    }

   private:
    explicit Groupoid(GroupoidTables t) {
      std::size_t const n = t.size();
      std::vector<Id>   order(n);
      std::iota(order.begin(), order.end(), Id(0));
      std::sort(order.begin(), order.end(), [&](Id a, Id b) {
        return t.names[a] < t.names[b];
      });
      std::vector<Id> pos(n);
      for (Id i = 0; i < n; ++i) {
        pos[order[i]] = i;
      }
      _names.resize(n);
      _source.resize(n);
      _range.resize(n);
      _inverse.resize(n);
      _object_ordinal.assign(n, no_id);
      for (Id i = 0; i < n; ++i) {
        Id const old = order[i];
        _names[i]    = t.names[old];
        _source[i]   = pos[t.source[old]];
        _range[i]    = pos[t.range[old]];
        _inverse[i]  = pos[t.inverse[old]];
        if (!_index.emplace(_names[i], i).second) {
          fail(ErrorCode::invalid_groupoid, "duplicate element name " + _names[i]);
        }
      }
      for (Id i = 0; i < n; ++i) {
        if (t.is_unit[order[i]]) {
          _object_ordinal[i] = static_cast<Id>(_objects.size());
          _objects.push_back(i);
        } else {
          _non_units.push_back(i);
        }
      }
      _product.assign(n * n, no_id);
      _pair_index.assign(n * n, no_id);
      for (auto const& [xy, z] : t.product) {
        _product[pos[xy.first] * n + pos[xy.second]] = pos[z];
      }
      for (Id x = 0; x < n; ++x) {
        for (Id y = 0; y < n; ++y) {
          if (_product[x * n + y] != no_id) {
            _pair_index[x * n + y] = static_cast<Id>(_pairs.size());
            _pairs.emplace_back(x, y);
          }
        }
      }
    }

    std::vector<std::string>       _names;
    std::map<std::string, Id>      _index;
    std::vector<Id>                _source;
    std::vector<Id>                _range;
    std::vector<Id>                _inverse;
    std::vector<Id>                _product;
    std::vector<Id>                _objects;
    std::vector<Id>                _object_ordinal;
    std::vector<Id>                _non_units;
    std::vector<std::pair<Id, Id>> _pairs;
    std::vector<Id>                _pair_index;
  };

  using GroupoidPtr = std::shared_ptr<Groupoid const>;

  inline GroupoidPtr share(Groupoid g) {
    return std::make_shared<Groupoid const>(std::move(g));
  }

  //! X x X with s(v,u) = u, r(v,u) = v and (w,v)(v,u) = (w,u). The unit
  //! (u,u) is named u; the other elements are named "(v,u)".
  inline Groupoid pair_groupoid(std::vector<std::string> const& objects) {
    if (objects.empty()) {
      fail(ErrorCode::empty_object_set, "pair groupoid needs an object");
    }
    std::size_t const        k = objects.size();
    std::vector<std::string> names;
    std::vector<bool>        is_unit;
    std::vector<Id>          src, rng, inv;
    auto                     at = [k](std::size_t v, std::size_t u) {
      return static_cast<Id>(v * k + u);
    };
    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t u = 0; u < k; ++u) {
        names.push_back(u == v ? objects[u]
                               : "(" + objects[v] + "," + objects[u] + ")");
        is_unit.push_back(u == v);
        src.push_back(at(u, u));
        rng.push_back(at(v, v));
        inv.push_back(at(u, v));
      }
    }
    return Groupoid::build(names, is_unit, src, rng, inv, [&](Id x, Id y) {
      // x = (w, v), y = (v, u)
      return at(x / k, y % k);
    });
  }

  //! A group viewed as a groupoid with one object. The unit takes the
  //! object's name; other elements keep their group names.
  inline Groupoid one_object_groupoid(FiniteGroup const& g, std::string const& object) {
    std::size_t const        n = g.size();
    std::vector<std::string> names;
    for (Local a = 0; a < n; ++a) {
      names.push_back(a == g.unit() ? object : g.name(a));
    }
    std::vector<bool> is_unit(n, false);
    is_unit[g.unit()] = true;
    std::vector<Id> src(n, g.unit()), rng(n, g.unit()), inv(n);
    for (Local a = 0; a < n; ++a) {
      inv[a] = g.inverse(a);
    }
    return Groupoid::build(names, is_unit, src, rng, inv, [&](Id x, Id y) {
      return g.op(x, y);
    });
  }

  //! Requires disjoint element names.
  inline Groupoid disjoint_union(Groupoid const& a, Groupoid const& b) {
    GroupoidTables ta = a.tables(), tb = b.tables();
    Id const       shift = static_cast<Id>(ta.size());
    for (std::size_t i = 0; i < tb.size(); ++i) {
      if (a.contains(tb.names[i])) {
        fail(ErrorCode::invalid_input, "element names overlap: " + tb.names[i]);
      }
      ta.names.push_back(tb.names[i]);
      ta.is_unit.push_back(tb.is_unit[i]);
      ta.source.push_back(tb.source[i] + shift);
      ta.range.push_back(tb.range[i] + shift);
      ta.inverse.push_back(tb.inverse[i] + shift);
    }
    for (auto const& [xy, z] : tb.product) {
      ta.product[{xy.first + shift, xy.second + shift}] = z + shift;
    }
    return Groupoid::from_tables(std::move(ta));
  }

  //! A map of elements; validity is checked by validate_homomorphism.
  struct GroupoidHomomorphism {
    Groupoid const*  domain   = nullptr;
    Groupoid const*  codomain = nullptr;
    std::vector<Id>  map;
  };

  //! Failures of phi(xy) = phi(x)phi(y), phi(z^-1) = phi(z)^-1 and
  //! phi(units) within units, one line per failing tuple.
  inline std::vector<std::string> validate_homomorphism(GroupoidHomomorphism const& phi) {
    auto const&              g = *phi.domain;
    auto const&              h = *phi.codomain;
    std::vector<std::string> out;
    if (phi.map.size() != g.size()) {
      fail(ErrorCode::unresolved_id, "homomorphism table has wrong size");
    }
    for (Id v : phi.map) {
      if (v >= h.size()) {
        fail(ErrorCode::unresolved_id, "homomorphism image out of range");
      }
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      Id const p = h.product_or_none(phi.map[x], phi.map[y]);
      if (p == no_id || p != phi.map[g.product(x, y)]) {
        out.push_back("product (" + g.name(x) + "," + g.name(y) + ")");
      }
    }
    for (Id z = 0; z < g.size(); ++z) {
      if (phi.map[g.inverse(z)] != h.inverse(phi.map[z])) {
        out.push_back("inverse " + g.name(z));
      }
    }
    for (Id u : g.objects()) {
      if (!h.is_unit(phi.map[u])) {
        out.push_back("unit " + g.name(u));
      }
    }
    return out;
  }

  //! The induced map on objects, phi^0, by object ordinal.
  inline std::vector<std::size_t> object_map(GroupoidHomomorphism const& phi) {
    std::vector<std::size_t> out;
    for (Id u : phi.domain->objects()) {
      out.push_back(phi.codomain->object_ordinal(phi.map[u]));
    }
    return out;
  }

  //! The orbits of objects under the arrows of a groupoid.
  struct ComponentPartition {
    //! Object ids of each block, blocks ordered by their least object.
    std::vector<std::vector<Id>> blocks;
    //! Block of each object, by object ordinal.
    std::vector<std::size_t> block_of;

    std::size_t size() const noexcept {
      return blocks.size();
    }

    bool operator==(ComponentPartition const&) const = default;
  };

  inline ComponentPartition component_partition(Groupoid const& g) {
    std::size_t const        k     = g.nr_objects();
    std::size_t const        unset = std::numeric_limits<std::size_t>::max();
    ComponentPartition       out;
    out.block_of.assign(k, unset);
    std::vector<std::vector<std::size_t>> adjacent(k);
    for (Id x = 0; x < g.size(); ++x) {
      adjacent[g.source_ordinal(x)].push_back(g.range_ordinal(x));
    }
    for (std::size_t start = 0; start < k; ++start) {
      if (out.block_of[start] != unset) {
        continue;
      }
      std::size_t const        b = out.blocks.size();
      std::vector<std::size_t> stack{start};
      out.block_of[start] = b;
      std::vector<Id> block;
      while (!stack.empty()) {
        std::size_t const o = stack.back();
        stack.pop_back();
        block.push_back(g.objects()[o]);
        for (std::size_t w : adjacent[o]) {
          if (out.block_of[w] == unset) {
            out.block_of[w] = b;
            stack.push_back(w);
          }
        }
      }
      std::sort(block.begin(), block.end());
      out.blocks.push_back(std::move(block));
    }
    return out;
  }

  //! G_lambda = {x : s(x), r(x) in block}. Throws NotABlock unless `block`
  //! (object ids, any order) is one of the blocks of component_partition(g).
  inline Groupoid restrict_to_component(Groupoid const& g, std::vector<Id> block) {
    std::sort(block.begin(), block.end());
    auto const partition = component_partition(g);
    if (std::find(partition.blocks.begin(), partition.blocks.end(), block)
        == partition.blocks.end()) {
      fail(ErrorCode::not_a_block, "object set is not a component");
    }
    std::set<Id> const in_block(block.begin(), block.end());
    std::vector<Id>    keep;
    for (Id x = 0; x < g.size(); ++x) {
      if (in_block.count(g.source(x)) != 0) {
        keep.push_back(x);
      }
    }
    std::map<Id, Id> pos;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      pos[keep[i]] = static_cast<Id>(i);
    }
    GroupoidTables t;
    for (Id x : keep) {
      t.names.push_back(g.name(x));
      t.is_unit.push_back(g.is_unit(x));
      t.source.push_back(pos.at(g.source(x)));
      t.range.push_back(pos.at(g.range(x)));
      t.inverse.push_back(pos.at(g.inverse(x)));
    }
    for (Id x : keep) {
      for (Id y : keep) {
        if (g.composable(x, y)) {
          t.product[{pos.at(x), pos.at(y)}] = pos.at(g.product(x, y));
        }
      }
    }
    return Groupoid::from_tables(std::move(t));
  }

}  // namespace gpdext

#endif  // GPDEXT_GROUPOID_HPP_
