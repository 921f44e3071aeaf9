#ifndef GPDEXT_IO_HPP_
#define GPDEXT_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bridge.hpp"
#include "cohomology.hpp"
#include "crossed.hpp"
#include "error.hpp"
#include "extension.hpp"
#include "groupoid.hpp"
#include "ring.hpp"

namespace gpdext::io {

  using json = nlohmann::ordered_json;

  //! A parsed JSON value and the directory that relative references in it
  //! resolve against.
  struct Document {
    json                  value;
    std::filesystem::path dir;
    std::string           text;
  };

  inline std::string read_text(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      fail(ErrorCode::parse_error, "cannot read " + path.string());
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  //! Throws ParseError for malformed JSON or a missing "schema": 1.
  inline Document parse_document(std::string text, std::filesystem::path dir, std::string const& what) {
    Document d{{}, std::move(dir), std::move(text)};
    try {
      d.value = json::parse(d.text);
    } catch (json::exception const& e) {
      fail(ErrorCode::parse_error, what + ": " + e.what());
    }
    if (!d.value.is_object() || !d.value.contains("schema") || d.value["schema"] != 1) {
      fail(ErrorCode::parse_error, what + ": \"schema\": 1 is required");
    }
    return d;
  }

  inline Document load_document(std::filesystem::path const& path) {
    return parse_document(read_text(path), path.parent_path(), path.string());
  }

  //! doc[key] is either a path relative to the document or an inline object.
  inline Document resolve(Document const& doc, std::string const& key) {
    if (!doc.value.contains(key)) {
      fail(ErrorCode::parse_error, "missing \"" + key + "\"");
    }
    auto const& v = doc.value[key];
    if (v.is_string()) {
      return load_document(doc.dir / v.get<std::string>());
    }
    if (v.is_object()) {
      return {v, doc.dir, v.dump()};
    }
    fail(ErrorCode::parse_error, "\"" + key + "\" must be a path or an object");
  }

  namespace detail {

    inline json const& member(json const& j, std::string const& key) {
      if (!j.is_object() || !j.contains(key)) {
        fail(ErrorCode::parse_error, "missing \"" + key + "\"");
      }
      return j[key];
    }

    inline std::string str(json const& j) {
      if (!j.is_string()) {
        fail(ErrorCode::parse_error, "expected a string, got " + j.dump());
      }
      return j.get<std::string>();
    }

    inline std::vector<std::string> str_list(json const& j) {
      if (!j.is_array()) {
        fail(ErrorCode::parse_error, "expected an array, got " + j.dump());
      }
      std::vector<std::string> out;
      for (auto const& v : j) {
        out.push_back(str(v));
      }
      return out;
    }

    inline std::pair<std::string, std::string> split_pair(std::string const& key) {
      auto const bar = key.find('|');
      if (bar == std::string::npos) {
        fail(ErrorCode::parse_error, "pair key \"" + key + "\" is not of the form x|y");
      }
      return {key.substr(0, bar), key.substr(bar + 1)};
    }

    //! Rows [a, b, ab] over the named elements as a full table.
    inline std::vector<Local> table_from_rows(std::vector<std::string> const& names, json const& rows) {
      std::size_t const        n = names.size();
      std::map<std::string, Local> index;
      for (std::size_t i = 0; i < n; ++i) {
        if (!index.emplace(names[i], static_cast<Local>(i)).second) {
          fail(ErrorCode::parse_error, "duplicate element " + names[i]);
        }
      }
      auto at = [&](json const& v) {
        auto it = index.find(str(v));
        if (it == index.end()) {
          fail(ErrorCode::unresolved_id, "no element named " + str(v));
        }
        return it->second;
      };
      std::vector<Local> table(n * n, engine::no_local);
      if (!rows.is_array()) {
        fail(ErrorCode::parse_error, "table rows must be an array");
      }
      for (auto const& row : rows) {
        if (!row.is_array() || row.size() != 3) {
          fail(ErrorCode::parse_error, "table row " + row.dump() + " is not [a, b, ab]");
        }
        table[at(row[0]) * n + at(row[1])] = at(row[2]);
      }
      for (Local v : table) {
        if (v == engine::no_local) {
          fail(ErrorCode::parse_error, "table is incomplete");
        }
      }
      return table;
    }

    inline Local local_index(std::vector<std::string> const& names, std::string const& nm) {
      auto it = std::find(names.begin(), names.end(), nm);
      if (it == names.end()) {
        fail(ErrorCode::unresolved_id, "no element named " + nm);
      }
      return static_cast<Local>(it - names.begin());
    }

  }  // namespace detail

  //! "1", "Z<n>", "S3", "D<n>", "Q8", or factors joined by 'x'.
  inline FiniteGroup preset_group(std::string const& name) {
    auto const cross = name.find('x');
    if (cross != std::string::npos) {
      return FiniteGroup::direct_product(preset_group(name.substr(0, cross)), preset_group(name.substr(cross + 1)));
    }
    auto number = [&](std::size_t from) -> std::size_t {
      try {
        std::size_t used = 0;
        auto const  v    = std::stoul(name.substr(from), &used);
        if (used + from == name.size() && v > 0) {
          return v;
        }
      } catch (std::exception const&) {
      }
      fail(ErrorCode::parse_error, "unknown group preset " + name);
    };
    if (name == "1") {
      return FiniteGroup::trivial();
    }
    if (name == "S3") {
      return FiniteGroup::symmetric3();
    }
    if (name == "Q8") {
      return FiniteGroup::quaternion();
    }
    if (!name.empty() && name[0] == 'Z') {
      return FiniteGroup::cyclic(number(1));
    }
    if (!name.empty() && name[0] == 'D') {
      return FiniteGroup::dihedral(number(1));
    }
    fail(ErrorCode::parse_error, "unknown group preset " + name);
  }

  //! {"elements", "mul": [[a,b,ab],...], "unit"} or {"preset": name}.
  inline FiniteGroup parse_group(json const& j) {
    if (j.is_object() && j.contains("preset")) {
      return preset_group(detail::str(j["preset"]));
    }
    auto names = detail::str_list(detail::member(j, "elements"));
    auto table = detail::table_from_rows(names, detail::member(j, "mul"));
    auto unit  = detail::local_index(names, detail::str(detail::member(j, "unit")));
    return FiniteGroup::from_table(std::move(names), std::move(table), unit);
  }

  //! A group given inline, as a path, or under a "preset" key.
  inline FiniteGroup parse_group_ref(Document const& doc, std::string const& key) {
    auto const& v = detail::member(doc.value, key);
    if (v.is_string()) {
      return parse_group(load_document(doc.dir / v.get<std::string>()).value);
    }
    return parse_group(v);
  }

  inline json group_to_json(FiniteGroup const& g) {
    json rows = json::array();
    for (Local a = 0; a < g.size(); ++a) {
      for (Local b = 0; b < g.size(); ++b) {
        rows.push_back({g.name(a), g.name(b), g.name(g.op(a, b))});
      }
    }
    return {{"elements", g.names()}, {"mul", rows}, {"unit", g.name(g.unit())}};
  }

  //! The raw tables of a groupoid file. Unit products are generated; "mul"
  //! rows are applied on top, so a row may overwrite a generated entry.
  //! Inverses missing from "inv" are found by search; ParseError when no
  //! or several candidates exist.
  inline GroupoidTables parse_groupoid_tables(json const& j) {
    GroupoidTables t;
    auto const     objects = detail::str_list(detail::member(j, "objects"));
    for (auto const& u : objects) {
      t.names.push_back(u);
      t.is_unit.push_back(true);
    }
    std::vector<std::pair<std::string, std::string>> ends;
    json const& elements = j.contains("elements") ? j["elements"] : json::array();
    for (auto const& e : elements) {
      t.names.push_back(detail::str(detail::member(e, "id")));
      t.is_unit.push_back(false);
      ends.emplace_back(detail::str(detail::member(e, "source")), detail::str(detail::member(e, "range")));
    }
    std::set<std::string> const distinct(t.names.begin(), t.names.end());
    if (distinct.size() != t.names.size()) {
      fail(ErrorCode::parse_error, "duplicate element ids");
    }
    std::size_t const k = objects.size();
    for (Id u = 0; u < k; ++u) {
      t.source.push_back(u);
      t.range.push_back(u);
    }
    for (auto const& [s, r] : ends) {
      Id const si = t.index(s), ri = t.index(r);
      if (si >= k || ri >= k) {
        fail(ErrorCode::unresolved_id, "source and range must be objects");
      }
      t.source.push_back(si);
      t.range.push_back(ri);
    }
    for (Id z = 0; z < t.size(); ++z) {
      t.product[{t.range[z], z}]  = z;
      t.product[{z, t.source[z]}] = z;
    }
    json const& mul = j.contains("mul") ? j["mul"] : json::array();
    for (auto const& row : mul) {
      if (!row.is_array() || row.size() != 3) {
        fail(ErrorCode::parse_error, "mul row " + row.dump() + " is not [x, y, xy]");
      }
      t.product[{t.index(detail::str(row[0])), t.index(detail::str(row[1]))}] = t.index(detail::str(row[2]));
    }
    t.inverse.assign(t.size(), no_id);
    for (Id u = 0; u < k; ++u) {
      t.inverse[u] = u;
    }
    if (j.contains("inv")) {
      for (auto const& [x, y] : j["inv"].items()) {
        t.inverse[t.index(x)] = t.index(detail::str(y));
      }
    }
    auto prod = [&](Id a, Id b) {
      auto it = t.product.find({a, b});
      return it == t.product.end() ? no_id : it->second;
    };
    for (Id x = 0; x < t.size(); ++x) {
      if (t.inverse[x] != no_id) {
        continue;
      }
      std::vector<Id> found;
      for (Id y = 0; y < t.size(); ++y) {
        if (prod(x, y) == t.range[x] && prod(y, x) == t.source[x]) {
          found.push_back(y);
        }
      }
      if (found.size() != 1) {
        fail(ErrorCode::parse_error, "inverse of " + t.names[x] + (found.empty() ? " not found" : " is ambiguous"));
      }
      t.inverse[x] = found.front();
    }
    return t;
  }

  inline GroupoidPtr parse_groupoid(json const& j) {
    return share(Groupoid::from_tables(parse_groupoid_tables(j)));
  }

  inline json groupoid_to_json(Groupoid const& g) {
    json elements = json::array(), mul = json::array(), inv = json::object();
    for (Id x : g.non_units()) {
      elements.push_back({{"id", g.name(x)}, {"source", g.name(g.source(x))}, {"range", g.name(g.range(x))}});
      inv[g.name(x)] = g.name(g.inverse(x));
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      if (!g.is_unit(x) && !g.is_unit(y)) {
        mul.push_back({g.name(x), g.name(y), g.name(g.product(x, y))});
      }
    }
    json objects = json::array();
    for (Id u : g.objects()) {
      objects.push_back(g.name(u));
    }
    return {{"schema", 1}, {"objects", objects}, {"elements", elements}, {"mul", mul}, {"inv", inv}};
  }

  //! {"base": [objects], "fibers": {u: group}} or {"base", "constant": group}.
  inline GroupBundlePtr parse_bundle(Document const& doc) {
    auto objects = detail::str_list(detail::member(doc.value, "base"));
    std::sort(objects.begin(), objects.end());
    std::vector<FiniteGroup> fibers;
    if (doc.value.contains("constant")) {
      auto const g = parse_group_ref(doc, "constant");
      return share(GroupBundle::constant(objects, g));
    }
    Document const fdoc{detail::member(doc.value, "fibers"), doc.dir, ""};
    for (auto const& u : objects) {
      fibers.push_back(parse_group_ref(fdoc, u));
    }
    return share(GroupBundle(std::move(objects), std::move(fibers)));
  }

  //! The bundle file extended by "action": {x: {n: L_x(n)}}; missing
  //! arrows act trivially.
  inline ModuleBundle parse_module(Document const& doc, GroupoidPtr const& g) {
    auto       bundle = parse_bundle(doc);
    bundle->check_over(*g);
    auto const trivial = ModuleBundle::trivial_action(g, bundle).actions();
    std::vector<Perm> action = trivial;
    if (doc.value.contains("action")) {
      for (auto const& [xn, map] : doc.value["action"].items()) {
        Id const    x = g->id(xn);
        auto const& s = bundle->fiber(g->source_ordinal(x));
        auto const& r = bundle->fiber(g->range_ordinal(x));
        Perm        p(s.size(), engine::no_local);
        for (auto const& [a, b] : map.items()) {
          p[s.index(a)] = r.index(detail::str(b));
        }
        action[x] = std::move(p);
      }
    }
    return ModuleBundle(g, bundle, std::move(action));
  }

  //! {"groupoid": ref, "bundle": ref, "L": {x: {n: L_x(n)}}, "sigma":
  //! {"x|y": n}}. Missing L_x is the identity, missing sigma values are 1.
  inline FactorSystem parse_factor_system(Document const& doc) {
    auto const g       = parse_groupoid(resolve(doc, "groupoid").value);
    auto const bundle  = parse_bundle(resolve(doc, "bundle"));
    auto const setting = make_setting(g, bundle);
    auto       fs      = FactorSystem::trivial(setting);
    if (doc.value.contains("L")) {
      for (auto const& [xn, map] : doc.value["L"].items()) {
        Id const    x = g->id(xn);
        auto const& s = bundle->fiber(g->source_ordinal(x));
        auto const& r = bundle->fiber(g->range_ordinal(x));
        Perm        p(s.size(), engine::no_local);
        for (auto const& [a, b] : map.items()) {
          p[s.index(a)] = r.index(detail::str(b));
        }
        fs.data.L[x] = std::move(p);
      }
    }
    if (doc.value.contains("sigma")) {
      for (auto const& [key, v] : doc.value["sigma"].items()) {
        auto const [xn, yn] = detail::split_pair(key);
        Id const x = g->id(xn), y = g->id(yn);
        Id const i = g->pair_index(x, y);
        if (i == no_id) {
          fail(ErrorCode::not_composable, key + " is not a composable pair");
        }
        fs.data.sigma[i] = bundle->fiber(g->range_ordinal(x)).index(detail::str(v));
      }
    }
    return fs;
  }

  //! L and sigma in the factor-system file layout (without the refs).
  inline json factor_system_to_json(FactorSystem const& fs) {
    auto const& g = fs.base();
    auto const& b = fs.setting->bundle();
    json        L = json::object(), sigma = json::object();
    for (Id x : g.non_units()) {
      auto const& s = b.fiber(g.source_ordinal(x));
      auto const& r = b.fiber(g.range_ordinal(x));
      json        m = json::object();
      for (Local n = 0; n < s.size(); ++n) {
        m[s.name(n)] = r.name(fs.L(x)[n]);
      }
      L[g.name(x)] = m;
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      if (!g.is_unit(x) && !g.is_unit(y)) {
        sigma[g.name(x) + "|" + g.name(y)] = b.fiber(g.range_ordinal(x)).name(fs.sigma(x, y));
      }
    }
    return {{"L", L}, {"sigma", sigma}};
  }

  //! A full factor-system file for fs, with groupoid and bundle inline.
  inline json factor_system_file(FactorSystem const& fs) {
    auto const& b       = fs.setting->bundle();
    json        fibers  = json::object();
    for (std::size_t u = 0; u < b.nr_objects(); ++u) {
      fibers[b.objects()[u]] = group_to_json(b.fiber(u));
    }
    json out = {{"schema", 1},
                {"groupoid", groupoid_to_json(fs.base())},
                {"bundle", {{"base", b.objects()}, {"fibers", fibers}}}};
    out.update(factor_system_to_json(fs));
    return out;
  }

  //! {"total": ref, "base": ref, "projection": {e: x}}.
  inline Extension parse_extension(Document const& doc) {
    auto const      e = parse_groupoid(resolve(doc, "total").value);
    auto const      g = parse_groupoid(resolve(doc, "base").value);
    std::vector<Id> proj(e->size(), no_id);
    for (auto const& [en, xn] : detail::member(doc.value, "projection").items()) {
      proj[e->id(en)] = g->id(detail::str(xn));
    }
    for (Id v = 0; v < e->size(); ++v) {
      if (proj[v] == no_id) {
        if (!e->is_unit(v) || !g->contains(e->name(v))) {
          fail(ErrorCode::parse_error, "projection misses " + e->name(v));
        }
        proj[v] = g->id(e->name(v));
      }
    }
    return make_extension(e, g, std::move(proj));
  }

  //! {"section": {x: e}}; units may be omitted.
  inline std::vector<Id> parse_section(Document const& doc, Extension const& ext) {
    std::vector<Id> k(ext.G().size(), no_id);
    for (auto const& [xn, en] : detail::member(doc.value, "section").items()) {
      k[ext.G().id(xn)] = ext.E().id(detail::str(en));
    }
    for (Id u : ext.G().objects()) {
      if (k[u] == no_id) {
        k[u] = ext.E().id(ext.G().name(u));
      }
    }
    for (Id x = 0; x < k.size(); ++x) {
      if (k[x] == no_id) {
        fail(ErrorCode::parse_error, "section misses " + ext.G().name(x));
      }
    }
    return k;
  }

  inline json extension_file(Extension const& ext) {
    json proj = json::object();
    for (Id v = 0; v < ext.E().size(); ++v) {
      proj[ext.E().name(v)] = ext.G().name(ext.projection[v]);
    }
    return {{"schema", 1}, {"total", groupoid_to_json(ext.E())}, {"base", groupoid_to_json(ext.G())}, {"projection", proj}};
  }

  inline json section_file(Extension const& ext, std::vector<Id> const& k) {
    json s = json::object();
    for (Id x = 0; x < k.size(); ++x) {
      s[ext.G().name(x)] = ext.E().name(k[x]);
    }
    return {{"schema", 1}, {"section", s}};
  }

  // Scalars: n, [num, den] or [[re_n, re_d], [im_n, im_d]]; integers may
  // be JSON numbers or decimal strings.

  namespace detail {

    inline BigInt big(json const& j) {
      if (j.is_number_integer()) {
        return BigInt(j.get<long long>());
      }
      if (j.is_string()) {
        try {
          return BigInt(j.get<std::string>());
        } catch (std::exception const&) {
        }
      }
      fail(ErrorCode::parse_error, "expected an integer, got " + j.dump());
    }

    inline Rational rational(json const& j) {
      if (j.is_array() && j.size() == 2 && !j[0].is_array()) {
        BigInt const d = big(j[1]);
        if (d == 0) {
          fail(ErrorCode::parse_error, "zero denominator");
        }
        return Rational(big(j[0]), d);
      }
      return Rational(big(j));
    }

    inline json big_json(BigInt const& v) {
      if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max()) {
        return static_cast<long long>(v);
      }
      return v.str();
    }

    inline json rational_json(Rational const& q) {
      return json::array({big_json(boost::multiprecision::numerator(q)), big_json(boost::multiprecision::denominator(q))});
    }

  }  // namespace detail

  inline Scalar parse_scalar(json const& j, ScalarDomain const& d) {
    Scalar s;
    if (j.is_array() && j.size() == 2 && j[0].is_array()) {
      s = Scalar(detail::rational(j[0]), detail::rational(j[1]));
    } else {
      s = Scalar(detail::rational(j));
    }
    scalar::check(d, s);
    return s;
  }

  inline json scalar_to_json(Scalar const& s) {
    if (s.im == 0) {
      return detail::rational_json(s.re);
    }
    return json::array({detail::rational_json(s.re), detail::rational_json(s.im)});
  }

  using AnyRingBundle = std::variant<TableRingBundle, GroupRingBundle>;

  //! {"elements", "add", "mul", "zero", "one"} or {"zmod": m}.
  inline FiniteRing parse_table_ring(json const& j) {
    if (j.contains("zmod")) {
      auto const m = detail::big(j["zmod"]);
      if (m < 1 || m > 4096) {
        fail(ErrorCode::parse_error, "zmod modulus out of range");
      }
      return FiniteRing::zmod(static_cast<std::size_t>(m));
    }
    auto names = detail::str_list(detail::member(j, "elements"));
    auto add   = detail::table_from_rows(names, detail::member(j, "add"));
    auto mul   = detail::table_from_rows(names, detail::member(j, "mul"));
    auto zero  = detail::local_index(names, detail::str(detail::member(j, "zero")));
    auto one   = detail::local_index(names, detail::str(detail::member(j, "one")));
    return FiniteRing::from_tables(std::move(names), std::move(add), std::move(mul), zero, one);
  }

  //! {"base": [objects], "fibers": {u: ring}} or {"base", "constant": ring};
  //! a ring is a table ring or {"group_ring": {"scalars", "group"}}. All
  //! fibers must be of one kind.
  inline AnyRingBundle parse_ring_bundle(Document const& doc) {
    auto objects = detail::str_list(detail::member(doc.value, "base"));
    std::sort(objects.begin(), objects.end());
    std::vector<Document> specs;
    if (doc.value.contains("constant")) {
      specs.assign(objects.size(), Document{doc.value["constant"], doc.dir, ""});
    } else {
      auto const& f = detail::member(doc.value, "fibers");
      for (auto const& u : objects) {
        auto const& v = detail::member(f, u);
        specs.push_back(v.is_string() ? load_document(doc.dir / v.get<std::string>()) : Document{v, doc.dir, ""});
      }
    }
    std::size_t grp = 0;
    for (auto const& s : specs) {
      grp += s.value.contains("group_ring") ? 1 : 0;
    }
    if (grp == 0) {
      std::vector<FiniteRing> rings;
      for (auto const& s : specs) {
        rings.push_back(parse_table_ring(s.value));
      }
      return TableRingBundle(std::move(objects), std::move(rings));
    }
    if (grp != specs.size()) {
      fail(ErrorCode::parse_error, "ring bundle mixes table rings and group rings");
    }
    std::vector<GroupRingBundle::Fiber> fibers;
    for (auto const& s : specs) {
      Document const gr{s.value["group_ring"], s.dir, ""};
      fibers.push_back({ScalarDomain::parse(detail::str(detail::member(gr.value, "scalars"))),
                        parse_group_ref(gr, "group")});
    }
    return GroupRingBundle(std::move(objects), std::move(fibers));
  }

  inline Local parse_table_value(TableRingBundle const& b, std::size_t u, json const& j) {
    return b.fiber(u).index(detail::str(j));
  }

  inline GroupRingValue parse_group_ring_value(GroupRingBundle const& b, std::size_t u, json const& j) {
    auto const&    f = b.fiber(u);
    GroupRingValue v = b.zero(u);
    if (!j.is_object()) {
      fail(ErrorCode::parse_error, "group-ring value must map group elements to scalars");
    }
    for (auto const& [n, c] : j.items()) {
      v[f.group.index(n)] = parse_scalar(c, f.domain);
    }
    return v;
  }

  inline json value_to_json(TableRingBundle const& b, std::size_t u, Local v) {
    return b.format(u, v);
  }

  inline json value_to_json(GroupRingBundle const& b, std::size_t u, GroupRingValue const& v) {
    json out = json::object();
    for (Local n = 0; n < v.size(); ++n) {
      if (!scalar::is_zero(v[n])) {
        out[b.fiber(u).group.name(n)] = scalar_to_json(v[n]);
      }
    }
    return out;
  }

  namespace detail {

    template <typename B>
    typename B::Value parse_value(B const& b, std::size_t u, json const& j) {
      if constexpr (B::is_table) {
        return parse_table_value(b, u, j);
      } else {
        return parse_group_ring_value(b, u, j);
      }
    }

    template <typename B>
    Perm parse_iso(B const& b, std::size_t s, std::size_t r, json const& map) {
      if constexpr (B::is_table) {
        Perm p(b.fiber(s).size(), engine::no_local);
        for (auto const& [a, c] : map.items()) {
          p[b.fiber(s).index(a)] = b.fiber(r).index(str(c));
        }
        return p;
      } else {
        Perm p(b.fiber(s).group.size(), engine::no_local);
        for (auto const& [a, c] : map.items()) {
          p[b.fiber(s).group.index(a)] = b.fiber(r).group.index(str(c));
        }
        return p;
      }
    }

    template <typename B>
    RingFactorSystem<B> parse_ring_system_as(Document const& doc, GroupoidPtr const& g, B bundle) {
      auto setting = make_ring_setting(g, std::move(bundle));
      auto rfs     = RingFactorSystem<B>::trivial(setting);
      auto const& b = setting->bundle();
      if (doc.value.contains("M")) {
        for (auto const& [xn, map] : doc.value["M"].items()) {
          Id const x = g->id(xn);
          rfs.M[x]   = parse_iso(b, g->source_ordinal(x), g->range_ordinal(x), map);
        }
      }
      if (doc.value.contains("tau")) {
        for (auto const& [key, v] : doc.value["tau"].items()) {
          auto const [xn, yn] = split_pair(key);
          Id const x = g->id(xn), y = g->id(yn);
          Id const i = g->pair_index(x, y);
          if (i == no_id) {
            fail(ErrorCode::not_composable, key + " is not a composable pair");
          }
          rfs.tau[i] = parse_value(b, g->range_ordinal(x), v);
        }
      }
      return rfs;
    }

  }  // namespace detail

  using AnyRingSystem = std::variant<RingFactorSystem<TableRingBundle>, RingFactorSystem<GroupRingBundle>>;

  //! {"groupoid": ref, "ring_bundle": ref, "M": {x: {a: M_x(a)}}, "tau":
  //! {"x|y": value}}. Over group rings M names the group isomorphism on the
  //! basis and values are {n: scalar}.
  inline AnyRingSystem parse_ring_system(Document const& doc) {
    auto const g      = parse_groupoid(resolve(doc, "groupoid").value);
    auto       bundle = parse_ring_bundle(resolve(doc, "ring_bundle"));
    return std::visit([&](auto&& b) -> AnyRingSystem { return detail::parse_ring_system_as(doc, g, std::move(b)); },
                      std::move(bundle));
  }

  template <typename B>
  json ring_system_to_json(RingFactorSystem<B> const& rfs) {
    auto const& g = rfs.base();
    auto const& b = rfs.bundle();
    json        M = json::object(), tau = json::object();
    for (Id x : g.non_units()) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      json              m = json::object();
      for (Local n = 0; n < rfs.M[x].size(); ++n) {
        if constexpr (B::is_table) {
          m[b.fiber(s).name(n)] = b.fiber(r).name(rfs.M[x][n]);
        } else {
          m[b.fiber(s).group.name(n)] = b.fiber(r).group.name(rfs.M[x][n]);
        }
      }
      M[g.name(x)] = m;
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      if (!g.is_unit(x) && !g.is_unit(y)) {
        tau[g.name(x) + "|" + g.name(y)] = value_to_json(b, g.range_ordinal(x), rfs.tau_at(x, y));
      }
    }
    return {{"M", M}, {"tau", tau}};
  }

  //! {"element": {x: value}}.
  template <typename B>
  SectionalElement<B> parse_element(Document const& doc, RingSetting<B> const& s) {
    SectionalElement<B> f{s.base_ptr(), {}};
    for (auto const& [xn, v] : detail::member(doc.value, "element").items()) {
      Id const x = s.base().id(xn);
      f          = add(s, f, homogeneous(s, x, detail::parse_value(s.bundle(), s.base().range_ordinal(x), v)));
    }
    return f;
  }

  template <typename B>
  json element_to_json(RingSetting<B> const& s, SectionalElement<B> const& f) {
    json out = json::object();
    for (auto const& [x, v] : f.coeff) {
      out[s.base().name(x)] = value_to_json(s.bundle(), s.base().range_ordinal(x), v);
    }
    return out;
  }

  //! Values of a cochain keyed by "x|y|..." (object names in degree 0).
  inline json cochain_to_json(ModuleBundle const& m, Cochain const& c) {
    auto const& t   = m.tuples(c.degree);
    auto const& g   = m.base();
    json        out = json::object();
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::string key;
      auto const  tup = t.tuple(i);
      for (Id x : tup) {
        key += (key.empty() ? "" : "|") + g.name(x);
      }
      out[key] = m.fiber(m.value_fiber(c.degree, i)).name(c.values[i]);
    }
    return out;
  }

  //! 64-bit FNV-1a, printed as 16 hex digits.
  inline std::string fnv1a64(std::string const& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

}  // namespace gpdext::io

#endif  // GPDEXT_IO_HPP_
