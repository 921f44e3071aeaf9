#ifndef GPDEXT_EXTENSION_HPP_
#define GPDEXT_EXTENSION_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bundle.hpp"
#include "cohomology.hpp"
#include "context.hpp"
#include "engine.hpp"
#include "error.hpp"
#include "group.hpp"
#include "groupoid.hpp"

namespace gpdext {

  //! A base groupoid G with a group bundle N over its objects, and the
  //! derived coefficient data (units, centres, fiber isomorphisms).
  class FactorSetting {
   public:
    FactorSetting(GroupoidPtr base, GroupBundlePtr bundle)
        : _base(std::move(base)), _bundle(std::move(bundle)) {
      _bundle->check_over(*_base);
      std::vector<engine::Fiber> fibers;
      for (auto const& f : _bundle->fibers()) {
        fibers.push_back(engine::fiber_of_group(f));
      }
      auto const& nb = *_bundle;
      _coeff = std::make_shared<engine::Coefficients const>(
          _base, std::move(fibers), [&nb](std::size_t s, std::size_t r) {
            return isomorphisms(nb.fiber(s), nb.fiber(r));
          });
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

    GroupBundlePtr const& bundle_ptr() const noexcept {
      return _bundle;
    }

    engine::Coefficients const& coefficients() const noexcept {
      return *_coeff;
    }

    FiniteGroup const& range_fiber(Id x) const {
      return _bundle->fiber(_base->range_ordinal(x));
    }

    FiniteGroup const& source_fiber(Id x) const {
      return _bundle->fiber(_base->source_ordinal(x));
    }

    bool same_as(FactorSetting const& that) const {
      return this == &that || (*_base == *that._base && *_bundle == *that._bundle);
    }

   private:
    GroupoidPtr                    _base;
    GroupBundlePtr                 _bundle;
    engine::CoefficientsPtr        _coeff;
  };

  using FactorSettingPtr = std::shared_ptr<FactorSetting const>;

  inline FactorSettingPtr make_setting(GroupoidPtr base, GroupBundlePtr bundle) {
    return std::make_shared<FactorSetting const>(std::move(base), std::move(bundle));
  }

  //! (L, sigma) for (G, N). L[x] maps N_{s(x)} to N_{r(x)} by local index;
  //! sigma is indexed by Groupoid::composable_pairs().
  struct FactorSystem {
    FactorSettingPtr      setting;
    engine::TwistedSystem data;

    Groupoid const& base() const {
      return setting->base();
    }

    Perm const& L(Id x) const {
      return data.L[x];
    }

    Local sigma(Id x, Id y) const {
      Id const i = setting->base().pair_index(x, y);
      if (i == no_id) {
        fail(ErrorCode::not_composable, "sigma outside G^(2)");
      }
      return data.sigma[i];
    }

    //! L = id and sigma = 1; for bundles with equal fibers along arrows.
    static FactorSystem trivial(FactorSettingPtr s) {
      auto const& c = s->coefficients();
      return {s, {engine::identity_family(c), engine::unit_sigma(c)}};
    }

    bool operator==(FactorSystem const& that) const {
      return setting->same_as(*that.setting) && data == that.data;
    }
  };

  struct FactorSystemReport {
    bool                           satisfies_f1 = false;
    bool                           satisfies_f2 = false;
    std::vector<engine::F1Witness> f1_failures;
    std::vector<engine::F2Witness> f2_failures;

    bool valid() const noexcept {
      return satisfies_f1 && satisfies_f2;
    }
  };

  //! Throws StructuralViolation for malformed data; otherwise reports (F1)
  //! and (F2) with every failing witness.
  inline FactorSystemReport check_factor_system(FactorSystem const& fs) {
    auto const& c = fs.setting->coefficients();
    engine::check_structure(c, fs.data);
    FactorSystemReport r;
    r.f1_failures  = engine::f1_violations(c, fs.data);
    r.f2_failures  = engine::f2_violations(c, fs.data);
    r.satisfies_f1 = r.f1_failures.empty();
    r.satisfies_f2 = r.f2_failures.empty();
    return r;
  }

  //! An extension N -> E -> G: E and G share their objects, j is a
  //! surjective homomorphism that is the identity on objects, and N = ker j.
  struct Extension {
    GroupoidPtr     total;
    GroupoidPtr     base;
    std::vector<Id> projection;
    GroupBundlePtr  kernel;
    //! inclusion[u][n]: the element of E representing n in N_u.
    std::vector<std::vector<Id>> inclusion;
    //! For e in ker j: its local index in N_{j(e)}; no_local otherwise.
    std::vector<Local> kernel_local;

    Groupoid const& E() const {
      return *total;
    }

    Groupoid const& G() const {
      return *base;
    }
  };

  namespace detail {

    inline void fill_kernel_local(Extension& ext) {
      ext.kernel_local.assign(ext.total->size(), engine::no_local);
      for (auto const& fib : ext.inclusion) {
        for (std::size_t n = 0; n < fib.size(); ++n) {
          ext.kernel_local[fib[n]] = static_cast<Local>(n);
        }
      }
    }

  }  // namespace detail

  //! Derives N = ker j from (E, G, j). Throws InvalidInput if j is not a
  //! surjective homomorphism and KernelMismatch if it is not the identity
  //! on objects.
  inline Extension make_extension(GroupoidPtr total, GroupoidPtr base, std::vector<Id> projection) {
    auto const& e = *total;
    auto const& g = *base;
    GroupoidHomomorphism j{&e, &g, projection};
    auto const           bad = validate_homomorphism(j);
    if (!bad.empty()) {
      fail(ErrorCode::invalid_input, "projection is not a homomorphism: " + bad.front());
    }
    std::vector<bool> hit(g.size(), false);
    for (Id v : projection) {
      hit[v] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
      fail(ErrorCode::invalid_input, "projection is not surjective");
    }
    if (e.nr_objects() != g.nr_objects()) {
      fail(ErrorCode::kernel_mismatch, "E and G have different objects");
    }
    for (std::size_t i = 0; i < e.nr_objects(); ++i) {
      Id const u = e.objects()[i];
      if (projection[u] != g.objects()[i] || e.name(u) != g.name(g.objects()[i])) {
        fail(ErrorCode::kernel_mismatch, "projection is not the identity on objects");
      }
    }
    Extension ext{total, base, projection, nullptr, {}, {}};
    std::vector<std::string> objects;
    std::vector<FiniteGroup> fibers;
    for (std::size_t i = 0; i < g.nr_objects(); ++i) {
      Id const        u = g.objects()[i];
      std::vector<Id> members;
      for (Id x = 0; x < e.size(); ++x) {
        if (projection[x] == u) {
          members.push_back(x);
        }
      }
      std::map<Id, Local>      pos;
      std::vector<std::string> names;
      for (std::size_t k = 0; k < members.size(); ++k) {
        pos[members[k]] = static_cast<Local>(k);
        names.push_back(e.name(members[k]));
      }
      std::vector<Local> table(members.size() * members.size());
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = 0; b < members.size(); ++b) {
          Id const p = e.product_or_none(members[a], members[b]);
          if (p == no_id) {
            fail(ErrorCode::kernel_mismatch, "kernel is not a group bundle");
          }
          table[a * members.size() + b] = pos.at(p);
        }
      }
      objects.push_back(g.name(u));
      fibers.push_back(
          FiniteGroup::from_table(std::move(names), std::move(table), pos.at(e.objects()[i])));
      ext.inclusion.push_back(std::move(members));
    }
    ext.kernel = share(GroupBundle(std::move(objects), std::move(fibers)));
    detail::fill_kernel_local(ext);
    return ext;
  }

  struct ExtensionWithSection {
    Extension       extension;
    //! The canonical section k(x) = (1, x).
    std::vector<Id> section;
  };

  //! N x_(L,sigma) G. Elements (n, x) with n in N_{r(x)} are named "(n,x)";
  //! (1_u, u) is named u. Throws InvalidFactorSystem unless (F1), (F2).
  inline ExtensionWithSection build_extension(FactorSystem const& fs) {
    auto const report = check_factor_system(fs);
    if (!report.valid()) {
      fail(ErrorCode::invalid_factor_system,
           report.satisfies_f1 ? "(F2) fails" : "(F1) fails");
    }
    auto const& g  = fs.base();
    auto const& nb = fs.setting->bundle();
    std::vector<std::pair<Local, Id>> elems;
    std::map<std::pair<Local, Id>, Id> where;
    std::vector<std::string>           names;
    std::vector<bool>                  is_unit;
    for (Id x = 0; x < g.size(); ++x) {
      auto const& f = fs.setting->range_fiber(x);
      for (Local n = 0; n < f.size(); ++n) {
        where[{n, x}] = static_cast<Id>(elems.size());
        elems.emplace_back(n, x);
        bool const unit = g.is_unit(x) && n == f.unit();
        is_unit.push_back(unit);
        names.push_back(unit ? g.name(x) : "(" + f.name(n) + "," + g.name(x) + ")");
      }
    }
    std::vector<Id> src, rng, inv;
    for (auto const& [n, x] : elems) {
      Id const s = g.source(x), r = g.range(x);
      src.push_back(where.at({nb.fiber(g.object_ordinal(s)).unit(), s}));
      rng.push_back(where.at({nb.fiber(g.object_ordinal(r)).unit(), r}));
      Id const    xi = g.inverse(x);
      auto const& fr = fs.setting->range_fiber(xi);
      Local const a  = fr.inverse(fs.sigma(xi, x));
      Local const b  = fs.L(xi)[fs.setting->range_fiber(x).inverse(n)];
      inv.push_back(where.at({fr.op(a, b), xi}));
    }
    GroupoidPtr e = share(Groupoid::build(names, is_unit, src, rng, inv, [&](Id p, Id q) {
      auto const [n, x] = elems[p];
      auto const [m, y] = elems[q];
      auto const& f     = fs.setting->range_fiber(x);
      Local const v     = f.op(f.op(n, fs.L(x)[m]), fs.sigma(x, y));
      return where.at({v, g.product(x, y)});
    }));
    // Re-index through names: the built groupoid sorts its elements.
    Extension ext{e, fs.setting->base_ptr(), std::vector<Id>(e->size()), fs.setting->bundle_ptr(), {}, {}};
    std::vector<Id> section(g.size());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      auto const [n, x]             = elems[i];
      Id const id                   = e->id(names[i]);
      ext.projection[id]            = x;
      if (n == fs.setting->range_fiber(x).unit()) {
        section[x] = id;
      }
    }
    ext.inclusion.resize(g.nr_objects());
    for (std::size_t i = 0; i < g.nr_objects(); ++i) {
      Id const u = g.objects()[i];
      for (Local n = 0; n < nb.fiber(i).size(); ++n) {
        ext.inclusion[i].push_back(e->id(names[where.at({n, u})]));
      }
    }
    detail::fill_kernel_local(ext);
    return {std::move(ext), std::move(section)};
  }

  //! Throws NotASection unless j k = id and NotNormalized unless k(u) = u.
  inline void check_section(Extension const& ext, std::vector<Id> const& k) {
    auto const& g = ext.G();
    if (k.size() != g.size()) {
      fail(ErrorCode::not_a_section, "section table has the wrong size");
    }
    for (Id x = 0; x < g.size(); ++x) {
      if (k[x] >= ext.E().size() || ext.projection[k[x]] != x) {
        fail(ErrorCode::not_a_section, "j(k(" + g.name(x) + ")) != " + g.name(x));
      }
      if (g.is_unit(x) && !ext.E().is_unit(k[x])) {
        fail(ErrorCode::not_normalized, "k(" + g.name(x) + ") is not a unit");
      }
    }
  }

  //! L_x(n) = k(x) n k(x)^-1 and k(x) k(y) = sigma(x,y) k(xy).
  inline FactorSystem extension_from_section(Extension const&        ext,
                                             std::vector<Id> const&  k,
                                             FactorSettingPtr        setting = nullptr) {
    check_section(ext, k);
    auto const& e = ext.E();
    auto const& g = ext.G();
    if (!setting) {
      setting = make_setting(ext.base, ext.kernel);
    }
    auto kernel_value = [&](Id v, std::size_t ordinal) -> Local {
      Local const n = ext.kernel_local[v];
      if (n == engine::no_local || g.object_ordinal(ext.projection[v]) != ordinal) {
        fail(ErrorCode::kernel_mismatch, "element " + e.name(v) + " is not in the expected fiber");
      }
      return n;
    };
    FactorSystem fs{setting, {}};
    fs.data.L.resize(g.size());
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t const s = g.source_ordinal(x), r = g.range_ordinal(x);
      for (Id n : ext.inclusion[s]) {
        Id const v = e.product(e.product(k[x], n), e.inverse(k[x]));
        fs.data.L[x].push_back(kernel_value(v, r));
      }
    }
    for (auto const& [x, y] : g.composable_pairs()) {
      Id const v = e.product(e.product(k[x], k[y]), e.inverse(k[g.product(x, y)]));
      fs.data.sigma.push_back(kernel_value(v, g.range_ordinal(x)));
    }
    return fs;
  }

  //! e = n k(x) for every e in E: the pair (local n in N_{r(x)}, x).
  inline std::vector<std::pair<Local, Id>> decompose(Extension const& ext, std::vector<Id> const& k) {
    check_section(ext, k);
    auto const&                       e = ext.E();
    std::vector<std::pair<Local, Id>> out;
    for (Id v = 0; v < e.size(); ++v) {
      Id const x = ext.projection[v];
      Id const n = e.product(v, e.inverse(k[x]));
      out.emplace_back(ext.kernel_local[n], x);
    }
    return out;
  }

  //! The map (n, x) -> n k(x) from the built extension of `fs` into E.
  inline std::vector<Id> section_equivalence(ExtensionWithSection const& built,
                                             Extension const&            ext,
                                             std::vector<Id> const&      k) {
    auto const&     b = built.extension;
    std::vector<Id> out(b.E().size());
    auto const      parts = decompose(b, built.section);
    for (Id v = 0; v < b.E().size(); ++v) {
      auto const [n, x] = parts[v];
      Id const u        = ext.G().range_ordinal(x);
      out[v]            = ext.E().product(ext.inclusion[u][n], k[x]);
    }
    return out;
  }

  //! True iff psi : a -> b is a homomorphism with j_b psi = j_a that is the
  //! identity on N (through the two kernel inclusions).
  inline bool is_equivalence_of_extensions(Extension const& a, Extension const& b, std::vector<Id> const& psi) {
    GroupoidHomomorphism h{a.total.get(), b.total.get(), psi};
    if (psi.size() != a.E().size() || !validate_homomorphism(h).empty()) {
      return false;
    }
    for (Id v = 0; v < psi.size(); ++v) {
      if (b.projection[psi[v]] != a.projection[v]) {
        return false;
      }
    }
    for (std::size_t u = 0; u < a.inclusion.size(); ++u) {
      for (std::size_t n = 0; n < a.inclusion[u].size(); ++n) {
        if (psi[a.inclusion[u][n]] != b.inclusion[u][n]) {
          return false;
        }
      }
    }
    return true;
  }

  //! h.(L, sigma). Throws InvalidInput for an invalid system or cochain.
  inline FactorSystem act(engine::OneCochain const& h, FactorSystem const& fs) {
    auto const& c = fs.setting->coefficients();
    engine::check_one_cochain(c, h);
    if (!check_factor_system(fs).valid()) {
      fail(ErrorCode::invalid_input, "act needs a valid factor system");
    }
    return {fs.setting, engine::act(c, h, fs.data)};
  }

  struct ExtensionEquivalence {
    engine::OneCochain   h;
    ExtensionWithSection from;  //!< built from fs' = h.fs
    ExtensionWithSection to;    //!< built from fs
    //! psi(n, x) = (n h(x), x), from `from` to `to`.
    std::vector<Id> psi;
  };

  //! h with fs' = h.fs and the verified equivalence psi : E_fs' -> E_fs.
  inline std::optional<ExtensionEquivalence> are_equivalent(FactorSystem const&     fs,
                                                            FactorSystem const&     fs2,
                                                            ExecutionContext const& ctx = {}) {
    if (!fs.setting->same_as(*fs2.setting)) {
      fail(ErrorCode::domain_mismatch, "factor systems over different (G, N)");
    }
    auto const& c = fs.setting->coefficients();
    auto        h = engine::find_equivalence(c, fs.data, fs2.data, ctx.bounds);
    if (!h) {
      return std::nullopt;
    }
    ExtensionEquivalence out{*h, build_extension(fs2), build_extension(fs), {}};
    auto const&          g     = fs.base();
    auto const           parts = decompose(out.from.extension, out.from.section);
    auto const&          to    = out.to.extension;
    for (auto const& [n, x] : parts) {
      auto const& f = fs.setting->range_fiber(x);
      Id const    m = to.inclusion[g.range_ordinal(x)][f.op(n, (*h)[x])];
      out.psi.push_back(to.E().product(m, out.to.section[x]));
    }
    if (!is_equivalence_of_extensions(out.from.extension, to, out.psi)) {
      fail(ErrorCode::invalid_input, "induced map failed verification");
    }
    return out;
  }

  //! Orbit representatives of Z^2(G, N) under C^1(G, N), grouped by kernel.
  inline engine::Classification classify(FactorSettingPtr const&                 s,
                                         std::optional<std::vector<Perm>> const& fixed_L = std::nullopt,
                                         ExecutionContext const&                 ctx     = {}) {
    return engine::classify(s->coefficients(), fixed_L, ctx);
  }

  struct CharacteristicClass {
    //! chi over the module bundle (Z(N), L).
    Cochain                     chi;
    ModuleBundle                center;
    bool                        central = false;
    bool                        cocycle = false;
    bool                        trivial = false;
    //! When trivial, rho with (L, sigma rho) satisfying (F1) and (F2).
    std::optional<std::vector<Local>> rho;
    std::optional<FactorSystem>        repaired;
  };

  //! chi_(L,sigma) for a pair satisfying (F1) only.
  inline CharacteristicClass characteristic_class(FactorSystem const&     partial,
                                                  ExecutionContext const& ctx = {}) {
    auto const& c   = partial.setting->coefficients();
    auto        obs = engine::obstruction(c, partial.data, ctx);
    auto        zm  = engine::center_module(c, partial.data.L);
    if (!obs.central) {
      fail(ErrorCode::invalid_input, "chi has a non-central value");
    }
    CharacteristicClass out{engine::to_central_cochain(c, zm, obs.values, 3), zm};
    out.central = obs.central;
    out.cocycle = obs.cocycle;
    out.trivial = obs.trivial;
    out.rho     = obs.rho;
    if (obs.repaired_sigma) {
      out.repaired = FactorSystem{partial.setting, {partial.data.L, *obs.repaired_sigma}};
    }
    return out;
  }

  //! (L, sigma rho) for rho a central 2-cocycle given as fiber elements by
  //! pair index.
  inline FactorSystem h2_ext_action(std::vector<Local> const& rho, FactorSystem const& fs) {
    if (!check_factor_system(fs).valid()) {
      fail(ErrorCode::invalid_input, "h2_ext_action needs a valid factor system");
    }
    return {fs.setting, engine::h2_action(fs.setting->coefficients(), rho, fs.data)};
  }

  //! The multiset of element orders of a one-object groupoid, ascending.
  inline std::vector<std::size_t> element_orders(Groupoid const& g) {
    if (g.nr_objects() != 1) {
      fail(ErrorCode::invalid_input, "element orders need a one-object groupoid");
    }
    Id const                 u = g.objects().front();
    std::vector<std::size_t> out;
    for (Id x = 0; x < g.size(); ++x) {
      std::size_t k = 1;
      for (Id p = x; p != u; p = g.product(p, x)) {
        ++k;
      }
      out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  struct ObstructionCandidate {
    std::string      label;
    FactorSettingPtr setting;
  };

  //! One-object bases Z2, Z3, Z4, Z2xZ2 against the non-abelian fibers of
  //! order at most 8. Abelian fibers are skipped: there every (F1) partner's
  //! chi is a coboundary.
  inline std::vector<ObstructionCandidate> small_obstruction_corpus() {
    std::vector<std::pair<std::string, FiniteGroup>> const bases = {
        {"Z2", FiniteGroup::cyclic(2)},
        {"Z3", FiniteGroup::cyclic(3)},
        {"Z4", FiniteGroup::cyclic(4)},
        {"Z2xZ2", FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))}};
    std::vector<std::pair<std::string, FiniteGroup>> const fibers = {
        {"S3", FiniteGroup::symmetric3()}, {"D4", FiniteGroup::dihedral(4)}, {"Q8", FiniteGroup::quaternion()}};
    std::vector<ObstructionCandidate> out;
    for (auto const& [bn, b] : bases) {
      auto g = share(one_object_groupoid(b, "u"));
      for (auto const& [fn, f] : fibers) {
        auto nb = std::make_shared<GroupBundle const>(GroupBundle::constant(*g, f));
        out.push_back({"(" + bn + "," + fn + ")", make_setting(g, nb)});
      }
    }
    return out;
  }

  struct ObstructionSearch {
    std::vector<std::string>           searched;
    std::size_t                        kernels = 0;
    std::optional<std::string>         label;
    std::optional<FactorSystem>        partial;
    std::optional<CharacteristicClass> characteristic;
  };

  //! Walks every kernel [L] of every candidate in order and stops at the
  //! first whose characteristic class is nontrivial.
  inline ObstructionSearch search_nontrivial_obstruction(std::vector<ObstructionCandidate> const& candidates,
                                                         ExecutionContext const&                  ctx = {}) {
    ObstructionSearch out;
    for (auto const& cand : candidates) {
      auto const&                    c = cand.setting->coefficients();
      std::vector<std::vector<Perm>> outer;
      for (auto& L : engine::enumerate_iso_families(c, ctx.bounds)) {
        if (engine::is_outer(c, L)) {
          outer.push_back(std::move(L));
        }
      }
      out.searched.push_back(cand.label);
      if (outer.empty()) {
        continue;
      }
      auto const        orbit = engine::detail::family_orbits(c, outer);
      std::size_t const nr    = *std::max_element(orbit.begin(), orbit.end()) + 1;
      std::vector<bool> done(nr, false);
      for (std::size_t i = 0; i < outer.size(); ++i) {
        if (done[orbit[i]]) {
          continue;
        }
        done[orbit[i]] = true;
        ++out.kernels;
        FactorSystem partial{cand.setting, {outer[i], {}}};
        for (auto const& d : engine::twist_domains(c, outer[i])) {
          partial.data.sigma.push_back(d.front());
        }
        auto cls = characteristic_class(partial, ctx);
        if (!cls.trivial) {
          out.label          = cand.label;
          out.partial        = std::move(partial);
          out.characteristic = std::move(cls);
          return out;
        }
      }
    }
    return out;
  }

}  // namespace gpdext

#endif  // GPDEXT_EXTENSION_HPP_
