// gpdext: batch front end over the gpdext headers.
//
// Exit status: 0 success, 1 mathematical failure found, 2 usage or parse
// error, 3 search space too large.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpdext/bridge.hpp"
#include "gpdext/cohomology.hpp"
#include "gpdext/crossed.hpp"
#include "gpdext/extension.hpp"
#include "gpdext/io.hpp"

namespace {

  using namespace gpdext;
  using io::json;

  constexpr char const* version = "0.1.0";

  struct Config {
    std::string   format = "json";
    unsigned      workers = 1;
    std::uint64_t seed    = 0;
    bool          timings = false;
    Bounds        bounds;
    std::size_t   samples = 1000;
  };

  struct Outcome {
    json result;
    bool failure = false;
  };

  class Run {
   public:
    explicit Run(Config const& cfg) : cfg(cfg) {
      ctx.workers = cfg.workers;
      ctx.bounds  = cfg.bounds;
    }

    io::Document load(std::string const& flag, std::string const& path) {
      auto doc = io::load_document(path);
      inputs.push_back({{"flag", flag}, {"path", path}, {"fnv1a64", io::fnv1a64(doc.text)}});
      return doc;
    }

    Config const&    cfg;
    ExecutionContext ctx;
    json             inputs = json::array();
  };

  int exit_code(ErrorCode c) {
    switch (c) {
      case ErrorCode::search_space_too_large: return 3;
      case ErrorCode::parse_error:
      case ErrorCode::unresolved_id:
      case ErrorCode::invalid_input:
      case ErrorCode::domain_mismatch:
      case ErrorCode::carrier_mismatch:
      case ErrorCode::system_mismatch:
      case ErrorCode::component_mismatch:
      case ErrorCode::empty_object_set:
      case ErrorCode::invalid_group:
      case ErrorCode::invalid_groupoid:
      case ErrorCode::invalid_ring:
      case ErrorCode::invalid_bundle:
      case ErrorCode::not_composable: return 2;
      default: return 1;
    }
  }

  void render_text(json const& j, std::string const& prefix, std::ostream& out) {
    if (j.is_object()) {
      for (auto const& [k, v] : j.items()) {
        render_text(v, prefix.empty() ? k : prefix + "." + k, out);
      }
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
      for (std::size_t i = 0; i < j.size(); ++i) {
        render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
      }
    } else {
      out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
  }

  std::string arrow_name(Groupoid const& g, Id x) {
    return g.name(x);
  }

  json names_of(Groupoid const& g, std::vector<Id> const& ids) {
    json out = json::array();
    for (Id x : ids) {
      out.push_back(arrow_name(g, x));
    }
    return out;
  }

  json one_cochain_json(FactorSystem const& fs, std::vector<Local> const& h) {
    auto const& g   = fs.base();
    json        out = json::object();
    for (Id x : g.non_units()) {
      out[g.name(x)] = fs.setting->bundle().fiber(g.range_ordinal(x)).name(h[x]);
    }
    return out;
  }

  json family_json(Groupoid const& g, GroupBundle const& b, std::vector<Perm> const& L) {
    json out = json::object();
    for (Id x : g.non_units()) {
      auto const& s = b.fiber(g.source_ordinal(x));
      auto const& r = b.fiber(g.range_ordinal(x));
      json        m = json::object();
      for (Local n = 0; n < s.size(); ++n) {
        m[s.name(n)] = r.name(L[x][n]);
      }
      out[g.name(x)] = m;
    }
    return out;
  }

  json table_family_json(Groupoid const& g, TableRingBundle const& b, std::vector<Perm> const& M) {
    json out = json::object();
    for (Id x : g.non_units()) {
      auto const& s = b.fiber(g.source_ordinal(x));
      auto const& r = b.fiber(g.range_ordinal(x));
      json        m = json::object();
      for (Local n = 0; n < s.size(); ++n) {
        m[s.name(n)] = r.name(M[x][n]);
      }
      out[g.name(x)] = m;
    }
    return out;
  }

  // Commands.

  Outcome cmd_validate(Run& run, std::string const& path) {
    auto const tables = io::parse_groupoid_tables(run.load("--groupoid", path).value);
    auto const report = validate_groupoid(tables);
    json       v      = json::array();
    for (auto const& viol : report.violations) {
      v.push_back({{"axiom", to_string(viol.axiom)}, {"witness", viol.witness}});
    }
    return {{{"valid", report.empty()}, {"violations", v}}, !report.empty()};
  }

  Outcome cmd_components(Run& run, std::string const& path) {
    auto const g    = io::parse_groupoid(run.load("--groupoid", path).value);
    auto const part = component_partition(*g);
    json       b    = json::array();
    for (auto const& block : part.blocks) {
      b.push_back(names_of(*g, block));
    }
    return {{{"nr_components", part.blocks.size()}, {"components", b}}};
  }

  Outcome cmd_cohomology(Run& run, std::string const& gpath, std::string const& mpath, std::size_t degree) {
    auto const g  = io::parse_groupoid(run.load("--groupoid", gpath).value);
    auto const m  = io::parse_module(run.load("--module", mpath), g);
    auto const h  = cohomology_group(m, degree, run.ctx);
    json       reps = json::array();
    for (auto const& c : h.representatives) {
      reps.push_back(io::cochain_to_json(m, c));
    }
    return {{{"degree", degree},
             {"order", h.order()},
             {"nr_cocycles", h.nr_cocycles},
             {"nr_coboundaries", h.nr_coboundaries},
             {"representatives", reps}}};
  }

  json fs_report_json(FactorSystem const& fs, FactorSystemReport const& rep) {
    auto const& g  = fs.base();
    json        f1 = json::array(), f2 = json::array();
    for (auto const& w : rep.f1_failures) {
      f1.push_back({{"x", g.name(w.x)}, {"y", g.name(w.y)},
                    {"n", fs.setting->bundle().fiber(g.source_ordinal(w.y)).name(w.n)}});
    }
    for (auto const& w : rep.f2_failures) {
      f2.push_back({g.name(w.x), g.name(w.y), g.name(w.z)});
    }
    return {{"satisfies_F1", rep.satisfies_f1}, {"satisfies_F2", rep.satisfies_f2}, {"F1_failures", f1}, {"F2_failures", f2}};
  }

  Outcome cmd_check_fs(Run& run, std::string const& path) {
    auto const fs  = io::parse_factor_system(run.load("--factor-system", path));
    auto const rep = check_factor_system(fs);
    return {fs_report_json(fs, rep), !rep.valid()};
  }

  Outcome cmd_build_ext(Run& run, std::string const& path) {
    auto const fs    = io::parse_factor_system(run.load("--factor-system", path));
    auto const built = build_extension(fs);
    return {{{"nr_elements", built.extension.E().size()},
             {"extension", io::extension_file(built.extension)},
             {"section", io::section_file(built.extension, built.section)}}};
  }

  Outcome cmd_from_section(Run& run, std::string const& epath, std::string const& kpath) {
    auto const ext = io::parse_extension(run.load("--extension", epath));
    auto const k   = io::parse_section(run.load("--section", kpath), ext);
    auto const fs  = extension_from_section(ext, k);
    auto const rep = check_factor_system(fs);
    return {{{"factor_system", io::factor_system_file(fs)}, {"valid", rep.valid()}}, !rep.valid()};
  }

  Outcome cmd_equivalent(Run& run, std::string const& a, std::string const& b) {
    auto const fs  = io::parse_factor_system(run.load("--factor-system", a));
    auto       fs2 = io::parse_factor_system(run.load("--other", b));
    fs2.setting    = fs.setting->same_as(*fs2.setting) ? fs.setting : fs2.setting;
    auto const eq  = are_equivalent(fs, fs2, run.ctx);
    if (!eq) {
      return {{{"equivalent", false}}};
    }
    json psi = json::object();
    for (Id v = 0; v < eq->psi.size(); ++v) {
      psi[eq->from.extension.E().name(v)] = eq->to.extension.E().name(eq->psi[v]);
    }
    return {{{"equivalent", true}, {"h", one_cochain_json(fs, eq->h)}, {"psi", psi}}};
  }

  Outcome cmd_classify(Run& run, std::string const& gpath, std::string const& bpath, std::string const& fixpath) {
    auto const g       = io::parse_groupoid(run.load("--groupoid", gpath).value);
    auto const bundle  = io::parse_bundle(run.load("--bundle", bpath));
    auto const setting = make_setting(g, bundle);
    std::optional<std::vector<Perm>> fixed;
    if (!fixpath.empty()) {
      auto fs = io::parse_factor_system(run.load("--fix-L", fixpath));
      if (!(fs.base() == *g) || !(fs.setting->bundle() == *bundle)) {
        fail(ErrorCode::domain_mismatch, "--fix-L system lives over another (G, N)");
      }
      fixed = fs.data.L;
    }
    auto const cl      = classify(setting, fixed, run.ctx);
    json       kernels = json::array(), classes = json::array();
    for (auto const& k : cl.kernels) {
      kernels.push_back({{"L", family_json(*g, *bundle, k.representative)},
                         {"nr_families", k.nr_families},
                         {"h2_order", k.h2_order},
                         {"obstruction_trivial", k.obstruction_trivial},
                         {"classes", k.classes}});
    }
    std::vector<json> built = run.ctx.parallel_map<json>(cl.classes.size(), [&](std::size_t i) {
      FactorSystem const fs{setting, cl.classes[i].representative};
      return io::groupoid_to_json(build_extension(fs).extension.E());
    });
    for (std::size_t i = 0; i < cl.classes.size(); ++i) {
      FactorSystem const fs{setting, cl.classes[i].representative};
      classes.push_back({{"kernel", cl.classes[i].kernel},
                         {"orbit_size", cl.classes[i].orbit_size},
                         {"factor_system", io::factor_system_to_json(fs)},
                         {"extension", built[i]}});
    }
    return {{{"nr_classes", cl.classes.size()},
             {"nr_kernels", cl.kernels.size()},
             {"nr_cocycles", cl.nr_cocycles},
             {"nr_families", cl.nr_families},
             {"nr_one_cochains", cl.nr_one_cochains.str()},
             {"kernels", kernels},
             {"classes", classes}}};
  }

  Outcome cmd_obstruction(Run& run, std::string const& path) {
    auto const fs  = io::parse_factor_system(run.load("--factor-system", path));
    auto const cls = characteristic_class(fs, run.ctx);
    json       out = {{"central", cls.central},
                      {"cocycle", cls.cocycle},
                      {"trivial", cls.trivial},
                      {"chi", io::cochain_to_json(cls.center, cls.chi)}};
    if (cls.repaired) {
      out["repaired"] = io::factor_system_to_json(*cls.repaired);
    }
    return {out};
  }

  template <typename B>
  json ring_report_json(RingFactorSystem<B> const& rfs) {
    auto const rep = check_ring_factor_system(rfs);
    json       out = {{"satisfies_C1", rep.satisfies_c1},
                      {"satisfies_C2", rep.satisfies_c2},
                      {"C1_failures", rep.c1_failures},
                      {"C2_failures", rep.c2_failures}};
    if (rep.valid()) {
      auto const rem              = verify_remark_identities(rfs);
      out["identities_checked"]   = rem.checks;
      out["identity_violations"]  = rem.violations;
    }
    return out;
  }

  Outcome cmd_check_ring_fs(Run& run, std::string const& path) {
    auto const any = io::parse_ring_system(run.load("--ring-system", path));
    return std::visit(
        [](auto const& rfs) {
          json out = ring_report_json(rfs);
          bool ok  = out["satisfies_C1"].get<bool>() && out["satisfies_C2"].get<bool>()
                    && out["identity_violations"].empty();
          return Outcome{out, !ok};
        },
        any);
  }

  Outcome cmd_crossed_product(Run& run, std::string const& path, std::string const& lpath, std::string const& rpath) {
    auto const any = io::parse_ring_system(run.load("--ring-system", path));
    auto const ld  = run.load("--left", lpath);
    auto const rd  = run.load("--right", rpath);
    return std::visit(
        [&](auto const& rfs) {
          using B = std::decay_t<decltype(rfs.bundle())>;
          CrossedProduct<B> const cp(rfs);
          auto const              f = io::parse_element(ld, cp.setting());
          auto const              h = io::parse_element(rd, cp.setting());
          return Outcome{{{"product", io::element_to_json(cp.setting(), cp.multiply(f, h))}}};
        },
        any);
  }

  //! Table form of a ring system: as given, or converted from Z/m group rings.
  TableFactorSystem as_table(io::AnyRingSystem const& any, Bounds const& bounds) {
    if (auto const* t = std::get_if<TableFactorSystem>(&any)) {
      return *t;
    }
    return to_table(std::get<GroupRingSystem>(any), bounds);
  }

  Outcome cmd_classify_crossed(Run& run, std::string const& gpath, std::string const& rpath, std::string const& fixpath) {
    auto const g   = io::parse_groupoid(run.load("--groupoid", gpath).value);
    auto const rbd = run.load("--ring-bundle", rpath);
    io::Document synth{{{"schema", 1}, {"groupoid", io::groupoid_to_json(*g)}, {"ring_bundle", rbd.value}}, rbd.dir, ""};
    auto const trivial = as_table(io::parse_ring_system(synth), run.ctx.bounds);
    auto const setting = trivial.setting;
    std::optional<std::vector<Perm>> fixed;
    if (!fixpath.empty()) {
      auto const fixsys = as_table(io::parse_ring_system(run.load("--fix-M", fixpath)), run.ctx.bounds);
      if (!fixsys.setting->same_as(*setting)) {
        fail(ErrorCode::domain_mismatch, "--fix-M system lives over another (G, R)");
      }
      fixed = fixsys.M;
    }
    auto const  cl = classify_crossed(setting, fixed, run.ctx);
    auto const& b  = setting->bundle();
    json        kernels = json::array(), classes = json::array();
    for (auto const& k : cl.kernels) {
      kernels.push_back({{"M", table_family_json(*g, b, k.representative)},
                         {"nr_families", k.nr_families},
                         {"h2_order", k.h2_order},
                         {"obstruction_trivial", k.obstruction_trivial},
                         {"classes", k.classes}});
    }
    for (auto const& c : cl.classes) {
      TableFactorSystem const rfs{setting, c.representative.L, c.representative.sigma};
      classes.push_back({{"kernel", c.kernel}, {"orbit_size", c.orbit_size}, {"factor_system", io::ring_system_to_json(rfs)}});
    }
    return {{{"nr_classes", cl.classes.size()},
             {"nr_kernels", cl.kernels.size()},
             {"nr_cocycles", cl.nr_cocycles},
             {"nr_families", cl.nr_families},
             {"nr_one_cochains", cl.nr_one_cochains.str()},
             {"kernels", kernels},
             {"classes", classes}}};
  }

  Outcome cmd_xi_obstruction(Run& run, std::string const& path) {
    auto const rfs = as_table(io::parse_ring_system(run.load("--ring-system", path)), run.ctx.bounds);
    auto const xi  = xi_obstruction(rfs, run.ctx);
    json       out = {{"central", xi.central},
                      {"cocycle", xi.cocycle},
                      {"trivial", xi.trivial},
                      {"xi", io::cochain_to_json(xi.center, xi.xi)}};
    if (xi.repaired) {
      out["repaired"] = io::ring_system_to_json(*xi.repaired);
    }
    return {out};
  }

  std::vector<ScalarDomain> parse_scalars(std::string const& s) {
    std::vector<ScalarDomain> out;
    std::size_t               from = 0;
    while (true) {
      auto const comma = s.find(',', from);
      out.push_back(ScalarDomain::parse(s.substr(from, comma - from)));
      if (comma == std::string::npos) {
        return out;
      }
      from = comma + 1;
    }
  }

  Outcome cmd_verify_iso(Run& run, std::string const& epath, std::string const& kpath, std::string const& scalars) {
    auto const ext = io::parse_extension(run.load("--extension", epath));
    auto const k   = io::parse_section(run.load("--section", kpath), ext);
    json       out = json::array();
    bool       ok  = true;
    for (auto const& domain : parse_scalars(scalars)) {
      Bridge const br(ext, k, {domain});
      auto const   rep  = verify_isomorphism(br);
      auto const   fact = factorization_identity(br);
      json         one  = {{"scalars", domain.name()},
                           {"summary", rep.summary()},
                           {"basis_pairs", rep.basis_pairs},
                           {"multiplicative", rep.multiplicative},
                           {"additive", rep.additive},
                           {"bijective", rep.bijective},
                           {"unit_preserving", rep.unit_preserving},
                           {"counterexamples", rep.counterexamples},
                           {"factorization_targets", fact.targets},
                           {"factorization_mismatches", fact.mismatches}};
      ok = ok && rep.holds() && fact.holds();
      if (domain.kind == ScalarKind::gaussian_rationals) {
        auto const st        = verify_star_homomorphism(br, run.cfg.seed, run.cfg.samples);
        one["star_checks"]   = st.checks;
        one["star_failures"] = st.failures;
        ok                   = ok && st.holds();
      }
      out.push_back(std::move(one));
    }
    return {{{"checks", out}}, !ok};
  }

  Outcome cmd_star_check(Run& run, std::string const& path) {
    auto const any = io::parse_ring_system(run.load("--ring-system", path));
    auto const* rfs = std::get_if<GroupRingSystem>(&any);
    if (!rfs) {
      fail(ErrorCode::not_star_factor_system, "the *-layer needs group-ring fibers");
    }
    CrossedProduct<GroupRingBundle> const cp(*rfs);
    StarStructure const                   st(cp);
    std::mt19937_64                       rng(run.cfg.seed);
    std::size_t involution = 0, anti = 0, submult = 0, strict = 0;
    for (std::size_t i = 0; i < run.cfg.samples; ++i) {
      auto const f = random_element(cp.setting(), rng);
      auto const g = random_element(cp.setting(), rng);
      involution += st.star(st.star(f)) == f;
      anti += st.star(cp.multiply(f, g)) == cp.multiply(st.star(g), st.star(f));
      auto const lhs = st.norm1(cp.multiply(f, g));
      auto const rhs = st.norm1(f) * st.norm1(g);
      submult += lhs <= rhs;
      strict += lhs < rhs;
    }
    bool const ok = involution == run.cfg.samples && anti == run.cfg.samples && submult == run.cfg.samples;
    return {{{"samples", run.cfg.samples},
             {"involutive", involution},
             {"anti_multiplicative", anti},
             {"submultiplicative", submult},
             {"strict_inequalities", strict}},
            !ok};
  }

  Outcome cmd_search(Run& run) {
    auto const r   = search_nontrivial_obstruction(small_obstruction_corpus(), run.ctx);
    json       out = {{"searched", r.searched}, {"kernels_checked", r.kernels}, {"found", r.label.has_value()}};
    if (r.label) {
      out["setting"] = *r.label;
      out["L"]       = io::factor_system_to_json(*r.partial)["L"];
      out["chi"]     = io::cochain_to_json(r.characteristic->center, r.characteristic->chi);
    }
    return {out};
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Groupoid extensions, cohomology and crossed products"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for sampled sweeps");
  app.add_option("--samples", cfg.samples, "sample count for sampled sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--timings", cfg.timings, "print wall time to stderr");
  std::map<std::string, std::string> big;
  app.add_option("--max-elements", cfg.bounds.max_elements)->check(CLI::PositiveNumber);
  for (auto const* name : {"max-cochains", "max-one-cochains", "max-iso-families"}) {
    app.add_option(std::string("--") + name, big[name])->check(CLI::PositiveNumber);
  }

  std::map<std::string, std::string> f;
  std::size_t                        degree = 2;
  std::function<Outcome(Run&)>       action;
  auto opt = [&](CLI::App* sub, std::string const& name, bool required = true) {
    auto* o = sub->add_option("--" + name, f[name]);
    if (required) {
      o->required();
    }
  };
  auto cmd = [&](std::string const& name, std::string const& help) {
    auto* sub = app.add_subcommand(name, help);
    return sub;
  };

  auto* s = cmd("validate", "check the groupoid axioms");
  opt(s, "groupoid");
  s->callback([&] { action = [&](Run& r) { return cmd_validate(r, f["groupoid"]); }; });

  s = cmd("components", "connected components of the object set");
  opt(s, "groupoid");
  s->callback([&] { action = [&](Run& r) { return cmd_components(r, f["groupoid"]); }; });

  s = cmd("cohomology", "H^n of a module bundle");
  opt(s, "groupoid");
  opt(s, "module");
  s->add_option("--degree", degree)->required();
  s->callback([&] { action = [&](Run& r) { return cmd_cohomology(r, f["groupoid"], f["module"], degree); }; });

  s = cmd("check-fs", "check (F1) and (F2)");
  opt(s, "factor-system");
  s->callback([&] { action = [&](Run& r) { return cmd_check_fs(r, f["factor-system"]); }; });

  s = cmd("build-ext", "build the extension of a factor system");
  opt(s, "factor-system");
  s->callback([&] { action = [&](Run& r) { return cmd_build_ext(r, f["factor-system"]); }; });

  s = cmd("from-section", "factor system of an extension with a section");
  opt(s, "extension");
  opt(s, "section");
  s->callback([&] { action = [&](Run& r) { return cmd_from_section(r, f["extension"], f["section"]); }; });

  s = cmd("equivalent", "decide equivalence of two factor systems");
  opt(s, "factor-system");
  opt(s, "other");
  s->callback([&] { action = [&](Run& r) { return cmd_equivalent(r, f["factor-system"], f["other"]); }; });

  s = cmd("classify", "classify extensions of a groupoid by a group bundle");
  opt(s, "groupoid");
  opt(s, "bundle");
  opt(s, "fix-L", false);
  s->callback([&] { action = [&](Run& r) { return cmd_classify(r, f["groupoid"], f["bundle"], f["fix-L"]); }; });

  s = cmd("obstruction", "characteristic class of an (F1) pair");
  opt(s, "factor-system");
  s->callback([&] { action = [&](Run& r) { return cmd_obstruction(r, f["factor-system"]); }; });

  s = cmd("check-ring-fs", "check (C1), (C2) and the inverse identities");
  opt(s, "ring-system");
  s->callback([&] { action = [&](Run& r) { return cmd_check_ring_fs(r, f["ring-system"]); }; });

  s = cmd("crossed-product", "multiply two crossed-product elements");
  opt(s, "ring-system");
  opt(s, "left");
  opt(s, "right");
  s->callback([&] {
    action = [&](Run& r) { return cmd_crossed_product(r, f["ring-system"], f["left"], f["right"]); };
  });

  s = cmd("classify-crossed", "classify crossed products over a ring bundle");
  opt(s, "groupoid");
  opt(s, "ring-bundle");
  opt(s, "fix-M", false);
  s->callback([&] {
    action = [&](Run& r) { return cmd_classify_crossed(r, f["groupoid"], f["ring-bundle"], f["fix-M"]); };
  });

  s = cmd("xi-obstruction", "obstruction class of a (C1) pair");
  opt(s, "ring-system");
  s->callback([&] { action = [&](Run& r) { return cmd_xi_obstruction(r, f["ring-system"]); }; });

  s = cmd("verify-iso", "verify R[E] = R[N] x G for an extension with section");
  opt(s, "extension");
  opt(s, "section");
  f["scalars"] = "Z";
  opt(s, "scalars", false);
  s->callback([&] {
    action = [&](Run& r) { return cmd_verify_iso(r, f["extension"], f["section"], f["scalars"]); };
  });

  s = cmd("star-check", "sampled checks of the involution and norm");
  opt(s, "ring-system");
  s->callback([&] { action = [&](Run& r) { return cmd_star_check(r, f["ring-system"]); }; });

  s = cmd("search-nontrivial-obstruction", "look for a kernel with nontrivial characteristic class");
  s->callback([&] { action = [&](Run& r) { return cmd_search(r); }; });

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (char const* env = std::getenv("GROUPOID_EXT_MAX_WORKERS")) {
    try {
      unsigned long const w = std::stoul(env);
      if (w == 0) {
        throw std::invalid_argument("zero");
      }
      cfg.workers = static_cast<unsigned>(w);
    } catch (std::exception const&) {
      std::cerr << "GROUPOID_EXT_MAX_WORKERS must be a positive integer\n";
      return 2;
    }
  }

  auto set_bound = [&](char const* name, BigInt& into) {
    if (!big[name].empty()) {
      into = BigInt(big[name]);
    }
  };
  set_bound("max-cochains", cfg.bounds.max_cochains);
  set_bound("max-one-cochains", cfg.bounds.max_one_cochains);
  set_bound("max-iso-families", cfg.bounds.max_iso_families);

  std::string const command = app.get_subcommands().front()->get_name();
  Run               run(cfg);
  json              report = {{"command", command}, {"version", version}};
  int               code   = 0;
  auto const        start  = std::chrono::steady_clock::now();
  try {
    auto out         = action(run);
    report["inputs"] = run.inputs;
    report["status"] = out.failure ? "failure" : "ok";
    report["result"] = std::move(out.result);
    code             = out.failure ? 1 : 0;
  } catch (SearchSpaceTooLarge const& e) {
    report["inputs"] = run.inputs;
    report["status"] = "error";
    report["error"]  = {{"code", to_string(e.code())}, {"message", e.what()}, {"cardinality", e.cardinality()}};
    code             = 3;
  } catch (Error const& e) {
    report["inputs"] = run.inputs;
    report["status"] = "error";
    report["error"]  = {{"code", to_string(e.code())}, {"message", e.what()}};
    code             = exit_code(e.code());
  }
  if (cfg.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    render_text(report, "", std::cout);
  }
  if (code != 0 && report.contains("error")) {
    std::cerr << report["error"]["message"].get<std::string>() << "\n";
  }
  if (cfg.timings) {
    auto const ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "wall time: " << ms << " ms\n";
  }
  return code;
}
