#include <gtest/gtest.h>

#include <functional>

#include "corpus.hpp"
#include "gpdext/io.hpp"

using namespace gpdext;
using namespace gpdext::io;

namespace {

  std::filesystem::path const data_dir = GPDEXT_DATA_DIR;

  Document inline_doc(json j) {
    std::string text = j.dump();
    return parse_document(std::move(text), data_dir, "inline");
  }

  ErrorCode code_of(std::function<void()> const& f) {
    try {
      f();
    } catch (Error const& e) {
      return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_input;
  }

}  // namespace

TEST(Io, ParsesGroupoidFile) {
  auto const g = parse_groupoid(load_document(data_dir / "z2.json").value);
  EXPECT_EQ(g->size(), 2u);
  EXPECT_EQ(g->product(g->id("g"), g->id("g")), g->id("u"));
  EXPECT_EQ(g->inverse(g->id("g")), g->id("g"));
}

TEST(Io, BrokenGroupoidReportsG4) {
  auto const t   = parse_groupoid_tables(load_document(data_dir / "broken.json").value);
  auto const rep = validate_groupoid(t);
  ASSERT_EQ(rep.axioms(), std::set<Axiom>{Axiom::g4});
  EXPECT_EQ(rep.violations.front().witness, std::vector<std::string>{"a"});
  EXPECT_EQ(code_of([&] { Groupoid::from_tables(t); }), ErrorCode::invalid_groupoid);
}

TEST(Io, GroupoidRoundTrip) {
  for (auto const& [label, g] : corpus::groupoids()) {
    auto const back = parse_groupoid(inline_doc(groupoid_to_json(g)).value);
    EXPECT_EQ(*back, g) << label;
  }
}

TEST(Io, FactorSystemRoundTrip) {
  for (auto const& [label, s] : corpus::settings()) {
    for (auto const& fs : corpus::valid_systems(s)) {
      auto const back = parse_factor_system(inline_doc(factor_system_file(fs)));
      EXPECT_EQ(back.data, fs.data) << label;
      EXPECT_EQ(back.base(), fs.base()) << label;
      EXPECT_EQ(factor_system_file(back).dump(), factor_system_file(fs).dump()) << label;
    }
  }
}

TEST(Io, FactorSystemFileWithRefs) {
  auto const fs = parse_factor_system(load_document(data_dir / "z4fs.json"));
  EXPECT_TRUE(check_factor_system(fs).valid());
  EXPECT_EQ(element_orders(build_extension(fs).extension.E()), (std::vector<std::size_t>{1, 2, 4, 4}));
}

TEST(Io, ExtensionAndSectionRoundTrip) {
  for (auto const& fx : corpus::bridge_fixtures()) {
    auto const ext = parse_extension(inline_doc(extension_file(fx.ext)));
    auto const k   = parse_section(inline_doc(section_file(fx.ext, fx.k)), ext);
    EXPECT_EQ(ext.projection, fx.ext.projection) << fx.label;
    EXPECT_EQ(k, fx.k) << fx.label;
    EXPECT_EQ(extension_from_section(ext, k).data, extension_from_section(fx.ext, fx.k).data) << fx.label;
  }
}

TEST(Io, RingSystemFiles) {
  auto const z5 = parse_ring_system(load_document(data_dir / "z5rfs.json"));
  ASSERT_TRUE(std::holds_alternative<TableFactorSystem>(z5));
  auto const& t = std::get<TableFactorSystem>(z5);
  EXPECT_EQ(t.tau_at(t.base().id("g"), t.base().id("g")), 2u);
  EXPECT_TRUE(check_ring_factor_system(t).valid());

  auto const qi = parse_ring_system(load_document(data_dir / "qiz2rfs.json"));
  ASSERT_TRUE(std::holds_alternative<GroupRingSystem>(qi));
  auto const& q = std::get<GroupRingSystem>(qi);
  EXPECT_EQ(q.tau_at(q.base().id("g"), q.base().id("g")), (GroupRingValue{Scalar(0), Scalar(1)}));
  CrossedProduct<GroupRingBundle> const cp(q);
  EXPECT_NO_THROW(StarStructure{cp});

  // (1 + i) delta_1 is invertible but not unitary.
  json doc                 = load_document(data_dir / "qiz2rfs.json").value;
  doc["tau"]["g|g"]["1"]   = json::array({json::array({1, 1}), json::array({1, 1})});
  auto const  q2           = std::get<GroupRingSystem>(parse_ring_system(inline_doc(doc)));
  CrossedProduct<GroupRingBundle> const cp2(q2);
  EXPECT_EQ(code_of([&] { StarStructure st(cp2); }), ErrorCode::not_star_factor_system);
}

TEST(Io, RingSystemRoundTrip) {
  for (auto const& [label, s] : corpus::ring_settings()) {
    for (auto const& rfs : corpus::valid_ring_systems(s)) {
      json doc = ring_system_to_json(rfs);
      doc["schema"] = 1;
      auto const back = io::detail::parse_ring_system_as(inline_doc(doc), s->base_ptr(), s->bundle());
      EXPECT_EQ(back.M, rfs.M) << label;
      EXPECT_EQ(back.tau, rfs.tau) << label;
    }
  }
}

TEST(Io, ElementFiles) {
  auto const  sys = std::get<GroupRingSystem>(parse_ring_system(load_document(data_dir / "qiz2rfs.json")));
  auto const& s   = *sys.setting;
  auto const  f   = parse_element(load_document(data_dir / "elem_f.json"), s);
  ASSERT_EQ(f.coeff.size(), 2u);
  EXPECT_EQ(f.coeff.at(s.base().id("g")), (GroupRingValue{Scalar(Rational(1, 2)), Scalar(0, 1)}));
  EXPECT_EQ(f.coeff.at(s.base().id("u")), (GroupRingValue{Scalar(0), Scalar(-1)}));
  json const doc = {{"schema", 1}, {"element", element_to_json(s, f)}};
  EXPECT_EQ(parse_element(inline_doc(doc), s), f);
  json const bad = {{"schema", 1}, {"element", {{"g", {{"0", json::array({1, 0})}}}}}};
  EXPECT_EQ(code_of([&] { parse_element(inline_doc(bad), s); }), ErrorCode::parse_error);
}

TEST(Io, ParseErrors) {
  EXPECT_EQ(code_of([] { parse_document("{", data_dir, "x"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_document("{\"objects\": []}", data_dir, "x"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { preset_group("Z0"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { preset_group("A5"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { load_document(data_dir / "missing.json"); }), ErrorCode::parse_error);
  json fs = {{"schema", 1}, {"groupoid", "pair2.json"}, {"bundle", "pair2bundle.json"}, {"sigma", {{"x|x", "1"}}}};
  EXPECT_EQ(code_of([&] { parse_factor_system(inline_doc(fs)); }), ErrorCode::not_composable);
  json unknown = {{"schema", 1}, {"groupoid", "z2.json"}, {"bundle", "z2bundle.json"}, {"sigma", {{"h|h", "1"}}}};
  EXPECT_EQ(code_of([&] { parse_factor_system(inline_doc(unknown)); }), ErrorCode::unresolved_id);
}

TEST(Io, GroupPresets) {
  EXPECT_EQ(preset_group("Z2xZ3").size(), 6u);
  EXPECT_TRUE(preset_group("Z2xZ3").is_abelian());
  EXPECT_EQ(preset_group("D4").size(), 8u);
  EXPECT_EQ(preset_group("Q8").center().size(), 2u);
  EXPECT_FALSE(preset_group("S3").is_abelian());
  EXPECT_EQ(preset_group("1").size(), 1u);
  auto const g = parse_group(group_to_json(FiniteGroup::symmetric3()));
  EXPECT_EQ(g, FiniteGroup::symmetric3());
}

TEST(Io, Fnv1a64KnownValues) {
  EXPECT_EQ(fnv1a64(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a64("foobar"), "85944171f73967e8");
}
