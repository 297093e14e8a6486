#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "setevo/mask_io.hpp"
#include "setevo/outputs.hpp"
#include "setevo/scenario_io.hpp"

namespace setevo {
namespace {

using nlohmann::json;

json minimal() {
  return json::parse(R"({
    "mode": "brittle",
    "forcing": {"builder": "static-shape", "complement": {"type": "ball", "radius": 1.0}},
    "initial": {"shape": {"type": "ball", "radius": 0.8}}
  })");
}

std::string pointer_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.pointer;
  }
  return "<no error>";
}

TEST(Config, MinimalGetsDefaults) {
  const auto cfg = parse_config(minimal());
  EXPECT_EQ(cfg.kind, ScenarioKind::grid);
  EXPECT_EQ(cfg.scenario.a, 5.0);
  EXPECT_EQ(cfg.scenario.grid, GridSpec::standard(256));
  EXPECT_EQ(cfg.scenario.scheme, PerimeterScheme::isotropic);
  EXPECT_EQ(cfg.scenario.mode, Mode::brittle);
  EXPECT_EQ(cfg.scenario.partition, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(cfg.scenario.solver.max_iterations, 20000);
  EXPECT_DOUBLE_EQ(cfg.scenario.solver.tolerance, 36e-6);
  EXPECT_TRUE(cfg.scenario.solver.adaptive_steps);
  EXPECT_EQ(cfg.scenario.density_constant, 0.5);
  EXPECT_DOUBLE_EQ(cfg.scenario.resolved_density_radius(), 0.2);
  EXPECT_FALSE(cfg.prescribed);
}

TEST(Config, FixedStepsCanBeSelected) {
  auto doc = minimal();
  doc["solver"] = {{"adaptive_steps", false}};
  const auto cfg = parse_config(doc);
  EXPECT_FALSE(cfg.scenario.solver.adaptive_steps);
  EXPECT_FALSE(cfg.echo["solver"]["adaptive_steps"].get<bool>());
  EXPECT_EQ(parse_config(cfg.echo).echo, cfg.echo);
}

TEST(Config, ErrorsNameTheKey) {
  auto doc = minimal();
  doc["a"] = -1;
  EXPECT_EQ(pointer_of(doc), "/a");
  doc = minimal();
  doc["colour"] = "red";
  EXPECT_EQ(pointer_of(doc), "/colour");
  doc = minimal();
  doc["domain"] = {{"cells", 0}};
  EXPECT_EQ(pointer_of(doc).rfind("/domain", 0), 0u);
  doc = minimal();
  doc["forcing"]["complement"]["radius"] = "big";
  EXPECT_EQ(pointer_of(doc), "/forcing/complement/radius");
  doc = minimal();
  doc["forcing"]["builder"] = "tornado";
  EXPECT_EQ(pointer_of(doc), "/forcing/builder");
  doc = minimal();
  doc["mode"] = {{"type", "adhesive"}};
  EXPECT_EQ(pointer_of(doc), "/mode/k");
  doc = minimal();
  doc["initial"]["full"] = true;
  EXPECT_EQ(pointer_of(doc), "/initial");
  doc = minimal();
  doc["domain"] = {{"side", {6, 4}}};
  EXPECT_EQ(pointer_of(doc).rfind("/domain", 0), 0u);
}

TEST(Config, InfeasibleStartAndNonMonotoneForcing) {
  auto doc = minimal();
  doc["initial"]["shape"]["radius"] = 1.5;
  EXPECT_THROW(parse_config(doc), InfeasibleStart);
  doc = minimal();
  doc["time"] = {{"T", 2}, {"steps", 2}};
  doc["forcing"] = json::parse(R"({"builder": "schedule", "times": [0, 1.5],
    "complements": [{"type": "ball", "radius": 1.0}, {"type": "ball", "radius": 1.2}]})");
  try {
    parse_config(doc);
    FAIL() << "expected NonMonotoneForcing";
  } catch (const NonMonotoneForcing& e) {
    EXPECT_EQ(e.earlier, 1.0);
    EXPECT_EQ(e.later, 2.0);
  }
}

TEST(Config, EchoRoundTrip) {
  for (const auto& id : preset_ids()) {
    const auto cfg = load_scenario(preset_path(id));
    const auto again = parse_config(cfg.echo);
    EXPECT_EQ(again.echo, cfg.echo) << id;
    EXPECT_EQ(manifest_config(again), manifest_config(cfg)) << id;
    if (cfg.kind == ScenarioKind::grid) {
      EXPECT_EQ(again.scenario.initial, cfg.scenario.initial) << id;
      EXPECT_EQ(again.scenario.partition, cfg.scenario.partition) << id;
    }
  }
}

TEST(Config, ManifestIgnoresOutputDirectory) {
  auto doc = minimal();
  doc["outputs"] = {{"directory", "somewhere"}};
  auto other = minimal();
  other["outputs"] = {{"directory", "elsewhere"}};
  EXPECT_EQ(manifest_config(parse_config(doc)), manifest_config(parse_config(other)));
}

TEST(Config, ProfileAndGridKeysDoNotMix) {
  auto doc = json::parse(R"({"kind": "profile", "profile": {"obstacles": [{"id": "fig-f1"}]}})");
  EXPECT_NO_THROW(parse_config(doc));
  doc["mode"] = "brittle";
  EXPECT_EQ(pointer_of(doc), "/mode");
  auto grid = minimal();
  grid["profile"] = json::object();
  EXPECT_EQ(pointer_of(grid), "/profile");
}

TEST(Obstacles, PresetFormulas) {
  const auto f1 = parse_obstacle({{"id", "fig-f1"}}).function();
  EXPECT_DOUBLE_EQ(f1(0.0), 0.75);
  EXPECT_DOUBLE_EQ(f1(0.5), 0.5);
  const auto f41 = parse_obstacle({{"id", "fig-f41"}}).function();
  EXPECT_DOUBLE_EQ(f41(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f41(0.0), 0.5);
  EXPECT_DOUBLE_EQ(f41(0.45), 0.75);
  const auto f2 = parse_obstacle({{"id", "fig-f2"}, {"beta", 2.0}}).function();
  EXPECT_DOUBLE_EQ(f2(0.0), 0.25);
  EXPECT_THROW(parse_obstacle({{"id", "fig-f9"}}), ConfigError);
  EXPECT_THROW(parse_obstacle({{"id", "fig-f2"}}), ConfigError);
}

TEST(Forcing, DiscRowSchedule) {
  const GridSpec g({0.0, -3.0}, 6.0, 192);
  const auto f = build_forcing({{"builder", "disc-row"}, {"M", 5}}, 5.0, g);
  for (double t : {0.0, 0.5, 1.0, 2.7, 4.2, 5.0}) {
    EXPECT_EQ(connected_components(f->complement_set(t, g)).count, 5 - static_cast<int>(std::floor(t))) << t;
  }
  // Default radius 2/a.
  EXPECT_EQ(f->complement_set(4.5, g), rasterize(shapes::Ball{{1.0, 0.0}, 0.4}, g));
}

TEST(Forcing, BuildersAndErrors) {
  const GridSpec g = GridSpec::standard(64);
  EXPECT_NO_THROW(build_forcing({{"builder", "needle"}, {"gamma", 0.05}}, 5.0, g));
  EXPECT_NO_THROW(build_forcing({{"builder", "polygon-complement"}, {"n", 6}, {"side", 1.6}}, 5.0, g));
  EXPECT_NO_THROW(build_forcing(json::parse(R"({"builder": "mickey-sequence"})"), 5.0, g));
  EXPECT_THROW(build_forcing({{"builder", "shrinking-balls"}, {"centers", json::array({json::array({0, 0})})},
                              {"r0", 1.0}, {"rate", -1.0}},
                             5.0, g),
               ConfigError);
  EXPECT_THROW(build_forcing({{"builder", "needle"}, {"gamma", 1.5}}, 5.0, g), ConfigError);
}

TEST(Presets, AllLoad) {
  const auto ids = preset_ids();
  EXPECT_GE(ids.size(), 15u);
  for (const auto& id : ids) EXPECT_NO_THROW(load_scenario(preset_path(id))) << id;
  EXPECT_THROW(preset_path("no-such-figure"), ConfigError);
}

TEST(Presets, FigF1IsAProfileScenario) {
  const auto cfg = load_scenario(preset_path("fig-f1"));
  EXPECT_EQ(cfg.kind, ScenarioKind::profile);
  EXPECT_EQ(cfg.profile.a_values, (std::vector<double>{7.0, 3.0}));
  EXPECT_EQ(cfg.profile.N, 100);
}

TEST(Presets, MaskInitialResolvesRelativeToTheConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "setevo_cfg_test";
  std::filesystem::create_directories(dir);
  const GridSpec g = GridSpec::standard(32);
  write_mask(rasterize(shapes::Ball{{0, 0}, 0.8}, g), dir / "z0");
  auto doc = minimal();
  doc["domain"] = {{"cells", 32}};
  doc["initial"] = {{"mask", "z0.pgm"}};
  std::ofstream(dir / "cfg.json") << doc.dump();
  const auto cfg = load_scenario(dir / "cfg.json");
  EXPECT_EQ(cfg.scenario.initial, rasterize(shapes::Ball{{0, 0}, 0.8}, g));
  doc["domain"] = {{"cells", 64}};
  std::ofstream(dir / "cfg.json") << doc.dump();
  EXPECT_THROW(load_scenario(dir / "cfg.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace setevo
