#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "aud/experiments.hpp"

namespace {

namespace ex = aud::experiments;

aud::Json read_json(const std::string& path) {
  std::ifstream f(path);
  EXPECT_TRUE(f.good()) << path;
  aud::Json j;
  f >> j;
  return j;
}

TEST(Presets, ShippedFilesMatchBuiltIns) {
  for (auto name : ex::preset_names()) {
    const std::string path = std::string(AUD_PRESET_DIR) + "/" + std::string(name) + ".json";
    const auto from_file = ex::sweep_spec_from_json(read_json(path));
    EXPECT_EQ(ex::to_json(from_file), ex::to_json(ex::preset(name))) << name;
  }
}

TEST(Presets, AllAnalyticRowsAreFinite) {
  for (auto name : ex::preset_names()) {
    auto spec = ex::preset(name);
    spec.estimators = ex::Estimators::analytic;
    const auto rows = ex::sweep(spec);
    EXPECT_EQ(rows.size(),
              spec.grid.size() * spec.services.size() * spec.decisions.size() * spec.arrivals.size());
    for (const auto& r : rows) {
      ASSERT_TRUE(r.analytic.has_value()) << name << " " << r.variant << " " << r.parameter << " " << r.note;
      EXPECT_TRUE(std::isfinite(*r.analytic));
    }
  }
}

TEST(Presets, UnknownNameRejected) { EXPECT_THROW(ex::preset("fig9"), aud::ConfigError); }

TEST(Sweep, RowsFollowGridThenVariantOrder) {
  ex::SweepSpec spec;
  spec.parameter = ex::SweepParameter::lambda;
  spec.grid = {0.3, 0.6};
  spec.estimators = ex::Estimators::analytic;
  const auto rows = ex::sweep(spec);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].variant, "M/M/1/M");
  EXPECT_EQ(rows[1].variant, "M/U/1/M");
  EXPECT_EQ(rows[2].variant, "M/D/1/M");
  EXPECT_DOUBLE_EQ(rows[3].parameter, 0.6);
}

TEST(Sweep, UnstablePointsAreSkippedWithANote) {
  ex::SweepSpec spec;
  spec.parameter = ex::SweepParameter::lambda;
  spec.grid = {1.0, 1.5, 1.6};
  spec.services = {aud::LawKind::exponential};
  spec.sim.n_updates = 2'000;
  spec.sim.replications = 2;
  const auto rows = ex::sweep(spec);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].analytic && rows[0].sim);
  EXPECT_TRUE(rows[0].abs_gap.has_value());
  for (int i : {1, 2}) {
    EXPECT_FALSE(rows[i].analytic.has_value());
    EXPECT_FALSE(rows[i].sim.has_value());
    EXPECT_NE(rows[i].note.find("unstable"), std::string::npos);
  }
}

TEST(Sweep, NonPoissonArrivalsAreSimulatedOnly) {
  ex::SweepSpec spec;
  spec.parameter = ex::SweepParameter::nu;
  spec.grid = {5.0};
  spec.arrivals = {aud::LawKind::uniform};
  spec.services = {aud::LawKind::exponential};
  spec.sim.n_updates = 2'000;
  spec.sim.replications = 2;
  const auto rows = ex::sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].variant, "U/M/1/M");
  EXPECT_FALSE(rows[0].analytic.has_value());
  EXPECT_TRUE(rows[0].sim.has_value());
  EXPECT_NE(rows[0].note.find("analytic skipped"), std::string::npos);
}

TEST(Sweep, CsvIsByteIdenticalAcrossRuns) {
  auto spec = ex::preset("fig7");
  spec.grid = {2, 10};
  spec.sim.n_updates = 5'000;
  spec.sim.replications = 3;
  std::ostringstream a, b;
  ex::write_csv(a, ex::sweep(spec));
  ex::write_csv(b, ex::sweep(spec));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "parameter,variant,analytic,sim_mean,sim_ci_low,sim_ci_high,abs_gap,rel_gap,note");
}

TEST(Sweep, JsonRoundTrip) {
  auto spec = ex::preset("fig5b");
  spec.nu = 7.5;
  spec.sim.random_phase = true;
  const auto back = ex::sweep_spec_from_json(ex::to_json(spec));
  EXPECT_EQ(ex::to_json(back), ex::to_json(spec));
}

TEST(Sweep, InvalidDescriptionsRejected) {
  EXPECT_THROW(ex::sweep_spec_from_json({{"grid", aud::Json::array()}}), aud::ConfigError);
  EXPECT_THROW(ex::sweep_spec_from_json({{"grid", {1.0, 0.5}}}), aud::ConfigError);
  EXPECT_THROW(ex::sweep_spec_from_json({{"grid", {1.0}}, {"parameter", "rho"}}), aud::ConfigError);
  EXPECT_THROW(ex::sweep_spec_from_json({{"grid", "oops"}}), aud::ConfigError);
  EXPECT_THROW(ex::sweep_spec_from_json({{"grid", {1.0}}, {"services", {"gamma"}}}), aud::ConfigError);
}

TEST(Sweep, LinearGridHasNoDrift) {
  const auto g = ex::linear_grid(0.1, 1.4, 0.1);
  ASSERT_EQ(g.size(), 14u);
  EXPECT_EQ(g[2], 0.3);
  EXPECT_EQ(g.back(), 1.4);
}

TEST(Table1, CellsAndReferences) {
  aud::sim::SimConfig cfg;
  cfg.n_updates = 5'000;
  cfg.replications = 2;
  const auto t = ex::table1(cfg);
  ASSERT_EQ(t.cells.size(), 12u);
  EXPECT_EQ(t.cells[0].system, "M/M/1/M");
  EXPECT_EQ(t.cells[5].system, "M/D/1/D");
  EXPECT_EQ(t.cells[7].system, "U/M/1/M");
  EXPECT_DOUBLE_EQ(t.cells[2].reference, 2.0091);
  EXPECT_NEAR(*t.cells[0].analytic, 2.3333, 5e-5);
  EXPECT_NEAR(*t.cells[4].analytic, 2.2640, 0.2);  // approximate closed form
  EXPECT_FALSE(t.cells[7].analytic.has_value());
  EXPECT_NEAR(*t.cells[9].analytic, 2.3336, 2e-4);
  std::ostringstream csv;
  ex::write_csv(csv, t);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);
}

}  // namespace
