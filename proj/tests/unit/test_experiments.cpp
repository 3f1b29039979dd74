#include <gtest/gtest.h>

#include <cmath>

#include "z2hm/correction.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/experiments.hpp"
#include "z2hm/model.hpp"

using namespace z2hm;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.lattice.kind = "flake";
  c.lattice.params = {0};
  c.m = 1.0;
  c.g = 0.5;
  c.lambda = 1.0;
  c.dt = 0.25;
  c.times = {0.0, 0.5, 1.0};
  c.initial_paths = {{0, 1, 3}};
  c.observables = {"occupation:0", "occupation:1", "gauge:0", "total_occupation"};
  c.shots = 2000;
  c.seed = 11;
  c.bootstrap.resamples = 200;
  return c;
}

}  // namespace

TEST(Experiments, ConfigValidation) {
  auto c = base_config();
  EXPECT_NO_THROW(c.validate());
  c.shots = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = base_config();
  c.times = {0.5, 0.2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = base_config();
  c.dt = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = base_config();
  c.mitigation.calibration = "bogus";
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Experiments, ObservableResolution) {
  const auto lat = LatticeGraph::flake(0);
  EXPECT_EQ(resolve_observable("occupation:2", lat).support(), (std::vector<int>{2}));
  EXPECT_EQ(resolve_observable("gauge:1", lat).support(), (std::vector<int>{lat.edge_qubit(1)}));
  EXPECT_EQ(resolve_observable("z:4", lat).terms.size(), 1u);
  EXPECT_EQ(resolve_observable("string:0,1,3", lat).support(), (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(resolve_observable("total_occupation", lat).support().size(), 6u);
  EXPECT_THROW(resolve_observable("occupation:9", lat), Error);
  EXPECT_THROW(resolve_observable("nonsense", lat), Error);
}

TEST(Experiments, NoInteractionKeepsTheBasisState) {
  auto c = base_config();
  c.lambda = 0;
  const auto ts = run_quench(c);
  const auto init = prepare_string_state(c.lattice.build(), c.initial_paths[0]).bits;
  for (std::size_t t = 0; t < ts.times.size(); ++t) {
    EXPECT_DOUBLE_EQ(ts.estimates[t][0].mean, init[0]);
    EXPECT_DOUBLE_EQ(ts.estimates[t][1].mean, init[1]);
    EXPECT_DOUBLE_EQ(ts.estimates[t][2].mean, 1.0 - 2 * init[6]);
  }
}

TEST(Experiments, Reproducible) {
  auto c = base_config();
  c.noise.p2 = 0.01;
  c.noise.p_meas = 0.01;
  c.mitigation.twirl = true;
  c.mitigation.twirl_instances = 3;
  c.mitigation.gsc = true;
  c.mitigation.odr = true;
  const auto a = run_quench(c);
  const auto b = run_quench(c);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.config_hash.empty());
  c.seed = 12;
  EXPECT_NE(run_quench(c).estimates, a.estimates);
}

TEST(Experiments, NoiselessTracksExactReference) {
  auto c = base_config();
  c.dt = 0.05;
  c.shots = 20000;
  c.exact_reference = true;
  const auto ts = run_quench(c);
  ASSERT_EQ(ts.reference.size(), ts.times.size());
  for (std::size_t t = 0; t < ts.times.size(); ++t)
    for (std::size_t o = 0; o < 3; ++o) {
      const auto& e = ts.estimates[t][o];
      const double ref = ts.reference[t][o];
      // Sampling error plus a small Trotter error.
      EXPECT_NEAR(e.mean, ref, 4 * e.std_error + 0.01) << "t=" << ts.times[t] << " obs " << o;
    }
}

TEST(Experiments, PostselectionAccounting) {
  auto c = base_config();
  c.noise.p2 = 0.02;
  c.mitigation.gsc = true;
  c.mitigation.gsc_keep_fraction = 0.3;
  const auto ts = run_quench(c);
  for (std::size_t t = 1; t < ts.times.size(); ++t) {
    const auto& a = ts.accounting[t];
    EXPECT_EQ(a.generated, 2000);
    EXPECT_LE(a.postselected, a.generated);
    EXPECT_GE(a.postselected, 600);
    EXPECT_EQ(a.used, a.postselected);
  }
}

TEST(Experiments, StringCorrelatorBounds) {
  const auto lat = LatticeGraph::flake(0);
  auto s = StateVector::from_bits(prepare_string_state(lat, std::vector<int>{0, 1, 3}).bits);
  EXPECT_DOUBLE_EQ(string_correlator(s, lat, {0, 3}), 1.0);
  EXPECT_DOUBLE_EQ(string_correlator(s, lat, {0, 1}), 0.0);
  const auto evolved = exact_evolve(s, Hamiltonian(lat, 1, 0.5, 1), 1.3);
  const double v = string_correlator(evolved, lat, {0, 3});
  EXPECT_GE(v, 0.0);
  EXPECT_LE(v, 1.0);
  const double n0 = (1 - expectation(evolved, PauliString::single(0, Pauli::Z))) / 2;
  EXPECT_LE(v, n0 + 1e-12);
}

TEST(Experiments, EmptySweepEqualsSingleRun) {
  const auto c = base_config();
  const auto pts = sweep(c, {});
  ASSERT_EQ(pts.size(), 1u);
  const auto direct = run_quench(c);
  EXPECT_EQ(pts[0].series.estimates, direct.estimates);
  EXPECT_EQ(pts[0].series.config_hash, direct.config_hash);
}

TEST(Experiments, SweepGridAndComparability) {
  auto c = base_config();
  c.times = {0.5};
  const auto pts = sweep(c, {{"g", {0.5, 1.0}}, {"gsc", {0, 1}}});
  ASSERT_EQ(pts.size(), 4u);
  std::vector<TimeSeries> all;
  for (const auto& p : pts) all.push_back(p.series);
  EXPECT_NO_THROW(check_comparable(all));
  EXPECT_NE(all[0].config_hash, all[1].config_hash);
  auto other = c;
  other.m = 2.0;
  all.push_back(run_quench(other));
  EXPECT_THROW(check_comparable(all), InvalidArgument);
  EXPECT_THROW(sweep(c, {{"nope", {1}}}), Error);
  const auto applied = apply_assignment(c, {{"noise_scale", 2.0}, {"odr", 1}});
  EXPECT_TRUE(applied.mitigation.odr);
}
