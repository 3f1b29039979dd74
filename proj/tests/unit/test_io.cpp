#include <gtest/gtest.h>

#include <filesystem>

#include "z2hm/errors.hpp"
#include "z2hm/io.hpp"

using namespace z2hm;

namespace {

const std::string kMinimal = R"(
lattice: {kind: flake, rings: 0}
model: {m: 1.0, g: 0.5, lambda: 1.0}
evolution: {dt: 0.1}
)";

std::string data_path(const std::string& name) { return std::string(Z2HM_TEST_DATA) + "/" + name; }

TimeSeries small_series() {
  auto c = load_config(data_path("small.yaml"));
  return run_quench(c);
}

}  // namespace

TEST(Io, Defaults) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.shots, 10000);
  EXPECT_EQ(c.bootstrap.resamples, 1000);
  EXPECT_DOUBLE_EQ(c.bootstrap.level, 0.7);
  EXPECT_EQ(c.observables, (std::vector<std::string>{"occupation:all"}));
  EXPECT_EQ(c.times, (std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_TRUE(c.noise.is_noiseless());
  EXPECT_EQ(c.qubit_cap, 22);
  EXPECT_EQ(c.lattice.params, (std::vector<int>{0}));
}

TEST(Io, UnknownKeyNamesLocation) {
  try {
    load_config(data_path("unknown_key.yaml"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("mu"), std::string::npos) << msg;
    EXPECT_NE(msg.find("unknown_key.yaml:8:"), std::string::npos) << msg;
  }
}

TEST(Io, RejectsInvalidConfigs) {
  EXPECT_THROW(parse_config(kMinimal + "shots: 0\n"), ConfigError);
  EXPECT_THROW(parse_config("lattice: {kind: flake, rings: 0}\nmodel: {m: 1, g: 1, lambda: 1}\n"), ConfigError);
  EXPECT_THROW(parse_config("lattice: {kind: flake, rings: 0}\nmodel: {m: 1, lambda: 1}\nevolution: {dt: 0.1}\n"),
               ConfigError);
  EXPECT_THROW(parse_config(kMinimal + "noise: {p2: 2.0}\n"), ConfigError);
  EXPECT_THROW(parse_config(kMinimal + "seed: [1\n"), ConfigError);
  EXPECT_THROW(parse_config("lattice: {kind: torus}\nmodel: {m: 1, g: 1, lambda: 1}\nevolution: {dt: 0.1}\n"),
               ConfigError);
}

TEST(Io, LatticeSpecs) {
  EXPECT_EQ(parse_lattice_spec("flake:2").params, (std::vector<int>{2}));
  EXPECT_EQ(parse_lattice_spec("brick:2x3").params, (std::vector<int>{2, 3}));
  EXPECT_EQ(parse_lattice_spec("chain:5").kind, "chain");
  EXPECT_THROW(parse_lattice_spec("brick:2"), Error);
  EXPECT_THROW(parse_lattice_spec("hex:1"), Error);
}

TEST(Io, ConfigJsonRoundTripAndHash) {
  auto c = load_config(data_path("small.yaml"));
  c.noise.terminal_channel = {{PauliString::parse("X0 Z2"), 0.01}};
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(config_hash(back), config_hash(c));
  auto d = c;
  d.g += 1e-9;
  EXPECT_NE(config_hash(d), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Io, TimeSeriesRoundTrips) {
  const auto ts = small_series();
  const auto text = timeseries_to_jsonl(ts);
  const auto back = timeseries_from_jsonl(text);
  EXPECT_EQ(back, ts);
  EXPECT_EQ(timeseries_to_jsonl(back), text);  // byte identical
  const auto csv = csv_from_string(timeseries_to_csv(ts));
  ASSERT_EQ(csv.rows.size(), ts.times.size());
  EXPECT_EQ(csv.columns.front(), "time");
  EXPECT_EQ(csv.columns.back(), "string:0,3");
  for (std::size_t t = 0; t < ts.times.size(); ++t)
    for (std::size_t o = 0; o < ts.observables.size(); ++o) EXPECT_EQ(csv.rows[t][o + 1], ts.estimates[t][o].mean);
}

TEST(Io, ShotTableRoundTrip) {
  ShotTable t;
  t.num_qubits = 5;
  t.circuit_hash = 0xdeadbeefcafef00dULL;
  t.master_seed = 42;
  t.shots = {{Bitstring{1, 0, 0, 1, 1}, 7, 0, -1}, {Bitstring{0, 0, 0, 0, 1}, 8, 3, 2}};
  const auto text = shots_to_text(t);
  EXPECT_NE(text.find("\n11001 7 0 -1\n"), std::string::npos);
  EXPECT_NE(text.find(kBitOrderNote), std::string::npos);
  EXPECT_EQ(shots_from_text(text), t);
  EXPECT_THROW(shots_from_text("# z2hm-shots-1\n1012 1 0 -1\n"), Error);
}

TEST(Io, EstimateAndManifestRoundTrip) {
  Estimate e{0.1, 0.05, 0.2, 0.7, 1000, 0.03, 0.8, false, true};
  EXPECT_EQ(estimate_from_json(estimate_to_json(e)), e);
  RunManifest m;
  m.config_hash = "0123456789abcdef";
  m.versions = {{"z2hm", kVersionTag}};
  m.seeds = {{"master", 9}};
  m.started_utc = "2026-01-01T00:00:00Z";
  m.wall_seconds = 1.5;
  m.shots = {100, 80, 80};
  m.outputs = {"timeseries.jsonl"};
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);
}

TEST(Io, NoiseJsonRoundTrip) {
  NoiseModel n;
  n.p1 = 0.001;
  n.p2 = 0.01;
  n.p2_weights[4] = 3;
  n.coherent_zz = 0.02;
  n.virtual_rz = false;
  n.terminal_channel = {{PauliString::parse("Y1"), 0.2}};
  const auto back = noise_from_json(noise_to_json(n));
  EXPECT_EQ(noise_to_json(back), noise_to_json(n));
}

TEST(Io, AtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "z2hm_io_test";
  std::filesystem::remove_all(dir);
  const auto path = (dir / "sub" / "f.txt").string();
  write_file(path, "abc");
  EXPECT_EQ(read_file(path), "abc");
  write_file(path, "defg");
  EXPECT_EQ(read_file(path), "defg");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(read_file((dir / "missing").string()), Error);
  std::filesystem::remove_all(dir);
}
