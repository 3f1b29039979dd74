#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "z2hm/analytics.hpp"
#include "z2hm/lattice.hpp"
#include "z2hm/mitigation.hpp"
#include "z2hm/simulator.hpp"

namespace z2hm {

inline constexpr const char* kVersionTag = "z2hm-0.1.0";

struct LatticeSpec {
  std::string kind = "flake";  // flake | brick | chain | custom
  std::vector<int> params;     // {R}, {rows, cols}, {sites}
  int nodes = 0;               // custom only
  std::vector<std::pair<int, int>> edges;  // custom only

  LatticeGraph build() const;
  bool operator==(const LatticeSpec& o) const = default;
};

struct MitigationSettings {
  bool twirl = false;
  bool gdd = false;
  bool gsc = false;
  bool odr = false;
  std::string calibration = "mirror";  // mirror | clifford
  int twirl_instances = 8;             // distinct twirled copies sharing the shot budget
  double gsc_keep_fraction = 0.1;      // post-selection floor as a fraction of the shots
  bool operator==(const MitigationSettings& o) const = default;
};

struct ExperimentConfig {
  LatticeSpec lattice;
  double m = 0, g = 0, lambda = 1;
  double dt = 0.1;
  std::vector<double> times;  // strictly increasing, >= 0
  std::vector<std::vector<int>> initial_paths;  // electric strings over node ids
  std::vector<std::string> observables;  // occupation:n, gauge:e, z:q, string:a,b,..., total_occupation
  NoiseModel noise;
  int shots = 10000;
  std::uint64_t seed = 0;
  MitigationSettings mitigation;
  BootstrapOptions bootstrap;
  int qubit_cap = 22;
  // Also record exact_evolve values of every observable.
  bool exact_reference = false;
  bool operator==(const ExperimentConfig& o) const = default;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Observable spec resolved against a lattice.
DiagonalObservable resolve_observable(const std::string& spec, const LatticeGraph& lattice);

struct ShotAccounting {
  long generated = 0;
  long postselected = 0;
  long used = 0;
  bool operator==(const ShotAccounting& o) const = default;
};

struct TimeSeries {
  std::string config_hash;
  std::string base_hash;  // hash of the configuration before sweep overrides
  std::string version = kVersionTag;
  std::string lattice;
  std::vector<std::string> observables;
  std::vector<double> times;
  std::vector<std::vector<Estimate>> estimates;   // [time][observable]
  std::vector<std::vector<double>> reference;     // [time][observable], empty without exact_reference
  std::vector<ShotAccounting> accounting;         // per time point, data circuit
  std::vector<std::string> refusals;              // "t=<time> <observable>: reason"

  bool any_refused() const { return !refusals.empty(); }
  bool operator==(const TimeSeries& o) const = default;
};

// Compiles, executes and post-processes every time point.
TimeSeries run_quench(const ExperimentConfig& config);

// <prod_n (1 - Z_n) / 2> over the listed matter sites.
Estimate string_correlator(const ShotTable& table, const LatticeGraph& lattice, const std::vector<int>& sites,
                           const BootstrapOptions& options = {});
double string_correlator(const StateVector& state, const LatticeGraph& lattice, const std::vector<int>& sites);

// Grid axes: m, g, lambda, dt, noise_scale, twirl, gdd, gsc, odr (toggles take 0 or 1).
using SweepAxis = std::pair<std::string, std::vector<double>>;

struct SweepPoint {
  std::vector<std::pair<std::string, double>> assignment;
  TimeSeries series;
};

ExperimentConfig apply_assignment(const ExperimentConfig& base, const std::vector<std::pair<std::string, double>>& a);

// Cartesian product of the axes; every point reuses the base seed so runs are
// paired. An empty grid yields one point equal to run_quench(base).
std::vector<SweepPoint> sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& grid);

// Throws InvalidArgument unless every series shares one base hash.
void check_comparable(const std::vector<TimeSeries>& series);

}  // namespace z2hm
