#include "z2hm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "z2hm/circuit.hpp"
#include "z2hm/compiler.hpp"
#include "z2hm/correction.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/io.hpp"
#include "z2hm/model.hpp"
#include "z2hm/rng.hpp"

namespace z2hm {

namespace {

// Seed streams per time point.
enum Stream : std::uint64_t { kGdd = 2, kTwirlData = 3, kRunData = 4, kTwirlCal = 5, kRunCal = 6, kBoot = 7 };

std::vector<int> parse_int_list(const std::string& s, const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("observable '" + spec + "': '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw ConfigError("observable '" + spec + "' lists no sites");
  return out;
}

int check_node(const LatticeGraph& lat, int n, const std::string& spec) {
  if (n < 0 || n >= lat.num_nodes())
    throw ConfigError("observable '" + spec + "': " + std::to_string(n) + " is not a matter site");
  return n;
}

std::vector<std::string> expand_observables(const std::vector<std::string>& specs, const LatticeGraph& lat) {
  std::vector<std::string> out;
  for (const auto& s : specs) {
    if (s == "occupation:all") {
      for (int n = 0; n < lat.num_nodes(); ++n) out.push_back("occupation:" + std::to_string(n));
    } else if (s == "gauge:all") {
      for (int e = 0; e < lat.num_edges(); ++e) out.push_back("gauge:" + std::to_string(e));
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Circuit twirled_instance(const Circuit& base, bool twirl, std::uint64_t seed, int index) {
  Circuit c = twirl ? z2hm::twirl(base, seed) : base;
  c.meta.twirl_index = index;
  return c;
}

// Shots split over twirl instances, each instance with its own frames and seeds.
ShotTable execute(const Circuit& base, const ExperimentConfig& cfg, std::size_t point, Stream twirl_stream,
                  Stream run_stream) {
  const int instances = cfg.mitigation.twirl ? std::min(cfg.mitigation.twirl_instances, cfg.shots) : 1;
  ShotTable table;
  table.num_qubits = base.num_qubits;
  table.master_seed = cfg.seed;
  SimulatorOptions sim;
  sim.qubit_cap = cfg.qubit_cap;
  for (int k = 0; k < instances; ++k) {
    const int n = cfg.shots / instances + (k < cfg.shots % instances ? 1 : 0);
    const auto kk = static_cast<std::uint64_t>(k);
    const Circuit c = twirled_instance(base, cfg.mitigation.twirl, derive_seed(cfg.seed, {point, twirl_stream, kk}), k);
    ShotTable part = run_trajectories(c, cfg.noise, n, derive_seed(cfg.seed, {point, run_stream, kk}), sim);
    if (k == 0) table.circuit_hash = circuit_hash(base);
    table.append(part);
  }
  return table;
}

void gsc(ShotTable& table, const LatticeGraph& lat, double keep_fraction) {
  decode_table(table, lat);
  const long n = static_cast<long>(table.size());
  const long keep = std::clamp(static_cast<long>(std::ceil(keep_fraction * static_cast<double>(n) - 1e-9)), 1L, n);
  table = postselect(table, keep);
}

}  // namespace

LatticeGraph LatticeSpec::build() const {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw ConfigError("lattice kind '" + kind + "' takes " + std::to_string(k) + " size parameter(s)");
  };
  if (kind == "flake") {
    need(1);
    return LatticeGraph::flake(params[0]);
  }
  if (kind == "brick") {
    need(2);
    return LatticeGraph::brick(params[0], params[1]);
  }
  if (kind == "chain") {
    need(1);
    return LatticeGraph::chain(params[0]);
  }
  if (kind == "custom") return LatticeGraph::from_edges(nodes, edges);
  throw ConfigError("unknown lattice kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
  auto finite = [](double x, const char* field) {
    if (!std::isfinite(x)) throw ConfigError(std::string(field) + ": must be finite");
  };
  finite(m, "model.m");
  finite(g, "model.g");
  finite(lambda, "model.lambda");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("evolution.dt: must be positive");
  if (times.empty()) throw ConfigError("evolution: time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0) || !std::isfinite(times[i])) throw ConfigError("evolution.times: negative or non-finite time");
    if (i && !(times[i] > times[i - 1])) throw ConfigError("evolution.times: times must be strictly increasing");
  }
  if (shots < 1) throw ConfigError("shots: must be at least 1");
  if (mitigation.calibration != "mirror" && mitigation.calibration != "clifford")
    throw ConfigError("mitigation.calibration: expected 'mirror' or 'clifford', got '" + mitigation.calibration + "'");
  if (mitigation.twirl_instances < 1) throw ConfigError("mitigation.twirl_instances: must be at least 1");
  if (!(mitigation.gsc_keep_fraction > 0 && mitigation.gsc_keep_fraction <= 1))
    throw ConfigError("mitigation.gsc_keep_fraction: must lie in (0, 1]");
  if (bootstrap.resamples < 100) throw ConfigError("bootstrap.resamples: must be at least 100");
  if (!(bootstrap.level > 0 && bootstrap.level < 1)) throw ConfigError("bootstrap.level: must lie in (0, 1)");
  if (qubit_cap < 1) throw ConfigError("capacity.qubit_cap: must be positive");
  try {
    noise.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }
  if (observables.empty()) throw ConfigError("observables: list is empty");
}

DiagonalObservable resolve_observable(const std::string& spec, const LatticeGraph& lat) {
  if (spec == "total_occupation") {
    DiagonalObservable o;
    o.id = spec;
    for (int n = 0; n < lat.num_nodes(); ++n) {
      o.terms.push_back({0.5, {}});
      o.terms.push_back({-0.5, {lat.node_qubit(n)}});
    }
    return o;
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("observable '" + spec + "': expected kind:index");
  const std::string kind = spec.substr(0, colon);
  const auto ids = parse_int_list(spec.substr(colon + 1), spec);
  DiagonalObservable o;
  if (kind == "occupation" || kind == "string") {
    if (kind == "occupation" && ids.size() != 1) throw ConfigError("observable '" + spec + "': one site expected");
    std::vector<int> qubits;
    for (int n : ids) qubits.push_back(lat.node_qubit(check_node(lat, n, spec)));
    o = projector_product_observable(qubits);
  } else if (kind == "gauge") {
    if (ids.size() != 1 || ids[0] < 0 || ids[0] >= lat.num_edges())
      throw ConfigError("observable '" + spec + "': not a link id");
    o.terms.push_back({1.0, {lat.edge_qubit(ids[0])}});
  } else if (kind == "z") {
    if (ids.size() != 1 || ids[0] < 0 || ids[0] >= lat.num_qubits())
      throw ConfigError("observable '" + spec + "': not a qubit");
    o.terms.push_back({1.0, {ids[0]}});
  } else {
    throw ConfigError("observable '" + spec + "': unknown kind '" + kind + "'");
  }
  o.id = spec;
  return o;
}

TimeSeries run_quench(const ExperimentConfig& cfg) {
  cfg.validate();
  const LatticeGraph lat = cfg.lattice.build();
  if (lat.num_qubits() > cfg.qubit_cap)
    throw CapacityError(lat.describe() + " needs " + std::to_string(lat.num_qubits()) + " qubits, cap is " +
                        std::to_string(cfg.qubit_cap));
  const Bitstring initial = cfg.initial_paths.empty() ? Bitstring(static_cast<std::size_t>(lat.num_qubits()), 0)
                                                      : prepare_string_state(lat, cfg.initial_paths).bits;
  const auto specs = expand_observables(cfg.observables, lat);
  std::vector<DiagonalObservable> obs;
  for (const auto& s : specs) obs.push_back(resolve_observable(s, lat));

  TimeSeries ts;
  ts.config_hash = config_hash(cfg);
  ts.base_hash = ts.config_hash;
  ts.lattice = lat.describe();
  ts.observables = specs;
  ts.times = cfg.times;

  const Hamiltonian h(lat, cfg.m, cfg.g, cfg.lambda);
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const double t = cfg.times[i];
    const std::string where = "t=" + std::to_string(t);
    try {
      CompileOptions copt;
      copt.gdd = cfg.mitigation.gdd;
      copt.phase_seed = derive_seed(cfg.seed, {i, kGdd});
      const Circuit base = trotter_circuit(lat, {cfg.m, cfg.g, cfg.lambda, t, cfg.dt}, copt, initial);
      ShotTable data = execute(base, cfg, i, kTwirlData, kRunData);
      ShotAccounting acc;
      acc.generated = static_cast<long>(data.size());

      ShotTable calib;
      Circuit calib_circuit;
      if (cfg.mitigation.odr) {
        calib_circuit = cfg.mitigation.calibration == "mirror" ? mirror_calibration(base) : cliffordize(base);
        calib = execute(calib_circuit, cfg, i, kTwirlCal, kRunCal);
      }
      if (cfg.mitigation.gsc) {
        gsc(data, lat, cfg.mitigation.gsc_keep_fraction);
        if (cfg.mitigation.odr) gsc(calib, lat, cfg.mitigation.gsc_keep_fraction);
      }
      acc.postselected = static_cast<long>(data.size());
      acc.used = acc.postselected;
      ts.accounting.push_back(acc);

      IdealLookup ideal;
      if (cfg.mitigation.odr) {
        if (cfg.mitigation.calibration == "mirror")
          ideal = [&](const std::vector<int>& qs) {
            int parity = 0;
            for (int q : qs) parity ^= initial[static_cast<std::size_t>(q)];
            return parity ? -1.0 : 1.0;
          };
        else
          ideal = [&](const std::vector<int>& qs) { return clifford_expectation(calib_circuit, PauliString::z_on(qs)); };
      }
      std::vector<Estimate> row;
      for (std::size_t k = 0; k < obs.size(); ++k) {
        ObservableEstimateOptions eo;
        eo.bootstrap = cfg.bootstrap;
        eo.bootstrap.seed = derive_seed(cfg.seed, {i, kBoot, k});
        Estimate e = estimate_observable(data, obs[k], cfg.mitigation.odr ? &calib : nullptr, ideal, eo);
        if (e.refused) {
          std::ostringstream msg;
          msg << where << " " << specs[k] << ": calibration factor " << e.factor << " at or below "
              << kRefusalThreshold << ", reporting the unmitigated value";
          ts.refusals.push_back(msg.str());
        }
        row.push_back(e);
      }
      ts.estimates.push_back(std::move(row));

      if (cfg.exact_reference) {
        const StateVector psi = exact_evolve(StateVector::from_bits(initial), h, t);
        std::vector<double> ref;
        for (const auto& o : obs) ref.push_back(o.evaluate(psi));
        ts.reference.push_back(std::move(ref));
      }
    } catch (const CapacityError& e) {
      throw CapacityError(where + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(where + ": " + e.what());
    } catch (const LatticeError& e) {
      throw LatticeError(where + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
  }
  return ts;
}

Estimate string_correlator(const ShotTable& table, const LatticeGraph& lattice, const std::vector<int>& sites,
                           const BootstrapOptions& options) {
  std::vector<int> qubits;
  for (int n : sites) qubits.push_back(lattice.node_qubit(n));
  ObservableEstimateOptions o;
  o.bootstrap = options;
  return estimate_observable(table, projector_product_observable(qubits), nullptr, {}, o);
}

double string_correlator(const StateVector& state, const LatticeGraph& lattice, const std::vector<int>& sites) {
  std::vector<int> qubits;
  for (int n : sites) qubits.push_back(lattice.node_qubit(n));
  return projector_product_observable(qubits).evaluate(state);
}

ExperimentConfig apply_assignment(const ExperimentConfig& base, const std::vector<std::pair<std::string, double>>& a) {
  ExperimentConfig c = base;
  auto toggle = [](double v, const std::string& name) {
    if (v != 0 && v != 1) throw InvalidArgument("sweep axis " + name + " takes 0 or 1");
    return v == 1;
  };
  for (const auto& [name, v] : a) {
    if (name == "m") c.m = v;
    else if (name == "g") c.g = v;
    else if (name == "lambda") c.lambda = v;
    else if (name == "dt") c.dt = v;
    else if (name == "noise_scale") c.noise = base.noise.scaled(v);
    else if (name == "twirl") c.mitigation.twirl = toggle(v, name);
    else if (name == "gdd") c.mitigation.gdd = toggle(v, name);
    else if (name == "gsc") c.mitigation.gsc = toggle(v, name);
    else if (name == "odr") c.mitigation.odr = toggle(v, name);
    else throw InvalidArgument("unknown sweep axis '" + name + "'");
  }
  return c;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& base, const std::vector<SweepAxis>& grid) {
  for (const auto& axis : grid)
    if (axis.second.empty()) throw InvalidArgument("sweep axis '" + axis.first + "' has no values");
  const std::string base_hash = config_hash(base);
  std::vector<SweepPoint> out;
  std::vector<std::size_t> idx(grid.size(), 0);
  while (true) {
    SweepPoint p;
    for (std::size_t k = 0; k < grid.size(); ++k) p.assignment.emplace_back(grid[k].first, grid[k].second[idx[k]]);
    p.series = run_quench(apply_assignment(base, p.assignment));
    p.series.base_hash = base_hash;
    out.push_back(std::move(p));
    std::size_t k = grid.size();
    while (k > 0) {
      --k;
      if (++idx[k] < grid[k].second.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (grid.empty()) return out;
  }
}

void check_comparable(const std::vector<TimeSeries>& series) {
  for (const auto& s : series)
    if (s.base_hash != series.front().base_hash)
      throw InvalidArgument("refusing to compare runs from different base configurations (" + series.front().base_hash +
                            " vs " + s.base_hash + ")");
}

}  // namespace z2hm
