#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "z2hm/analytics.hpp"
#include "z2hm/compiler.hpp"
#include "z2hm/correction.hpp"
#include "z2hm/errors.hpp"
#include "z2hm/experiments.hpp"
#include "z2hm/io.hpp"
#include "z2hm/mitigation.hpp"
#include "z2hm/model.hpp"
#include "z2hm/simulator.hpp"

namespace fs = std::filesystem;
using namespace z2hm;

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kCapacity = 3, kRefused = 4 };

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("Z2HM_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string("Z2HM_SEED is not an unsigned integer: ") + s);
  }
}

std::string output_dir(const std::string& flag) {
  if (const char* s = std::getenv("Z2HM_OUTPUT_DIR"); s && *s) return s;
  return flag;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

ExperimentConfig config_with_overrides(const std::string& path) {
  ExperimentConfig cfg = load_config(path);
  if (auto s = env_seed()) cfg.seed = *s;
  return cfg;
}

// Axis spec "name=v1,v2,...".
SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep axis '" + text + "': expected name=v1,v2,...");
  SweepAxis axis{text.substr(0, eq), {}};
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      axis.second.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw ConfigError("sweep axis '" + text + "': '" + item + "' is not a number");
    }
  }
  if (axis.second.empty()) throw ConfigError("sweep axis '" + text + "' has no values");
  return axis;
}

std::string run_directory(const std::string& base, const std::string& hash) {
  return (fs::path(output_dir(base)) / hash).string();
}

RunManifest manifest_for(const ExperimentConfig& cfg, const TimeSeries& ts, double seconds,
                         std::vector<std::string> outputs) {
  RunManifest m;
  m.config_hash = ts.config_hash;
  m.versions = {{"z2hm", kVersionTag}, {"timeseries", "z2hm-timeseries-1"}, {"shots", "z2hm-shots-1"}};
  m.seeds = {{"master", cfg.seed}};
  m.wall_seconds = seconds;
  for (const auto& a : ts.accounting) {
    m.shots.generated += a.generated;
    m.shots.postselected += a.postselected;
    m.shots.used += a.used;
  }
  m.outputs = std::move(outputs);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Z2-Higgs lattice gauge model workbench"};
  app.require_subcommand(1);

  // lattice build
  auto* lattice_cmd = app.add_subcommand("lattice", "Lattice utilities");
  lattice_cmd->require_subcommand(1);
  auto* build_cmd = lattice_cmd->add_subcommand("build", "Print a lattice and its qubit map as JSON");
  std::string lattice_spec = "flake:0", out_path;
  bool with_hamiltonian = false;
  double hm = 0, hg = 0, hl = 1;
  build_cmd->add_option("--lattice", lattice_spec, "flake:R, brick:RxC or chain:N")->capture_default_str();
  build_cmd->add_flag("--hamiltonian", with_hamiltonian, "Include the Pauli terms of H");
  build_cmd->add_option("--m", hm, "Mass");
  build_cmd->add_option("--g", hg, "Electric coupling");
  build_cmd->add_option("--lambda", hl, "Interaction coupling");
  build_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "Compile one time point of a config to a circuit");
  std::string config_path;
  double time = 0;
  std::string variant = "trotter";
  std::optional<std::uint64_t> twirl_seed;
  compile_cmd->add_option("--config", config_path, "Experiment config (YAML)")->required();
  compile_cmd->add_option("--time", time, "Evolution time")->required();
  compile_cmd->add_option("--variant", variant, "trotter, mirror or clifford")
      ->check(CLI::IsMember({"trotter", "mirror", "clifford"}));
  compile_cmd->add_option("--twirl-seed", twirl_seed, "Apply one Pauli-twirl instance");
  compile_cmd->add_option("-o,--output", out_path, "Circuit JSON (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Sample a circuit with the config's noise model");
  std::string circuit_path;
  int shots = 0;
  std::optional<std::uint64_t> seed;
  sim_cmd->add_option("--circuit", circuit_path, "Circuit JSON")->required();
  sim_cmd->add_option("--config", config_path, "Config providing noise, shots, seed and capacity")->required();
  sim_cmd->add_option("--shots", shots, "Override the shot count");
  sim_cmd->add_option("--seed", seed, "Override the seed");
  sim_cmd->add_option("-o,--output", out_path, "Shot table (default stdout)");

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "Gauss-sector correction of a shot table");
  std::string shots_path, report_path;
  long min_keep = -1;
  decode_cmd->add_option("--shots", shots_path, "Shot table")->required();
  decode_cmd->add_option("--lattice", lattice_spec, "Lattice of the register")->capture_default_str();
  decode_cmd->add_option("--min-keep", min_keep, "Post-select whole flip classes down to this floor");
  decode_cmd->add_option("--report", report_path, "Decoder report JSON");
  decode_cmd->add_option("-o,--output", out_path, "Corrected shot table (default stdout)");

  // mitigate
  auto* mit_cmd = app.add_subcommand("mitigate", "Estimate a Z observable, optionally with ODR");
  std::string calib_path, observable;
  double ideal = 1, threshold = kRefusalThreshold;
  BootstrapOptions boot;
  mit_cmd->add_option("--shots", shots_path, "Shot table")->required();
  mit_cmd->add_option("--observable", observable, "Pauli string such as 'Z0 Z3'")->required();
  mit_cmd->add_option("--calibration", calib_path, "Calibration shot table");
  mit_cmd->add_option("--ideal", ideal, "Ideal calibration value")->capture_default_str();
  mit_cmd->add_option("--threshold", threshold, "Refusal threshold")->capture_default_str();
  mit_cmd->add_option("--resamples", boot.resamples, "Bootstrap resamples")->capture_default_str();
  mit_cmd->add_option("--level", boot.level, "Confidence level")->capture_default_str();
  mit_cmd->add_option("--seed", seed, "Bootstrap seed");
  mit_cmd->add_option("-o,--output", out_path, "Estimate JSON (default stdout)");

  // experiment run
  auto* exp_cmd = app.add_subcommand("experiment", "Quench experiments");
  exp_cmd->require_subcommand(1);
  auto* run_cmd = exp_cmd->add_subcommand("run", "Run a configured quench");
  std::string out_dir = "z2hm-out";
  run_cmd->add_option("--config", config_path, "Experiment config (YAML)")->required();
  run_cmd->add_option("--output-dir", out_dir, "Output root; runs go to <root>/<config hash>")->capture_default_str();

  // analytics eval
  auto* an_cmd = app.add_subcommand("analytics", "Closed-form predictions");
  an_cmd->require_subcommand(1);
  auto* eval_cmd = an_cmd->add_subcommand("eval", "Evaluate the analytic formulas");
  double am = 0, ag = 0, al = 1, at = 1, adt = 0.1;
  eval_cmd->add_option("--m", am)->capture_default_str();
  eval_cmd->add_option("--g", ag)->capture_default_str();
  eval_cmd->add_option("--lambda", al)->capture_default_str();
  eval_cmd->add_option("--t", at)->capture_default_str();
  eval_cmd->add_option("--dt", adt)->capture_default_str();
  eval_cmd->add_option("--lattice", lattice_spec)->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter grid over a config, or aggregate finished runs");
  std::vector<std::string> axes, aggregate;
  sweep_cmd->add_option("--config", config_path, "Experiment config (YAML)");
  sweep_cmd->add_option("--axis", axes, "name=v1,v2,... over m, g, lambda, dt, noise_scale, twirl, gdd, gsc, odr");
  sweep_cmd->add_option("--aggregate", aggregate, "Time-series files to merge into one CSV");
  sweep_cmd->add_option("--output-dir", out_dir, "Output root")->capture_default_str();
  sweep_cmd->add_option("-o,--output", out_path, "Aggregate CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (build_cmd->parsed()) {
      const LatticeGraph lat = parse_lattice_spec(lattice_spec).build();
      Json j = lattice_to_json(lat);
      if (with_hamiltonian) j["hamiltonian"] = hamiltonian_to_json(Hamiltonian(lat, hm, hg, hl));
      emit(out_path, j.dump(2) + "\n");
      return kOk;
    }
    if (compile_cmd->parsed()) {
      const ExperimentConfig cfg = config_with_overrides(config_path);
      const LatticeGraph lat = cfg.lattice.build();
      const Bitstring initial = cfg.initial_paths.empty() ? Bitstring{} : prepare_string_state(lat, cfg.initial_paths).bits;
      CompileOptions opt;
      opt.gdd = cfg.mitigation.gdd;
      opt.phase_seed = derive_seed(cfg.seed, {0, 2});
      Circuit c = trotter_circuit(lat, {cfg.m, cfg.g, cfg.lambda, time, cfg.dt}, opt, initial);
      if (variant == "mirror") c = mirror_calibration(c);
      if (variant == "clifford") c = cliffordize(c);
      if (twirl_seed) c = twirl(c, *twirl_seed);
      emit(out_path, circuit_to_json(c) + "\n");
      return kOk;
    }
    if (sim_cmd->parsed()) {
      const ExperimentConfig cfg = config_with_overrides(config_path);
      const Circuit c = circuit_from_json(read_file(circuit_path));
      SimulatorOptions so;
      so.qubit_cap = cfg.qubit_cap;
      const ShotTable t = run_trajectories(c, cfg.noise, shots > 0 ? shots : cfg.shots, seed ? *seed : cfg.seed, so);
      emit(out_path, shots_to_text(t));
      return kOk;
    }
    if (decode_cmd->parsed()) {
      const LatticeGraph lat = parse_lattice_spec(lattice_spec).build();
      ShotTable t = shots_from_text(read_file(shots_path));
      const DecoderReport rep = decode_table(t, lat);
      if (min_keep >= 0) t = postselect(t, min_keep);
      if (!report_path.empty()) write_file(report_path, decoder_report_to_json(rep).dump(1) + "\n");
      emit(out_path, shots_to_text(t));
      if (rep.any_approximate()) std::cerr << "warning: greedy matching used for some shots\n";
      return kOk;
    }
    if (mit_cmd->parsed()) {
      const ShotTable data = shots_from_text(read_file(shots_path));
      const PauliString p = PauliString::parse(observable);
      const DiagonalObservable obs = pauli_observable(p);
      ObservableEstimateOptions eo;
      eo.bootstrap = boot;
      if (auto s = seed ? seed : env_seed()) eo.bootstrap.seed = *s;
      eo.threshold = threshold;
      Estimate e;
      if (calib_path.empty()) {
        e = estimate_observable(data, obs, nullptr, {}, eo);
      } else {
        const ShotTable calib = shots_from_text(read_file(calib_path));
        // The ideal value refers to the whole signed observable.
        const double term_ideal = ideal * p.sign();
        e = estimate_observable(data, obs, &calib, [&](const std::vector<int>&) { return term_ideal; }, eo);
      }
      emit(out_path, estimate_to_json(e).dump(1) + "\n");
      if (e.refused) {
        std::cerr << "mitigation refused: calibration factor " << e.factor << " at or below " << threshold << "\n";
        return kRefused;
      }
      return kOk;
    }
    if (run_cmd->parsed()) {
      const ExperimentConfig cfg = config_with_overrides(config_path);
      const auto start = std::chrono::steady_clock::now();
      const TimeSeries ts = run_quench(cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::string dir = run_directory(out_dir, ts.config_hash);
      write_file(dir + "/timeseries.jsonl", timeseries_to_jsonl(ts));
      write_file(dir + "/timeseries.csv", timeseries_to_csv(ts));
      write_file(dir + "/config.json", config_to_json(cfg).dump(1) + "\n");
      const RunManifest m = manifest_for(cfg, ts, secs, {"timeseries.jsonl", "timeseries.csv", "config.json"});
      write_file(dir + "/manifest.json", manifest_to_json(m).dump(1) + "\n");
      std::cout << dir << "\n";
      for (const auto& r : ts.refusals) std::cerr << "refused: " << r << "\n";
      return ts.any_refused() ? kRefused : kOk;
    }
    if (eval_cmd->parsed()) {
      const LatticeGraph lat = parse_lattice_spec(lattice_spec).build();
      Json j = {{"m", am}, {"g", ag}, {"lambda", al}, {"t", at}, {"dt", adt}, {"lattice", lat.describe()}};
      auto guarded = [](auto f) -> Json {
        try {
          return f();
        } catch (const InvalidArgument&) {
          return nullptr;
        }
      };
      j["glassy_amplitude"] = glassy_amplitude(ag, al, at);
      j["m0_gap"] = m0_gap(ag, al);
      j["m0_ansatz_angle"] = guarded([&] { return m0_ansatz_angle(ag, al); });
      j["yoyo_frequency"] = yoyo_frequency(ag);
      j["bending_frequency"] = guarded([&] { return bending_frequency(am, ag, al); });
      j["effective_plaquette"] = guarded([&] { return effective_plaquette(am, al); });
      const auto terms = trotter_terms_closed_form(lat, am, ag, al);
      j["trotter_terms"] = {{"outer_electric", terms.outer_electric}, {"outer_mass", terms.outer_mass}, {"inner", terms.inner}};
      j["trotter_bound"] = trotter_error_bound(lat, am, ag, al, at, adt);
      std::cout << j.dump(2) << "\n";
      return kOk;
    }
    if (sweep_cmd->parsed()) {
      if (!aggregate.empty()) {
        std::vector<TimeSeries> series;
        for (const auto& f : aggregate) series.push_back(timeseries_from_jsonl(read_file(f)));
        check_comparable(series);
        std::string csv = "run,time,observable,mean,ci_low,ci_high\n";
        char buf[128];
        for (std::size_t r = 0; r < series.size(); ++r)
          for (std::size_t i = 0; i < series[r].times.size(); ++i)
            for (std::size_t k = 0; k < series[r].observables.size(); ++k) {
              const Estimate& e = series[r].estimates[i][k];
              std::snprintf(buf, sizeof buf, "%.17g,", series[r].times[i]);
              csv += series[r].config_hash + "," + buf + csv_quote(series[r].observables[k]);
              std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", e.mean, e.ci_low, e.ci_high);
              csv += buf;
            }
        emit(out_path, csv);
        return kOk;
      }
      if (config_path.empty()) throw ConfigError("sweep needs --config or --aggregate");
      const ExperimentConfig cfg = config_with_overrides(config_path);
      std::vector<SweepAxis> grid;
      for (const auto& a : axes) grid.push_back(parse_axis(a));
      const auto points = sweep(cfg, grid);
      bool refused = false;
      Json index = Json::array();
      for (const auto& p : points) {
        const std::string dir = run_directory(out_dir, p.series.config_hash);
        write_file(dir + "/timeseries.jsonl", timeseries_to_jsonl(p.series));
        write_file(dir + "/timeseries.csv", timeseries_to_csv(p.series));
        Json a = Json::object();
        for (const auto& [k, v] : p.assignment) a[k] = v;
        index.push_back({{"assignment", a}, {"config_hash", p.series.config_hash}, {"dir", dir}});
        refused = refused || p.series.any_refused();
      }
      const std::string idx_path = (fs::path(output_dir(out_dir)) / ("sweep-" + config_hash(cfg) + ".json")).string();
      write_file(idx_path, Json{{"base_hash", config_hash(cfg)}, {"points", index}}.dump(1) + "\n");
      std::cout << idx_path << "\n";
      return refused ? kRefused : kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const MitigationRefused& e) {
    std::cerr << "mitigation refused: " << e.what() << "\n";
    return kRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
