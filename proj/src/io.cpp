#include "z2hm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "z2hm/errors.hpp"
#include "z2hm/hash.hpp"

namespace z2hm {

namespace {

std::string where(const YAML::Node& n, const std::string& source) {
  const auto mark = n.Mark();
  if (mark.is_null()) return source;
  return source + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
}

class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& field, const std::string& why) const {
    throw ConfigError(where(n, source_) + ": " + field + ": " + why);
  }

  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& path) const {
    if (!map.IsMap()) fail(map, path.empty() ? "<root>" : path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, path.empty() ? key : path + "." + key, "unknown key '" + key + "'");
    }
  }

  template <class T>
  T get(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, field, "cannot read '" + n.Scalar() + "'");
    }
  }

  template <class T>
  void opt(const YAML::Node& map, const char* key, T& out, const std::string& path) const {
    if (const auto n = map[key]) out = get<T>(n, path + "." + key);
  }

  template <class T>
  T required(const YAML::Node& map, const char* key, const std::string& path) const {
    const auto n = map[key];
    if (!n) fail(map, path + "." + key, "required value is missing");
    return get<T>(n, path + "." + key);
  }

  template <class T>
  std::vector<T> list(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(n, field, "expected a list");
    std::vector<T> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(get<T>(n[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  std::string source_;
};

Json stream_json(const NoiseModel& n) {
  Json terminal = Json::array();
  for (const auto& [p, w] : n.terminal_channel) terminal.push_back({{"pauli", p.str()}, {"weight", w}});
  return {{"p1", n.p1},
          {"p1_weights", n.p1_weights},
          {"virtual_rz", n.virtual_rz},
          {"p2", n.p2},
          {"p2_weights", n.p2_weights},
          {"p_meas", n.p_meas},
          {"coherent_zz", n.coherent_zz},
          {"terminal", terminal}};
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": parse error: " + e.msg);
  }
  const YamlReader r(source);
  if (!root || root.IsNull()) throw ConfigError(source + ": empty configuration");
  r.check_keys(root, {"lattice", "model", "evolution", "initial", "observables", "noise", "shots", "seed", "mitigation",
                      "bootstrap", "capacity", "exact_reference"},
               "");
  ExperimentConfig c;

  const auto lat = root["lattice"];
  if (!lat) r.fail(root, "lattice", "required section is missing");
  r.check_keys(lat, {"kind", "rings", "rows", "cols", "sites", "nodes", "edges"}, "lattice");
  c.lattice.kind = r.required<std::string>(lat, "kind", "lattice");
  if (c.lattice.kind == "flake") {
    c.lattice.params = {r.required<int>(lat, "rings", "lattice")};
  } else if (c.lattice.kind == "brick") {
    c.lattice.params = {r.required<int>(lat, "rows", "lattice"), r.required<int>(lat, "cols", "lattice")};
  } else if (c.lattice.kind == "chain") {
    c.lattice.params = {r.required<int>(lat, "sites", "lattice")};
  } else if (c.lattice.kind == "custom") {
    c.lattice.nodes = r.required<int>(lat, "nodes", "lattice");
    const auto edges = lat["edges"];
    if (!edges || !edges.IsSequence()) r.fail(lat, "lattice.edges", "expected a list of [u, v] pairs");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto pair = r.list<int>(edges[i], "lattice.edges[" + std::to_string(i) + "]");
      if (pair.size() != 2) r.fail(edges[i], "lattice.edges[" + std::to_string(i) + "]", "expected [u, v]");
      c.lattice.edges.emplace_back(pair[0], pair[1]);
    }
  } else {
    r.fail(lat["kind"], "lattice.kind", "expected flake, brick, chain or custom, got '" + c.lattice.kind + "'");
  }

  const auto model = root["model"];
  if (!model) r.fail(root, "model", "required section is missing");
  r.check_keys(model, {"m", "g", "lambda"}, "model");
  c.m = r.required<double>(model, "m", "model");
  c.g = r.required<double>(model, "g", "model");
  c.lambda = r.required<double>(model, "lambda", "model");

  const auto ev = root["evolution"];
  if (!ev) r.fail(root, "evolution", "required section is missing (dt has no default)");
  r.check_keys(ev, {"dt", "times", "t_max", "t_step"}, "evolution");
  c.dt = r.required<double>(ev, "dt", "evolution");
  if (ev["times"]) {
    if (ev["t_max"] || ev["t_step"]) r.fail(ev, "evolution", "give either times or t_max/t_step, not both");
    c.times = r.list<double>(ev["times"], "evolution.times");
  } else {
    double t_max = 1.0, t_step = 0.25;
    r.opt(ev, "t_max", t_max, "evolution");
    r.opt(ev, "t_step", t_step, "evolution");
    if (!(t_step > 0)) r.fail(ev, "evolution.t_step", "must be positive");
    if (!(t_max >= 0)) r.fail(ev, "evolution.t_max", "must be non-negative");
    const auto n = static_cast<long>(std::floor(t_max / t_step + 1e-9));
    for (long k = 0; k <= n; ++k) c.times.push_back(static_cast<double>(k) * t_step);
  }

  if (const auto init = root["initial"]) {
    r.check_keys(init, {"strings"}, "initial");
    if (const auto s = init["strings"]) {
      if (!s.IsSequence()) r.fail(s, "initial.strings", "expected a list of node paths");
      for (std::size_t i = 0; i < s.size(); ++i)
        c.initial_paths.push_back(r.list<int>(s[i], "initial.strings[" + std::to_string(i) + "]"));
    }
  }

  c.observables = {"occupation:all"};
  if (const auto obs = root["observables"]) c.observables = r.list<std::string>(obs, "observables");

  if (const auto n = root["noise"]) {
    r.check_keys(n, {"p1", "p1_weights", "virtual_rz", "p2", "p2_weights", "p_meas", "coherent_zz", "terminal"},
                 "noise");
    r.opt(n, "p1", c.noise.p1, "noise");
    r.opt(n, "p2", c.noise.p2, "noise");
    r.opt(n, "p_meas", c.noise.p_meas, "noise");
    r.opt(n, "coherent_zz", c.noise.coherent_zz, "noise");
    r.opt(n, "virtual_rz", c.noise.virtual_rz, "noise");
    if (n["p1_weights"]) {
      const auto w = r.list<double>(n["p1_weights"], "noise.p1_weights");
      if (w.size() != 3) r.fail(n["p1_weights"], "noise.p1_weights", "expected 3 weights (X, Y, Z)");
      std::copy(w.begin(), w.end(), c.noise.p1_weights.begin());
    }
    if (n["p2_weights"]) {
      const auto w = r.list<double>(n["p2_weights"], "noise.p2_weights");
      if (w.size() != 15) r.fail(n["p2_weights"], "noise.p2_weights", "expected 15 weights (IX ... ZZ)");
      std::copy(w.begin(), w.end(), c.noise.p2_weights.begin());
    }
    if (const auto term = n["terminal"]) {
      if (!term.IsSequence()) r.fail(term, "noise.terminal", "expected a list of {pauli, weight}");
      for (std::size_t i = 0; i < term.size(); ++i) {
        const std::string f = "noise.terminal[" + std::to_string(i) + "]";
        r.check_keys(term[i], {"pauli", "weight"}, f);
        try {
          c.noise.terminal_channel.emplace_back(PauliString::parse(r.required<std::string>(term[i], "pauli", f)),
                                                r.required<double>(term[i], "weight", f));
        } catch (const InvalidArgument& e) {
          r.fail(term[i], f + ".pauli", e.what());
        }
      }
    }
  }

  if (const auto s = root["shots"]) c.shots = r.get<int>(s, "shots");
  if (const auto s = root["seed"]) c.seed = r.get<std::uint64_t>(s, "seed");
  if (const auto x = root["exact_reference"]) c.exact_reference = r.get<bool>(x, "exact_reference");

  if (const auto mit = root["mitigation"]) {
    r.check_keys(mit, {"twirl", "gdd", "gsc", "odr", "calibration", "twirl_instances", "gsc_keep_fraction"},
                 "mitigation");
    r.opt(mit, "twirl", c.mitigation.twirl, "mitigation");
    r.opt(mit, "gdd", c.mitigation.gdd, "mitigation");
    r.opt(mit, "gsc", c.mitigation.gsc, "mitigation");
    r.opt(mit, "odr", c.mitigation.odr, "mitigation");
    r.opt(mit, "calibration", c.mitigation.calibration, "mitigation");
    r.opt(mit, "twirl_instances", c.mitigation.twirl_instances, "mitigation");
    r.opt(mit, "gsc_keep_fraction", c.mitigation.gsc_keep_fraction, "mitigation");
  }
  if (const auto b = root["bootstrap"]) {
    r.check_keys(b, {"resamples", "level"}, "bootstrap");
    r.opt(b, "resamples", c.bootstrap.resamples, "bootstrap");
    r.opt(b, "level", c.bootstrap.level, "bootstrap");
  }
  if (const auto cap = root["capacity"]) {
    r.check_keys(cap, {"qubit_cap"}, "capacity");
    r.opt(cap, "qubit_cap", c.qubit_cap, "capacity");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

LatticeSpec parse_lattice_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("lattice '" + text + "': expected kind:size");
  LatticeSpec spec;
  spec.kind = text.substr(0, colon);
  const std::string size = text.substr(colon + 1);
  try {
    if (spec.kind == "brick") {
      const auto x = size.find('x');
      if (x == std::string::npos) throw ConfigError("lattice '" + text + "': brick size is RxC");
      spec.params = {std::stoi(size.substr(0, x)), std::stoi(size.substr(x + 1))};
    } else if (spec.kind == "flake" || spec.kind == "chain") {
      spec.params = {std::stoi(size)};
    } else {
      throw ConfigError("lattice '" + text + "': kind must be flake, brick or chain");
    }
  } catch (const std::logic_error&) {
    throw ConfigError("lattice '" + text + "': size is not an integer");
  }
  return spec;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path);
}

Json config_to_json(const ExperimentConfig& c) {
  Json lattice = {{"kind", c.lattice.kind}, {"params", c.lattice.params}};
  if (c.lattice.kind == "custom") {
    lattice["nodes"] = c.lattice.nodes;
    Json edges = Json::array();
    for (auto [u, v] : c.lattice.edges) edges.push_back({u, v});
    lattice["edges"] = edges;
  }
  return {{"lattice", lattice},
          {"model", {{"m", c.m}, {"g", c.g}, {"lambda", c.lambda}}},
          {"evolution", {{"dt", c.dt}, {"times", c.times}}},
          {"initial", {{"strings", c.initial_paths}}},
          {"observables", c.observables},
          {"noise", noise_to_json(c.noise)},
          {"shots", c.shots},
          {"seed", c.seed},
          {"mitigation",
           {{"twirl", c.mitigation.twirl},
            {"gdd", c.mitigation.gdd},
            {"gsc", c.mitigation.gsc},
            {"odr", c.mitigation.odr},
            {"calibration", c.mitigation.calibration},
            {"twirl_instances", c.mitigation.twirl_instances},
            {"gsc_keep_fraction", c.mitigation.gsc_keep_fraction}}},
          {"bootstrap", {{"resamples", c.bootstrap.resamples}, {"level", c.bootstrap.level}}},
          {"capacity", {{"qubit_cap", c.qubit_cap}}},
          {"exact_reference", c.exact_reference}};
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  const auto& lat = j.at("lattice");
  c.lattice.kind = lat.at("kind").get<std::string>();
  c.lattice.params = lat.at("params").get<std::vector<int>>();
  if (lat.contains("nodes")) c.lattice.nodes = lat.at("nodes").get<int>();
  if (lat.contains("edges"))
    for (const auto& e : lat.at("edges")) c.lattice.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  c.m = j.at("model").at("m").get<double>();
  c.g = j.at("model").at("g").get<double>();
  c.lambda = j.at("model").at("lambda").get<double>();
  c.dt = j.at("evolution").at("dt").get<double>();
  c.times = j.at("evolution").at("times").get<std::vector<double>>();
  c.initial_paths = j.at("initial").at("strings").get<std::vector<std::vector<int>>>();
  c.observables = j.at("observables").get<std::vector<std::string>>();
  c.noise = noise_from_json(j.at("noise"));
  c.shots = j.at("shots").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& m = j.at("mitigation");
  c.mitigation.twirl = m.at("twirl").get<bool>();
  c.mitigation.gdd = m.at("gdd").get<bool>();
  c.mitigation.gsc = m.at("gsc").get<bool>();
  c.mitigation.odr = m.at("odr").get<bool>();
  c.mitigation.calibration = m.at("calibration").get<std::string>();
  c.mitigation.twirl_instances = m.at("twirl_instances").get<int>();
  c.mitigation.gsc_keep_fraction = m.at("gsc_keep_fraction").get<double>();
  c.bootstrap.resamples = j.at("bootstrap").at("resamples").get<int>();
  c.bootstrap.level = j.at("bootstrap").at("level").get<double>();
  c.qubit_cap = j.at("capacity").at("qubit_cap").get<int>();
  c.exact_reference = j.at("exact_reference").get<bool>();
  return c;
}

std::string config_hash(const ExperimentConfig& config) { return hex64(fnv1a64(config_to_json(config).dump())); }

Json estimate_to_json(const Estimate& e) {
  return {{"mean", e.mean},
          {"ci", {e.ci_low, e.ci_high}},
          {"level", e.level},
          {"n_used", e.n_used},
          {"std_error", e.std_error},
          {"mitigation", {{"factor", e.factor}, {"refused", e.refused}, {"clamped", e.clamped}}}};
}

Estimate estimate_from_json(const Json& j) {
  Estimate e;
  e.mean = j.at("mean").get<double>();
  e.ci_low = j.at("ci").at(0).get<double>();
  e.ci_high = j.at("ci").at(1).get<double>();
  e.level = j.at("level").get<double>();
  e.n_used = j.at("n_used").get<long>();
  e.std_error = j.value("std_error", 0.0);
  if (j.contains("mitigation")) {
    const auto& m = j.at("mitigation");
    e.factor = m.value("factor", 1.0);
    e.refused = m.value("refused", false);
    e.clamped = m.value("clamped", false);
  }
  return e;
}

Json lattice_to_json(const LatticeGraph& lat) {
  Json nodes = Json::array();
  for (int n = 0; n < lat.num_nodes(); ++n) {
    const auto& s = lat.sites()[static_cast<std::size_t>(n)];
    nodes.push_back({{"id", n}, {"qubit", lat.node_qubit(n)}, {"x", s.x}, {"y", s.y}, {"degree", lat.degree(n)}});
  }
  Json edges = Json::array();
  for (int e = 0; e < lat.num_edges(); ++e)
    edges.push_back({{"id", e}, {"qubit", lat.edge_qubit(e)}, {"u", lat.link(e).u}, {"v", lat.link(e).v}});
  return {{"lattice", lat.describe()},
          {"num_nodes", lat.num_nodes()},
          {"num_edges", lat.num_edges()},
          {"num_qubits", lat.num_qubits()},
          {"cycle_rank", lat.cycle_rank()},
          {"bit_order", kBitOrderNote},
          {"nodes", nodes},
          {"edges", edges}};
}

Json hamiltonian_to_json(const Hamiltonian& h) {
  static const char* kinds[] = {"mass", "electric", "interaction"};
  Json terms = Json::array();
  for (const auto& t : h.terms())
    terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.str()}, {"kind", kinds[static_cast<int>(t.kind)]},
                     {"site", t.site}});
  return {{"lattice", h.lattice().describe()},
          {"m", h.m()},
          {"g", h.g()},
          {"lambda", h.lambda()},
          {"num_qubits", h.num_qubits()},
          {"terms", terms}};
}

Json noise_to_json(const NoiseModel& n) { return stream_json(n); }

NoiseModel noise_from_json(const Json& j) {
  NoiseModel n;
  n.p1 = j.at("p1").get<double>();
  n.p1_weights = j.at("p1_weights").get<std::array<double, 3>>();
  n.virtual_rz = j.at("virtual_rz").get<bool>();
  n.p2 = j.at("p2").get<double>();
  n.p2_weights = j.at("p2_weights").get<std::array<double, 15>>();
  n.p_meas = j.at("p_meas").get<double>();
  n.coherent_zz = j.at("coherent_zz").get<double>();
  for (const auto& t : j.at("terminal"))
    n.terminal_channel.emplace_back(PauliString::parse(t.at("pauli").get<std::string>()), t.at("weight").get<double>());
  return n;
}

std::string timeseries_to_jsonl(const TimeSeries& ts) {
  Json header = {{"format", "z2hm-timeseries-1"},
                 {"config_hash", ts.config_hash},
                 {"base_hash", ts.base_hash},
                 {"version", ts.version},
                 {"lattice", ts.lattice},
                 {"observables", ts.observables},
                 {"bit_order", kBitOrderNote},
                 {"refusals", ts.refusals}};
  std::string out = header.dump() + "\n";
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    Json est = Json::object();
    for (std::size_t k = 0; k < ts.observables.size(); ++k) est[ts.observables[k]] = estimate_to_json(ts.estimates[i][k]);
    Json row = {{"t", ts.times[i]}, {"estimates", est}};
    if (i < ts.accounting.size())
      row["shots"] = {{"generated", ts.accounting[i].generated},
                      {"postselected", ts.accounting[i].postselected},
                      {"used", ts.accounting[i].used}};
    if (i < ts.reference.size()) {
      Json ref = Json::object();
      for (std::size_t k = 0; k < ts.observables.size(); ++k) ref[ts.observables[k]] = ts.reference[i][k];
      row["exact"] = ref;
    }
    out += row.dump() + "\n";
  }
  return out;
}

TimeSeries timeseries_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  TimeSeries ts;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw InvalidArgument("time series line " + std::to_string(lineno) + ": " + e.what());
    }
    if (header) {
      if (j.value("format", "") != "z2hm-timeseries-1") throw InvalidArgument("not a z2hm time series");
      ts.config_hash = j.at("config_hash").get<std::string>();
      ts.base_hash = j.at("base_hash").get<std::string>();
      ts.version = j.at("version").get<std::string>();
      ts.lattice = j.at("lattice").get<std::string>();
      ts.observables = j.at("observables").get<std::vector<std::string>>();
      ts.refusals = j.at("refusals").get<std::vector<std::string>>();
      header = false;
      continue;
    }
    ts.times.push_back(j.at("t").get<double>());
    std::vector<Estimate> row;
    for (const auto& o : ts.observables) row.push_back(estimate_from_json(j.at("estimates").at(o)));
    ts.estimates.push_back(row);
    if (j.contains("shots")) {
      const auto& s = j.at("shots");
      ts.accounting.push_back({s.at("generated").get<long>(), s.at("postselected").get<long>(), s.at("used").get<long>()});
    }
    if (j.contains("exact")) {
      std::vector<double> ref;
      for (const auto& o : ts.observables) ref.push_back(j.at("exact").at(o).get<double>());
      ts.reference.push_back(ref);
    }
  }
  if (header) throw InvalidArgument("time series is empty");
  return ts;
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"')
        cells.back() += c;
      else if (i + 1 < line.size() && line[i + 1] == '"')
        cells.back() += line[++i];
      else
        quoted = false;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  if (quoted) throw InvalidArgument("CSV line has an unterminated quote");
  return cells;
}

}  // namespace

std::string timeseries_to_csv(const TimeSeries& ts) {
  std::string out = "time";
  for (const auto& o : ts.observables) out += "," + csv_quote(o);
  out += "\n";
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    out += fmt17(ts.times[i]);
    for (const auto& e : ts.estimates[i]) out += "," + fmt17(e.mean);
    out += "\n";
  }
  return out;
}

CsvTable csv_from_string(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (header) {
      t.columns = cells;
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw InvalidArgument("CSV row width does not match its header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::stod(c));
    t.rows.push_back(row);
  }
  return t;
}

std::string shots_to_text(const ShotTable& table) {
  std::ostringstream os;
  os << "# z2hm-shots-1\n";
  os << "# bit_order: " << kBitOrderNote << "\n";
  os << "# num_qubits: " << table.num_qubits << "\n";
  os << "# circuit_hash: " << hex64(table.circuit_hash) << "\n";
  os << "# master_seed: " << table.master_seed << "\n";
  os << "# columns: bits seed twirl_index flips\n";
  for (const auto& s : table.shots)
    os << bits_to_string(s.bits) << ' ' << s.seed << ' ' << s.twirl_index << ' ' << s.flips << '\n';
  return os.str();
}

ShotTable shots_from_text(const std::string& text) {
  ShotTable t;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool seen_format = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "# z2hm-shots-1") seen_format = true;
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "num_qubits") t.num_qubits = std::stoi(value);
      else if (key == "circuit_hash") t.circuit_hash = std::stoull(value, nullptr, 16);
      else if (key == "master_seed") t.master_seed = std::stoull(value);
      continue;
    }
    std::istringstream row(line);
    std::string bits;
    ShotRecord r;
    if (!(row >> bits >> r.seed >> r.twirl_index >> r.flips))
      throw InvalidArgument("shot table line " + std::to_string(lineno) + " is malformed");
    r.bits = bits_from_string(bits);
    if (static_cast<int>(r.bits.size()) != t.num_qubits)
      throw InvalidArgument("shot table line " + std::to_string(lineno) + " has the wrong width");
    t.shots.push_back(std::move(r));
  }
  if (!seen_format) throw InvalidArgument("not a z2hm shot table");
  return t;
}

Json decoder_report_to_json(const DecoderReport& report) {
  Json shots = Json::array();
  for (const auto& s : report.shots)
    shots.push_back({{"defects", s.defects}, {"flips", s.flips}, {"weight", s.flips}});
  Json hist = Json::object();
  for (auto [k, v] : report.histogram) hist[std::to_string(k)] = v;
  return {{"format", "z2hm-decoder-1"},
          {"shots", shots},
          {"histogram", hist},
          {"mean_flips", report.mean_flips()},
          {"approximate", report.any_approximate()}};
}

Json manifest_to_json(const RunManifest& m) {
  return {{"format", "z2hm-manifest-1"},
          {"config_hash", m.config_hash},
          {"versions", m.versions},
          {"seeds", m.seeds},
          {"started_utc", m.started_utc.empty() ? utc_now() : m.started_utc},
          {"wall_seconds", m.wall_seconds},
          {"shots", {{"generated", m.shots.generated}, {"postselected", m.shots.postselected}, {"used", m.shots.used}}},
          {"outputs", m.outputs},
          {"bit_order", kBitOrderNote}};
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.versions = j.at("versions").get<std::map<std::string, std::string>>();
  m.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
  m.started_utc = j.at("started_utc").get<std::string>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  const auto& s = j.at("shots");
  m.shots = {s.at("generated").get<long>(), s.at("postselected").get<long>(), s.at("used").get<long>()};
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write to " + path + " failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace z2hm
