#include "z2hm/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <json.hpp>

#include "z2hm/errors.hpp"
#include "z2hm/hash.hpp"

namespace z2hm {

using nlohmann::json;

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RotZ: return "rz";
    case GateKind::RotX: return "rx";
    case GateKind::CNOT: return "cnot";
    case GateKind::PauliInsert: return "pauli";
    case GateKind::Measure: return "measure";
  }
  return "?";
}

std::string to_string(GateRole role) {
  switch (role) {
    case GateRole::Field: return "field";
    case GateRole::Interaction: return "interaction";
    case GateRole::Core: return "core";
    case GateRole::Gdd: return "gdd";
    case GateRole::Twirl: return "twirl";
    case GateRole::Injected: return "injected";
    case GateRole::Readout: return "readout";
  }
  return "?";
}

GateKind gate_kind_from_string(const std::string& s) {
  for (auto k : {GateKind::RotZ, GateKind::RotX, GateKind::CNOT, GateKind::PauliInsert, GateKind::Measure})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown gate kind '" + s + "'");
}

GateRole gate_role_from_string(const std::string& s) {
  for (auto r : {GateRole::Field, GateRole::Interaction, GateRole::Core, GateRole::Gdd, GateRole::Twirl,
                 GateRole::Injected, GateRole::Readout})
    if (to_string(r) == s) return r;
  throw InvalidArgument("unknown gate role '" + s + "'");
}

std::string to_string(FaultClass c) {
  switch (c) {
    case FaultClass::Harmless: return "harmless";
    case FaultClass::CorrectableX: return "correctable_x";
    case FaultClass::XBurst: return "x_burst";
    case FaultClass::GaugeInvariantRotation: return "gauge_invariant_rotation";
    case FaultClass::MeasurementFlip: return "measurement_flip";
  }
  return "?";
}

Gate Gate::rz(int q, double angle, GateRole role, int layer) {
  Gate g;
  g.kind = GateKind::RotZ;
  g.q0 = q;
  g.angle = angle;
  g.role = role;
  g.layer = layer;
  return g;
}

Gate Gate::rx(int q, double angle, GateRole role, int layer) {
  Gate g = rz(q, angle, role, layer);
  g.kind = GateKind::RotX;
  return g;
}

Gate Gate::cnot(int control, int target, int layer, int block, int slot) {
  Gate g;
  g.kind = GateKind::CNOT;
  g.q0 = control;
  g.q1 = target;
  g.role = GateRole::Interaction;
  g.layer = layer;
  g.block = block;
  g.slot = slot;
  return g;
}

Gate Gate::pauli(int q, Pauli letter, GateRole role, int layer) {
  Gate g;
  g.kind = GateKind::PauliInsert;
  g.q0 = q;
  g.letter = letter;
  g.role = role;
  g.layer = layer;
  return g;
}

Gate Gate::measure(int q) {
  Gate g;
  g.kind = GateKind::Measure;
  g.q0 = q;
  g.role = GateRole::Readout;
  return g;
}

std::size_t Circuit::unitary_end() const {
  std::size_t end = gates.size();
  while (end > 0 && gates[end - 1].kind == GateKind::Measure) --end;
  for (std::size_t i = 0; i < end; ++i)
    if (gates[i].kind == GateKind::Measure) throw InvalidArgument("measurement before the end of the circuit");
  return end;
}

Bitstring Circuit::initial_bits() const {
  if (initial.empty()) return Bitstring(static_cast<std::size_t>(num_qubits), 0);
  if (static_cast<int>(initial.size()) != num_qubits) throw InvalidArgument("initial bitstring length mismatch");
  return initial;
}

DepthReport depth_report(const Circuit& circuit) {
  DepthReport r;
  r.layers = circuit.meta.layers;
  std::vector<int> global(static_cast<std::size_t>(circuit.num_qubits), 0);
  std::map<int, std::vector<int>> per_layer, per_block;
  std::map<std::tuple<int, int, int>, int> control_uses;
  auto place = [&](std::vector<int>& front, const Gate& g) {
    if (front.empty()) front.assign(static_cast<std::size_t>(circuit.num_qubits), 0);
    auto& a = front[static_cast<std::size_t>(g.q0)];
    auto& b = front[static_cast<std::size_t>(g.q1)];
    a = b = std::max(a, b) + 1;
    return a;
  };
  for (const auto& g : circuit.gates) {
    if (g.kind != GateKind::CNOT) continue;
    ++r.cnot_count;
    r.two_qubit_depth = std::max(r.two_qubit_depth, place(global, g));
    if (g.layer >= 0) place(per_layer[g.layer], g);
    if (g.block >= 0) {
      place(per_block[g.block], g);
      r.max_control_uses_per_slot =
          std::max(r.max_control_uses_per_slot, ++control_uses[{g.block, g.slot, g.q0}]);
    }
  }
  for (const auto& [layer, front] : per_layer) r.layer_depths.push_back(*std::max_element(front.begin(), front.end()));
  for (const auto& [block, front] : per_block) r.block_depths.push_back(*std::max_element(front.begin(), front.end()));
  r.slot_volume = static_cast<long>(r.two_qubit_depth) * circuit.meta.num_edges;
  return r;
}

bool is_clifford_angle(double angle) {
  const double k = angle / (std::numbers::pi / 2);
  return std::abs(k - std::round(k)) < 1e-9;
}

namespace {

PauliString times_i(const PauliString& p, int power) { return p.with_phase(p.phase() + power); }

// exp(-i theta A / 2) P exp(+i theta A / 2) for single-qubit A anticommuting with P,
// theta a multiple of pi/2: cos(theta) P - i sin(theta) A P.
PauliString rotate_clifford(const PauliString& p, int qubit, Pauli axis, double theta, bool forward) {
  const PauliString a = PauliString::single(qubit, axis);
  if (p.commutes_with(a)) return p;
  const long k = std::lround(theta / (std::numbers::pi / 2));
  const int km = static_cast<int>(((k % 4) + 4) % 4);
  // Heisenberg (backward) conjugation flips the sign of the sine term.
  const int s = forward ? 1 : -1;
  switch (km) {
    case 0: return p;
    case 2: return p.negated();
    case 1: return times_i(a * p, s > 0 ? 3 : 1);
    default: return times_i(a * p, s > 0 ? 1 : 3);
  }
}

PauliString conjugate_cnot(const PauliString& p, int c, int t) {
  const Pauli pc = p.letter(c), pt = p.letter(t);
  const bool xc = pc == Pauli::X || pc == Pauli::Y;
  const bool zc = pc == Pauli::Z || pc == Pauli::Y;
  const bool xt = pt == Pauli::X || pt == Pauli::Y;
  const bool zt = pt == Pauli::Z || pt == Pauli::Y;
  // Y = i X Z per qubit; X_c -> X_c X_t and Z_t -> Z_c Z_t, the rest is fixed.
  PauliString image;
  if (xc) image = image * PauliString::x_on({c, t});
  if (zc) image = image * PauliString::single(c, Pauli::Z);
  if (xt) image = image * PauliString::single(t, Pauli::X);
  if (zt) image = image * PauliString::z_on({c, t});
  PauliString rest = p.with_phase(0);
  rest.set(c, Pauli::I);
  rest.set(t, Pauli::I);
  const PauliString out = rest * image;
  return out.with_phase(out.phase() + p.phase() + (xc && zc) + (xt && zt));
}

PauliString conjugate_pauli_insert(const PauliString& p, int q, Pauli letter) {
  if (p.commutes_with(PauliString::single(q, letter))) return p;
  return p.negated();
}

}  // namespace

PauliString conjugate_forward(const Gate& g, const PauliString& p) {
  switch (g.kind) {
    case GateKind::CNOT: return conjugate_cnot(p, g.q0, g.q1);
    case GateKind::PauliInsert: return conjugate_pauli_insert(p, g.q0, g.letter);
    case GateKind::RotZ:
    case GateKind::RotX:
      if (!is_clifford_angle(g.angle)) throw InvalidArgument("non-Clifford rotation angle " + std::to_string(g.angle));
      return rotate_clifford(p, g.q0, g.kind == GateKind::RotZ ? Pauli::Z : Pauli::X, g.angle, true);
    case GateKind::Measure: return p;
  }
  return p;
}

double clifford_expectation(const Circuit& circuit, const PauliString& obs) {
  if (!obs.is_hermitian()) throw InvalidArgument("observable must be Hermitian");
  if (obs.max_qubit() >= circuit.num_qubits) throw InvalidArgument("observable outside register");
  PauliString o = obs;
  const std::size_t end = circuit.unitary_end();
  for (std::size_t i = end; i-- > 0;) {
    const Gate& g = circuit.gates[i];
    switch (g.kind) {
      case GateKind::CNOT: o = conjugate_cnot(o, g.q0, g.q1); break;
      case GateKind::PauliInsert: o = conjugate_pauli_insert(o, g.q0, g.letter); break;
      case GateKind::RotZ:
      case GateKind::RotX:
        if (!is_clifford_angle(g.angle))
          throw InvalidArgument("clifford_expectation: gate " + std::to_string(i) + " has non-Clifford angle");
        o = rotate_clifford(o, g.q0, g.kind == GateKind::RotZ ? Pauli::Z : Pauli::X, g.angle, false);
        break;
      case GateKind::Measure: break;
    }
  }
  if (!o.is_diagonal()) return 0.0;
  const Bitstring init = circuit.initial_bits();
  int parity = 0;
  for (int q : o.support()) parity ^= init[static_cast<std::size_t>(q)];
  return static_cast<double>(o.sign()) * (parity ? -1.0 : 1.0);
}

bool FaultReport::crossed_core() const {
  return std::any_of(events.begin(), events.end(), [](const RotationEvent& e) { return e.role == GateRole::Core; });
}

bool FaultReport::crossed_field() const {
  return std::any_of(events.begin(), events.end(), [](const RotationEvent& e) { return e.role == GateRole::Field; });
}

FaultReport propagate_fault(const Circuit& circuit, std::size_t location, int qubit, Pauli letter) {
  if (location > circuit.gates.size())
    throw InvalidArgument("fault location " + std::to_string(location) + " past the end of the circuit");
  if (qubit < 0 || qubit >= circuit.num_qubits) throw InvalidArgument("fault qubit outside register");
  if (letter == Pauli::I) throw InvalidArgument("fault letter must be X, Y or Z");
  const std::size_t end = circuit.unitary_end();
  FaultReport r;
  PauliString p = PauliString::single(qubit, letter);
  for (std::size_t i = location; i < end; ++i) {
    const Gate& g = circuit.gates[i];
    if (g.is_rotation() && !is_clifford_angle(g.angle)) {
      const Pauli axis = g.kind == GateKind::RotZ ? Pauli::Z : Pauli::X;
      if (!p.commutes_with(PauliString::single(g.q0, axis))) r.events.push_back({i, g.role, g.q0});
      continue;
    }
    p = conjugate_forward(g, p);
  }
  r.terminal = p;
  for (int q : p.support()) {
    const Pauli l = p.letter(q);
    r.x_weight += l == Pauli::X || l == Pauli::Y;
  }
  if (location >= end) {
    r.cls = r.x_weight > 0 ? FaultClass::MeasurementFlip : FaultClass::Harmless;
  } else if (r.x_weight == 1) {
    r.cls = FaultClass::CorrectableX;
  } else if (r.x_weight > 1) {
    r.cls = FaultClass::XBurst;
  } else {
    r.cls = r.crossed_core() ? FaultClass::GaugeInvariantRotation : FaultClass::Harmless;
  }
  return r;
}

namespace {

json gate_to_json(const Gate& g) {
  json j;
  j["kind"] = to_string(g.kind);
  j["q"] = g.q0;
  if (g.kind == GateKind::CNOT) j["target"] = g.q1;
  if (g.is_rotation()) j["angle"] = g.angle;
  if (g.kind == GateKind::PauliInsert) j["letter"] = std::string(1, pauli_char(g.letter));
  j["role"] = to_string(g.role);
  j["layer"] = g.layer;
  if (g.block >= 0) j["block"] = g.block;
  if (g.slot >= 0) j["slot"] = g.slot;
  return j;
}

Gate gate_from_json(const json& j) {
  Gate g;
  g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
  g.q0 = j.at("q").get<int>();
  g.q1 = j.value("target", -1);
  g.angle = j.value("angle", 0.0);
  if (j.contains("letter")) g.letter = pauli_from_char(j.at("letter").get<std::string>().at(0));
  g.role = gate_role_from_string(j.at("role").get<std::string>());
  g.layer = j.value("layer", -1);
  g.block = j.value("block", -1);
  g.slot = j.value("slot", -1);
  return g;
}

json circuit_json(const Circuit& c) {
  json meta;
  meta["variant"] = c.meta.variant;
  meta["lattice"] = c.meta.lattice;
  meta["num_nodes"] = c.meta.num_nodes;
  meta["num_edges"] = c.meta.num_edges;
  meta["m"] = c.meta.m;
  meta["g"] = c.meta.g;
  meta["lambda"] = c.meta.lambda;
  meta["t"] = c.meta.t;
  meta["dt"] = c.meta.dt;
  meta["dt_eff"] = c.meta.dt_eff;
  meta["layers"] = c.meta.layers;
  meta["gdd"] = c.meta.gdd;
  meta["phase_seed"] = c.meta.phase_seed ? json(*c.meta.phase_seed) : json(nullptr);
  meta["gdd_phases"] = c.meta.gdd_phases;
  meta["twirl_seed"] = c.meta.twirl_seed ? json(*c.meta.twirl_seed) : json(nullptr);
  meta["twirl_index"] = c.meta.twirl_index;
  json j;
  j["format"] = "z2hm-circuit-1";
  j["num_qubits"] = c.num_qubits;
  j["initial"] = bits_to_string(c.initial_bits());
  j["bit_order"] = "little-endian, rightmost character is qubit 0";
  j["metadata"] = meta;
  json gates = json::array();
  for (const auto& g : c.gates) gates.push_back(gate_to_json(g));
  j["gates"] = gates;
  return j;
}

}  // namespace

std::string circuit_to_json(const Circuit& circuit) { return circuit_json(circuit).dump(1); }

Circuit circuit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("circuit JSON: ") + e.what());
  }
  Circuit c;
  c.num_qubits = j.at("num_qubits").get<int>();
  c.initial = bits_from_string(j.at("initial").get<std::string>());
  const json& meta = j.at("metadata");
  c.meta.variant = meta.at("variant").get<std::string>();
  c.meta.lattice = meta.at("lattice").get<std::string>();
  c.meta.num_nodes = meta.at("num_nodes").get<int>();
  c.meta.num_edges = meta.at("num_edges").get<int>();
  c.meta.m = meta.at("m").get<double>();
  c.meta.g = meta.at("g").get<double>();
  c.meta.lambda = meta.at("lambda").get<double>();
  c.meta.t = meta.at("t").get<double>();
  c.meta.dt = meta.at("dt").get<double>();
  c.meta.dt_eff = meta.at("dt_eff").get<double>();
  c.meta.layers = meta.at("layers").get<int>();
  c.meta.gdd = meta.at("gdd").get<bool>();
  if (!meta.at("phase_seed").is_null()) c.meta.phase_seed = meta.at("phase_seed").get<std::uint64_t>();
  c.meta.gdd_phases = meta.at("gdd_phases").get<std::vector<std::vector<double>>>();
  if (!meta.at("twirl_seed").is_null()) c.meta.twirl_seed = meta.at("twirl_seed").get<std::uint64_t>();
  c.meta.twirl_index = meta.value("twirl_index", 0);
  for (const auto& g : j.at("gates")) c.gates.push_back(gate_from_json(g));
  return c;
}

std::uint64_t circuit_hash(const Circuit& circuit) { return fnv1a64(circuit_json(circuit).dump()); }

}  // namespace z2hm
