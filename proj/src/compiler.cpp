#include "z2hm/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "z2hm/errors.hpp"

namespace z2hm {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) { return x - 2 * kPi * std::round(x / (2 * kPi)); }

void append_field(Circuit& c, const LatticeGraph& lat, double m, double g, double dt, int layer) {
  // U1(dt/2) = exp(+i dt/2 (m sum Z_n + g sum Z_e)) = prod RotZ(-m dt) RotZ(-g dt).
  for (int n = 0; n < lat.num_nodes(); ++n) c.append(Gate::rz(lat.node_qubit(n), -m * dt, GateRole::Field, layer));
  for (int e = 0; e < lat.num_edges(); ++e) c.append(Gate::rz(lat.edge_qubit(e), -g * dt, GateRole::Field, layer));
}

struct CnotPlacement {
  int control;
  int target;
  int slot;
};

// Edge e with colour c targets its set-A endpoint in slot c and its set-B
// endpoint in slot c+1 (mod 3). Proper colouring keeps every slot free of
// qubit collisions, so the block has depth 3.
std::vector<CnotPlacement> interaction_schedule(const LatticeGraph& lat) {
  const Bipartition parts = matter_bipartition(lat);
  const std::vector<int> colour = edge_coloring(lat, parts);
  std::vector<CnotPlacement> out;
  for (int e = 0; e < lat.num_edges(); ++e) {
    const Link& l = lat.link(e);
    const int a = parts.side[static_cast<std::size_t>(l.u)] == 0 ? l.u : l.v;
    const int b = lat.other_end(e, a);
    const int c = colour[static_cast<std::size_t>(e)];
    out.push_back({lat.edge_qubit(e), lat.node_qubit(a), c});
    out.push_back({lat.edge_qubit(e), lat.node_qubit(b), (c + 1) % 3});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.slot < y.slot; });
  return out;
}

}  // namespace

std::vector<Gate> pauli_gadget(const LatticeGraph& lattice, int edge, double angle) {
  const Link& l = lattice.link(edge);
  const int e = lattice.edge_qubit(edge), u = lattice.node_qubit(l.u), v = lattice.node_qubit(l.v);
  return {Gate::cnot(e, u, -1, -1, 0), Gate::cnot(e, v, -1, -1, 1), Gate::rx(e, -2 * angle, GateRole::Core),
          Gate::cnot(e, v, -1, -1, 2), Gate::cnot(e, u, -1, -1, 3)};
}

int trotter_layers(double t, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive and finite");
  if (!(t >= 0) || !std::isfinite(t)) throw InvalidArgument("t must be non-negative and finite");
  if (t == 0) return 0;
  int layers = static_cast<int>(std::ceil(t / dt - 1e-9));
  layers = std::max(layers, 1);
  if (layers % 2) ++layers;
  return layers;
}

Circuit trotter_circuit(const LatticeGraph& lattice, const QuenchParams& p, const CompileOptions& options,
                        const Bitstring& initial) {
  const int layers = trotter_layers(p.t, p.dt);
  Circuit c;
  c.num_qubits = lattice.num_qubits();
  if (!initial.empty() && static_cast<int>(initial.size()) != c.num_qubits)
    throw InvalidArgument("initial bitstring has " + std::to_string(initial.size()) + " bits, register has " +
                          std::to_string(c.num_qubits));
  c.initial = initial.empty() ? Bitstring(static_cast<std::size_t>(c.num_qubits), 0) : initial;
  c.meta.lattice = lattice.describe();
  c.meta.num_nodes = lattice.num_nodes();
  c.meta.num_edges = lattice.num_edges();
  c.meta.m = p.m;
  c.meta.g = p.g;
  c.meta.lambda = p.lambda;
  c.meta.t = p.t;
  c.meta.dt = p.dt;
  c.meta.layers = layers;
  c.meta.dt_eff = layers ? p.t / layers : 0.0;
  const double dt = c.meta.dt_eff;

  const auto schedule = layers ? interaction_schedule(lattice) : std::vector<CnotPlacement>{};
  for (int k = 0; k < layers; ++k) {
    append_field(c, lattice, p.m, p.g, dt, k);
    for (const auto& s : schedule) c.append(Gate::cnot(s.control, s.target, k, 2 * k, s.slot));
    for (int e = 0; e < lattice.num_edges(); ++e)
      c.append(Gate::rx(lattice.edge_qubit(e), -2 * p.lambda * dt, GateRole::Core, k));
    for (auto it = schedule.rbegin(); it != schedule.rend(); ++it)
      c.append(Gate::cnot(it->control, it->target, k, 2 * k + 1, 2 - it->slot));
    append_field(c, lattice, p.m, p.g, dt, k);
  }
  if (options.measure)
    for (int q = 0; q < c.num_qubits; ++q) c.append(Gate::measure(q));
  if (options.gdd) c = insert_gdd(c, options.phase_seed);
  if (options.twirl_seed) c = twirl(c, *options.twirl_seed);
  return c;
}

std::vector<std::vector<double>> sample_gdd_phases(int layers, int nodes, std::uint64_t phase_seed) {
  std::vector<std::vector<double>> phases(static_cast<std::size_t>(layers), std::vector<double>(static_cast<std::size_t>(nodes)));
  for (int n = 0; n < nodes; ++n) {
    Rng rng(derive_seed(phase_seed, {static_cast<std::uint64_t>(n)}));
    std::vector<double> seq(static_cast<std::size_t>(layers));
    double mean = 0;
    for (auto& x : seq) {
      x = rng.uniform(-kPi, kPi);
      mean += x;
    }
    mean /= std::max(layers, 1);
    for (int k = 0; k < layers; ++k)
      phases[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)] = wrap_angle(seq[static_cast<std::size_t>(k)] - mean);
  }
  return phases;
}

Circuit insert_gdd(const Circuit& circuit, std::uint64_t phase_seed) {
  if (circuit.meta.variant != "trotter") throw InvalidArgument("GDD insertion expects a plain Trotter circuit");
  if (circuit.meta.gdd) throw InvalidArgument("circuit already carries GDD phases");
  const int layers = circuit.meta.layers;
  const int nodes = circuit.meta.num_nodes;
  const auto phases = sample_gdd_phases(layers, nodes, phase_seed);
  Circuit out = circuit;
  out.gates.clear();
  const auto& gates = circuit.gates;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    out.gates.push_back(gates[i]);
    const bool last_core = gates[i].role == GateRole::Core && gates[i].layer >= 0 &&
                           (i + 1 == gates.size() || gates[i + 1].role != GateRole::Core ||
                            gates[i + 1].layer != gates[i].layer);
    if (!last_core) continue;
    const int k = gates[i].layer;
    for (int n = 0; n < nodes; ++n)
      out.gates.push_back(Gate::rz(n, 2 * phases[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)], GateRole::Gdd, k));
  }
  out.meta.gdd = true;
  out.meta.phase_seed = phase_seed;
  out.meta.gdd_phases = phases;
  return out;
}

Circuit twirl(const Circuit& circuit, std::uint64_t seed) {
  static constexpr Pauli kLetters[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
  Rng rng(derive_seed(seed, {0}));
  Circuit out = circuit;
  out.gates.clear();
  for (const auto& g : circuit.gates) {
    if (g.kind != GateKind::CNOT) {
      out.gates.push_back(g);
      continue;
    }
    const auto draw = rng.below(16);
    const Pauli pc = kLetters[draw / 4], pt = kLetters[draw % 4];
    PauliString frame = PauliString::single(g.q0, pc) * PauliString::single(g.q1, pt);
    const PauliString comp = conjugate_forward(g, frame);
    auto emit = [&](int q, Pauli l) {
      if (l != Pauli::I) out.gates.push_back(Gate::pauli(q, l, GateRole::Twirl, g.layer));
    };
    emit(g.q0, pc);
    emit(g.q1, pt);
    out.gates.push_back(g);
    emit(g.q0, comp.letter(g.q0));
    emit(g.q1, comp.letter(g.q1));
  }
  out.meta.twirl_seed = seed;
  return out;
}

Circuit mirror_calibration(const Circuit& circuit) {
  const int layers = circuit.meta.layers;
  if (layers % 2) throw InvalidArgument("mirror calibration needs an even number of layers, got " + std::to_string(layers));
  const int half = layers / 2;
  Circuit out = circuit;
  out.gates.clear();
  std::vector<Gate> kept;
  bool measured = false;
  for (const auto& g : circuit.gates) {
    if (g.kind == GateKind::Measure) {
      measured = true;
      continue;
    }
    if (g.layer >= 0 && g.layer < half) kept.push_back(g);
  }
  out.gates = kept;
  for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
    Gate g = *it;
    if (g.is_rotation()) g.angle = -g.angle;
    g.layer = layers - 1 - g.layer;
    if (g.block >= 0) g.block = 2 * layers - 1 - g.block;
    out.gates.push_back(g);
  }
  if (measured)
    for (int q = 0; q < out.num_qubits; ++q) out.gates.push_back(Gate::measure(q));
  out.meta.variant = "mirror";
  if (!circuit.meta.gdd_phases.empty()) {
    auto& ph = out.meta.gdd_phases;
    ph.resize(static_cast<std::size_t>(half));
    for (int k = half - 1; k >= 0; --k) {
      auto row = ph[static_cast<std::size_t>(k)];
      for (auto& x : row) x = -x;
      ph.push_back(row);
    }
  }
  return out;
}

double snap_clifford_angle(double angle) {
  const double x = angle / (kPi / 2);
  const double ax = std::abs(x);
  double k = std::floor(ax);
  const double frac = ax - k;
  if (frac > 0.5 + 1e-12) k += 1;
  const double snapped = std::copysign(k, x) * (kPi / 2);
  return snapped == 0 ? 0.0 : snapped;
}

Circuit cliffordize(const Circuit& circuit) {
  Circuit out = circuit;
  for (auto& g : out.gates)
    if (g.is_rotation()) g.angle = snap_clifford_angle(g.angle);
  for (auto& row : out.meta.gdd_phases)
    for (auto& phi : row) phi = snap_clifford_angle(2 * phi) / 2;
  out.meta.variant = "clifford";
  return out;
}

}  // namespace z2hm
