#include "z2hm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "z2hm/errors.hpp"
#include "z2hm/rng.hpp"

namespace z2hm {

namespace {

constexpr Pauli kLetters[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

// Pauli frame as symplectic masks; phases are irrelevant to sampling.
struct Frame {
  std::uint64_t x = 0, z = 0;
  void mul(int q, Pauli p) {
    if (p == Pauli::X || p == Pauli::Y) x ^= bit(q);
    if (p == Pauli::Z || p == Pauli::Y) z ^= bit(q);
  }
};

struct NoiseEvent {
  std::uint32_t gate;
  std::uint64_t x, z;
  auto operator<=>(const NoiseEvent&) const = default;
};

double check_weights(const double* w, std::size_t n, const char* what) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w[i] >= 0) || !std::isfinite(w[i])) throw InvalidArgument(std::string(what) + " weights must be non-negative");
    s += w[i];
  }
  if (s <= 0) throw InvalidArgument(std::string(what) + " weights sum to zero");
  return s;
}

template <std::size_t N>
int draw_index(const std::array<double, N>& w, double total, double u) {
  double acc = 0;
  const double target = u * total;
  for (std::size_t i = 0; i < N; ++i) {
    acc += w[i];
    if (target < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N) - 1;
}

bool noisy_single(const Gate& g, const NoiseModel& noise) {
  return noise.p1 > 0 && (g.kind == GateKind::RotX || (g.kind == GateKind::RotZ && !noise.virtual_rz));
}

// Error events of one shot; consumes the shot's error stream in gate order.
std::vector<NoiseEvent> sample_events(const Circuit& c, std::size_t end, const NoiseModel& noise, Rng& rng,
                                      double w1, double w2) {
  std::vector<NoiseEvent> ev;
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = c.gates[i];
    if (noisy_single(g, noise)) {
      if (rng.uniform() < noise.p1) {
        Frame f;
        f.mul(g.q0, kLetters[1 + draw_index(noise.p1_weights, w1, rng.uniform())]);
        ev.push_back({static_cast<std::uint32_t>(i), f.x, f.z});
      }
    } else if (g.kind == GateKind::CNOT && noise.p2 > 0) {
      if (rng.uniform() < noise.p2) {
        const int k = 1 + draw_index(noise.p2_weights, w2, rng.uniform());
        Frame f;
        f.mul(g.q0, kLetters[k / 4]);
        f.mul(g.q1, kLetters[k % 4]);
        ev.push_back({static_cast<std::uint32_t>(i), f.x, f.z});
      }
    }
  }
  return ev;
}

// What a Pauli frame does to a run: the rotations whose sign it flips and
// the bit flips it leaves on the outcome. Shots with equal deviations have
// identical output distributions and are simulated once.
struct Deviation {
  std::vector<std::uint32_t> flipped;     // rotation gates with negated angle
  std::vector<std::uint32_t> flipped_zz;  // CNOTs whose coherent ZZ term is negated
  std::uint64_t final_x = 0;
  auto operator<=>(const Deviation&) const = default;
};

Deviation trace_frame(const Circuit& c, std::size_t end, const NoiseModel& noise, const std::vector<NoiseEvent>& events) {
  Deviation d;
  Frame f;
  std::size_t next = 0;
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::RotZ:
        if (f.x & bit(g.q0)) d.flipped.push_back(static_cast<std::uint32_t>(i));
        break;
      case GateKind::RotX:
        if (f.z & bit(g.q0)) d.flipped.push_back(static_cast<std::uint32_t>(i));
        break;
      case GateKind::CNOT:
        if (f.x & bit(g.q0)) f.x ^= bit(g.q1);
        if (f.z & bit(g.q1)) f.z ^= bit(g.q0);
        if (noise.coherent_zz != 0 && (((f.x >> g.q0) ^ (f.x >> g.q1)) & 1U))
          d.flipped_zz.push_back(static_cast<std::uint32_t>(i));
        break;
      case GateKind::PauliInsert: f.mul(g.q0, g.letter); break;
      case GateKind::Measure: break;
    }
    while (next < events.size() && events[next].gate == i) {
      f.x ^= events[next].x;
      f.z ^= events[next].z;
      ++next;
    }
  }
  d.final_x = f.x;
  return d;
}

struct State {
  std::vector<Amplitude> phi;
  std::vector<std::uint64_t> cols, rows;
};

inline Amplitude cmul(Amplitude a, Amplitude b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// Executes the unitary part with selected rotations negated. CNOTs are not
// applied to the amplitudes: the stored array phi relates to the physical
// state by psi(i) = phi(A i) over GF(2), and a CNOT only updates A. Single
// qubit gates then act along the columns of A and rows of A^-1.
//
// The clean run keeps snapshots at a few fixed gate positions; a deviated run
// resumes from the last snapshot before its first sign flip.
class LinearRunner {
 public:
  LinearRunner(const Circuit& c, const NoiseModel& noise, std::uint64_t initial)
      : c_(c), noise_(noise), end_(c.unitary_end()), n_(c.num_qubits) {
    const std::size_t bytes = (std::size_t{16} << n_);
    const std::size_t budget = std::size_t{256} << 20;
    const std::size_t count = std::min<std::size_t>(16, std::max<std::size_t>(1, budget / bytes));
    for (std::size_t k = 1; k < count; ++k) stops_.push_back(end_ * k / count);
    stops_.erase(std::unique(stops_.begin(), stops_.end()), stops_.end());

    State s;
    s.phi.assign(std::size_t{1} << n_, Amplitude{0, 0});
    s.phi[initial] = 1;
    s.cols.resize(static_cast<std::size_t>(n_));
    s.rows.resize(static_cast<std::size_t>(n_));
    for (int q = 0; q < n_; ++q) s.cols[static_cast<std::size_t>(q)] = s.rows[static_cast<std::size_t>(q)] = bit(q);
    snapshots_.push_back(s);  // position 0
    const Deviation none;
    std::size_t pos = 0;
    for (std::size_t stop : stops_) {
      advance(s, none, pos, stop);
      pos = stop;
      snapshots_.push_back(s);
    }
    advance(s, none, pos, end_);
    clean_ = std::move(s);
  }

  // Runs the deviated circuit into `out`.
  void run(const Deviation& dev, State& out) const {
    std::size_t first = end_;
    if (!dev.flipped.empty()) first = std::min<std::size_t>(first, dev.flipped.front());
    if (!dev.flipped_zz.empty()) first = std::min<std::size_t>(first, dev.flipped_zz.front());
    if (first == end_) {
      out = clean_;
      return;
    }
    std::size_t k = 0;
    while (k < stops_.size() && stops_[k] <= first) ++k;
    out = snapshots_[k];
    advance(out, dev, k ? stops_[k - 1] : 0, end_);
  }

  static std::uint64_t physical_index(const State& s, std::uint64_t stored) {
    std::uint64_t out = 0;
    for (std::size_t q = 0; q < s.rows.size(); ++q)
      if (std::popcount(s.rows[q] & stored) & 1) out |= bit(static_cast<int>(q));
    return out;
  }

 private:
  void advance(State& s, const Deviation& dev, std::size_t from, std::size_t to) const {
    std::vector<double> zacc(static_cast<std::size_t>(n_), 0.0);
    bool pending = false;
    auto flush = [&] {
      if (pending) apply_z_batch(s, zacc);
      std::fill(zacc.begin(), zacc.end(), 0.0);
      pending = false;
    };
    auto nf = std::lower_bound(dev.flipped.begin(), dev.flipped.end(), from);
    auto nz = std::lower_bound(dev.flipped_zz.begin(), dev.flipped_zz.end(), from);
    for (std::size_t i = from; i < to; ++i) {
      const Gate& g = c_.gates[i];
      const bool neg = nf != dev.flipped.end() && *nf == i;
      if (neg) ++nf;
      const double angle = neg ? -g.angle : g.angle;
      switch (g.kind) {
        case GateKind::RotZ:
          zacc[static_cast<std::size_t>(g.q0)] += angle;
          pending = true;
          break;
        case GateKind::RotX:
          flush();
          apply_x_rotation(s.phi, s.cols[static_cast<std::size_t>(g.q0)], angle);
          break;
        case GateKind::CNOT: {
          const auto c = static_cast<std::size_t>(g.q0), t = static_cast<std::size_t>(g.q1);
          // Z on the control commutes with the CNOT; Z on the target does not.
          if (zacc[t] != 0) flush();
          s.cols[c] ^= s.cols[t];
          s.rows[t] ^= s.rows[c];
          if (noise_.coherent_zz != 0) {
            const bool zneg = nz != dev.flipped_zz.end() && *nz == i;
            if (zneg) ++nz;
            flush();
            apply_parity_phase(s.phi, s.rows[c] ^ s.rows[t], zneg ? -noise_.coherent_zz : noise_.coherent_zz);
          }
          break;
        }
        case GateKind::PauliInsert:
        case GateKind::Measure: break;
      }
    }
    flush();
  }

  // exp(-i theta X_q / 2) with X_q acting as j -> j ^ mask on stored indices.
  static void apply_x_rotation(std::vector<Amplitude>& phi, std::uint64_t mask, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const std::uint64_t low = mask & (~mask + 1);
    for (std::uint64_t j = 0; j < phi.size(); ++j) {
      if (j & low) continue;
      const Amplitude a = phi[j], b = phi[j ^ mask];
      phi[j] = Amplitude(c * a.real() + s * b.imag(), c * a.imag() - s * b.real());
      phi[j ^ mask] = Amplitude(c * b.real() + s * a.imag(), c * b.imag() - s * a.real());
    }
  }

  // exp(-i theta Z_P / 2) where Z_P has eigenvalue (-1)^parity(mask & j).
  static void apply_parity_phase(std::vector<Amplitude>& phi, std::uint64_t mask, double theta) {
    const Amplitude even = std::polar(1.0, -theta / 2), odd = std::polar(1.0, theta / 2);
    for (std::uint64_t j = 0; j < phi.size(); ++j) phi[j] = cmul(phi[j], (std::popcount(j & mask) & 1) ? odd : even);
  }

  // Product of RotZ gates: the phase is tabulated over physical indices by
  // doubling, and physical indices of stored entries are built the same way
  // from the columns of A^-1.
  void apply_z_batch(State& s, const std::vector<double>& angles) const {
    const std::size_t dim = s.phi.size();
    auto& diag = scratch_diag_;
    auto& phys = scratch_phys_;
    diag.resize(dim);
    phys.resize(dim);
    double total = 0;
    for (double a : angles) total += a;
    diag[0] = std::polar(1.0, -total / 2);
    for (int q = 0; q < n_; ++q) {
      const std::size_t b = std::size_t{1} << q;
      const Amplitude up = std::polar(1.0, angles[static_cast<std::size_t>(q)]);
      for (std::size_t i = 0; i < b; ++i) diag[i | b] = cmul(diag[i], up);
    }
    phys[0] = 0;
    for (int b = 0; b < n_; ++b) {
      std::uint64_t col = 0;  // A^-1 e_b
      for (int q = 0; q < n_; ++q)
        if (s.rows[static_cast<std::size_t>(q)] >> b & 1U) col |= bit(q);
      const std::size_t lo = std::size_t{1} << b;
      for (std::size_t j = 0; j < lo; ++j) phys[j | lo] = phys[j] ^ col;
    }
    for (std::size_t j = 0; j < dim; ++j) s.phi[j] = cmul(s.phi[j], diag[phys[j]]);
  }

  const Circuit& c_;
  const NoiseModel& noise_;
  std::size_t end_;
  int n_;
  std::vector<std::size_t> stops_;
  std::vector<State> snapshots_;
  State clean_;
  static thread_local std::vector<Amplitude> scratch_diag_;
  static thread_local std::vector<std::uint64_t> scratch_phys_;
};

thread_local std::vector<Amplitude> LinearRunner::scratch_diag_;
thread_local std::vector<std::uint64_t> LinearRunner::scratch_phys_;

void check_register(const Circuit& c, int cap) {
  if (c.num_qubits > cap)
    throw CapacityError("circuit register of " + std::to_string(c.num_qubits) + " qubits exceeds the cap of " +
                        std::to_string(cap));
}

}  // namespace

void NoiseModel::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0 && p <= 1)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
  };
  prob(p1, "p1");
  prob(p2, "p2");
  prob(p_meas, "p_meas");
  check_weights(p1_weights.data(), p1_weights.size(), "p1");
  check_weights(p2_weights.data(), p2_weights.size(), "p2");
  if (!std::isfinite(coherent_zz)) throw InvalidArgument("coherent_zz must be finite");
  double total = 0;
  for (const auto& [p, w] : terminal_channel) {
    if (!(w >= 0)) throw InvalidArgument("terminal channel weights must be non-negative");
    if (p.is_identity()) throw InvalidArgument("terminal channel entries must be non-identity Pauli strings");
    total += w;
  }
  if (total > 1 + 1e-12) throw InvalidArgument("terminal channel weights exceed 1");
}

bool NoiseModel::is_noiseless() const {
  double t = 0;
  for (const auto& e : terminal_channel) t += e.second;
  return p1 == 0 && p2 == 0 && p_meas == 0 && coherent_zz == 0 && t == 0;
}

NoiseModel NoiseModel::scaled(double s) const {
  if (!(s >= 0)) throw InvalidArgument("noise scale must be non-negative");
  NoiseModel out = *this;
  out.p1 = std::min(1.0, p1 * s);
  out.p2 = std::min(1.0, p2 * s);
  out.p_meas = std::min(1.0, p_meas * s);
  out.coherent_zz = coherent_zz * s;
  for (auto& e : out.terminal_channel) e.second *= s;
  return out;
}

void ShotTable::append(const ShotTable& other) {
  if (num_qubits == 0 && shots.empty()) num_qubits = other.num_qubits;
  if (other.num_qubits != num_qubits) throw InvalidArgument("cannot merge shot tables of different widths");
  shots.insert(shots.end(), other.shots.begin(), other.shots.end());
}

StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.num_qubits)
    throw InvalidArgument("state has " + std::to_string(state.num_qubits()) + " qubits, circuit " +
                          std::to_string(circuit.num_qubits));
  StateVector s = state;
  const std::size_t end = circuit.unitary_end();
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = circuit.gates[i];
    switch (g.kind) {
      case GateKind::RotZ: s.apply_rz(g.q0, g.angle); break;
      case GateKind::RotX: s.apply_rx(g.q0, g.angle); break;
      case GateKind::CNOT: s.apply_cnot(g.q0, g.q1); break;
      case GateKind::PauliInsert: s.apply_pauli(PauliString::single(g.q0, g.letter)); break;
      case GateKind::Measure: break;
    }
  }
  return s;
}

StateVector apply_circuit(const Circuit& circuit) {
  return apply_circuit(StateVector::from_bits(circuit.initial_bits()), circuit);
}

ShotTable run_trajectories(const Circuit& circuit, const NoiseModel& noise, int shots, std::uint64_t seed,
                           const SimulatorOptions& options) {
  if (shots < 1) throw InvalidArgument("shot count must be at least 1");
  check_register(circuit, options.qubit_cap);
  noise.validate();
  const std::size_t end = circuit.unitary_end();
  const int nq = circuit.num_qubits;
  const double w1 = check_weights(noise.p1_weights.data(), 3, "p1");
  const double w2 = check_weights(noise.p2_weights.data(), 15, "p2");
  double terminal_total = 0;
  std::vector<std::uint64_t> terminal_x;
  for (const auto& [p, w] : noise.terminal_channel) {
    terminal_total += w;
    terminal_x.push_back(p.x_mask());
  }

  ShotTable table;
  table.num_qubits = nq;
  table.circuit_hash = circuit_hash(circuit);
  table.master_seed = seed;
  table.shots.resize(static_cast<std::size_t>(shots));

  // Group shots whose errors act identically; each group is simulated once.
  const Deviation clean = trace_frame(circuit, end, noise, {});
  std::map<Deviation, std::size_t> group_of;
  std::vector<Deviation> patterns;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::uint64_t> extra_x(static_cast<std::size_t>(shots), 0);
  for (int i = 0; i < shots; ++i) {
    const std::uint64_t shot_seed = derive_seed(seed, {static_cast<std::uint64_t>(i), 0});
    Rng rng(shot_seed);
    const auto ev = sample_events(circuit, end, noise, rng, w1, w2);
    if (terminal_total > 0) {
      double u = rng.uniform(), acc = 0;
      for (std::size_t k = 0; k < terminal_x.size(); ++k) {
        acc += noise.terminal_channel[k].second;
        if (u < acc) {
          extra_x[static_cast<std::size_t>(i)] = terminal_x[k];
          break;
        }
      }
    }
    table.shots[static_cast<std::size_t>(i)].seed = shot_seed;
    table.shots[static_cast<std::size_t>(i)].twirl_index = circuit.meta.twirl_index;
    Deviation dev = ev.empty() ? clean : trace_frame(circuit, end, noise, ev);
    // The outcome flip does not change the distribution's shape; keep it per shot.
    const std::uint64_t fx = dev.final_x;
    dev.final_x = 0;
    extra_x[static_cast<std::size_t>(i)] ^= fx;
    auto [it, inserted] = group_of.emplace(std::move(dev), patterns.size());
    if (inserted) {
      patterns.push_back(it->first);
      members.emplace_back();
    }
    members[it->second].push_back(static_cast<std::size_t>(i));
  }

  const LinearRunner runner(circuit, noise, bits_to_index(circuit.initial_bits()));
  std::atomic<std::size_t> next_group{0};
  auto worker = [&] {
    State st;
    std::vector<double> cdf;
    for (std::size_t gidx = next_group++; gidx < patterns.size(); gidx = next_group++) {
      runner.run(patterns[gidx], st);
      cdf.resize(st.phi.size());
      double acc = 0;
      for (std::size_t k = 0; k < st.phi.size(); ++k) {
        acc += std::norm(st.phi[k]);
        cdf[k] = acc;
      }
      for (std::size_t shot : members[gidx]) {
        Rng mrng(derive_seed(seed, {static_cast<std::uint64_t>(shot), 1}));
        const double u = mrng.uniform() * acc;
        std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        k = std::min(k, cdf.size() - 1);
        std::uint64_t outcome = LinearRunner::physical_index(st, k) ^ extra_x[shot];
        if (noise.p_meas > 0)
          for (int q = 0; q < nq; ++q)
            if (mrng.uniform() < noise.p_meas) outcome ^= bit(q);
        table.shots[shot].bits = index_to_bits(outcome, nq);
      }
    }
  };
  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(patterns.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return table;
}

namespace {

// Density matrix stored as a 2n-qubit vector: element (r, c) at r + (c << n).
class DensityMatrix {
 public:
  DensityMatrix(int n, std::uint64_t basis) : n_(n), v_(2 * n) {
    auto& a = v_.amplitudes();
    a[0] = 0;
    a[basis | (basis << n)] = 1;
  }

  void rz(int q, double t) {
    v_.apply_rz(q, t);
    v_.apply_rz(q + n_, -t);
  }
  void rx(int q, double t) {
    v_.apply_rx(q, t);
    v_.apply_rx(q + n_, -t);
  }
  void cnot(int c, int t) {
    v_.apply_cnot(c, t);
    v_.apply_cnot(c + n_, t + n_);
  }
  void zz(int a, int b, double t) {
    v_.apply_zz(a, b, t);
    v_.apply_zz(a + n_, b + n_, -t);
  }

  // rho -> (1 - sum w) rho + sum w_i P_i rho P_i.
  void pauli_channel(const std::vector<std::pair<PauliString, double>>& terms) {
    double total = 0;
    for (const auto& t : terms) total += t.second;
    if (total == 0) return;
    auto& a = v_.amplitudes();
    std::vector<Amplitude> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1 - total) * a[i];
    const std::uint64_t low = (std::uint64_t{1} << n_) - 1;
    for (const auto& [p, w] : terms) {
      if (w == 0) continue;
      const PauliAction act(p);
      for (std::uint64_t i = 0; i < a.size(); ++i) {
        const std::uint64_t r = i & low, c = i >> n_;
        const std::uint64_t rs = r ^ act.x, cs = c ^ act.x;
        out[i] += w * act.factor(rs) * std::conj(act.factor(cs)) * a[rs | (cs << n_)];
      }
    }
    a.swap(out);
  }

  void pauli(int q, Pauli l) { pauli_channel_unitary(PauliString::single(q, l)); }

  double expectation(const PauliString& obs) const {
    const PauliAction act(obs);
    const auto& a = v_.amplitudes();
    Amplitude s{0, 0};
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n_); ++c) s += a[c | ((c ^ act.x) << n_)] * act.factor(c);
    return s.real();
  }

 private:
  void pauli_channel_unitary(const PauliString& p) {
    auto& a = v_.amplitudes();
    std::vector<Amplitude> out(a.size());
    const PauliAction act(p);
    const std::uint64_t low = (std::uint64_t{1} << n_) - 1;
    for (std::uint64_t i = 0; i < a.size(); ++i) {
      const std::uint64_t r = i & low, c = i >> n_;
      const std::uint64_t rs = r ^ act.x, cs = c ^ act.x;
      out[i] = act.factor(rs) * std::conj(act.factor(cs)) * a[rs | (cs << n_)];
    }
    a.swap(out);
  }

  int n_;
  StateVector v_;
};

}  // namespace

double exact_channel_expectation(const Circuit& circuit, const NoiseModel& noise, const PauliString& obs) {
  if (circuit.num_qubits > kDensityOracleCap)
    throw CapacityError("density-matrix oracle is limited to " + std::to_string(kDensityOracleCap) + " qubits");
  if (obs.max_qubit() >= circuit.num_qubits) throw InvalidArgument("observable outside register");
  noise.validate();
  const int n = circuit.num_qubits;
  DensityMatrix rho(n, bits_to_index(circuit.initial_bits()));
  const double w1 = check_weights(noise.p1_weights.data(), 3, "p1");
  const double w2 = check_weights(noise.p2_weights.data(), 15, "p2");
  const std::size_t end = circuit.unitary_end();
  for (std::size_t i = 0; i < end; ++i) {
    const Gate& g = circuit.gates[i];
    switch (g.kind) {
      case GateKind::RotZ: rho.rz(g.q0, g.angle); break;
      case GateKind::RotX: rho.rx(g.q0, g.angle); break;
      case GateKind::CNOT:
        rho.cnot(g.q0, g.q1);
        if (noise.coherent_zz != 0) rho.zz(g.q0, g.q1, noise.coherent_zz);
        break;
      case GateKind::PauliInsert: rho.pauli(g.q0, g.letter); break;
      case GateKind::Measure: break;
    }
    if (noisy_single(g, noise)) {
      std::vector<std::pair<PauliString, double>> ch;
      for (int k = 0; k < 3; ++k)
        ch.emplace_back(PauliString::single(g.q0, kLetters[k + 1]), noise.p1 * noise.p1_weights[static_cast<std::size_t>(k)] / w1);
      rho.pauli_channel(ch);
    } else if (g.kind == GateKind::CNOT && noise.p2 > 0) {
      std::vector<std::pair<PauliString, double>> ch;
      for (int k = 1; k < 16; ++k)
        ch.emplace_back(PauliString::single(g.q0, kLetters[k / 4]) * PauliString::single(g.q1, kLetters[k % 4]),
                        noise.p2 * noise.p2_weights[static_cast<std::size_t>(k - 1)] / w2);
      rho.pauli_channel(ch);
    }
  }
  rho.pauli_channel(noise.terminal_channel);
  if (noise.p_meas > 0)
    for (int q = 0; q < n; ++q) rho.pauli_channel({{PauliString::single(q, Pauli::X), noise.p_meas}});
  return rho.expectation(obs);
}

}  // namespace z2hm
