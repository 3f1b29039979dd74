#include "z2hm/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "z2hm/errors.hpp"

namespace z2hm {

Hamiltonian::Hamiltonian(const LatticeGraph& lattice, double m, double g, double lambda)
    : lattice_(lattice), m_(m), g_(g), lambda_(lambda) {
  if (!std::isfinite(m) || !std::isfinite(g) || !std::isfinite(lambda))
    throw InvalidArgument("Hamiltonian couplings must be finite");
  for (int n = 0; n < lattice.num_nodes(); ++n)
    terms_.push_back({-m, PauliString::single(lattice.node_qubit(n), Pauli::Z), TermKind::Mass, n});
  for (int e = 0; e < lattice.num_edges(); ++e)
    terms_.push_back({-g, PauliString::single(lattice.edge_qubit(e), Pauli::Z), TermKind::Electric, e});
  for (int e = 0; e < lattice.num_edges(); ++e) {
    const Link& l = lattice.link(e);
    terms_.push_back({-lambda,
                      PauliString::x_on({lattice.node_qubit(l.u), lattice.edge_qubit(e), lattice.node_qubit(l.v)}),
                      TermKind::Interaction, e});
  }
}

PauliSum Hamiltonian::as_sum() const {
  PauliSum s;
  for (const auto& t : terms_) s.add(t.coeff, t.pauli);
  return s;
}

PauliSum Hamiltonian::part(TermKind kind) const {
  PauliSum s;
  for (const auto& t : terms_)
    if (t.kind == kind) s.add(t.coeff, t.pauli);
  return s;
}

double Hamiltonian::norm_bound() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

Hamiltonian build_hamiltonian(const LatticeGraph& lattice, double m, double g, double lambda) {
  return Hamiltonian(lattice, m, g, lambda);
}

bool is_physical(const LatticeGraph& lattice, const Bitstring& bits) {
  if (static_cast<int>(bits.size()) != lattice.num_qubits())
    throw InvalidArgument("bitstring length " + std::to_string(bits.size()) + " does not match " +
                          std::to_string(lattice.num_qubits()) + " qubits");
  for (int n = 0; n < lattice.num_nodes(); ++n) {
    int parity = 0;
    for (int q : lattice.gauge_support(n)) parity ^= bits[static_cast<std::size_t>(q)];
    if (parity) return false;
  }
  return true;
}

BasisConfig prepare_string_state(const LatticeGraph& lattice, const std::vector<int>& path) {
  if (path.empty()) return prepare_string_state(lattice, std::vector<std::vector<int>>{});
  return prepare_string_state(lattice, std::vector<std::vector<int>>{path});
}

BasisConfig prepare_string_state(const LatticeGraph& lattice, const std::vector<std::vector<int>>& paths) {
  BasisConfig cfg;
  cfg.bits.assign(static_cast<std::size_t>(lattice.num_qubits()), 0);
  std::set<int> used;
  for (const auto& path : paths) {
    if (path.empty()) continue;
    if (path.size() == 1) throw LatticeError("string path needs at least two nodes");
    std::set<int> seen;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const int n = path[i];
      if (n < 0 || n >= lattice.num_nodes()) throw LatticeError("string path visits unknown node " + std::to_string(n));
      if (!seen.insert(n).second) throw LatticeError("string path revisits node " + std::to_string(n));
      if (i == 0) continue;
      const auto e = lattice.edge_between(path[i - 1], n);
      if (!e)
        throw LatticeError("string path is disconnected between nodes " + std::to_string(path[i - 1]) + " and " +
                           std::to_string(n));
      if (!used.insert(*e).second) throw LatticeError("string paths overlap on link " + std::to_string(*e));
      cfg.bits[static_cast<std::size_t>(lattice.edge_qubit(*e))] = 1;
    }
  }
  for (int n = 0; n < lattice.num_nodes(); ++n) {
    std::uint8_t parity = 0;
    for (int e : lattice.incident(n)) parity ^= cfg.bits[static_cast<std::size_t>(lattice.edge_qubit(e))];
    cfg.bits[static_cast<std::size_t>(lattice.node_qubit(n))] = parity;
  }
  cfg.physical = is_physical(lattice, cfg.bits);
  return cfg;
}

double expectation(const StateVector& state, const PauliString& obs) {
  if (obs.max_qubit() >= state.num_qubits())
    throw InvalidArgument("observable " + obs.str() + " reaches outside the " + std::to_string(state.num_qubits()) +
                          "-qubit register");
  return state.expectation(obs);
}

double energy(const StateVector& state, const Hamiltonian& h) {
  if (state.num_qubits() != h.num_qubits()) throw InvalidArgument("register size does not match Hamiltonian");
  double e = 0;
  for (const auto& t : h.terms()) e += t.coeff * state.expectation(t.pauli);
  return e;
}

PhysicalSector::PhysicalSector(const LatticeGraph& lattice)
    : num_nodes_(lattice.num_nodes()), num_edges_(lattice.num_edges()) {
  if (lattice.num_qubits() > 62) throw CapacityError("physical sector indexing limited to 62 qubits");
  for (int e = 0; e < num_edges_; ++e) {
    const Link& l = lattice.link(e);
    matter_of_edge_.push_back((std::uint64_t{1} << l.u) | (std::uint64_t{1} << l.v));
  }
}

std::uint64_t PhysicalSector::full_index(std::uint64_t gauge_bits) const {
  std::uint64_t matter = 0;
  for (int e = 0; e < num_edges_; ++e)
    if ((gauge_bits >> e) & 1U) matter ^= matter_of_edge_[static_cast<std::size_t>(e)];
  return matter | (gauge_bits << num_nodes_);
}

std::optional<std::uint64_t> PhysicalSector::sector_index(std::uint64_t full) const {
  const std::uint64_t b = full >> num_nodes_;
  if (full_index(b) != full) return std::nullopt;
  return b;
}

std::vector<double> PhysicalSector::diagonal(const Hamiltonian& h) const {
  std::vector<double> d(dimension());
  for (std::uint64_t b = 0; b < d.size(); ++b) {
    const std::uint64_t full = full_index(b);
    double s = 0;
    for (int n = 0; n < num_nodes_; ++n) s -= h.m() * (((full >> n) & 1U) ? -1.0 : 1.0);
    for (int e = 0; e < num_edges_; ++e) s -= h.g() * (((b >> e) & 1U) ? -1.0 : 1.0);
    d[b] = s;
  }
  return d;
}

namespace {

// H = diag + flip_coeff * sum_k X^{mask_k}; both the full register and the
// sector basis take this form.
struct FlipOperator {
  std::vector<double> diag;
  std::vector<std::uint64_t> masks;
  double flip_coeff = 0;

  void apply(const std::vector<Amplitude>& in, std::vector<Amplitude>& out, double scale) const {
    const double c = flip_coeff * scale;
    for (std::size_t i = 0; i < in.size(); ++i) {
      Amplitude acc = diag[i] * scale * in[i];
      for (auto m : masks) acc += c * in[i ^ m];
      out[i] = acc;
    }
  }

  double radius() const {
    double d = 0;
    for (double x : diag) d = std::max(d, std::abs(x));
    return d + std::abs(flip_coeff) * static_cast<double>(masks.size());
  }
};

FlipOperator full_operator(const Hamiltonian& h) {
  const LatticeGraph& lat = h.lattice();
  FlipOperator op;
  const std::size_t dim = std::size_t{1} << lat.num_qubits();
  op.diag.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0;
    for (int n = 0; n < lat.num_nodes(); ++n) s -= h.m() * (((i >> lat.node_qubit(n)) & 1U) ? -1.0 : 1.0);
    for (int e = 0; e < lat.num_edges(); ++e) s -= h.g() * (((i >> lat.edge_qubit(e)) & 1U) ? -1.0 : 1.0);
    op.diag[i] = s;
  }
  for (int e = 0; e < lat.num_edges(); ++e) {
    const Link& l = lat.link(e);
    op.masks.push_back((std::uint64_t{1} << lat.node_qubit(l.u)) | (std::uint64_t{1} << lat.node_qubit(l.v)) |
                       (std::uint64_t{1} << lat.edge_qubit(e)));
  }
  op.flip_coeff = -h.lambda();
  return op;
}

FlipOperator sector_operator(const Hamiltonian& h, const PhysicalSector& sector) {
  FlipOperator op;
  op.diag = sector.diagonal(h);
  for (int e = 0; e < h.lattice().num_edges(); ++e) op.masks.push_back(std::uint64_t{1} << e);
  op.flip_coeff = -h.lambda();
  return op;
}

void chebyshev_propagate(std::vector<Amplitude>& v, const FlipOperator& op, double t, double tol, double chunk) {
  const double radius = op.radius() * (1 + 1e-12);
  if (radius == 0 || t == 0) return;
  const double scale = 1.0 / radius;
  const int chunks = std::max(1, static_cast<int>(std::ceil(radius * std::abs(t) / chunk)));
  const double x = radius * std::abs(t) / chunks;
  const Amplitude step_phase = t > 0 ? Amplitude{0, -1} : Amplitude{0, 1};
  const double chunk_tol = tol / chunks;

  std::vector<Amplitude> coeffs{std::cyl_bessel_j(0.0, x)};
  Amplitude ipow{1, 0};
  const int kmax = static_cast<int>(x) + 400;
  for (int k = 1;; ++k) {
    if (k > kmax) throw ConvergenceError("Chebyshev series did not converge");
    ipow *= step_phase;
    const double j = std::cyl_bessel_j(static_cast<double>(k), x);
    coeffs.push_back(2.0 * ipow * j);
    if (k > x && 2 * std::abs(j) < chunk_tol * 1e-2) break;
  }

  const std::size_t dim = v.size();
  std::vector<Amplitude> w0(dim), w1(dim), w2(dim), acc(dim);
  for (int c = 0; c < chunks; ++c) {
    w0 = v;
    op.apply(w0, w1, scale);
    for (std::size_t i = 0; i < dim; ++i) acc[i] = coeffs[0] * w0[i] + coeffs[1] * w1[i];
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
      op.apply(w1, w2, scale);
      for (std::size_t i = 0; i < dim; ++i) {
        w2[i] = 2.0 * w2[i] - w0[i];
        acc[i] += coeffs[k] * w2[i];
      }
      std::swap(w0, w1);
      std::swap(w1, w2);
    }
    v.swap(acc);
  }
}

Eigen::MatrixXd sector_matrix(const Hamiltonian& h, std::size_t max_dimension) {
  const PhysicalSector sector(h.lattice());
  const std::size_t dim = sector.dimension();
  if (dim > max_dimension)
    throw CapacityError("physical sector dimension " + std::to_string(dim) + " exceeds " +
                        std::to_string(max_dimension));
  const FlipOperator op = sector_operator(h, sector);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    const auto i = static_cast<Eigen::Index>(b);
    m(i, i) = op.diag[b];
    for (auto mask : op.masks) m(static_cast<Eigen::Index>(b ^ mask), i) += op.flip_coeff;
  }
  return m;
}

}  // namespace

StateVector exact_evolve(const StateVector& state, const Hamiltonian& h, double t, double tol,
                         const EvolveOptions& options) {
  if (state.num_qubits() != h.num_qubits()) throw InvalidArgument("register size does not match Hamiltonian");
  if (h.num_qubits() > options.qubit_cap)
    throw CapacityError("exact evolution of " + std::to_string(h.num_qubits()) + " qubits exceeds the cap of " +
                        std::to_string(options.qubit_cap));
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  StateVector out = state;
  if (t == 0) return out;

  const PhysicalSector sector(h.lattice());
  const auto& amps = state.amplitudes();
  std::vector<Amplitude> reduced(sector.dimension());
  double inside = 0;
  for (std::uint64_t b = 0; b < reduced.size(); ++b) {
    reduced[b] = amps[sector.full_index(b)];
    inside += std::norm(reduced[b]);
  }
  const double total = state.norm() * state.norm();
  if (total - inside < 1e-24) {
    chebyshev_propagate(reduced, sector_operator(h, sector), t, tol, options.chunk);
    auto& o = out.amplitudes();
    std::fill(o.begin(), o.end(), Amplitude{0, 0});
    for (std::uint64_t b = 0; b < reduced.size(); ++b) o[sector.full_index(b)] = reduced[b];
  } else {
    chebyshev_propagate(out.amplitudes(), full_operator(h), t, tol, options.chunk);
  }
  if (std::abs(out.norm() - state.norm()) > 1e-9)
    throw ConvergenceError("exact evolution lost norm: " + std::to_string(out.norm()));
  return out;
}

std::vector<double> physical_spectrum(const Hamiltonian& h, std::size_t max_dimension) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_matrix(h, max_dimension), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("sector eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

GapResult gap_physical_sector(const Hamiltonian& h, std::size_t max_dimension) {
  const auto spec = physical_spectrum(h, max_dimension);
  GapResult r;
  r.e0 = spec.front();
  const double tol = 1e-9 * std::max(1.0, std::abs(r.e0));
  r.multiplicity = 0;
  for (double e : spec)
    if (e - r.e0 <= tol) ++r.multiplicity;
  r.e1 = r.multiplicity < static_cast<int>(spec.size()) ? spec[static_cast<std::size_t>(r.multiplicity)] : r.e0;
  r.gap = r.multiplicity > 1 ? 0.0 : r.e1 - r.e0;
  return r;
}

StateVector physical_ground_state(const Hamiltonian& h, std::size_t max_dimension) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_matrix(h, max_dimension));
  if (solver.info() != Eigen::Success) throw ConvergenceError("sector eigensolver failed");
  const PhysicalSector sector(h.lattice());
  StateVector out(h.num_qubits());
  auto& o = out.amplitudes();
  o[0] = 0;
  const auto v = solver.eigenvectors().col(0);
  for (std::uint64_t b = 0; b < sector.dimension(); ++b) o[sector.full_index(b)] = v(static_cast<Eigen::Index>(b));
  return out;
}

}  // namespace z2hm
