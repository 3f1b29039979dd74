#include "z2hm/analytics.hpp"

#include <cmath>

#include "z2hm/errors.hpp"
#include "z2hm/model.hpp"

namespace z2hm {

double glassy_amplitude(double g, double lambda, double t) {
  const double w2 = lambda * lambda + g * g;
  if (w2 == 0) return 1.0;
  const double s = std::sin(t * std::sqrt(w2));
  return 1.0 - 2.0 * lambda * lambda / w2 * s * s;
}

double m0_ansatz_angle(double g, double lambda) {
  if (g == 0 && lambda == 0) throw InvalidArgument("ansatz angle undefined for g = lambda = 0");
  return 0.5 * std::atan2(std::abs(lambda), std::abs(g));
}

double m0_gap(double g, double lambda) { return 2.0 * std::hypot(g, lambda); }

double yoyo_frequency(double g) { return 2.0 * g; }

double bending_frequency(double m, double g, double lambda) {
  if (g == 0) throw InvalidArgument("bending frequency needs g != 0 (the expansion assumes g dominates)");
  if (2 * m + g == 0) throw InvalidArgument("bending frequency needs 2m + g != 0");
  return lambda * lambda / g - lambda * lambda / (2 * m + g);
}

double effective_plaquette(double m, double lambda, double gamma) {
  if (m == 0) throw InvalidArgument("effective plaquette coupling needs m != 0");
  return gamma * std::pow(lambda, 6) / std::pow(m, 5);
}

TrotterBoundTerms trotter_terms_closed_form(const LatticeGraph& lattice, double m, double g, double lambda) {
  const double ne = lattice.num_edges();
  const double lam = std::abs(lambda);
  double degree_sum = 0;  // sum_n 4 d_n^2 = 4 N1 + 16 N2 + 36 N3
  for (int n = 0; n < lattice.num_nodes(); ++n) degree_sum += 4.0 * lattice.degree(n) * lattice.degree(n);
  TrotterBoundTerms r;
  r.outer_electric = 4 * ne * std::abs(g) * lam * lam;
  r.outer_mass = degree_sum * std::abs(m) * lam * lam;
  r.inner = 8 * ne * m * m * lam + 16 * ne * std::abs(m * g) * lam + ne * std::abs(4 * g * g + 8 * m * m) * lam;
  return r;
}

TrotterBoundTerms trotter_terms_commutator(const LatticeGraph& lattice, double m, double g, double lambda) {
  const Hamiltonian h(lattice, m, g, lambda);
  const PauliSum hm = -1.0 * h.part(TermKind::Mass);
  const PauliSum he = -1.0 * h.part(TermKind::Electric);
  const PauliSum h1 = (hm + he).simplified();
  const PauliSum h3 = -1.0 * h.part(TermKind::Interaction);
  TrotterBoundTerms r;
  r.outer_electric = commutator(h3, commutator(h3, he)).one_norm();
  r.outer_mass = commutator(h3, commutator(h3, hm)).one_norm();
  r.inner = commutator(h1, commutator(h1, h3)).one_norm();
  return r;
}

double trotter_bound_from_terms(const TrotterBoundTerms& terms, double t, double dt) {
  if (!(dt > 0)) throw InvalidArgument("dt must be positive");
  const double pre = std::abs(t) * dt * dt;
  return pre / 12 * (terms.outer_electric + terms.outer_mass) + pre / 24 * terms.inner;
}

double trotter_error_bound(const LatticeGraph& lattice, double m, double g, double lambda, double t, double dt) {
  return trotter_bound_from_terms(trotter_terms_closed_form(lattice, m, g, lambda), t, dt);
}

double trotter_error_bound_commutator(const LatticeGraph& lattice, double m, double g, double lambda, double t,
                                      double dt) {
  return trotter_bound_from_terms(trotter_terms_commutator(lattice, m, g, lambda), t, dt);
}

}  // namespace z2hm
