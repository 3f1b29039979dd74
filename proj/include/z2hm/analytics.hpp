#pragma once

#include "z2hm/lattice.hpp"

namespace z2hm {

struct QuenchParams {
  double m = 0;
  double g = 0;
  double lambda = 1;
  double t = 0;
  double dt = 0.1;
};

// Amplitude a(t) of <sigma^z(t)> = a(t) <sigma^z(0)> in the m = 0 model.
double glassy_amplitude(double g, double lambda, double t);

// Ground-state rotation angle theta = arctan(lambda / g) / 2 at m = 0.
double m0_ansatz_angle(double g, double lambda);

// 2 sqrt(g^2 + lambda^2).
double m0_gap(double g, double lambda);

// Longitudinal string-endpoint oscillation, 2g.
double yoyo_frequency(double g);

// lambda^2/g - lambda^2/(2m + g); throws for g = 0 or 2m + g = 0.
double bending_frequency(double m, double g, double lambda);

// gamma lambda^6 / m^5; throws for m = 0.
double effective_plaquette(double m, double lambda, double gamma = 0.25);

// Contributions to the second-order Trotter bound, before the common prefactor.
//   outer_electric = || [H3, [H3, H_E]] ||,  outer_mass = || [H3, [H3, H_M]] ||,
//   inner = || [H1, [H1, H3]] ||,
// with H1 = -(H_M + H_E), H3 = -H_I and || . || the Pauli one-norm.
struct TrotterBoundTerms {
  double outer_electric = 0;
  double outer_mass = 0;
  double inner = 0;
};

// Closed-form values of the three norms from node and edge counts.
TrotterBoundTerms trotter_terms_closed_form(const LatticeGraph& lattice, double m, double g, double lambda);
// Same norms evaluated by symbolic Pauli commutators.
TrotterBoundTerms trotter_terms_commutator(const LatticeGraph& lattice, double m, double g, double lambda);

// t dt^2/12 (outer_electric + outer_mass) + t dt^2/24 inner.
double trotter_bound_from_terms(const TrotterBoundTerms& terms, double t, double dt);

// Closed-form additive error bound of the second-order product formula.
double trotter_error_bound(const LatticeGraph& lattice, double m, double g, double lambda, double t, double dt);
// The same bound through the commutator route.
double trotter_error_bound_commutator(const LatticeGraph& lattice, double m, double g, double lambda, double t,
                                      double dt);

}  // namespace z2hm
