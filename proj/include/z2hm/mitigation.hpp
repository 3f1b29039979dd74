#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "z2hm/pauli.hpp"
#include "z2hm/simulator.hpp"
#include "z2hm/statevector.hpp"

namespace z2hm {

struct Estimate {
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
  double level = 0.7;
  long n_used = 0;
  double std_error = 0;  // standard deviation of the bootstrap replicates
  double factor = 1;     // calibration factor applied (product form for single terms)
  bool refused = false;
  bool clamped = false;  // calibration measured above ideal, factor capped at 1
  bool operator==(const Estimate& o) const = default;
};

struct BootstrapOptions {
  int resamples = 1000;
  double level = 0.7;
  std::uint64_t seed = 0;
  bool operator==(const BootstrapOptions& o) const = default;
};

// Percentile bootstrap of the sample mean. The interval is widened if needed
// so that it always contains the point estimate.
Estimate bootstrap(const std::vector<double>& samples, const BootstrapOptions& options = {});

// Percentile (type 7 interpolation) of an unsorted vector, p in [0, 1].
double percentile(std::vector<double> values, double p);

inline constexpr double kRefusalThreshold = 0.05;

struct CalibrationRecord {
  std::string observable;
  double ideal = 1;
  double measured = 1;
  double factor = 1;
  bool clamped = false;
};

// factor = measured / ideal, capped at 1 (with the clamped flag). Throws
// InvalidArgument when the ideal value is zero.
CalibrationRecord make_calibration(const std::string& observable, double ideal, double measured);

// noisy / factor; throws MitigationRefused when factor <= threshold.
double odr_mitigate(double noisy, const CalibrationRecord& calib, double threshold = kRefusalThreshold);

// Real linear combination of Z products, the shape of every observable
// estimated from Z-basis shots.
struct ZTerm {
  double coeff = 0;
  std::vector<int> qubits;  // empty for the identity
};

struct DiagonalObservable {
  std::string id;
  std::vector<ZTerm> terms;

  std::vector<int> support() const;
  double evaluate(const StateVector& state) const;
  // Value on a single measured bitstring.
  double evaluate(const Bitstring& bits) const;
};

// Signed Z string as a one-term observable; throws for X or Y letters.
DiagonalObservable pauli_observable(const PauliString& p);
// (1 - Z_q) / 2.
DiagonalObservable occupation_observable(int qubit);
// prod_q (1 - Z_q) / 2 expanded into its 2^k Z products.
DiagonalObservable projector_product_observable(const std::vector<int>& qubits);

struct ObservableEstimateOptions {
  BootstrapOptions bootstrap;
  double threshold = kRefusalThreshold;
};

// Per-term ideal values of the calibration circuit, indexed like obs.terms.
using IdealLookup = std::function<double(const std::vector<int>& qubits)>;

// Estimates obs from shots. With a calibration table, each Z product is
// divided by its own factor measured/ideal; the bootstrap resamples both
// tables so the interval carries the calibration uncertainty. A factor at or
// below the threshold marks the estimate refused and reports the
// unmitigated value.
Estimate estimate_observable(const ShotTable& data, const DiagonalObservable& obs,
                             const ShotTable* calibration = nullptr, const IdealLookup& ideal = {},
                             const ObservableEstimateOptions& options = {});

// Mean of the +-1 parities of a Z-only Pauli string, with bootstrap CI.
Estimate estimate_pauli_expectation(const ShotTable& table, const PauliString& obs,
                                    const BootstrapOptions& options = {});

}  // namespace z2hm
