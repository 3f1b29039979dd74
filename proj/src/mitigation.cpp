#include "z2hm/mitigation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "z2hm/errors.hpp"
#include "z2hm/rng.hpp"

namespace z2hm {

namespace {

void check_options(const BootstrapOptions& o) {
  if (o.resamples < 100) throw InvalidArgument("bootstrap needs at least 100 resamples");
  if (!(o.level > 0 && o.level < 1)) throw InvalidArgument("confidence level must lie in (0, 1)");
}

// Distinct values with multiplicities; resampling then reduces to a
// multinomial draw over categories.
struct Categories {
  std::vector<double> value;
  std::vector<long> count;
  long total = 0;
};

// Multinomial draw of n items over the given counts, by conditional binomials.
void multinomial(Rng& rng, const std::vector<long>& counts, long n, std::vector<long>& out) {
  out.assign(counts.size(), 0);
  long remaining_items = n;
  long remaining_mass = 0;
  for (long c : counts) remaining_mass += c;
  for (std::size_t k = 0; k < counts.size() && remaining_items > 0; ++k) {
    if (k + 1 == counts.size() || counts[k] == remaining_mass) {
      out[k] = remaining_items;
      break;
    }
    const double p = static_cast<double>(counts[k]) / static_cast<double>(remaining_mass);
    std::binomial_distribution<long> bin(remaining_items, p);
    out[k] = bin(rng.engine());
    remaining_items -= out[k];
    remaining_mass -= counts[k];
  }
}

Estimate finish(double mean, std::vector<double>& stats, const BootstrapOptions& o, long n) {
  Estimate e;
  e.mean = mean;
  e.level = o.level;
  e.n_used = n;
  double s = 0, s2 = 0;
  for (double x : stats) {
    s += x;
    s2 += x * x;
  }
  const double b = static_cast<double>(stats.size());
  e.std_error = std::sqrt(std::max(0.0, s2 / b - (s / b) * (s / b)) * b / std::max(1.0, b - 1));
  e.ci_low = std::min(mean, percentile(stats, (1 - o.level) / 2));
  e.ci_high = std::max(mean, percentile(stats, (1 + o.level) / 2));
  return e;
}

// Histogram of shot patterns restricted to `support`; bit i of a key is qubit support[i].
std::vector<std::pair<std::uint64_t, long>> pattern_counts(const ShotTable& t, const std::vector<int>& support) {
  std::map<std::uint64_t, long> h;
  for (const auto& s : t.shots) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const auto q = static_cast<std::size_t>(support[i]);
      if (q >= s.bits.size()) throw InvalidArgument("observable qubit outside the shot register");
      if (s.bits[q]) key |= std::uint64_t{1} << i;
    }
    ++h[key];
  }
  return {h.begin(), h.end()};
}

std::vector<std::uint64_t> term_masks(const DiagonalObservable& obs, const std::vector<int>& support) {
  std::vector<std::uint64_t> masks;
  for (const auto& t : obs.terms) {
    std::uint64_t m = 0;
    for (int q : t.qubits) {
      const auto pos = std::lower_bound(support.begin(), support.end(), q) - support.begin();
      m ^= std::uint64_t{1} << pos;
    }
    masks.push_back(m);
  }
  return masks;
}

// Per-term parity means for given pattern keys and (resampled) counts.
std::vector<double> term_means(const std::vector<std::uint64_t>& keys, const std::vector<long>& counts,
                               const std::vector<std::uint64_t>& masks) {
  long n = 0;
  for (long c : counts) n += c;
  std::vector<double> out(masks.size(), 0.0);
  for (std::size_t t = 0; t < masks.size(); ++t) {
    long acc = 0;
    for (std::size_t k = 0; k < keys.size(); ++k) acc += (std::popcount(keys[k] & masks[t]) & 1) ? -counts[k] : counts[k];
    out[t] = n ? static_cast<double>(acc) / static_cast<double>(n) : 0.0;
  }
  return out;
}

}  // namespace

double percentile(std::vector<double> v, double p) {
  if (v.empty()) throw InvalidArgument("percentile of an empty set");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Estimate bootstrap(const std::vector<double>& samples, const BootstrapOptions& options) {
  check_options(options);
  if (samples.empty()) throw InvalidArgument("bootstrap of an empty sample");
  const long n = static_cast<long>(samples.size());
  double mean = 0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);

  std::map<double, long> distinct;
  for (double x : samples) {
    ++distinct[x];
    if (distinct.size() > 1024) break;
  }
  Rng rng(derive_seed(options.seed, {0xB00}));
  std::vector<double> stats(static_cast<std::size_t>(options.resamples));
  if (distinct.size() <= 1024) {
    std::vector<double> value;
    std::vector<long> count, draw;
    for (auto [v, c] : distinct) {
      value.push_back(v);
      count.push_back(c);
    }
    for (auto& s : stats) {
      multinomial(rng, count, n, draw);
      double acc = 0;
      for (std::size_t k = 0; k < value.size(); ++k) acc += value[k] * static_cast<double>(draw[k]);
      s = acc / static_cast<double>(n);
    }
  } else {
    for (auto& s : stats) {
      double acc = 0;
      for (long i = 0; i < n; ++i) acc += samples[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)))];
      s = acc / static_cast<double>(n);
    }
  }
  return finish(mean, stats, options, n);
}

CalibrationRecord make_calibration(const std::string& observable, double ideal, double measured) {
  if (std::abs(ideal) < 1e-12) throw InvalidArgument("calibration ideal value for " + observable + " is zero");
  CalibrationRecord r;
  r.observable = observable;
  r.ideal = ideal;
  r.measured = measured;
  r.factor = measured / ideal;
  if (r.factor > 1) {
    r.factor = 1;
    r.clamped = true;
  }
  return r;
}

double odr_mitigate(double noisy, const CalibrationRecord& calib, double threshold) {
  if (!(calib.factor > threshold))
    throw MitigationRefused("calibration factor " + std::to_string(calib.factor) + " for " + calib.observable +
                            " is at or below the refusal threshold " + std::to_string(threshold) +
                            ": too noisy to mitigate");
  return noisy / calib.factor;
}

std::vector<int> DiagonalObservable::support() const {
  std::vector<int> s;
  for (const auto& t : terms) s.insert(s.end(), t.qubits.begin(), t.qubits.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double DiagonalObservable::evaluate(const StateVector& state) const {
  double v = 0;
  for (const auto& t : terms) v += t.coeff * state.expectation(PauliString::z_on(t.qubits));
  return v;
}

double DiagonalObservable::evaluate(const Bitstring& bits) const {
  double v = 0;
  for (const auto& t : terms) {
    int parity = 0;
    for (int q : t.qubits) parity ^= bits.at(static_cast<std::size_t>(q)) & 1;
    v += parity ? -t.coeff : t.coeff;
  }
  return v;
}

DiagonalObservable pauli_observable(const PauliString& p) {
  if (!p.is_diagonal()) throw InvalidArgument("observable " + p.str() + " is not diagonal in the Z basis");
  DiagonalObservable o;
  o.id = p.str();
  o.terms.push_back({static_cast<double>(p.sign()), p.support()});
  return o;
}

DiagonalObservable occupation_observable(int qubit) { return projector_product_observable({qubit}); }

DiagonalObservable projector_product_observable(const std::vector<int>& qubits) {
  if (qubits.size() > 16) throw InvalidArgument("projector products are limited to 16 qubits");
  DiagonalObservable o;
  const std::size_t k = qubits.size();
  const double scale = std::ldexp(1.0, -static_cast<int>(k));
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
    ZTerm t;
    for (std::size_t i = 0; i < k; ++i)
      if (subset >> i & 1U) t.qubits.push_back(qubits[i]);
    t.coeff = (std::popcount(subset) & 1) ? -scale : scale;
    o.terms.push_back(t);
  }
  return o;
}

Estimate estimate_observable(const ShotTable& data, const DiagonalObservable& obs, const ShotTable* calibration,
                             const IdealLookup& ideal, const ObservableEstimateOptions& options) {
  check_options(options.bootstrap);
  if (data.shots.empty()) throw InvalidArgument("no shots to estimate " + obs.id + " from");
  if (calibration && calibration->shots.empty()) throw InvalidArgument("empty calibration table for " + obs.id);
  if (calibration && !ideal) throw InvalidArgument("calibration without ideal values for " + obs.id);
  const auto support = obs.support();
  if (support.size() > 63) throw CapacityError("observable support exceeds 63 qubits");
  const auto masks = term_masks(obs, support);

  auto split = [](const std::vector<std::pair<std::uint64_t, long>>& h, std::vector<std::uint64_t>& keys,
                  std::vector<long>& counts) {
    for (auto [k, c] : h) {
      keys.push_back(k);
      counts.push_back(c);
    }
  };
  std::vector<std::uint64_t> dkeys, ckeys;
  std::vector<long> dcounts, ccounts;
  split(pattern_counts(data, support), dkeys, dcounts);
  if (calibration) split(pattern_counts(*calibration, support), ckeys, ccounts);

  std::vector<double> ideals(masks.size(), 1.0);
  bool refused = false;
  if (calibration)
    for (std::size_t t = 0; t < masks.size(); ++t) {
      if (!masks[t]) continue;
      ideals[t] = ideal(obs.terms[t].qubits);
      if (std::abs(ideals[t]) < 1e-12) refused = true;
    }

  // Factors from calibration means; clamped to 1 from above.
  auto factors = [&](const std::vector<double>& cal) {
    std::vector<double> f(masks.size(), 1.0);
    if (calibration)
      for (std::size_t t = 0; t < masks.size(); ++t)
        if (masks[t]) f[t] = std::min(1.0, cal[t] / ideals[t]);
    return f;
  };
  auto combine = [&](const std::vector<double>& mu, const std::vector<double>& f, double floor) {
    double v = 0;
    for (std::size_t t = 0; t < masks.size(); ++t) v += obs.terms[t].coeff * mu[t] / std::max(f[t], floor);
    return v;
  };

  const auto mu = term_means(dkeys, dcounts, masks);
  std::vector<double> f(masks.size(), 1.0);
  bool clamped = false;
  double min_factor = 1.0;
  if (calibration && !refused) {
    const auto cal = term_means(ckeys, ccounts, masks);
    for (std::size_t t = 0; t < masks.size(); ++t) {
      if (!masks[t]) continue;
      const double raw = cal[t] / ideals[t];
      clamped = clamped || raw > 1;
      f[t] = std::min(1.0, raw);
      min_factor = std::min(min_factor, f[t]);
      if (!(f[t] > options.threshold)) refused = true;
    }
  }
  const bool mitigate = calibration && !refused;
  if (!mitigate) std::fill(f.begin(), f.end(), 1.0);
  const double point = combine(mu, f, 0.0);

  Rng rng(derive_seed(options.bootstrap.seed, {0xE57}));
  std::vector<double> stats(static_cast<std::size_t>(options.bootstrap.resamples));
  std::vector<long> dd, cd;
  for (auto& s : stats) {
    multinomial(rng, dcounts, data.size() ? static_cast<long>(data.size()) : 0, dd);
    const auto mu_b = term_means(dkeys, dd, masks);
    if (mitigate) {
      multinomial(rng, ccounts, static_cast<long>(calibration->size()), cd);
      s = combine(mu_b, factors(term_means(ckeys, cd, masks)), options.threshold);
    } else {
      s = combine(mu_b, f, 0.0);
    }
  }
  Estimate e = finish(point, stats, options.bootstrap, static_cast<long>(data.size()));
  e.factor = calibration ? min_factor : 1.0;
  e.refused = refused;
  e.clamped = clamped;
  return e;
}

Estimate estimate_pauli_expectation(const ShotTable& table, const PauliString& obs, const BootstrapOptions& options) {
  ObservableEstimateOptions o;
  o.bootstrap = options;
  return estimate_observable(table, pauli_observable(obs), nullptr, {}, o);
}

}  // namespace z2hm
