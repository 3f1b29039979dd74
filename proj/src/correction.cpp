#include "z2hm/correction.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <functional>
#include <optional>
#include <thread>

#include "z2hm/errors.hpp"

namespace z2hm {

namespace {

// Maximum matching on the defect adjacency graph; returns matched pairs as
// indices into the defect list.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  bool approximate = false;
};

std::optional<std::vector<int>> two_colour(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> side(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < n; ++s) {
    if (side[static_cast<std::size_t>(s)] >= 0) continue;
    side[static_cast<std::size_t>(s)] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        auto& sv = side[static_cast<std::size_t>(v)];
        if (sv < 0) {
          sv = 1 - side[static_cast<std::size_t>(u)];
          stack.push_back(v);
        } else if (sv == side[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

Matching kuhn(const std::vector<std::vector<int>>& adj, const std::vector<int>& side) {
  const std::size_t n = adj.size();
  std::vector<int> match(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      if (match[static_cast<std::size_t>(v)] < 0 || augment(match[static_cast<std::size_t>(v)])) {
        match[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (side[u] != 0) continue;
    seen.assign(n, 0);
    augment(static_cast<int>(u));
  }
  Matching m;
  for (std::size_t v = 0; v < n; ++v)
    if (match[v] >= 0) m.pairs.emplace_back(std::min<int>(match[v], static_cast<int>(v)), std::max<int>(match[v], static_cast<int>(v)));
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

// Exact maximum matching over subsets; fine up to 16 defects.
Matching subset_dp(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  const std::size_t full = std::size_t{1} << n;
  std::vector<int> best(full, 0);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int i = std::countr_zero(mask);
    const std::size_t rest = mask & ~(std::size_t{1} << i);
    int b = best[rest];
    for (int j : adj[static_cast<std::size_t>(i)])
      if (rest >> j & 1U) b = std::max(b, 1 + best[rest & ~(std::size_t{1} << j)]);
    best[mask] = b;
  }
  Matching m;
  std::size_t mask = full - 1;
  while (mask) {
    const int i = std::countr_zero(mask);
    const std::size_t rest = mask & ~(std::size_t{1} << i);
    if (best[mask] == best[rest]) {
      mask = rest;
      continue;
    }
    for (int j : adj[static_cast<std::size_t>(i)]) {
      if (!(rest >> j & 1U)) continue;
      const std::size_t next = rest & ~(std::size_t{1} << j);
      if (best[mask] == 1 + best[next]) {
        m.pairs.emplace_back(i, j);
        mask = next;
        break;
      }
    }
  }
  return m;
}

Matching greedy(const std::vector<std::vector<int>>& adj) {
  Matching m;
  m.approximate = true;
  std::vector<char> used(adj.size(), 0);
  for (std::size_t u = 0; u < adj.size(); ++u) {
    if (used[u]) continue;
    for (int v : adj[u]) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[u] = used[static_cast<std::size_t>(v)] = 1;
      m.pairs.emplace_back(static_cast<int>(u), v);
      break;
    }
  }
  return m;
}

constexpr int kExactMatchingLimit = 16;

}  // namespace

Syndrome compute_syndrome(const Bitstring& bits, const LatticeGraph& lattice) {
  if (static_cast<int>(bits.size()) != lattice.num_qubits())
    throw InvalidArgument("bitstring has " + std::to_string(bits.size()) + " bits, lattice has " +
                          std::to_string(lattice.num_qubits()) + " qubits");
  Syndrome s;
  for (int n = 0; n < lattice.num_nodes(); ++n) {
    int parity = 0;
    for (int q : lattice.gauge_support(n)) parity ^= bits[static_cast<std::size_t>(q)] & 1;
    if (parity) s.defects.push_back(n);
  }
  return s;
}

Correction decode(const Syndrome& syndrome, const LatticeGraph& lattice) {
  Correction c;
  const auto& d = syndrome.defects;
  const int k = static_cast<int>(d.size());
  if (k == 0) return c;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && lattice.edge_between(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]))
        adj[static_cast<std::size_t>(i)].push_back(j);

  Matching m;
  if (auto side = two_colour(adj))
    m = kuhn(adj, *side);
  else if (k <= kExactMatchingLimit)
    m = subset_dp(adj);
  else
    m = greedy(adj);

  std::vector<char> matched(static_cast<std::size_t>(k), 0);
  for (auto [i, j] : m.pairs) {
    matched[static_cast<std::size_t>(i)] = matched[static_cast<std::size_t>(j)] = 1;
    c.gauge_flips.push_back(*lattice.edge_between(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)]));
  }
  for (int i = 0; i < k; ++i)
    if (!matched[static_cast<std::size_t>(i)]) c.matter_flips.push_back(d[static_cast<std::size_t>(i)]);
  std::sort(c.gauge_flips.begin(), c.gauge_flips.end());
  c.approximate = m.approximate;
  return c;
}

Bitstring apply_correction(const Bitstring& bits, const LatticeGraph& lattice, const Correction& correction) {
  if (static_cast<int>(bits.size()) != lattice.num_qubits())
    throw InvalidArgument("bitstring length does not match the lattice register");
  Bitstring out = bits;
  for (int n : correction.matter_flips) out[static_cast<std::size_t>(lattice.node_qubit(n))] ^= 1;
  for (int e : correction.gauge_flips) out[static_cast<std::size_t>(lattice.edge_qubit(e))] ^= 1;
  return out;
}

double DecoderReport::mean_flips() const {
  if (shots.empty()) return 0;
  double s = 0;
  for (const auto& r : shots) s += r.flips;
  return s / static_cast<double>(shots.size());
}

bool DecoderReport::any_approximate() const {
  return std::any_of(shots.begin(), shots.end(), [](const DecodedShot& s) { return s.approximate; });
}

DecoderReport decode_table(ShotTable& table, const LatticeGraph& lattice, int threads) {
  if (table.num_qubits != lattice.num_qubits())
    throw InvalidArgument("shot table width " + std::to_string(table.num_qubits) + " does not match lattice register " +
                          std::to_string(lattice.num_qubits()));
  DecoderReport report;
  report.shots.resize(table.shots.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < table.shots.size(); i = next++) {
      auto& shot = table.shots[i];
      const Syndrome s = compute_syndrome(shot.bits, lattice);
      const Correction c = decode(s, lattice);
      shot.bits = apply_correction(shot.bits, lattice, c);
      shot.flips = c.weight();
      report.shots[i] = {s.defects, c.weight(), c.approximate};
    }
  };
  if (threads <= 0) threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(std::max<std::size_t>(1, table.shots.size() / 256)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : report.shots) ++report.histogram[r.flips];
  return report;
}

ShotTable postselect(const ShotTable& table, long min_keep) {
  const long total = static_cast<long>(table.shots.size());
  if (min_keep > total)
    throw InvalidArgument("min_keep " + std::to_string(min_keep) + " exceeds the " + std::to_string(total) +
                          " available shots");
  std::map<int, long> hist;
  for (const auto& s : table.shots) {
    if (s.flips < 0) throw InvalidArgument("postselect needs decoded shots (flip counts missing)");
    ++hist[s.flips];
  }
  int threshold = -1;
  long kept = 0;
  for (auto [flips, count] : hist) {
    if (kept >= min_keep && threshold >= 0) break;
    threshold = flips;
    kept += count;
  }
  ShotTable out = table;
  out.shots.clear();
  for (const auto& s : table.shots)
    if (s.flips <= threshold) out.shots.push_back(s);
  return out;
}

DistanceResult code_distance(const LatticeGraph& lattice, int max_weight) {
  const int q = lattice.num_qubits();
  if (max_weight < 1) throw InvalidArgument("max_weight must be at least 1");
  if (lattice.num_nodes() > 64) throw CapacityError("code_distance supports at most 64 matter sites");
  // Syndrome contribution of an X on each qubit, as a node mask.
  std::vector<std::uint64_t> effect(static_cast<std::size_t>(q), 0);
  for (int n = 0; n < lattice.num_nodes(); ++n)
    for (int qb : lattice.gauge_support(n)) effect[static_cast<std::size_t>(qb)] |= std::uint64_t{1} << n;

  // Depth-first enumeration of increasing index tuples.
  std::function<bool(int, int, std::uint64_t)> search = [&](int start, int left, std::uint64_t syn) {
    if (left == 0) return syn == 0;
    for (int i = start; i <= q - left; ++i)
      if (search(i + 1, left - 1, syn ^ effect[static_cast<std::size_t>(i)])) return true;
    return false;
  };
  for (int w = 1; w <= std::min(max_weight, q); ++w)
    if (search(0, w, 0)) return {w, false};
  return {max_weight + 1, true};
}

}  // namespace z2hm
