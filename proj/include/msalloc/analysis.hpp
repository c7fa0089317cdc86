#pragma once
// Bounds, baselines, oracles and parameter sweeps around the solvers.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "msalloc/exact_solver.hpp"
#include "msalloc/fast_solver.hpp"
#include "msalloc/model.hpp"
#include "msalloc/rng.hpp"

namespace msalloc {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

// Upper bound on the weighted recovery sum over *all* placements, not
// just minimal spreading: when r of N nodes respond, class i can have
// recovered at most min(r T_i / N, 1) of a unit in expectation over
// placements, so sum_i alpha_i E[min(r T_i / N, 1)] caps the optimum.
inline double upper_bound(const ProblemInstance& problem) {
  problem.validate();
  const int n = problem.node_count;
  const double p = problem.access_success;
  const double q = problem.q();
  std::vector<double> mass(static_cast<std::size_t>(n) + 1);
  if (n <= 50) {
    double binom = 1.0;
    for (int r = 0; r <= n; ++r) {
      mass[static_cast<std::size_t>(r)] = binom * std::pow(p, r) * std::pow(q, n - r);
      binom *= static_cast<double>(n - r) / static_cast<double>(r + 1);
    }
  } else {
    // Log-space: the binomial coefficient alone overflows past n ~ 1000
    // and underflow in the tails loses the r where the mass lives.
    const double lp = std::log(p);
    const double lq = std::log(q);
    const double lg = std::lgamma(static_cast<double>(n) + 1.0);
    for (int r = 0; r <= n; ++r)
      mass[static_cast<std::size_t>(r)] =
          std::exp(lg - std::lgamma(static_cast<double>(r) + 1.0) -
                   std::lgamma(static_cast<double>(n - r) + 1.0) + r * lp + (n - r) * lq);
  }
  double total = 0.0;
  for (const DataClass& c : problem.classes) {
    double acc = 0.0;
    for (int r = 0; r <= n; ++r) {
      const double fraction =
          std::min(static_cast<double>(r) * c.budget / static_cast<double>(n), 1.0);
      acc += fraction * mass[static_cast<std::size_t>(r)];
    }
    total += c.weight * acc;
  }
  return total;
}

// Access probability above which minimal spreading is provably within
// epsilon of the unrestricted optimum (weighted-sum gap). Both
// published exponent variants of the second term are reported; the
// statement form is the headline number.
struct GapThreshold {
  double epsilon = 0.0;
  double statement_form = 0.0;  // exponent 1 / |N - 1|
  double proof_form = 0.0;      // exponent |N/K - 1|
  bool degenerate = false;      // a form fell to <= 0: bound says nothing
};

inline GapThreshold gap_threshold_p(std::span<const double> weights, int n, double epsilon) {
  if (weights.empty()) throw std::invalid_argument("at least one weight is required");
  if (n < 1) throw std::invalid_argument("node count must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double kd = static_cast<double>(weights.size());
  double prod = 1.0;
  std::size_t argmin = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) throw std::invalid_argument("weights must be positive");
    prod *= weights[j];
    if (weights[j] < weights[argmin]) argmin = j;
  }
  const double term1 =
      std::pow(std::pow(epsilon, kd) / (std::pow(kd, kd) * prod), 1.0 / static_cast<double>(n));

  // base = alpha_min^{K-1} / prod_{j != argmin} alpha_j, one argmin
  // excluded; equals 1 when K = 1 or all weights agree.
  double prod_others = 1.0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (j != argmin) prod_others *= weights[j];
  const double base = std::pow(weights[argmin], kd - 1.0) / prod_others;

  const double stmt_exp = 1.0 / std::abs(static_cast<double>(n) - 1.0);
  const double proof_exp = std::abs(static_cast<double>(n) / kd - 1.0);
  GapThreshold out;
  out.epsilon = epsilon;
  out.statement_form = 1.0 - std::min(term1, std::pow(base, stmt_exp));
  out.proof_form = 1.0 - std::min(term1, std::pow(base, proof_exp));
  out.degenerate = !(out.statement_form > 0.0) || !(out.proof_form > 0.0);
  return out;
}

// Independent check on the solvers: enumerate every feasible replica
// vector. Refuses when the feasible set is too big to scan.
inline constexpr double kOracleEnumerationLimit = 1e7;

inline SolveReport brute_force_msa(const ProblemInstance& problem) {
  const NormalizedProblem norm = normalize(problem);
  const int k = norm.class_count();
  const int units = norm.residual_nodes;

  // Count feasible surplus vectors (0 <= e_i <= cap_i, sum e <= units)
  // before enumerating them. Doubles count exactly well past the limit.
  std::vector<double> ways(static_cast<std::size_t>(units) + 1, 0.0);
  ways[0] = 1.0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> next(static_cast<std::size_t>(units) + 1, 0.0);
    for (int s = 0; s <= units; ++s) {
      if (ways[static_cast<std::size_t>(s)] == 0.0) continue;
      const int cap = std::min(norm.unit_caps[static_cast<std::size_t>(i)], units - s);
      for (int e = 0; e <= cap; ++e)
        next[static_cast<std::size_t>(s + e)] += ways[static_cast<std::size_t>(s)];
    }
    ways = std::move(next);
  }
  double feasible_count = 0.0;
  for (double w : ways) feasible_count += w;
  if (!(feasible_count <= kOracleEnumerationLimit))
    throw TooLargeError("feasible set has ~" + format_double(feasible_count) +
                        " vectors, oracle cap is " + format_double(kOracleEnumerationLimit));

  // Per-class objective contribution for each surplus choice.
  std::vector<std::vector<double>> term(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int cap = norm.unit_caps[static_cast<std::size_t>(i)];
    term[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cap) + 1);
    for (int e = 0; e <= cap; ++e)
      term[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)] =
          norm.effective_weights[static_cast<std::size_t>(i)] * std::pow(norm.q, e);
  }

  std::vector<int> extra(static_cast<std::size_t>(k), 0);
  std::vector<int> best_extra;
  double best_obj = std::numeric_limits<double>::infinity();
  std::uint64_t visited = 0;
  auto rec = [&](auto&& self, int idx, int left, double obj) -> void {
    if (idx == k) {
      ++visited;
      if (obj < best_obj) {
        best_obj = obj;
        best_extra = extra;
      }
      return;
    }
    const int cap = std::min(norm.unit_caps[static_cast<std::size_t>(idx)], left);
    for (int e = 0; e <= cap; ++e) {
      extra[static_cast<std::size_t>(idx)] = e;
      self(self, idx + 1, left - e,
           obj + term[static_cast<std::size_t>(idx)][static_cast<std::size_t>(e)]);
    }
    extra[static_cast<std::size_t>(idx)] = 0;
  };
  rec(rec, 0, units, 0.0);

  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    counts[static_cast<std::size_t>(i)] = norm.qos_floor[i] + best_extra[static_cast<std::size_t>(i)];
  std::vector<std::string> trace{"oracle enumerated=" + std::to_string(visited)};
  return make_report(problem, std::move(counts), SolveMethod::kOracle, std::move(trace));
}

// One random feasible allocation: QoS floors first, then surplus units
// land uniformly among classes still below their cap.
inline std::vector<int> random_allocation(const NormalizedProblem& norm, SplitMix64& rng) {
  const int k = norm.class_count();
  std::vector<int> extra(static_cast<std::size_t>(k), 0);
  std::vector<int> eligible;
  for (int i = 0; i < k; ++i)
    if (norm.unit_caps[static_cast<std::size_t>(i)] > 0) eligible.push_back(i);
  int units = norm.residual_nodes;
  while (units > 0 && !eligible.empty()) {
    const auto pos = static_cast<std::size_t>(rng.next_below(eligible.size()));
    const int id = eligible[pos];
    extra[static_cast<std::size_t>(id)] += 1;
    units -= 1;
    if (extra[static_cast<std::size_t>(id)] >= norm.unit_caps[static_cast<std::size_t>(id)])
      eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    counts[static_cast<std::size_t>(i)] = norm.qos_floor[i] + extra[static_cast<std::size_t>(i)];
  return counts;
}

struct RandomBaseline {
  double mean = 0.0;
  double sample_std = 0.0;
};

// Monte Carlo baseline: weighted sum achieved by random feasible
// allocations. One independent stream per realization index.
inline RandomBaseline random_msa(const ProblemInstance& problem, std::uint64_t seed,
                                 int realizations) {
  if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  const NormalizedProblem norm = normalize(problem);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(realizations));
  for (int r = 0; r < realizations; ++r) {
    SplitMix64 rng = derive_stream(seed, static_cast<std::uint64_t>(r));
    const std::vector<int> counts = random_allocation(norm, rng);
    values.push_back(weighted_sum(problem, counts));
  }
  RandomBaseline out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(realizations);
  if (realizations > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sample_std = std::sqrt(ss / static_cast<double>(realizations - 1));
  }
  return out;
}

// Single-realization report, for reproducible spot checks.
inline SolveReport random_report(const ProblemInstance& problem, std::uint64_t seed) {
  const NormalizedProblem norm = normalize(problem);
  SplitMix64 rng = derive_stream(seed, 0);
  std::vector<int> counts = random_allocation(norm, rng);
  std::vector<std::string> trace{"random seed=" + std::to_string(seed)};
  return make_report(problem, std::move(counts), SolveMethod::kRandom, std::move(trace));
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Simulate node availability and count recoveries of one placement row.
// Per-trial streams keep the result independent of evaluation order.
inline MonteCarloEstimate monte_carlo_recovery(std::span<const double> row, double p,
                                               long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  long successes = 0;
  for (long t = 0; t < trials; ++t) {
    SplitMix64 rng = derive_stream(seed, static_cast<std::uint64_t>(t));
    double mass = 0.0;
    for (double x : row) {
      if (rng.next_double() < p) {
        mass += x;
        if (mass >= 1.0 - kRecoveryTol) break;
      }
    }
    if (mass >= 1.0 - kRecoveryTol) ++successes;
  }
  MonteCarloEstimate out;
  out.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  out.standard_error =
      std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

struct SweepRow {
  double p = 0.0;
  double exact_ws = 0.0;
  double fast_ws = 0.0;
  double bound = 0.0;
  double random_mean = 0.0;
  double random_std = 0.0;
};

inline std::vector<SweepRow> sweep(const ProblemInstance& problem, double p_min, double p_max,
                                   int steps, std::uint64_t seed, int realizations) {
  if (!(p_min > 0.0) || !(p_max < 1.0) || !(p_min <= p_max))
    throw std::invalid_argument("need 0 < p_min <= p_max < 1");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    double p = p_min;
    if (steps > 1) {
      p = (i == steps - 1)
              ? p_max
              : p_min + static_cast<double>(i) * (p_max - p_min) / static_cast<double>(steps - 1);
    }
    ProblemInstance at_p = problem;
    at_p.access_success = p;
    SweepRow row;
    row.p = p;
    row.exact_ws = solve_exact(at_p).weighted_sum;
    row.fast_ws = solve_fast(at_p).weighted_sum;
    row.bound = upper_bound(at_p);
    const RandomBaseline base = random_msa(at_p, seed, realizations);
    row.random_mean = base.mean;
    row.random_std = base.sample_std;
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "p,exact,fast,bound,random_mean,random_std\n";
  for (const SweepRow& r : rows) {
    os << format_double(r.p) << ',' << format_double(r.exact_ws) << ','
       << format_double(r.fast_ws) << ',' << format_double(r.bound) << ','
       << format_double(r.random_mean) << ',' << format_double(r.random_std) << '\n';
  }
}

}  // namespace msalloc
