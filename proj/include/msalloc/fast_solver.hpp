#pragma once
// Fast replica-count optimizer, O(K) relaxation rounds.
//
// Dropping integrality and the box constraints, minimizing
// sum beta_i q^{x_i} with sum x_i = N has the closed form
// x_i = C - log_q(beta_i) with C = (N + log_q prod beta_j) / K, which
// equalizes the products beta_i q^{x_i}. Classes whose relaxed value
// leaves the box [0, floor(T)] are pinned to the violated side and the
// relaxation repeats on the remainder; an interior solution is rounded
// to integers by giving the ceiling to the classes with the largest
// fractional parts.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "msalloc/model.hpp"

namespace msalloc {

// Box-free minimizer; values sum to n (n may be any real here).
inline std::vector<double> relaxed_allocation(int n, std::span<const double> weights,
                                              double q) {
  if (weights.empty()) throw std::invalid_argument("at least one weight is required");
  if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
  const double log_q = std::log(q);
  double log_prod = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    log_prod += std::log(w);
  }
  const double k = static_cast<double>(weights.size());
  const double c = (static_cast<double>(n) + log_prod / log_q) / k;
  std::vector<double> values;
  values.reserve(weights.size());
  for (double w : weights) values.push_back(c - std::log(w) / log_q);
  return values;
}

struct Partition {
  std::vector<int> negative;   // relaxed value below 0
  std::vector<int> interior;   // inside [0, floor(budget))
  std::vector<int> saturated;  // at or above floor(budget)
};

inline Partition partition_classes(std::span<const double> values,
                                   std::span<const double> budgets) {
  if (values.size() != budgets.size())
    throw std::invalid_argument("values/budgets length mismatch");
  Partition part;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cap = std::floor(budgets[i]);
    if (values[i] < -kBoundaryTol)
      part.negative.push_back(static_cast<int>(i));
    else if (values[i] >= cap - kBoundaryTol)
      part.saturated.push_back(static_cast<int>(i));
    else
      part.interior.push_back(static_cast<int>(i));
  }
  return part;
}

struct RelaxedSolution {
  std::vector<double> values;
  Partition partition;
};

inline RelaxedSolution relax_and_partition(int n, std::span<const double> weights,
                                           std::span<const double> budgets, double q) {
  RelaxedSolution sol;
  sol.values = relaxed_allocation(n, weights, q);
  sol.partition = partition_classes(sol.values, budgets);
  return sol;
}

struct FractionalPart {
  int class_id = 0;
  double value = 0.0;
};

// Round interior relaxed values (summing to n) to integers that still
// sum to n: everyone keeps the floor, and the n - sum(floors) classes
// with the largest fractional parts take the ceiling. Fractional parts
// are quantized so mathematically exact ties (weight ratios at integer
// powers of 1/q) are decided by weight, then by index, instead of by
// last-ulp noise.
inline std::vector<int> round_case1(std::span<const double> values,
                                    std::span<const double> weights, int n) {
  if (values.size() != weights.size())
    throw std::invalid_argument("values/weights length mismatch");
  const std::size_t k = values.size();
  std::vector<int> result(k);
  long floor_sum = 0;
  std::vector<FractionalPart> fracs(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double fl = std::floor(values[i]);
    result[i] = static_cast<int>(fl);
    floor_sum += result[i];
    fracs[i] = {static_cast<int>(i), values[i] - fl};
  }
  long up = n - floor_sum;
  if (up < 0) up = 0;
  if (up > static_cast<long>(k)) up = static_cast<long>(k);
  std::sort(fracs.begin(), fracs.end(), [&](const FractionalPart& a, const FractionalPart& b) {
    const long long qa = std::llround(a.value / kBoundaryTol);
    const long long qb = std::llround(b.value / kBoundaryTol);
    if (qa != qb) return qa > qb;
    const double wa = weights[static_cast<std::size_t>(a.class_id)];
    const double wb = weights[static_cast<std::size_t>(b.class_id)];
    if (wa != wb) return wa > wb;
    return a.class_id < b.class_id;
  });
  for (long j = 0; j < up; ++j)
    result[static_cast<std::size_t>(fracs[static_cast<std::size_t>(j)].class_id)] += 1;
  return result;
}

inline SolveReport solve_fast(const ProblemInstance& problem) {
  const NormalizedProblem norm = normalize(problem);
  const int k = norm.class_count();
  std::vector<std::string> trace;
  std::vector<int> extra(static_cast<std::size_t>(k), 0);

  std::vector<int> live(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) live[static_cast<std::size_t>(i)] = i;
  int units = norm.residual_nodes;

  while (!live.empty()) {
    long cap_sum = 0;
    for (int id : live) cap_sum += norm.unit_caps[static_cast<std::size_t>(id)];
    if (cap_sum <= units) {
      for (int id : live)
        extra[static_cast<std::size_t>(id)] = norm.unit_caps[static_cast<std::size_t>(id)];
      trace.push_back("trivial assigned=" + std::to_string(cap_sum));
      break;
    }

    std::vector<double> weights, caps;
    weights.reserve(live.size());
    caps.reserve(live.size());
    for (int id : live) {
      weights.push_back(norm.effective_weights[static_cast<std::size_t>(id)]);
      // Integral caps double as the budgets: only floor(T') matters here,
      // and reusing the normalized caps keeps every code path flooring
      // the same quantity.
      caps.push_back(static_cast<double>(norm.unit_caps[static_cast<std::size_t>(id)]));
    }
    const RelaxedSolution sol = relax_and_partition(units, weights, caps, norm.q);

    if (!sol.partition.negative.empty()) {
      // Pinning to zero frees no units, so handle it before saturation:
      // dropped classes sharpen the relaxation for everyone else.
      std::string ids;
      std::vector<int> keep;
      std::vector<bool> drop(live.size(), false);
      for (int pos : sol.partition.negative) drop[static_cast<std::size_t>(pos)] = true;
      for (std::size_t pos = 0; pos < live.size(); ++pos) {
        if (drop[pos]) {
          extra[static_cast<std::size_t>(live[pos])] = 0;
          if (!ids.empty()) ids += ",";
          ids += std::to_string(live[pos]);
        } else {
          keep.push_back(live[pos]);
        }
      }
      live = std::move(keep);
      trace.push_back("pin-zero classes=" + ids);
      continue;
    }

    if (!sol.partition.saturated.empty()) {
      std::string ids;
      std::vector<int> keep;
      std::vector<bool> fix(live.size(), false);
      for (int pos : sol.partition.saturated) fix[static_cast<std::size_t>(pos)] = true;
      for (std::size_t pos = 0; pos < live.size(); ++pos) {
        if (fix[pos]) {
          const int id = live[pos];
          extra[static_cast<std::size_t>(id)] = norm.unit_caps[static_cast<std::size_t>(id)];
          units -= norm.unit_caps[static_cast<std::size_t>(id)];
          if (!ids.empty()) ids += ",";
          ids += std::to_string(id);
        } else {
          keep.push_back(live[pos]);
        }
      }
      live = std::move(keep);
      trace.push_back("pin-cap classes=" + ids);
      continue;
    }

    const std::vector<int> rounded = round_case1(sol.values, weights, units);
    for (std::size_t pos = 0; pos < live.size(); ++pos)
      extra[static_cast<std::size_t>(live[pos])] = rounded[pos];
    trace.push_back("interior rounded=" + std::to_string(live.size()));
    break;
  }

  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    counts[static_cast<std::size_t>(i)] = norm.qos_floor[i] + extra[static_cast<std::size_t>(i)];
  return make_report(problem, std::move(counts), SolveMethod::kFast, std::move(trace));
}

}  // namespace msalloc
