#pragma once
// Core model for storage allocation over unreliable nodes.
//
// An instance has N unit-capacity storage nodes, each independently
// accessible with probability p at recovery time, and K data classes.
// Class i has a positive weight, a storage budget T_i in normalized
// units of its own object size, and an optional floor on its recovery
// probability. Under minimal spreading, class i keeps whole replicas on
// x_i distinct nodes, so it is recoverable iff at least one of those
// nodes responds: P_i = 1 - q^{x_i} with q = 1 - p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msalloc {

// A stored fraction sum within this distance of 1 counts as a full
// recovered unit, so placements like 1/4 + 1/4 + 1/2 survive round-off.
inline constexpr double kRecoveryTol = 1e-12;

// Classification tolerance for relaxed allocation values against the
// interval bounds 0 and floor(T).
inline constexpr double kBoundaryTol = 1e-9;

// Exhaustive recovery evaluation enumerates 2^N node subsets.
inline constexpr int kMaxEnumerationNodes = 25;

// QoS floors cannot be met within the budgets / node count.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input exceeds a hard enumeration cap (exhaustive paths only).
class TooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal misuse: asked for a greedy step with no assignable class.
class ExhaustedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct DataClass {
  double weight = 1.0;       // relative importance, > 0
  double budget = 0.0;       // storage budget T in object-size units, >= 0
  double min_success = 0.0;  // required recovery probability, in [0, 1)
  // Explicit lower bound on node count; when set it replaces the bound
  // derived from min_success.
  std::optional<int> min_nodes;
};

struct ProblemInstance {
  int node_count = 1;           // N
  double access_success = 0.5;  // p, in (0, 1)
  std::vector<DataClass> classes;

  int class_count() const { return static_cast<int>(classes.size()); }
  double q() const { return 1.0 - access_success; }

  void validate() const {
    if (node_count < 1) throw std::invalid_argument("node_count must be >= 1");
    if (!(access_success > 0.0) || !(access_success < 1.0))
      throw std::invalid_argument("access_success must lie in (0, 1)");
    if (classes.empty()) throw std::invalid_argument("at least one class is required");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const DataClass& c = classes[i];
      const std::string tag = "class " + std::to_string(i) + ": ";
      if (!(c.weight > 0.0) || !std::isfinite(c.weight))
        throw std::invalid_argument(tag + "weight must be positive and finite");
      if (!(c.budget >= 0.0) || !std::isfinite(c.budget))
        throw std::invalid_argument(tag + "budget must be >= 0 and finite");
      if (!(c.min_success >= 0.0) || !(c.min_success < 1.0))
        throw std::invalid_argument(tag + "min_success must lie in [0, 1)");
      if (c.min_nodes && *c.min_nodes < 0)
        throw std::invalid_argument(tag + "min_nodes must be >= 0");
    }
  }
};

// Replica counts per class under minimal spreading.
struct MsaAllocation {
  std::vector<int> counts;
};

// Arbitrary fractional placement: placement[i][n] is the fraction of
// class i stored on node n.
struct GeneralAllocation {
  int node_count = 0;
  std::vector<std::vector<double>> placement;

  static GeneralAllocation from_msa(const MsaAllocation& msa, int node_count) {
    GeneralAllocation g;
    g.node_count = node_count;
    g.placement.reserve(msa.counts.size());
    for (int x : msa.counts) {
      std::vector<double> row(static_cast<std::size_t>(node_count), 0.0);
      for (int n = 0; n < x && n < node_count; ++n) row[static_cast<std::size_t>(n)] = 1.0;
      g.placement.push_back(std::move(row));
    }
    return g;
  }

  // Entry range, per-node capacity, per-class budget.
  void validate(const ProblemInstance& problem) const {
    if (node_count != problem.node_count)
      throw std::invalid_argument("allocation node count differs from instance");
    if (placement.size() != problem.classes.size())
      throw std::invalid_argument("allocation class count differs from instance");
    std::vector<double> node_load(static_cast<std::size_t>(node_count), 0.0);
    for (std::size_t i = 0; i < placement.size(); ++i) {
      const auto& row = placement[i];
      if (static_cast<int>(row.size()) != node_count)
        throw std::invalid_argument("placement row length differs from node count");
      double row_sum = 0.0;
      for (std::size_t n = 0; n < row.size(); ++n) {
        if (!(row[n] >= 0.0) || !(row[n] <= 1.0 + kRecoveryTol))
          throw std::invalid_argument("placement entries must lie in [0, 1]");
        row_sum += row[n];
        node_load[n] += row[n];
      }
      if (row_sum > problem.classes[i].budget + kRecoveryTol)
        throw std::invalid_argument("class " + std::to_string(i) + " exceeds its budget");
    }
    for (double load : node_load)
      if (load > 1.0 + kRecoveryTol)
        throw std::invalid_argument("node capacity exceeded");
  }
};

// Smallest x with 1 - q^x >= min_success. The closed form is
// ceil(log_q(1 - min_success)); a local scan against the direct
// predicate absorbs round-off at exact-power boundaries.
inline int min_nodes_for_qos(double q, double min_success) {
  if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
  if (!(min_success >= 0.0) || !(min_success < 1.0))
    throw std::invalid_argument("min_success must lie in [0, 1)");
  if (min_success == 0.0) return 0;
  double est = std::log1p(-min_success) / std::log(q);
  int x = static_cast<int>(std::ceil(est));
  if (x < 0) x = 0;
  while (x > 0 && 1.0 - std::pow(q, x - 1) >= min_success) --x;
  while (1.0 - std::pow(q, x) < min_success) ++x;
  return x;
}

inline double msa_success_prob(int x, double q) {
  if (x < 0) throw std::invalid_argument("replica count must be >= 0");
  return 1.0 - std::pow(q, x);
}

inline double weighted_sum(const ProblemInstance& problem, std::span<const int> counts) {
  if (counts.size() != problem.classes.size())
    throw std::invalid_argument("count vector length differs from class count");
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    total += problem.classes[i].weight * msa_success_prob(counts[i], problem.q());
  return total;
}

inline double min_objective(const ProblemInstance& problem, std::span<const int> counts) {
  if (counts.size() != problem.classes.size())
    throw std::invalid_argument("count vector length differs from class count");
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    total += problem.classes[i].weight * std::pow(problem.q(), counts[i]);
  return total;
}

// Recovery probability of one class under an arbitrary placement row:
// the probability, over independent node availability, that the
// accessible fraction reaches a full unit. Exhaustive over node subsets
// via depth-first branching; a branch whose partial sum already reaches
// 1 contributes its whole subtree mass exactly.
inline double general_success_prob(std::span<const double> row, double p) {
  const int n = static_cast<int>(row.size());
  if (n > kMaxEnumerationNodes)
    throw TooLargeError("recovery enumeration supports at most " +
                        std::to_string(kMaxEnumerationNodes) + " nodes");
  if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  const double q = 1.0 - p;
  auto rec = [&](auto&& self, int idx, double mass) -> double {
    if (mass >= 1.0 - kRecoveryTol) return 1.0;
    if (idx == n) return 0.0;
    return p * self(self, idx + 1, mass + row[static_cast<std::size_t>(idx)]) +
           q * self(self, idx + 1, mass);
  };
  return rec(rec, 0, 0.0);
}

// QoS-eliminated form of an instance: per-class node floors are split
// off, leaving residual nodes, residual budgets and effective weights
// beta_i = alpha_i q^{floor_i} for the surplus assignment.
struct NormalizedProblem {
  int residual_nodes = 0;                 // N' = N - sum of floors
  double q = 0.5;
  std::vector<double> effective_weights;  // beta
  std::vector<double> residual_budgets;   // T'_i = T_i - floor_i
  std::vector<int> qos_floor;             // x^min
  std::vector<int> unit_caps;             // floor(T_i) - floor_i

  int class_count() const { return static_cast<int>(effective_weights.size()); }
};

inline NormalizedProblem normalize(const ProblemInstance& problem) {
  problem.validate();
  const double q = problem.q();
  NormalizedProblem out;
  out.q = q;
  long floor_sum = 0;
  for (std::size_t i = 0; i < problem.classes.size(); ++i) {
    const DataClass& c = problem.classes[i];
    const int budget_floor = static_cast<int>(std::floor(c.budget));
    const int x_min = c.min_nodes ? *c.min_nodes : min_nodes_for_qos(q, c.min_success);
    if (x_min > budget_floor)
      throw InfeasibleError("class " + std::to_string(i) + ": QoS floor " +
                            std::to_string(x_min) + " exceeds floor(budget) " +
                            std::to_string(budget_floor));
    floor_sum += x_min;
    out.qos_floor.push_back(x_min);
    out.effective_weights.push_back(c.weight * std::pow(q, x_min));
    out.residual_budgets.push_back(c.budget - x_min);
    out.unit_caps.push_back(budget_floor - x_min);
  }
  if (floor_sum > problem.node_count)
    throw InfeasibleError("QoS floors need " + std::to_string(floor_sum) +
                          " nodes but only " + std::to_string(problem.node_count) +
                          " exist");
  out.residual_nodes = problem.node_count - static_cast<int>(floor_sum);
  return out;
}

enum class SolveMethod { kExact, kFast, kOracle, kRandom };

inline std::string method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::kExact: return "exact";
    case SolveMethod::kFast: return "fast";
    case SolveMethod::kOracle: return "oracle";
    case SolveMethod::kRandom: return "random";
  }
  return "unknown";
}

struct SolveReport {
  MsaAllocation allocation;
  std::vector<double> per_class_success;
  double weighted_sum = 0.0;   // sum alpha_i (1 - q^{x_i})
  double min_objective = 0.0;  // sum alpha_i q^{x_i}
  SolveMethod method = SolveMethod::kExact;
  std::vector<std::string> trace;
};

inline SolveReport make_report(const ProblemInstance& problem, std::vector<int> counts,
                               SolveMethod method, std::vector<std::string> trace) {
  SolveReport report;
  report.per_class_success.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    report.per_class_success.push_back(msa_success_prob(counts[i], problem.q()));
  report.weighted_sum = weighted_sum(problem, counts);
  report.min_objective = min_objective(problem, counts);
  report.allocation.counts = std::move(counts);
  report.method = method;
  report.trace = std::move(trace);
  return report;
}

}  // namespace msalloc
