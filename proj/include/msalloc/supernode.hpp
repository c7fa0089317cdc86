#pragma once
// Placement over super-nodes: storage units grouped into larger nodes
// whose slots share one availability draw.
//
// Independent mode is a pure relabeling: c_n unit nodes behave exactly
// like a flat instance with sum(c_n) nodes. Correlated mode means all
// slots of a super-node respond (or vanish) together, so replicas of
// one class on the same super-node are redundant; a class only gains
// from distinct super-nodes. The placement below is a heuristic: solve
// the flat relaxation over remaining capacity with budgets capped by
// the number of open super-nodes, commit the class that wants the most
// nodes to the emptiest open super-nodes, and repeat.

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "msalloc/exact_solver.hpp"
#include "msalloc/model.hpp"

namespace msalloc {

enum class AccessMode { kIndependent, kCorrelated };

struct CapacityProfile {
  std::vector<int> capacities;
  AccessMode access_mode = AccessMode::kIndependent;

  void validate() const {
    if (capacities.empty()) throw std::invalid_argument("at least one super-node is required");
    long total = 0;
    for (std::size_t n = 0; n < capacities.size(); ++n) {
      if (capacities[n] < 1)
        throw std::invalid_argument("super-node " + std::to_string(n) +
                                    ": capacity must be >= 1");
      total += capacities[n];
    }
    if (total > std::numeric_limits<int>::max())
      throw std::invalid_argument("total capacity overflows int");
  }

  int total_capacity() const {
    long total = 0;
    for (int c : capacities) total += c;
    return static_cast<int>(total);
  }
};

// 0/1 matrix: assignment[i][n] says class i keeps a replica on super-node n.
struct SuperNodePlacement {
  std::vector<std::vector<int>> assignment;
};

inline void check_profile_shape(const ProblemInstance& problem, const CapacityProfile& profile) {
  profile.validate();
  if (static_cast<int>(profile.capacities.size()) != problem.node_count)
    throw std::invalid_argument("capacity profile length differs from node count");
}

inline ProblemInstance expand_independent(const ProblemInstance& problem,
                                          const CapacityProfile& profile) {
  check_profile_shape(problem, profile);
  if (profile.access_mode != AccessMode::kIndependent)
    throw std::invalid_argument("expand_independent requires independent access mode");
  ProblemInstance flat = problem;
  flat.node_count = profile.total_capacity();
  return flat;
}

inline std::pair<SuperNodePlacement, SolveReport> solve_correlated(
    const ProblemInstance& problem, const CapacityProfile& profile) {
  check_profile_shape(problem, profile);
  if (profile.access_mode != AccessMode::kCorrelated)
    throw std::invalid_argument("solve_correlated requires correlated access mode");
  problem.validate();

  const int n_super = problem.node_count;
  const int k = problem.class_count();
  std::vector<int> residual = profile.capacities;
  std::vector<bool> class_live(static_cast<std::size_t>(k), true);
  int live_classes = k;

  SuperNodePlacement placement;
  placement.assignment.assign(static_cast<std::size_t>(k),
                              std::vector<int>(static_cast<std::size_t>(n_super), 0));
  std::vector<int> distinct(static_cast<std::size_t>(k), 0);
  std::vector<std::string> trace;
  trace.push_back("heuristic correlated placement");

  while (live_classes > 0) {
    std::vector<int> open_nodes;
    long capacity_left = 0;
    for (int n = 0; n < n_super; ++n) {
      if (residual[static_cast<std::size_t>(n)] > 0) {
        open_nodes.push_back(n);
        capacity_left += residual[static_cast<std::size_t>(n)];
      }
    }
    if (open_nodes.empty()) {
      // Out of capacity; remaining classes stay unplaced, which is only
      // acceptable when they carry no QoS floor.
      for (int i = 0; i < k; ++i) {
        if (!class_live[static_cast<std::size_t>(i)]) continue;
        const DataClass& c = problem.classes[static_cast<std::size_t>(i)];
        const int x_min =
            c.min_nodes ? *c.min_nodes : min_nodes_for_qos(problem.q(), c.min_success);
        if (x_min > 0)
          throw InfeasibleError("class " + std::to_string(i) +
                                ": QoS floor unsatisfiable, capacity exhausted");
      }
      trace.push_back("capacity exhausted classes_left=" + std::to_string(live_classes));
      break;
    }

    // Flat subproblem over the remaining capacity. Budgets are capped by
    // the number of open super-nodes: extra replicas on one super-node
    // are worthless under correlated access.
    ProblemInstance inner;
    inner.node_count = static_cast<int>(capacity_left);
    inner.access_success = problem.access_success;
    std::vector<int> inner_ids;
    for (int i = 0; i < k; ++i) {
      if (!class_live[static_cast<std::size_t>(i)]) continue;
      DataClass c = problem.classes[static_cast<std::size_t>(i)];
      c.budget = std::min(c.budget, static_cast<double>(open_nodes.size()));
      inner.classes.push_back(c);
      inner_ids.push_back(i);
    }
    const SolveReport inner_report = solve_exact(inner);

    // Commit the class that wants the most nodes; ties prefer the larger
    // weight, then the lower class index.
    int pick_pos = 0;
    for (std::size_t pos = 1; pos < inner_ids.size(); ++pos) {
      const int x = inner_report.allocation.counts[pos];
      const int best_x = inner_report.allocation.counts[static_cast<std::size_t>(pick_pos)];
      const double w = inner.classes[pos].weight;
      const double best_w = inner.classes[static_cast<std::size_t>(pick_pos)].weight;
      if (x > best_x || (x == best_x && w > best_w)) pick_pos = static_cast<int>(pos);
    }
    const int class_id = inner_ids[static_cast<std::size_t>(pick_pos)];
    const int want = inner_report.allocation.counts[static_cast<std::size_t>(pick_pos)];

    // Emptiest-first keeps future classes' distinctness options open.
    std::sort(open_nodes.begin(), open_nodes.end(), [&](int a, int b) {
      if (residual[static_cast<std::size_t>(a)] != residual[static_cast<std::size_t>(b)])
        return residual[static_cast<std::size_t>(a)] > residual[static_cast<std::size_t>(b)];
      return a < b;
    });
    for (int j = 0; j < want; ++j) {
      const int node = open_nodes[static_cast<std::size_t>(j)];
      placement.assignment[static_cast<std::size_t>(class_id)][static_cast<std::size_t>(node)] = 1;
      residual[static_cast<std::size_t>(node)] -= 1;
    }
    distinct[static_cast<std::size_t>(class_id)] = want;
    class_live[static_cast<std::size_t>(class_id)] = false;
    --live_classes;
    trace.push_back("place class=" + std::to_string(class_id) +
                    " nodes=" + std::to_string(want));
  }

  SolveReport report =
      make_report(problem, std::move(distinct), SolveMethod::kExact, std::move(trace));
  return {std::move(placement), std::move(report)};
}

}  // namespace msalloc
