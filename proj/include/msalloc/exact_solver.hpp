#pragma once
// Exact replica-count optimizer.
//
// After QoS normalization the residual problem is: spend N' indivisible
// node slots across classes, class i capped at its integral residual
// budget, to minimize sum beta_i q^{x_i}. Assigning one slot to class i
// improves the objective by beta_i q^{x_i} (1 - q), so the marginal
// gains for each class form a decreasing geometric sequence and the
// greedy rule "give the next slot to the class with the largest current
// weight" is optimal. Runs in O(N' K).

#include <span>
#include <string>
#include <vector>

#include "msalloc/model.hpp"

namespace msalloc {

struct GreedyState {
  double q = 0.5;
  int remaining_units = 0;
  std::vector<double> base_weights;     // weights at construction
  std::vector<double> current_weights;  // base_weights[i] * q^{counts[i]}
  std::vector<int> counts;
  std::vector<int> unit_caps;
  std::vector<bool> live;               // still below its cap
  int live_count = 0;
};

inline GreedyState make_greedy_state(std::span<const double> weights,
                                     std::span<const int> unit_caps, double q,
                                     int units) {
  GreedyState s;
  s.q = q;
  s.remaining_units = units;
  s.base_weights.assign(weights.begin(), weights.end());
  s.current_weights = s.base_weights;
  s.counts.assign(weights.size(), 0);
  s.unit_caps.assign(unit_caps.begin(), unit_caps.end());
  s.live.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s.live[i] = s.unit_caps[i] > 0;
    if (s.live[i]) ++s.live_count;
  }
  return s;
}

// Assign one unit to the live class with the largest current weight
// (ties: lowest index). The winner's weight is recomputed from its base
// weight so long runs do not accumulate multiplication drift.
inline void greedy_step(GreedyState& s) {
  if (s.live_count == 0) throw ExhaustedError("greedy_step with no live class");
  int best = -1;
  for (std::size_t i = 0; i < s.current_weights.size(); ++i) {
    if (!s.live[i]) continue;
    if (best < 0 || s.current_weights[i] > s.current_weights[static_cast<std::size_t>(best)])
      best = static_cast<int>(i);
  }
  const auto b = static_cast<std::size_t>(best);
  s.counts[b] += 1;
  s.current_weights[b] = s.base_weights[b] * std::pow(s.q, s.counts[b]);
  s.remaining_units -= 1;
  if (s.counts[b] >= s.unit_caps[b]) {
    s.live[b] = false;
    --s.live_count;
  }
}

inline SolveReport solve_exact(const ProblemInstance& problem) {
  const NormalizedProblem norm = normalize(problem);
  const int k = norm.class_count();
  std::vector<std::string> trace;
  std::vector<int> extra(static_cast<std::size_t>(k), 0);

  long cap_sum = 0;
  for (int c : norm.unit_caps) cap_sum += c;
  if (cap_sum <= norm.residual_nodes) {
    // Every class can take its whole integral budget.
    for (int i = 0; i < k; ++i) extra[static_cast<std::size_t>(i)] = norm.unit_caps[i];
    trace.push_back("trivial assigned=" + std::to_string(cap_sum));
  } else {
    GreedyState state =
        make_greedy_state(norm.effective_weights, norm.unit_caps, norm.q, norm.residual_nodes);
    while (state.remaining_units > 0) greedy_step(state);
    extra = state.counts;
    trace.push_back("greedy steps=" + std::to_string(norm.residual_nodes));
  }

  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    counts[static_cast<std::size_t>(i)] = norm.qos_floor[i] + extra[static_cast<std::size_t>(i)];
  return make_report(problem, std::move(counts), SolveMethod::kExact, std::move(trace));
}

}  // namespace msalloc
