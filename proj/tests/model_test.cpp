#include "msalloc/model.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace msalloc;

namespace {

// Independent oracle: walk x upward until the QoS predicate holds.
int scan_min_nodes(double q, double min_success) {
  int x = 0;
  while (1.0 - std::pow(q, x) < min_success) ++x;
  return x;
}

TEST(MinNodesForQos, MatchesLinearScan) {
  for (int qi = 1; qi <= 19; ++qi) {
    const double q = qi * 0.05;
    for (int si = 0; si < 100; ++si) {
      const double s = si * 0.01;
      EXPECT_EQ(min_nodes_for_qos(q, s), scan_min_nodes(q, s)) << "q=" << q << " s=" << s;
    }
    for (double s : {0.995, 0.999, 0.9999}) {
      EXPECT_EQ(min_nodes_for_qos(q, s), scan_min_nodes(q, s)) << "q=" << q << " s=" << s;
    }
  }
}

TEST(MinNodesForQos, KnownValues) {
  EXPECT_EQ(min_nodes_for_qos(0.5, 0.0), 0);
  EXPECT_EQ(min_nodes_for_qos(0.5, 0.9), 4);    // 1 - 0.5^4 = 0.9375
  EXPECT_EQ(min_nodes_for_qos(0.1, 0.99), 2);   // 1 - 0.01 lands exactly
  EXPECT_EQ(min_nodes_for_qos(0.5, 0.75), 2);   // boundary 1 - 0.25 = 0.75
  EXPECT_EQ(min_nodes_for_qos(0.9, 0.5), 7);    // 1 - 0.9^7 ~ 0.5217
}

TEST(MinNodesForQos, RejectsBadArguments) {
  EXPECT_THROW(min_nodes_for_qos(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(min_nodes_for_qos(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(min_nodes_for_qos(0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(min_nodes_for_qos(0.5, -0.1), std::invalid_argument);
}

TEST(MsaSuccessProb, KnownValues) {
  EXPECT_EQ(msa_success_prob(0, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(msa_success_prob(1, 0.3), 0.7);
  EXPECT_DOUBLE_EQ(msa_success_prob(3, 0.5), 0.875);
  EXPECT_THROW(msa_success_prob(-1, 0.5), std::invalid_argument);
}

TEST(ProblemInstance, ValidateRejectsBadFields) {
  ProblemInstance good;
  good.node_count = 3;
  good.access_success = 0.5;
  good.classes = {{8.0, 3.0, 0.0, {}}, {5.0, 3.0, 0.0, {}}};
  EXPECT_NO_THROW(good.validate());

  ProblemInstance bad = good;
  bad.node_count = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.access_success = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.classes.clear();
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.classes[0].weight = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.classes[0].budget = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.classes[0].min_success = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.classes[0].min_nodes = -2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(WeightedSum, KnownValues) {
  ProblemInstance problem;
  problem.node_count = 3;
  problem.access_success = 0.5;
  problem.classes = {{8.0, 3.0, 0.0, {}}, {5.0, 3.0, 0.0, {}}};
  const std::vector<int> counts{2, 1};
  EXPECT_DOUBLE_EQ(weighted_sum(problem, counts), 8.5);
  EXPECT_DOUBLE_EQ(min_objective(problem, counts), 4.5);
  const std::vector<int> zeros{0, 0};
  EXPECT_EQ(weighted_sum(problem, zeros), 0.0);
  EXPECT_DOUBLE_EQ(min_objective(problem, zeros), 13.0);
}

TEST(WeightedSum, ComplementsMinObjective) {
  std::mt19937_64 rng(2026);
  for (int it = 0; it < 200; ++it) {
    const ProblemInstance problem = testutil::random_instance(rng);
    std::vector<int> counts;
    double alpha_sum = 0.0;
    for (const DataClass& c : problem.classes) {
      counts.push_back(static_cast<int>(rng() % static_cast<unsigned>(problem.node_count + 1)));
      alpha_sum += c.weight;
    }
    EXPECT_NEAR(weighted_sum(problem, counts) + min_objective(problem, counts), alpha_sum, 1e-12);
  }
}

TEST(WeightedSum, ScalesLinearlyInWeights) {
  ProblemInstance problem;
  problem.node_count = 5;
  problem.access_success = 0.3;
  problem.classes = {{2.0, 4.0, 0.0, {}}, {7.0, 3.0, 0.0, {}}};
  ProblemInstance scaled = problem;
  for (DataClass& c : scaled.classes) c.weight *= 3.5;
  const std::vector<int> counts{3, 1};
  EXPECT_NEAR(weighted_sum(scaled, counts), 3.5 * weighted_sum(problem, counts), 1e-12);
}

TEST(Normalize, IdentityWithoutQos) {
  ProblemInstance problem;
  problem.node_count = 7;
  problem.access_success = 0.4;
  problem.classes = {{3.0, 4.5, 0.0, {}}, {1.0, 2.0, 0.0, {}}};
  const NormalizedProblem norm = normalize(problem);
  EXPECT_EQ(norm.residual_nodes, 7);
  EXPECT_EQ(norm.qos_floor, (std::vector<int>{0, 0}));
  EXPECT_EQ(norm.unit_caps, (std::vector<int>{4, 2}));
  EXPECT_DOUBLE_EQ(norm.effective_weights[0], 3.0);
  EXPECT_DOUBLE_EQ(norm.effective_weights[1], 1.0);
  EXPECT_DOUBLE_EQ(norm.residual_budgets[0], 4.5);
}

TEST(Normalize, SplitsQosFloors) {
  // q = 0.5, min_success 0.9 -> floor 4; effective weight 8 * 0.5^4.
  ProblemInstance problem;
  problem.node_count = 10;
  problem.access_success = 0.5;
  problem.classes = {{8.0, 6.0, 0.9, {}}, {5.0, 5.0, 0.0, {}}};
  const NormalizedProblem norm = normalize(problem);
  EXPECT_EQ(norm.qos_floor, (std::vector<int>{4, 0}));
  EXPECT_EQ(norm.residual_nodes, 6);
  EXPECT_DOUBLE_EQ(norm.effective_weights[0], 0.5);
  EXPECT_DOUBLE_EQ(norm.effective_weights[1], 5.0);
  EXPECT_DOUBLE_EQ(norm.residual_budgets[0], 2.0);
  EXPECT_EQ(norm.unit_caps, (std::vector<int>{2, 5}));
}

TEST(Normalize, HonorsMinNodesOverride) {
  ProblemInstance problem;
  problem.node_count = 10;
  problem.access_success = 0.5;
  problem.classes = {{8.0, 6.0, 0.0, {}}, {5.0, 5.0, 0.0, {}}};
  problem.classes[0].min_nodes = 3;
  const NormalizedProblem norm = normalize(problem);
  EXPECT_EQ(norm.qos_floor, (std::vector<int>{3, 0}));
  EXPECT_EQ(norm.residual_nodes, 7);
}

TEST(Normalize, ThrowsWhenFloorExceedsBudget) {
  ProblemInstance problem;
  problem.node_count = 10;
  problem.access_success = 0.5;
  problem.classes = {{8.0, 3.0, 0.9, {}}};  // needs 4 nodes, budget caps at 3
  EXPECT_THROW(normalize(problem), InfeasibleError);
}

TEST(Normalize, ThrowsWhenFloorsExceedNodes) {
  ProblemInstance problem;
  problem.node_count = 5;
  problem.access_success = 0.5;
  problem.classes = {{8.0, 5.0, 0.9, {}}, {5.0, 5.0, 0.9, {}}};  // 4 + 4 > 5
  EXPECT_THROW(normalize(problem), InfeasibleError);
}

TEST(Normalize, EffectiveWeightNeverExceedsWeight) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    const ProblemInstance problem = testutil::random_instance(rng);
    const NormalizedProblem norm = normalize(problem);
    long floor_sum = 0;
    for (int i = 0; i < norm.class_count(); ++i) {
      EXPECT_LE(norm.effective_weights[i], problem.classes[i].weight + 1e-15);
      EXPECT_GT(norm.effective_weights[i], 0.0);
      floor_sum += norm.qos_floor[i];
    }
    EXPECT_EQ(norm.residual_nodes, problem.node_count - floor_sum);
    EXPECT_GE(norm.residual_nodes, 0);
  }
}

struct TableRow {
  std::vector<double> row;
  double (*closed_form)(double);
};

TEST(GeneralSuccessProb, ClosedFormExamples) {
  // Three nodes, budgets (3/2, 5/4): four placements per class with
  // known recovery polynomials.
  const std::vector<TableRow> rows = {
      {{1.0, 0.5, 0.0}, [](double p) { return p; }},
      {{0.0, 0.25, 1.0}, [](double p) { return p; }},
      {{1.0, 3.0 / 8.0, 1.0 / 8.0}, [](double p) { return p; }},
      {{0.0, 5.0 / 8.0, 5.0 / 8.0}, [](double p) { return p * p; }},
      {{0.75, 0.5, 0.25}, [](double p) { return 2 * p * p - p * p * p; }},
      {{0.25, 0.25, 0.75}, [](double p) { return 2 * p * p - p * p * p; }},
      {{0.5, 0.5, 0.5}, [](double p) { return 3 * p * p - 2 * p * p * p; }},
      {{5.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0}, [](double p) { return p * p * p; }},
  };
  for (const TableRow& r : rows) {
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      EXPECT_NEAR(general_success_prob(r.row, p), r.closed_form(p), 1e-12)
          << "row[0]=" << r.row[0] << " p=" << p;
    }
  }
}

TEST(GeneralSuccessProb, AllZeroRowNeverRecovers) {
  const std::vector<double> row(10, 0.0);
  EXPECT_EQ(general_success_prob(row, 0.5), 0.0);
}

TEST(GeneralSuccessProb, MatchesReplicaClosedForm) {
  for (int n : {1, 5, 15}) {
    for (double p : {0.2, 0.5, 0.8}) {
      for (int x = 0; x <= n; ++x) {
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < x; ++j) row[static_cast<std::size_t>(j)] = 1.0;
        EXPECT_NEAR(general_success_prob(row, p), msa_success_prob(x, 1.0 - p), 1e-12)
            << "n=" << n << " x=" << x << " p=" << p;
      }
    }
  }
}

TEST(GeneralSuccessProb, MonotoneInAccessProbability) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const int n = 1 + static_cast<int>(rng() % 10);
    std::vector<double> row;
    for (int j = 0; j < n; ++j) row.push_back(unit(rng));
    double prev = 0.0;
    for (double p : {0.1, 0.25, 0.4, 0.55, 0.7, 0.85}) {
      const double cur = general_success_prob(row, p);
      EXPECT_GE(cur + 1e-12, prev);
      prev = cur;
    }
  }
}

TEST(GeneralSuccessProb, MonotoneInStoredMass) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const int n = 2 + static_cast<int>(rng() % 8);
    std::vector<double> row;
    for (int j = 0; j < n; ++j) row.push_back(0.8 * unit(rng));
    const double before = general_success_prob(row, 0.5);
    row[static_cast<std::size_t>(rng() % static_cast<unsigned>(n))] += 0.2;
    EXPECT_GE(general_success_prob(row, 0.5) + 1e-12, before);
  }
}

TEST(GeneralSuccessProb, FractionalRoundOffCountsAsRecovered) {
  // Thirds do not sum to 1.0 in binary; the tolerance must absorb that.
  const std::vector<double> row{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const double p = 0.5;
  EXPECT_NEAR(general_success_prob(row, p), p * p * p, 1e-12);
}

TEST(GeneralSuccessProb, EnforcesNodeCap) {
  const std::vector<double> row(26, 1.0);
  EXPECT_THROW(general_success_prob(row, 0.5), TooLargeError);
}

TEST(GeneralAllocation, FromMsaBuildsPrefixRows) {
  MsaAllocation msa;
  msa.counts = {2, 0, 3};
  const GeneralAllocation g = GeneralAllocation::from_msa(msa, 4);
  EXPECT_EQ(g.node_count, 4);
  EXPECT_EQ(g.placement[0], (std::vector<double>{1, 1, 0, 0}));
  EXPECT_EQ(g.placement[1], (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(g.placement[2], (std::vector<double>{1, 1, 1, 0}));
}

TEST(GeneralAllocation, ValidateChecksCapacityAndBudget) {
  ProblemInstance problem;
  problem.node_count = 2;
  problem.access_success = 0.5;
  problem.classes = {{1.0, 1.5, 0.0, {}}, {1.0, 1.0, 0.0, {}}};

  GeneralAllocation ok;
  ok.node_count = 2;
  ok.placement = {{0.5, 0.5}, {0.5, 0.25}};
  EXPECT_NO_THROW(ok.validate(problem));

  GeneralAllocation overfull = ok;
  overfull.placement[1] = {0.75, 0.0};  // node 0 now stores 1.25
  EXPECT_THROW(overfull.validate(problem), std::invalid_argument);

  GeneralAllocation over_budget = ok;
  over_budget.placement[1] = {0.5, 0.6};  // class 1 budget is 1.0
  EXPECT_THROW(over_budget.validate(problem), std::invalid_argument);

  GeneralAllocation bad_entry = ok;
  bad_entry.placement[0][0] = -0.1;
  EXPECT_THROW(bad_entry.validate(problem), std::invalid_argument);
}

}  // namespace
