// msalloc: weighted-recovery storage allocation over unreliable nodes.
//
// Subcommands work on a JSON problem document (nodes, p, classes) and
// emit JSON or CSV. All randomized paths take an explicit --seed so any
// published number can be regenerated byte for byte.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "msalloc/msalloc.hpp"

namespace {

struct Options {
  std::string input_path;
  std::string method = "exact";
  std::string access = "independent";
  std::string preset;
  double p_min = 0.01;
  double p_max = 0.99;
  int steps = 99;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int realizations = 100;
  long trials = 100000;
  std::string out_path;
};

// Output is buffered and written in one shot after the command has
// fully succeeded, so failed runs never leave a partial file behind.
void emit(const Options& opt, const std::string& content) {
  if (opt.out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot write output file: " + opt.out_path);
  out << content;
  if (!out) throw std::invalid_argument("write failed: " + opt.out_path);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

msalloc::ProblemDocument load_flat_document(const Options& opt) {
  msalloc::ProblemDocument doc = msalloc::load_problem_file(opt.input_path);
  if (doc.capacities)
    throw std::invalid_argument(
        "document: 'capacities' is only meaningful to the supernode command");
  return doc;
}

void require_seed(const Options& opt, const std::string& what) {
  if (!opt.seed_set)
    throw std::invalid_argument(what + " is randomized; pass an explicit --seed");
}

msalloc::SolveReport run_method(const msalloc::ProblemInstance& problem, const Options& opt) {
  if (opt.method == "exact") return msalloc::solve_exact(problem);
  if (opt.method == "fast") return msalloc::solve_fast(problem);
  if (opt.method == "oracle") return msalloc::brute_force_msa(problem);
  require_seed(opt, "--method random");
  return msalloc::random_report(problem, opt.seed);
}

int cmd_solve(const Options& opt) {
  const msalloc::ProblemDocument doc = load_flat_document(opt);
  emit(opt, dump(msalloc::report_to_json(run_method(doc.problem, opt))));
  return 0;
}

int cmd_sweep(const Options& opt) {
  const msalloc::ProblemDocument doc = load_flat_document(opt);
  require_seed(opt, "sweep");
  const auto rows =
      msalloc::sweep(doc.problem, opt.p_min, opt.p_max, opt.steps, opt.seed, opt.realizations);
  std::ostringstream csv;
  msalloc::write_sweep_csv(csv, rows);
  emit(opt, csv.str());
  return 0;
}

int cmd_bound(const Options& opt) {
  const msalloc::ProblemDocument doc = load_flat_document(opt);
  nlohmann::json j;
  j["bound"] = msalloc::upper_bound(doc.problem);
  emit(opt, dump(j));
  return 0;
}

int cmd_threshold(const Options& opt) {
  const msalloc::ProblemDocument doc = load_flat_document(opt);
  std::vector<double> weights;
  for (const auto& c : doc.problem.classes) weights.push_back(c.weight);
  const msalloc::GapThreshold t =
      msalloc::gap_threshold_p(weights, doc.problem.node_count, opt.epsilon);
  nlohmann::json j;
  j["epsilon"] = t.epsilon;
  j["statement_form"] = t.statement_form;
  j["proof_form"] = t.proof_form;
  j["degenerate"] = t.degenerate;
  emit(opt, dump(j));
  return 0;
}

int cmd_supernode(const Options& opt) {
  const msalloc::ProblemDocument doc = msalloc::load_problem_file(opt.input_path);
  if (!doc.capacities)
    throw std::invalid_argument("supernode command needs a 'capacities' array in the document");
  msalloc::CapacityProfile profile;
  profile.capacities = *doc.capacities;
  if (opt.access == "correlated") {
    profile.access_mode = msalloc::AccessMode::kCorrelated;
    auto [placement, report] = msalloc::solve_correlated(doc.problem, profile);
    emit(opt, dump(msalloc::placement_to_json(placement, report)));
    return 0;
  }
  profile.access_mode = msalloc::AccessMode::kIndependent;
  const msalloc::ProblemInstance flat = msalloc::expand_independent(doc.problem, profile);
  nlohmann::json j = msalloc::report_to_json(run_method(flat, opt));
  j["expanded_nodes"] = flat.node_count;
  emit(opt, dump(j));
  return 0;
}

int cmd_simulate(const Options& opt) {
  const msalloc::ProblemDocument doc = load_flat_document(opt);
  require_seed(opt, "simulate");
  const msalloc::SolveReport report = run_method(doc.problem, opt);
  const msalloc::GeneralAllocation rows =
      msalloc::GeneralAllocation::from_msa(report.allocation, doc.problem.node_count);
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.placement.size(); ++i) {
    const msalloc::MonteCarloEstimate est = msalloc::monte_carlo_recovery(
        rows.placement[i], doc.problem.access_success, opt.trials,
        opt.seed + static_cast<std::uint64_t>(i));
    nlohmann::json e;
    e["estimate"] = est.estimate;
    e["standard_error"] = est.standard_error;
    e["analytic"] = report.per_class_success[i];
    per_class.push_back(e);
  }
  nlohmann::json j;
  j["allocation"] = report.allocation.counts;
  j["method"] = msalloc::method_name(report.method);
  j["trials"] = opt.trials;
  j["per_class"] = per_class;
  emit(opt, dump(j));
  return 0;
}

msalloc::ProblemInstance preset_instance(const std::string& name) {
  msalloc::ProblemInstance problem;
  problem.access_success = 0.5;  // sweeps override p per grid point
  auto add = [&problem](double weight, double budget, std::optional<int> min_nodes) {
    msalloc::DataClass c;
    c.weight = weight;
    c.budget = budget;
    c.min_nodes = min_nodes;
    problem.classes.push_back(c);
  };
  if (name == "fig3") {
    problem.node_count = 20;
    add(8, 20, std::nullopt);
    add(5, 8, std::nullopt);
    add(1, 4, std::nullopt);
  } else if (name == "fig4") {
    problem.node_count = 15;
    add(6, 15, std::nullopt);
    add(4, 15, std::nullopt);
    add(1, 15, std::nullopt);
  } else if (name == "fig5") {
    problem.node_count = 25;
    add(1, 8, 1);
    add(5, 15, 1);
    add(8, 23, 1);
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return problem;
}

int cmd_presets(const Options& opt) {
  const msalloc::ProblemInstance problem = preset_instance(opt.preset);
  require_seed(opt, "presets");
  const auto rows =
      msalloc::sweep(problem, opt.p_min, opt.p_max, opt.steps, opt.seed, opt.realizations);
  std::ostringstream csv;
  msalloc::write_sweep_csv(csv, rows);
  emit(opt, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"storage allocation for multi-class data over unreliable nodes"};
  app.require_subcommand(1);
  Options opt;

  const std::map<std::string, std::string> method_names{
      {"exact", "exact"}, {"fast", "fast"}, {"oracle", "oracle"}, {"random", "random"}};
  const std::map<std::string, std::string> access_names{{"independent", "independent"},
                                                        {"correlated", "correlated"}};

  auto add_io = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input", opt.input_path, "problem document (JSON)")->required();
    cmd->add_option("--out", opt.out_path, "output path (default: stdout)");
  };
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", opt.method, "solver to run")
        ->transform(CLI::CheckedTransformer(method_names))
        ->capture_default_str();
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random seed (required for randomized paths)")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
  };
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--p-min", opt.p_min, "grid start")->capture_default_str();
    cmd->add_option("--p-max", opt.p_max, "grid end")->capture_default_str();
    cmd->add_option("--steps", opt.steps, "grid points")->capture_default_str();
    cmd->add_option("--realizations", opt.realizations, "random baseline sample count")
        ->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "allocate replicas for one instance");
  add_io(solve, true);
  add_method(solve);
  add_seed(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "evaluate solvers over a p grid (CSV)");
  add_io(sweep, true);
  add_grid(sweep);
  add_seed(sweep);

  CLI::App* bound = app.add_subcommand("bound", "weighted-recovery upper bound");
  add_io(bound, true);

  CLI::App* threshold = app.add_subcommand("threshold", "p above which spreading is near-optimal");
  add_io(threshold, true);
  threshold->add_option("--epsilon", opt.epsilon, "allowed optimality gap")
      ->required();

  CLI::App* supernode = app.add_subcommand("supernode", "solve over capacitated super-nodes");
  add_io(supernode, true);
  supernode->add_option("--access", opt.access, "availability coupling within a super-node")
      ->transform(CLI::CheckedTransformer(access_names))
      ->capture_default_str();
  add_method(supernode);
  add_seed(supernode);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo recovery check");
  add_io(simulate, true);
  add_method(simulate);
  add_seed(simulate);
  simulate->add_option("--trials", opt.trials, "Monte Carlo trials per class")
      ->capture_default_str();

  CLI::App* presets = app.add_subcommand("presets", "sweep a built-in benchmark instance");
  presets->add_option("name", opt.preset, "fig3, fig4 or fig5")->required();
  add_io(presets, false);
  add_grid(presets);
  add_seed(presets);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(solve)) return cmd_solve(opt);
    if (app.got_subcommand(sweep)) return cmd_sweep(opt);
    if (app.got_subcommand(bound)) return cmd_bound(opt);
    if (app.got_subcommand(threshold)) return cmd_threshold(opt);
    if (app.got_subcommand(supernode)) return cmd_supernode(opt);
    if (app.got_subcommand(simulate)) return cmd_simulate(opt);
    if (app.got_subcommand(presets)) return cmd_presets(opt);
    std::cerr << "no command selected\n";
    return 2;
  } catch (const msalloc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const msalloc::TooLargeError& e) {
    std::cerr << "size cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return 2;
  }
}
