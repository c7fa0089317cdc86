#pragma once
// JSON document schema for problem instances and result reports.
//
// Instance documents are strict: unknown fields are rejected so typos
// fail loudly instead of silently running a different experiment.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "msalloc/model.hpp"
#include "msalloc/supernode.hpp"

namespace msalloc {

struct ProblemDocument {
  ProblemInstance problem;
  std::optional<std::vector<int>> capacities;
};

namespace detail {

inline void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) ok = true;
    if (!ok) throw std::invalid_argument(where + ": unknown field '" + item.key() + "'");
  }
}

inline double require_number(const nlohmann::json& obj, const char* key,
                             const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw std::invalid_argument(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline int require_integer(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing field '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw std::invalid_argument(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace detail

inline ProblemDocument problem_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("document: must be a JSON object");
  detail::require_keys(doc, {"nodes", "p", "classes", "capacities"}, "document");

  ProblemDocument out;
  out.problem.node_count = detail::require_integer(doc, "nodes", "document");
  out.problem.access_success = detail::require_number(doc, "p", "document");

  if (!doc.contains("classes") || !doc.at("classes").is_array())
    throw std::invalid_argument("document: field 'classes' must be an array");
  int index = 0;
  for (const auto& entry : doc.at("classes")) {
    const std::string where = "classes[" + std::to_string(index) + "]";
    if (!entry.is_object()) throw std::invalid_argument(where + ": must be an object");
    detail::require_keys(entry, {"weight", "budget", "min_success", "min_nodes"}, where);
    DataClass c;
    c.weight = detail::require_number(entry, "weight", where);
    c.budget = detail::require_number(entry, "budget", where);
    if (entry.contains("min_success"))
      c.min_success = detail::require_number(entry, "min_success", where);
    if (entry.contains("min_nodes")) {
      if (c.min_success != 0.0)
        throw std::invalid_argument(where + ": min_nodes and min_success are exclusive");
      c.min_nodes = detail::require_integer(entry, "min_nodes", where);
    }
    out.problem.classes.push_back(c);
    ++index;
  }
  out.problem.validate();

  if (doc.contains("capacities")) {
    const auto& arr = doc.at("capacities");
    if (!arr.is_array()) throw std::invalid_argument("document: 'capacities' must be an array");
    std::vector<int> caps;
    for (const auto& v : arr) {
      if (!v.is_number_integer())
        throw std::invalid_argument("document: capacities must be integers");
      caps.push_back(v.get<int>());
    }
    if (static_cast<int>(caps.size()) != out.problem.node_count)
      throw std::invalid_argument("document: capacities length must equal nodes");
    for (std::size_t n = 0; n < caps.size(); ++n)
      if (caps[n] < 1)
        throw std::invalid_argument("document: capacities[" + std::to_string(n) + "] must be >= 1");
    out.capacities = std::move(caps);
  }
  return out;
}

inline nlohmann::json problem_to_json(const ProblemDocument& doc) {
  nlohmann::json j;
  j["nodes"] = doc.problem.node_count;
  j["p"] = doc.problem.access_success;
  nlohmann::json classes = nlohmann::json::array();
  for (const DataClass& c : doc.problem.classes) {
    nlohmann::json e;
    e["weight"] = c.weight;
    e["budget"] = c.budget;
    if (c.min_nodes)
      e["min_nodes"] = *c.min_nodes;
    else
      e["min_success"] = c.min_success;
    classes.push_back(e);
  }
  j["classes"] = classes;
  if (doc.capacities) j["capacities"] = *doc.capacities;
  return j;
}

inline ProblemDocument load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read input file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return problem_from_json(nlohmann::json::parse(buffer.str()));
}

inline nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["allocation"] = report.allocation.counts;
  j["per_class_success"] = report.per_class_success;
  j["weighted_sum"] = report.weighted_sum;
  j["min_objective"] = report.min_objective;
  j["method"] = method_name(report.method);
  j["trace"] = report.trace;
  return j;
}

inline nlohmann::json placement_to_json(const SuperNodePlacement& placement,
                                        const SolveReport& report) {
  nlohmann::json j = report_to_json(report);
  j["placement"] = placement.assignment;
  return j;
}

}  // namespace msalloc
