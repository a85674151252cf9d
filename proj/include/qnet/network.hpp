#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qnet/stochastic.hpp"

namespace qnet {

struct NodeSpec {
  int id = 0;  // 1..N, in order
  int initial_customers = 0;
  ServiceFamily service;
  RoutingDistribution routing;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct NetworkSpec {
  std::vector<NodeSpec> nodes;
  int horizon_L = 0;  // routing decisions provisioned per node
  ParameterDomain theta_domain;
  int tagged_node = 0;
  int completions_K = 0;  // stop at this many departures from tagged_node

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// A NetworkSpec that passed validate_network. Construction is the proof:
// downstream code takes ValidatedNetwork and never re-checks.
class ValidatedNetwork {
 public:
  const NetworkSpec& spec() const { return spec_; }
  int node_count() const { return static_cast<int>(spec_.nodes.size()); }
  int horizon() const { return spec_.horizon_L; }
  int tagged_node() const { return spec_.tagged_node; }
  int completions() const { return spec_.completions_K; }
  const ParameterDomain& theta_domain() const { return spec_.theta_domain; }
  const NodeSpec& node(int id) const { return spec_.nodes[static_cast<std::size_t>(id - 1)]; }
  int total_population() const;

  friend bool operator==(const ValidatedNetwork&, const ValidatedNetwork&) = default;

 private:
  friend ValidatedNetwork validate_network(NetworkSpec spec);
  explicit ValidatedNetwork(NetworkSpec spec) : spec_(std::move(spec)) {}
  NetworkSpec spec_;
};

// Probabilities must clear this margin everywhere on the theta domain.
inline constexpr double kProbabilityMargin = 1e-9;

ValidatedNetwork validate_network(NetworkSpec spec);

// One realized routing decision per (node, k), k = 1..horizon, row-major.
struct RoutingTable {
  int num_nodes = 0;
  int horizon = 0;
  std::vector<int> entries;

  static RoutingTable zeros(int num_nodes, int horizon) {
    return {num_nodes, horizon,
            std::vector<int>(static_cast<std::size_t>(num_nodes) * static_cast<std::size_t>(horizon), 0)};
  }
  int at(int node, int k) const {
    return entries[static_cast<std::size_t>(node - 1) * static_cast<std::size_t>(horizon) +
                   static_cast<std::size_t>(k - 1)];
  }
  int& at(int node, int k) {
    return entries[static_cast<std::size_t>(node - 1) * static_cast<std::size_t>(horizon) +
                   static_cast<std::size_t>(k - 1)];
  }
  friend bool operator==(const RoutingTable&, const RoutingTable&) = default;
};

// All tables with positive probability, in row-major entry order with targets
// ascending within each entry. Throws SupportTooLarge past the cap.
std::vector<RoutingTable> enumerate_routing_tables(const ValidatedNetwork& net,
                                                   std::size_t cap = 1'000'000);

// Product likelihood over every entry of the table.
double table_likelihood(const ValidatedNetwork& net, double theta, const RoutingTable& table);

// Sum of per-decision scores over the first counts[n] entries of each row
// (counts in node order). The overload without counts scores the full table.
double table_score(const ValidatedNetwork& net, double theta, const RoutingTable& table,
                   std::span<const int> counts);
double table_score(const ValidatedNetwork& net, double theta, const RoutingTable& table);

// Strict JSON loading: unknown keys anywhere are an error.
NetworkSpec parse_network_spec(const std::string& json_text);
NetworkSpec load_network_spec(const std::string& path);
std::string network_spec_to_json(const NetworkSpec& spec);

}  // namespace qnet
