#include "qnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qnet/errors.hpp"

namespace qnet {

int ValidatedNetwork::total_population() const {
  int total = 0;
  for (const NodeSpec& n : spec_.nodes) total += n.initial_customers;
  return total;
}

namespace {

// Sums of probability coefficients must close exactly up to parse rounding.
constexpr double kCoefficientSlack = 1e-12;

void validate_routing(const NodeSpec& node, int num_nodes, const ParameterDomain& domain) {
  const RoutingDistribution& d = node.routing;
  const std::string where = "node " + std::to_string(node.id) + " routing";
  if (d.targets.empty()) fail(Errc::invalid_topology, where + ": no targets");
  if (d.base.size() != d.targets.size())
    fail(Errc::invalid_probability, where + ": coefficient count != target count");
  const bool affine = d.kind == RoutingDistribution::Kind::affine;
  if (affine && d.slope.size() != d.targets.size())
    fail(Errc::invalid_probability, where + ": slope count != target count");
  if (!affine && !d.slope.empty())
    fail(Errc::invalid_probability, where + ": constant routing has no slopes");

  for (std::size_t i = 0; i < d.targets.size(); ++i) {
    if (d.targets[i] < 1 || d.targets[i] > num_nodes)
      fail(Errc::invalid_topology, where + ": target out of range");
    if (i > 0 && d.targets[i] <= d.targets[i - 1])
      fail(Errc::invalid_topology, where + ": targets must be strictly ascending");
  }

  const double base_sum = std::accumulate(d.base.begin(), d.base.end(), 0.0);
  if (std::abs(base_sum - 1.0) > kCoefficientSlack)
    fail(Errc::invalid_probability, where + ": probabilities do not sum to 1");
  if (affine) {
    const double slope_sum = std::accumulate(d.slope.begin(), d.slope.end(), 0.0);
    if (std::abs(slope_sum) > kCoefficientSlack)
      fail(Errc::invalid_probability, where + ": slopes do not sum to 0");
  }

  // Probabilities are affine in theta, so endpoint checks cover the interval.
  for (std::size_t i = 0; i < d.targets.size(); ++i) {
    for (double theta : {domain.lo, domain.hi}) {
      double p = d.base[i];
      if (affine) p += d.slope[i] * theta;
      if (p < kProbabilityMargin)
        fail(Errc::invalid_probability,
             where + ": probability of target " + std::to_string(d.targets[i]) +
                 " drops below margin on the theta domain");
    }
  }
}

void validate_service(const NodeSpec& node, const ParameterDomain& domain) {
  const ServiceFamily& f = node.service;
  const std::string where = "node " + std::to_string(node.id) + " service";
  const ServiceBounds b = service_bounds(f, domain);
  switch (f.kind) {
    case ServiceFamily::Kind::shifted_uniform:
      if (f.width < 0.0) fail(Errc::invalid_service, where + ": negative width");
      if (b.value_lo <= 0.0)
        fail(Errc::invalid_service, where + ": values not positive on the theta domain");
      break;
    case ServiceFamily::Kind::exponential_scale:
      if (domain.lo <= 0.0)
        fail(Errc::invalid_service, where + ": scale requires theta > 0 on the whole domain");
      break;
    case ServiceFamily::Kind::deterministic:
      if (b.value_lo < 0.0)
        fail(Errc::invalid_service, where + ": negative service time on the theta domain");
      break;
  }
}

}  // namespace

ValidatedNetwork validate_network(NetworkSpec spec) {
  const int n = static_cast<int>(spec.nodes.size());
  if (n == 0) fail(Errc::invalid_topology, "network has no nodes");
  for (int i = 0; i < n; ++i) {
    if (spec.nodes[static_cast<std::size_t>(i)].id != i + 1)
      fail(Errc::invalid_topology, "node ids must be 1..N in order");
    if (spec.nodes[static_cast<std::size_t>(i)].initial_customers < 0)
      fail(Errc::invalid_topology, "negative initial customer count");
  }
  if (!(spec.theta_domain.lo < spec.theta_domain.hi))
    fail(Errc::invalid_domain, "theta domain is empty");
  if (spec.tagged_node < 1 || spec.tagged_node > n)
    fail(Errc::invalid_topology, "tagged node out of range");

  int population = 0;
  for (const NodeSpec& node : spec.nodes) population += node.initial_customers;
  if (population == 0) fail(Errc::empty_population, "no customers anywhere");

  if (spec.completions_K < 1) fail(Errc::horizon_too_small, "completions_K must be >= 1");
  if (spec.horizon_L < spec.completions_K)
    fail(Errc::horizon_too_small, "horizon_L must be >= completions_K");

  for (const NodeSpec& node : spec.nodes) {
    validate_service(node, spec.theta_domain);
    validate_routing(node, n, spec.theta_domain);
  }
  return ValidatedNetwork(std::move(spec));
}

std::vector<RoutingTable> enumerate_routing_tables(const ValidatedNetwork& net, std::size_t cap) {
  const int n = net.node_count();
  const int horizon = net.horizon();
  const std::size_t num_entries = static_cast<std::size_t>(n) * static_cast<std::size_t>(horizon);

  std::size_t count = 1;
  for (int node = 1; node <= n; ++node) {
    const std::size_t support = net.node(node).routing.targets.size();
    for (int k = 0; k < horizon; ++k) {
      if (count > cap / support)
        fail(Errc::support_too_large, "routing table family exceeds enumeration cap");
      count *= support;
    }
  }

  std::vector<RoutingTable> tables;
  tables.reserve(count);
  // Row-major odometer; the last entry varies fastest, targets ascend within
  // each position.
  std::vector<std::size_t> digit(num_entries, 0);
  for (;;) {
    RoutingTable t = RoutingTable::zeros(n, horizon);
    std::size_t e = 0;
    for (int node = 1; node <= n; ++node)
      for (int k = 1; k <= horizon; ++k)
        t.at(node, k) = net.node(node).routing.targets[digit[e++]];
    tables.push_back(std::move(t));

    std::size_t pos = num_entries;
    while (pos > 0) {
      --pos;
      const int node = static_cast<int>(pos) / horizon + 1;
      if (++digit[pos] < net.node(node).routing.targets.size()) break;
      digit[pos] = 0;
      if (pos == 0) return tables;
    }
  }
}

double table_likelihood(const ValidatedNetwork& net, double theta, const RoutingTable& table) {
  double product = 1.0;
  for (int node = 1; node <= net.node_count(); ++node)
    for (int k = 1; k <= table.horizon; ++k)
      product *= routing_pmf(net.node(node).routing, theta, table.at(node, k));
  return product;
}

double table_score(const ValidatedNetwork& net, double theta, const RoutingTable& table,
                   std::span<const int> counts) {
  double sum = 0.0;
  for (int node = 1; node <= net.node_count(); ++node) {
    const int limit = counts[static_cast<std::size_t>(node - 1)];
    for (int k = 1; k <= limit; ++k)
      sum += routing_score(net.node(node).routing, theta, table.at(node, k));
  }
  return sum;
}

double table_score(const ValidatedNetwork& net, double theta, const RoutingTable& table) {
  std::vector<int> full(static_cast<std::size_t>(net.node_count()), table.horizon);
  return table_score(net, theta, table, full);
}

}  // namespace qnet
