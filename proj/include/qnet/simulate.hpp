#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qnet/network.hpp"
#include "qnet/rng.hpp"
#include "qnet/tangent.hpp"

namespace qnet {

// Everything one node saw during a run. services can be longer than
// departures: a service in progress when the run stops was sampled but never
// completed. routes has one entry per processed departure except the stopping
// one, which consumes no decision.
struct NodeTrace {
  std::vector<Tangent> arrivals;  // includes the initial zero-tangent customers
  std::vector<Tangent> departures;
  std::vector<Tangent> services;
  std::vector<int> routes;
};

struct Trajectory {
  std::vector<NodeTrace> node_traces;  // index id-1
  int stop_node = 0;
  int stop_count = 0;
  long long tie_count = 0;
  // Hash of every (node, k, start-max winner, route) in event order. Two runs
  // with equal hashes followed the same branch decisions, which is what makes
  // a finite-difference pair comparable to the pathwise derivative.
  std::uint64_t branch_hash = 0;

  const NodeTrace& node(int id) const { return node_traces[static_cast<std::size_t>(id - 1)]; }
  std::vector<int> decision_counts() const;
};

// Service-time source for one run: (node, k) -> tangent of the k-th service
// initiated at that node.
using ServiceSource = std::function<Tangent(int node, int k)>;

struct SimResult {
  Trajectory trajectory;
  RoutingTable table;
};

// Draws the full N x horizon table up front from per-(node, k) substreams.
// Decisions never realized by the run still exist, so fixed-horizon scores are
// well defined and a decision's uniform never depends on event order.
RoutingTable draw_routing_table(const ValidatedNetwork& net, double theta,
                                const RandomStream& stream, std::uint64_t replication);

// Event-driven run until the completions_K-th departure from the tagged node.
// Events are processed in (time, node, departure index) order. Throws
// Starvation when the tagged node is unreachable from every customer-holding
// node (and, defensively, if the event queue ever drains), HorizonExceeded
// when any node demands a routing decision beyond the horizon.
Trajectory simulate_with_table(const ValidatedNetwork& net, const RoutingTable& table,
                               const ServiceSource& services);

SimResult simulate_network(const ValidatedNetwork& net, double theta, const RandomStream& stream,
                           std::uint64_t replication);

struct RecursionCheck {
  bool ok = true;
  std::string message;
};

// Recomputes every node's departures from its recorded arrivals and services
// and every node's routed-arrival stream from the recorded departures and
// routes, then compares bit for bit against the trajectory.
RecursionCheck trajectory_satisfies_recursions(const Trajectory& traj, const ValidatedNetwork& net);

}  // namespace qnet
