#include "qnet/simulate.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <string>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/recursions.hpp"

namespace qnet {

std::vector<int> Trajectory::decision_counts() const {
  std::vector<int> counts;
  counts.reserve(node_traces.size());
  for (const NodeTrace& t : node_traces) counts.push_back(static_cast<int>(t.routes.size()));
  return counts;
}

RoutingTable draw_routing_table(const ValidatedNetwork& net, double theta,
                                const RandomStream& stream, std::uint64_t replication) {
  RoutingTable table = RoutingTable::zeros(net.node_count(), net.horizon());
  for (int node = 1; node <= net.node_count(); ++node) {
    const RoutingDistribution& dist = net.node(node).routing;
    for (int k = 1; k <= net.horizon(); ++k) {
      const double u = stream.uniform(replication, static_cast<std::uint32_t>(node),
                                      Purpose::routing, static_cast<std::uint32_t>(k));
      table.at(node, k) = sample_route(dist, theta, u);
    }
  }
  return table;
}

namespace {

struct DepartureEvent {
  Tangent when;
  int node = 0;
  int k = 0;  // departure index at the node
};

// Simultaneous completions are ordered by node, then by departure index.
struct LaterEvent {
  bool operator()(const DepartureEvent& a, const DepartureEvent& b) const {
    if (a.when.value != b.when.value) return a.when.value > b.when.value;
    if (a.node != b.node) return a.node > b.node;
    return a.k > b.k;
  }
};

struct NodeState {
  std::deque<Tangent> waiting;  // arrived, not yet in service
  bool busy = false;
  int services_started = 0;
  Tangent last_departure{0.0, 0.0};
};

struct BranchHasher {
  std::uint64_t h = 1469598103934665603ULL;
  void mix(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
};

// Tagged node must be reachable in the routing support graph from some node
// holding customers, otherwise its completion count can never advance.
void check_tagged_reachable(const ValidatedNetwork& net) {
  const int n = net.node_count();
  std::vector<char> seen(static_cast<std::size_t>(n + 1), 0);
  std::deque<int> frontier;
  for (int node = 1; node <= n; ++node) {
    if (net.node(node).initial_customers > 0) {
      seen[static_cast<std::size_t>(node)] = 1;
      frontier.push_back(node);
    }
  }
  while (!frontier.empty()) {
    const int node = frontier.front();
    frontier.pop_front();
    for (int target : net.node(node).routing.targets) {
      if (!seen[static_cast<std::size_t>(target)]) {
        seen[static_cast<std::size_t>(target)] = 1;
        frontier.push_back(target);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(net.tagged_node())])
    fail(Errc::starvation, "no customer can ever reach the tagged node");
}

}  // namespace

Trajectory simulate_with_table(const ValidatedNetwork& net, const RoutingTable& table,
                               const ServiceSource& services) {
  check_tagged_reachable(net);

  const int n = net.node_count();
  Trajectory traj;
  traj.node_traces.resize(static_cast<std::size_t>(n));
  traj.stop_node = net.tagged_node();
  traj.stop_count = net.completions();

  std::vector<NodeState> state(static_cast<std::size_t>(n));
  std::priority_queue<DepartureEvent, std::vector<DepartureEvent>, LaterEvent> events;
  BranchHasher hasher;

  auto start_service = [&](int node) {
    NodeState& s = state[static_cast<std::size_t>(node - 1)];
    NodeTrace& trace = traj.node_traces[static_cast<std::size_t>(node - 1)];
    const Tangent head = s.waiting.front();
    s.waiting.pop_front();
    const int j = ++s.services_started;
    const Tangent tau = services(node, j);
    trace.services.push_back(tau);
    // start = max(arrival, previous departure); on a value tie the arrival's
    // tangent wins, matching the recursion's operand order.
    const Tangent begin = tmax(head, s.last_departure, &traj.tie_count);
    hasher.mix((static_cast<std::uint64_t>(node) << 32) | static_cast<std::uint64_t>(j));
    hasher.mix(head.value >= s.last_departure.value ? 1 : 0);
    events.push({begin + tau, node, j});
    s.busy = true;
  };

  for (int node = 1; node <= n; ++node) {
    NodeState& s = state[static_cast<std::size_t>(node - 1)];
    NodeTrace& trace = traj.node_traces[static_cast<std::size_t>(node - 1)];
    for (int c = 0; c < net.node(node).initial_customers; ++c) {
      trace.arrivals.push_back({0.0, 0.0});
      s.waiting.push_back({0.0, 0.0});
    }
    if (!s.waiting.empty()) start_service(node);
  }

  for (;;) {
    if (events.empty()) fail(Errc::starvation, "event queue drained before the stopping completion");
    const DepartureEvent ev = events.top();
    events.pop();
    NodeState& s = state[static_cast<std::size_t>(ev.node - 1)];
    NodeTrace& trace = traj.node_traces[static_cast<std::size_t>(ev.node - 1)];

    s.busy = false;
    trace.departures.push_back(ev.when);
    s.last_departure = ev.when;

    if (ev.node == net.tagged_node() && ev.k == net.completions()) break;

    if (ev.k > net.horizon())
      fail(Errc::horizon_exceeded, "node " + std::to_string(ev.node) + " needs routing decision " +
                                       std::to_string(ev.k) + " beyond horizon " +
                                       std::to_string(net.horizon()));
    const int target = table.at(ev.node, ev.k);
    trace.routes.push_back(target);
    hasher.mix((static_cast<std::uint64_t>(ev.node) << 32) | static_cast<std::uint64_t>(ev.k));
    hasher.mix(static_cast<std::uint64_t>(target));

    NodeState& ts = state[static_cast<std::size_t>(target - 1)];
    NodeTrace& ttrace = traj.node_traces[static_cast<std::size_t>(target - 1)];
    ttrace.arrivals.push_back(ev.when);
    ts.waiting.push_back(ev.when);
    if (!ts.busy) start_service(target);

    if (!s.busy && !s.waiting.empty()) start_service(ev.node);
  }

  traj.branch_hash = hasher.h;
  return traj;
}

SimResult simulate_network(const ValidatedNetwork& net, double theta, const RandomStream& stream,
                           std::uint64_t replication) {
  RoutingTable table = draw_routing_table(net, theta, stream, replication);
  const ServiceSource source = [&](int node, int k) {
    const double u = stream.uniform(replication, static_cast<std::uint32_t>(node),
                                    Purpose::service, static_cast<std::uint32_t>(k));
    return sample_service(net.node(node).service, theta, u);
  };
  Trajectory traj = simulate_with_table(net, table, source);
  return {std::move(traj), std::move(table)};
}

namespace {

struct RoutedDeparture {
  Tangent when;
  int source = 0;
  int k = 0;
};

}  // namespace

RecursionCheck trajectory_satisfies_recursions(const Trajectory& traj,
                                               const ValidatedNetwork& net) {
  const int n = net.node_count();
  if (static_cast<int>(traj.node_traces.size()) != n)
    return {false, "trace has wrong node count"};

  for (int node = 1; node <= n; ++node) {
    const NodeTrace& trace = traj.node(node);
    const std::size_t completed = trace.departures.size();
    if (trace.arrivals.size() < completed)
      return {false, "node " + std::to_string(node) + ": fewer arrivals than departures"};
    if (trace.services.size() < completed)
      return {false, "node " + std::to_string(node) + ": fewer services than departures"};

    const std::size_t expected_routes =
        node == traj.stop_node && completed == static_cast<std::size_t>(traj.stop_count)
            ? completed - 1
            : completed;
    if (trace.routes.size() != expected_routes)
      return {false, "node " + std::to_string(node) + ": route count mismatch"};

    for (int c = 0; c < net.node(node).initial_customers; ++c) {
      if (static_cast<std::size_t>(c) >= trace.arrivals.size()) break;
      if (!(trace.arrivals[static_cast<std::size_t>(c)] == Tangent{0.0, 0.0}))
        return {false, "node " + std::to_string(node) + ": initial arrival " +
                           std::to_string(c + 1) + " is not zero"};
    }

    const std::span<const Tangent> arrivals(trace.arrivals.data(), completed);
    const std::span<const Tangent> services(trace.services.data(), completed);
    const std::vector<Tangent> expected = gg1_departures(arrivals, services);
    for (std::size_t k = 0; k < completed; ++k) {
      if (!(expected[k] == trace.departures[k]))
        return {false, "node " + std::to_string(node) + ": departure " + std::to_string(k + 1) +
                           " violates the single-server recursion"};
    }
  }

  // Rebuild every node's routed-arrival stream from the recorded departures
  // and routes: k-th real arrival = k-th order statistic of the departures
  // routed to it, simultaneous ones ordered by (source node, departure index).
  std::vector<std::vector<RoutedDeparture>> inbound(static_cast<std::size_t>(n));
  for (int node = 1; node <= n; ++node) {
    const NodeTrace& trace = traj.node(node);
    for (std::size_t k = 0; k < trace.routes.size(); ++k) {
      const int target = trace.routes[k];
      if (target < 1 || target > n)
        return {false, "node " + std::to_string(node) + ": route to nonexistent node"};
      inbound[static_cast<std::size_t>(target - 1)].push_back(
          {trace.departures[k], node, static_cast<int>(k + 1)});
    }
  }
  for (int node = 1; node <= n; ++node) {
    auto& arrivals = inbound[static_cast<std::size_t>(node - 1)];
    std::sort(arrivals.begin(), arrivals.end(), [](const RoutedDeparture& a, const RoutedDeparture& b) {
      if (a.when.value != b.when.value) return a.when.value < b.when.value;
      if (a.source != b.source) return a.source < b.source;
      return a.k < b.k;
    });
    const NodeTrace& trace = traj.node(node);
    const int initial = net.node(node).initial_customers;
    if (trace.arrivals.size() != arrivals.size() + static_cast<std::size_t>(initial))
      return {false, "node " + std::to_string(node) + ": arrival count does not match routed departures"};
    for (std::size_t k = 0; k < trace.arrivals.size(); ++k) {
      const Tangent expected =
          k < static_cast<std::size_t>(initial) ? Tangent{0.0, 0.0} : arrivals[k - initial].when;
      if (!(expected == trace.arrivals[k]))
        return {false, "node " + std::to_string(node) + ": arrival " + std::to_string(k + 1) +
                           " does not match the routed departure stream"};
    }
  }
  return {true, ""};
}

}  // namespace qnet
