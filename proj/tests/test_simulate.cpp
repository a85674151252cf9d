#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "qnet/errors.hpp"
#include "qnet/models.hpp"
#include "qnet/simulate.hpp"

using qnet::NetworkSpec;
using qnet::Tangent;

namespace {

NetworkSpec deterministic_cycle() {
  NetworkSpec spec;
  qnet::ServiceFamily s1, s2;
  s1.kind = qnet::ServiceFamily::Kind::deterministic;
  s1.offset = 1.0;
  s2.kind = qnet::ServiceFamily::Kind::deterministic;
  s2.offset = 2.0;
  qnet::RoutingDistribution to2, to1;
  to2.kind = qnet::RoutingDistribution::Kind::constant;
  to2.targets = {2};
  to2.base = {1.0};
  to1.kind = qnet::RoutingDistribution::Kind::constant;
  to1.targets = {1};
  to1.base = {1.0};
  spec.nodes = {{1, 1, s1, to2}, {2, 0, s2, to1}};
  spec.horizon_L = 2;
  spec.theta_domain = {0.1, 0.9};
  spec.tagged_node = 1;
  spec.completions_K = 2;
  return spec;
}

// Node 1 serves in 1+theta, node 2 in exactly 1.5. At theta = 0.5 the
// returning customer reaches node 1 in the same instant node 1 finishes its
// second initial customer, so the start-of-service max ties with different
// derivatives on each side.
NetworkSpec colliding_cycle() {
  NetworkSpec spec = deterministic_cycle();
  spec.nodes[0].initial_customers = 2;
  spec.nodes[0].service.theta_slope = 1.0;
  spec.nodes[1].service.offset = 1.5;
  spec.horizon_L = 3;
  spec.completions_K = 3;
  return spec;
}

}  // namespace

TEST_CASE("deterministic cycle produces the hand computed trajectory") {
  const auto net = qnet::validate_network(deterministic_cycle());
  const qnet::RandomStream stream{0};
  const auto run = qnet::simulate_network(net, 0.5, stream, 0);
  const auto& n1 = run.trajectory.node(1);
  const auto& n2 = run.trajectory.node(2);

  CHECK(n1.departures == std::vector<Tangent>{{1, 0}, {4, 0}});
  CHECK(n2.departures == std::vector<Tangent>{{3, 0}});
  CHECK(n1.arrivals == std::vector<Tangent>{{0, 0}, {3, 0}});
  CHECK(n2.arrivals == std::vector<Tangent>{{1, 0}});
  CHECK(n1.routes == std::vector<int>{2});
  CHECK(n2.routes == std::vector<int>{1});
  CHECK(run.trajectory.stop_node == 1);
  CHECK(run.trajectory.stop_count == 2);
  CHECK(run.trajectory.tie_count == 0);
  CHECK(run.trajectory.decision_counts() == std::vector<int>{1, 1});

  const auto check = qnet::trajectory_satisfies_recursions(run.trajectory, net);
  CHECK(check.ok);
}

TEST_CASE("simultaneous arrival and completion counts a derivative tie") {
  const auto net = qnet::validate_network(colliding_cycle());
  const qnet::RandomStream stream{0};
  const auto run = qnet::simulate_network(net, 0.5, stream, 0);
  const auto& n1 = run.trajectory.node(1);

  CHECK(n1.departures == std::vector<Tangent>{{1.5, 1}, {3.0, 2}, {4.5, 2}});
  CHECK(run.trajectory.node(2).departures == std::vector<Tangent>{{3.0, 1}});
  CHECK(run.trajectory.tie_count == 2);  // node 1 restart and node 2 restart collide
  CHECK(qnet::trajectory_satisfies_recursions(run.trajectory, net).ok);
}

TEST_CASE("same labels reproduce the trajectory bit for bit") {
  const auto net = qnet::validate_network(qnet::three_node_mixed_spec(6));
  const qnet::RandomStream stream{99};
  const auto a = qnet::simulate_network(net, 0.37, stream, 5);
  const auto b = qnet::simulate_network(net, 0.37, stream, 5);
  CHECK(a.table == b.table);
  CHECK(a.trajectory.branch_hash == b.trajectory.branch_hash);
  for (int node = 1; node <= net.node_count(); ++node) {
    CHECK(a.trajectory.node(node).departures == b.trajectory.node(node).departures);
    CHECK(a.trajectory.node(node).arrivals == b.trajectory.node(node).arrivals);
    CHECK(a.trajectory.node(node).services == b.trajectory.node(node).services);
    CHECK(a.trajectory.node(node).routes == b.trajectory.node(node).routes);
  }

  const auto c = qnet::simulate_network(net, 0.37, stream, 6);
  CHECK(a.trajectory.node(1).departures != c.trajectory.node(1).departures);
}

TEST_CASE("every sampled trajectory satisfies the recursion checker") {
  for (const NetworkSpec& spec :
       {qnet::toy_network_spec(), qnet::two_node_affine_spec(), qnet::cycle3_spec(),
        qnet::three_node_mixed_spec()}) {
    const auto net = qnet::validate_network(spec);
    const qnet::RandomStream stream{7};
    const double mid = 0.5 * (net.theta_domain().lo + net.theta_domain().hi);
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
      const auto run = qnet::simulate_network(net, mid, stream, rep);
      const auto check = qnet::trajectory_satisfies_recursions(run.trajectory, net);
      REQUIRE_MESSAGE(check.ok, check.message);
    }
  }
}

TEST_CASE("checker flags a tampered trajectory") {
  const auto net = qnet::validate_network(deterministic_cycle());
  const qnet::RandomStream stream{0};

  auto run = qnet::simulate_network(net, 0.5, stream, 0);
  run.trajectory.node_traces[0].routes[0] = 1;  // reroute after the fact
  CHECK_FALSE(qnet::trajectory_satisfies_recursions(run.trajectory, net).ok);

  run = qnet::simulate_network(net, 0.5, stream, 0);
  run.trajectory.node_traces[0].departures[1].value += 1e-9;
  CHECK_FALSE(qnet::trajectory_satisfies_recursions(run.trajectory, net).ok);

  run = qnet::simulate_network(net, 0.5, stream, 0);
  run.trajectory.node_traces[1].arrivals[0].deriv = 5.0;
  CHECK_FALSE(qnet::trajectory_satisfies_recursions(run.trajectory, net).ok);
}

TEST_CASE("unreachable tagged node is starvation, exhausted decisions are not") {
  NetworkSpec spec = deterministic_cycle();
  spec.nodes[0].initial_customers = 0;
  spec.nodes[1].initial_customers = 1;
  spec.nodes[0].routing.targets = {1};  // both nodes loop on themselves
  spec.nodes[1].routing.targets = {2};
  const auto island = qnet::validate_network(spec);
  const qnet::RandomStream stream{0};
  try {
    static_cast<void>(qnet::simulate_network(island, 0.5, stream, 0));
    FAIL("expected Starvation");
  } catch (const qnet::Error& e) {
    CHECK(e.code() == qnet::Errc::starvation);
  }

  NetworkSpec sink = deterministic_cycle();
  sink.nodes[1].routing.targets = {2};  // node 2 keeps the customer forever
  sink.horizon_L = 3;
  const auto trapped = qnet::validate_network(sink);
  try {
    static_cast<void>(qnet::simulate_network(trapped, 0.5, stream, 0));
    FAIL("expected HorizonExceeded");
  } catch (const qnet::Error& e) {
    CHECK(e.code() == qnet::Errc::horizon_exceeded);
  }
}

TEST_CASE("branch hash separates runs that made different decisions") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  const qnet::RandomStream stream{1};
  std::uint64_t to_self = 0, to_other = 0;
  for (std::uint64_t rep = 0; rep < 64 && (to_self == 0 || to_other == 0); ++rep) {
    const auto run = qnet::simulate_network(net, 0.5, stream, rep);
    if (run.trajectory.node(1).routes[0] == 1)
      to_self = run.trajectory.branch_hash;
    else
      to_other = run.trajectory.branch_hash;
  }
  REQUIRE(to_self != 0);
  REQUIRE(to_other != 0);
  CHECK(to_self != to_other);
}

TEST_CASE("pre drawn table pins every decision of the run") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  auto table = qnet::RoutingTable::zeros(2, 2);
  table.at(1, 1) = 2;
  table.at(1, 2) = 2;
  table.at(2, 1) = 1;
  table.at(2, 2) = 1;
  const qnet::ServiceSource unit = [](int, int) { return Tangent{1.0, 0.0}; };
  const auto traj = qnet::simulate_with_table(net, table, unit);
  CHECK(traj.node(1).routes == std::vector<int>{2});
  CHECK(traj.node(2).departures == std::vector<Tangent>{{2, 0}});
  CHECK(traj.node(1).departures == std::vector<Tangent>{{1, 0}, {3, 0}});
}
