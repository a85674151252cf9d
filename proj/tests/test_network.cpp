#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qnet/errors.hpp"
#include "qnet/models.hpp"
#include "qnet/network.hpp"

using qnet::Errc;
using qnet::NetworkSpec;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const qnet::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::bad_config;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("built-in models validate") {
  CHECK_NOTHROW(qnet::validate_network(qnet::toy_network_spec()));
  CHECK_NOTHROW(qnet::validate_network(qnet::two_node_affine_spec()));
  CHECK_NOTHROW(qnet::validate_network(qnet::cycle3_spec()));
  CHECK_NOTHROW(qnet::validate_network(qnet::three_node_mixed_spec()));
  CHECK_NOTHROW(qnet::validate_network(qnet::three_node_mixed_spec(50)));
}

TEST_CASE("validation rejects broken specs with the right category") {
  auto broken = [](auto mutate) {
    NetworkSpec spec = qnet::toy_network_spec();
    mutate(spec);
    return code_of([spec] { qnet::validate_network(spec); });
  };

  CHECK(broken([](NetworkSpec& s) { s.nodes[1].id = 3; }) == Errc::invalid_topology);
  CHECK(broken([](NetworkSpec& s) { s.tagged_node = 5; }) == Errc::invalid_topology);
  CHECK(broken([](NetworkSpec& s) { s.nodes[0].routing.targets = {1, 5}; }) ==
        Errc::invalid_topology);
  CHECK(broken([](NetworkSpec& s) { s.nodes[0].routing.targets = {2, 1}; }) ==
        Errc::invalid_topology);
  CHECK(broken([](NetworkSpec& s) { s.nodes[1].routing.base = {0.9}; }) ==
        Errc::invalid_probability);
  CHECK(broken([](NetworkSpec& s) { s.nodes[0].routing.slope = {1.0, -0.5}; }) ==
        Errc::invalid_probability);
  CHECK(broken([](NetworkSpec& s) { s.theta_domain = {0.0, 0.95}; }) == Errc::invalid_probability);
  CHECK(broken([](NetworkSpec& s) { s.nodes[0].service.width = -1.0; }) == Errc::invalid_service);
  CHECK(broken([](NetworkSpec& s) { s.nodes[1].service.offset = -0.5; }) == Errc::invalid_service);
  CHECK(broken([](NetworkSpec& s) {
          for (auto& n : s.nodes) n.initial_customers = 0;
        }) == Errc::empty_population);
  CHECK(broken([](NetworkSpec& s) { s.completions_K = 3; }) == Errc::horizon_too_small);
  CHECK(broken([](NetworkSpec& s) { s.completions_K = 0; }) == Errc::horizon_too_small);
  CHECK(broken([](NetworkSpec& s) { s.theta_domain = {0.9, 0.1}; }) == Errc::invalid_domain);
}

TEST_CASE("routing table storage is one based and row major") {
  auto t = qnet::RoutingTable::zeros(2, 3);
  t.at(1, 1) = 7;
  t.at(2, 3) = 9;
  CHECK(t.entries[0] == 7);
  CHECK(t.entries[5] == 9);
  CHECK(t.at(1, 1) == 7);
  CHECK(t.at(2, 3) == 9);
}

TEST_CASE("table enumeration covers exactly the positive-probability tables") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  const auto tables = qnet::enumerate_routing_tables(net);
  CHECK(tables.size() == 4);  // node 1 has 2 choices in each of 2 rows, node 2 has 1

  // row-major odometer: the last entry varies fastest
  CHECK(tables[0].at(1, 1) == 1);
  CHECK(tables[0].at(1, 2) == 1);
  CHECK(tables[1].at(1, 1) == 1);
  CHECK(tables[1].at(1, 2) == 2);
  CHECK(tables[3].at(1, 1) == 2);
  for (const auto& t : tables) {
    CHECK(t.at(2, 1) == 1);
    CHECK(t.at(2, 2) == 1);
  }

  CHECK(code_of([&] { qnet::enumerate_routing_tables(net, 3); }) == Errc::support_too_large);
  const auto big = qnet::validate_network(qnet::three_node_mixed_spec());
  CHECK(code_of([&] { qnet::enumerate_routing_tables(big, 1'000'000); }) ==
        Errc::support_too_large);
}

TEST_CASE("table likelihood and score agree with hand computation") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  auto table = qnet::RoutingTable::zeros(2, 2);
  table.at(1, 1) = 1;
  table.at(1, 2) = 1;
  table.at(2, 1) = 1;
  table.at(2, 2) = 1;

  // p(route to 1) = theta at node 1; node 2 routes with probability one
  CHECK(qnet::table_likelihood(net, 0.3, table) == doctest::Approx(0.09).epsilon(1e-15));

  const std::vector<int> counts = {2, 0};
  CHECK(qnet::table_score(net, 0.25, table, counts) == doctest::Approx(8.0).epsilon(1e-15));
  const std::vector<int> one = {1, 2};
  CHECK(qnet::table_score(net, 0.25, table, one) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(qnet::table_score(net, 0.25, table) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("likelihoods of all tables sum to one and scores mix to zero") {
  for (const NetworkSpec& spec : {qnet::toy_network_spec(), qnet::two_node_affine_spec()}) {
    const auto net = qnet::validate_network(spec);
    const auto tables = qnet::enumerate_routing_tables(net);
    for (double theta : {net.theta_domain().lo, 0.5 * (net.theta_domain().lo + net.theta_domain().hi),
                         net.theta_domain().hi}) {
      double total = 0.0;
      double mixed_score = 0.0;
      for (const auto& t : tables) {
        const double lik = qnet::table_likelihood(net, theta, t);

        double log_lik = 0.0;
        for (int node = 1; node <= net.node_count(); ++node)
          for (int k = 1; k <= net.horizon(); ++k)
            log_lik += std::log(qnet::routing_pmf(net.node(node).routing, theta, t.at(node, k)));
        CHECK(lik == doctest::Approx(std::exp(log_lik)).epsilon(1e-12));

        total += lik;
        mixed_score += lik * qnet::table_score(net, theta, t);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(mixed_score == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("spec json round trips through the emitter and parser") {
  for (const NetworkSpec& spec :
       {qnet::toy_network_spec(), qnet::two_node_affine_spec(), qnet::cycle3_spec(),
        qnet::three_node_mixed_spec()}) {
    const NetworkSpec back = qnet::parse_network_spec(qnet::network_spec_to_json(spec));
    CHECK(back == spec);
  }
}

TEST_CASE("shipped spec files match the built-in models") {
  const std::string dir = QNET_SPEC_DIR;
  CHECK(qnet::parse_network_spec(slurp(dir + "/toy.json")) == qnet::toy_network_spec());
  CHECK(qnet::parse_network_spec(slurp(dir + "/two_node_affine.json")) ==
        qnet::two_node_affine_spec());
  CHECK(qnet::parse_network_spec(slurp(dir + "/cycle3.json")) == qnet::cycle3_spec());
  CHECK(qnet::parse_network_spec(slurp(dir + "/three_node.json")) ==
        qnet::three_node_mixed_spec());
  CHECK(qnet::load_network_spec(dir + "/toy.json") == qnet::toy_network_spec());
}

TEST_CASE("parser rejects unknown or missing keys at every level") {
  const std::string good = qnet::network_spec_to_json(qnet::toy_network_spec());
  CHECK_NOTHROW(qnet::parse_network_spec(good));

  auto rejects = [&](const std::string& from, const std::string& to) {
    std::string text = good;
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    CHECK(code_of([&] { qnet::parse_network_spec(text); }) == Errc::bad_config);
  };

  rejects("\"completions_K\"", "\"completions\"");          // unknown root key
  rejects("\"initial_customers\"", "\"customers\"");        // unknown node key
  rejects("\"offset\"", "\"shift\"");                       // unknown service key
  rejects("\"slope\"", "\"gain\"");                         // unknown routing key
  rejects("\"kind\": \"constant\"", "\"kind\": \"table\""); // unknown routing kind
  rejects("\"family\": \"shifted_uniform\"", "\"family\": \"weibull\"");

  CHECK(code_of([&] { qnet::parse_network_spec("{"); }) == Errc::bad_config);
  CHECK(code_of([&] { qnet::parse_network_spec("[1,2]"); }) == Errc::bad_config);

  std::string two_entry_domain = good;
  const auto pos = two_entry_domain.find("\"theta_domain\": [");
  REQUIRE(pos != std::string::npos);
  two_entry_domain.insert(two_entry_domain.find('0', pos), "0.1, ");
  CHECK(code_of([&] { qnet::parse_network_spec(two_entry_domain); }) == Errc::bad_config);
}
