#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "qnet/errors.hpp"
#include "qnet/estimators.hpp"
#include "qnet/models.hpp"

using qnet::CriterionKind;
using qnet::PsiMode;

TEST_CASE("sample summary reduces in index order with the n-1 variance") {
  const std::vector<double> two = {0.0, 2.0};
  const auto s = qnet::mc_summary(two, "tag");
  CHECK(s.estimator == "tag");
  CHECK(s.mean == 1.0);
  CHECK(s.sample_variance == 2.0);
  CHECK(s.reps == 2);
  CHECK(s.ci95_halfwidth == doctest::Approx(1.96).epsilon(1e-15));

  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(qnet::mc_summary(one, "tag"), qnet::Error);
}

TEST_CASE("pathwise-only estimator is exact and degenerate on the branching model") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  for (double theta : {0.25, 0.5, 0.75}) {
    const auto s = qnet::naive_ipa_estimate(net, CriterionKind::raw_service, theta, 200, 0);
    CHECK(s.mean == 1.0);
    CHECK(s.sample_variance == 0.0);
  }
}

TEST_CASE("score-corrected estimator recovers the routing contribution") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  const auto s =
      qnet::corrected_estimate(net, CriterionKind::raw_service, 0.5, 20000, 7, PsiMode::fixed_horizon);
  CHECK(s.estimator == "lr-corrected");
  CHECK(std::abs(s.mean - 2.0) < 0.15);  // d/dtheta E[F] = 2, naive pathwise gives 1
  CHECK(s.mean - 3 * s.ci95_halfwidth < 2.0);
  CHECK(s.mean + 3 * s.ci95_halfwidth > 2.0);
}

TEST_CASE("with constant routing the correction vanishes identically") {
  const auto net = qnet::validate_network(qnet::cycle3_spec());
  const auto naive = qnet::naive_ipa_estimate(net, CriterionKind::system_time, 0.5, 300, 4);
  const auto fixed =
      qnet::corrected_estimate(net, CriterionKind::system_time, 0.5, 300, 4, PsiMode::fixed_horizon);
  const auto online =
      qnet::corrected_estimate(net, CriterionKind::system_time, 0.5, 300, 4, PsiMode::online);
  CHECK(naive.mean == fixed.mean);
  CHECK(naive.mean == online.mean);
  CHECK(naive.sample_variance == fixed.sample_variance);
}

TEST_CASE("replications are reproducible and labelled by index") {
  const auto net = qnet::validate_network(qnet::two_node_affine_spec());
  const qnet::RandomStream stream{11};
  const auto a = qnet::replicate_F(net, CriterionKind::system_time, 0.4, stream, 9);
  const auto b = qnet::replicate_F(net, CriterionKind::system_time, 0.4, stream, 9);
  CHECK(a.value == b.value);
  CHECK(a.table == b.table);
  CHECK(a.decision_counts == b.decision_counts);
  CHECK(a.branch_hash == b.branch_hash);

  const auto c = qnet::replicate_F(net, CriterionKind::system_time, 0.4, stream, 10);
  CHECK(a.value.value != c.value.value);

  CHECK_THROWS_AS(static_cast<void>(qnet::replicate_F(net, CriterionKind::system_time, 0.05,
                                                      stream, 0)),
                  qnet::Error);  // theta outside the domain
}

TEST_CASE("single-pass scalar estimator equals the corrected online estimator per run") {
  const auto net = qnet::validate_network(qnet::three_node_mixed_spec());
  const qnet::RandomStream stream{0};
  for (double theta : {0.2, 0.4, 0.7}) {
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      const auto r = qnet::replicate_F(net, CriterionKind::utilization, theta, stream, rep);
      const double psi = qnet::table_score(net, theta, r.table, r.decision_counts);
      const double corrected = r.value.deriv + r.value.value * psi;
      const double scalar = qnet::online_estimate_alg51(net, theta, stream, rep);
      REQUIRE(std::abs(scalar - corrected) <= 1e-10);
    }
  }
}

TEST_CASE("scalar estimator summary matches the corrected online summary") {
  const auto net = qnet::validate_network(qnet::three_node_mixed_spec());
  const auto a = qnet::alg51_estimate(net, 0.4, 500, 5);
  const auto b =
      qnet::corrected_estimate(net, CriterionKind::utilization, 0.4, 500, 5, PsiMode::online);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.sample_variance == doctest::Approx(b.sample_variance).epsilon(1e-10));
}

TEST_CASE("finite differences under common random numbers track the pathwise derivative") {
  const auto net = qnet::validate_network(qnet::cycle3_spec());
  const auto fd =
      qnet::finite_difference_estimate(net, CriterionKind::system_time, 0.5, 1e-5, 2000, 9, true);
  const auto ipa = qnet::naive_ipa_estimate(net, CriterionKind::system_time, 0.5, 2000, 9);
  CHECK(std::abs(fd.mean - ipa.mean) < 1e-6);

  const auto loose =
      qnet::finite_difference_estimate(net, CriterionKind::system_time, 0.5, 1e-5, 2000, 9, false);
  CHECK(loose.sample_variance > 100 * fd.sample_variance);
}

TEST_CASE("finite differences refuse steps that leave the domain") {
  const auto net = qnet::validate_network(qnet::toy_network_spec());
  CHECK_THROWS_AS(qnet::finite_difference_estimate(net, CriterionKind::raw_service, 0.06, 0.02,
                                                   10, 0, true),
                  qnet::Error);
  CHECK_THROWS_AS(qnet::finite_difference_estimate(net, CriterionKind::raw_service, 0.5, 0.0, 10,
                                                   0, true),
                  qnet::Error);
}

TEST_CASE("tie counts accumulate across replications") {
  qnet::NetworkSpec spec;
  qnet::ServiceFamily s1, s2;
  s1.kind = qnet::ServiceFamily::Kind::deterministic;
  s1.offset = 1.0;
  s1.theta_slope = 1.0;
  s2.kind = qnet::ServiceFamily::Kind::deterministic;
  s2.offset = 1.5;
  qnet::RoutingDistribution to2, to1;
  to2.kind = qnet::RoutingDistribution::Kind::constant;
  to2.targets = {2};
  to2.base = {1.0};
  to1.kind = qnet::RoutingDistribution::Kind::constant;
  to1.targets = {1};
  to1.base = {1.0};
  spec.nodes = {{1, 2, s1, to2}, {2, 0, s2, to1}};
  spec.horizon_L = 3;
  spec.theta_domain = {0.1, 0.9};
  spec.tagged_node = 1;
  spec.completions_K = 3;
  const auto net = qnet::validate_network(spec);

  const auto s = qnet::naive_ipa_estimate(net, CriterionKind::system_time, 0.5, 50, 0);
  CHECK(s.ties == 100);  // two derivative-ambiguous ties per replication
  CHECK(s.mean == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  // identical replications; only reduction rounding is left
  CHECK(s.sample_variance <= 1e-28);

  const auto psi_names = std::vector<std::string>{qnet::psi_mode_name(PsiMode::fixed_horizon),
                                                  qnet::psi_mode_name(PsiMode::online)};
  CHECK(psi_names[0] == "fixed-horizon");
  CHECK(psi_names[1] == "online");
  CHECK(qnet::parse_psi_mode("online") == PsiMode::online);
  CHECK_THROWS_AS(qnet::parse_psi_mode("both"), qnet::Error);
}
