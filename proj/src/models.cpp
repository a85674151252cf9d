#include "qnet/models.hpp"

namespace qnet {

namespace {

ServiceFamily shifted_uniform(double offset, double theta_slope, double width) {
  ServiceFamily f;
  f.kind = ServiceFamily::Kind::shifted_uniform;
  f.offset = offset;
  f.theta_slope = theta_slope;
  f.width = width;
  return f;
}

ServiceFamily deterministic(double offset, double theta_slope) {
  ServiceFamily f;
  f.kind = ServiceFamily::Kind::deterministic;
  f.offset = offset;
  f.theta_slope = theta_slope;
  return f;
}

RoutingDistribution constant_route(std::vector<int> targets, std::vector<double> probs) {
  RoutingDistribution d;
  d.kind = RoutingDistribution::Kind::constant;
  d.targets = std::move(targets);
  d.base = std::move(probs);
  return d;
}

RoutingDistribution affine_route(std::vector<int> targets, std::vector<double> base,
                                 std::vector<double> slope) {
  RoutingDistribution d;
  d.kind = RoutingDistribution::Kind::affine;
  d.targets = std::move(targets);
  d.base = std::move(base);
  d.slope = std::move(slope);
  return d;
}

}  // namespace

NetworkSpec toy_network_spec() {
  NetworkSpec spec;
  spec.nodes = {
      {1, 1, shifted_uniform(1.0, 1.0, 1.0), affine_route({1, 2}, {0.0, 1.0}, {1.0, -1.0})},
      {2, 0, shifted_uniform(0.0, 1.0, 1.0), constant_route({1}, {1.0})},
  };
  spec.horizon_L = 2;
  spec.theta_domain = {0.05, 0.95};
  spec.tagged_node = 1;
  spec.completions_K = 2;
  return spec;
}

NetworkSpec two_node_affine_spec() {
  NetworkSpec spec;
  spec.nodes = {
      {1, 1, shifted_uniform(0.3, 1.0, 1.0), affine_route({1, 2}, {0.3, 0.7}, {0.4, -0.4})},
      {2, 1, deterministic(0.7, 0.5), constant_route({1}, {1.0})},
  };
  spec.horizon_L = 2;
  spec.theta_domain = {0.2, 0.8};
  spec.tagged_node = 1;
  spec.completions_K = 2;
  return spec;
}

NetworkSpec cycle3_spec(int completions, int horizon) {
  NetworkSpec spec;
  spec.nodes = {
      {1, 2, shifted_uniform(0.5, 1.0, 1.0), constant_route({2}, {1.0})},
      {2, 1, shifted_uniform(1.0, 0.5, 0.5), constant_route({3}, {1.0})},
      {3, 0, shifted_uniform(0.3, 0.8, 0.6), constant_route({1}, {1.0})},
  };
  spec.horizon_L = horizon;
  spec.theta_domain = {0.1, 0.9};
  spec.tagged_node = 1;
  spec.completions_K = completions;
  return spec;
}

NetworkSpec three_node_mixed_spec(int completions, int horizon) {
  NetworkSpec spec;
  spec.nodes = {
      {1, 1, shifted_uniform(0.4, 0.6, 1.0), affine_route({2, 3}, {0.5, 0.5}, {0.3, -0.3})},
      {2, 1, shifted_uniform(0.6, 0.3, 0.8), affine_route({1, 3}, {0.6, 0.4}, {-0.2, 0.2})},
      {3, 1, shifted_uniform(0.5, 0.5, 0.5), constant_route({1}, {1.0})},
  };
  spec.horizon_L = horizon > 0 ? horizon : 2 * completions + 2;
  spec.theta_domain = {0.1, 0.9};
  spec.tagged_node = 1;
  spec.completions_K = completions;
  return spec;
}

}  // namespace qnet
