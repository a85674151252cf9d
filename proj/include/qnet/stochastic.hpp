#pragma once

#include <string>
#include <vector>

#include "qnet/tangent.hpp"

namespace qnet {

// Closed interval of admissible theta values.
struct ParameterDomain {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double theta) const { return theta >= lo && theta <= hi; }
  friend bool operator==(const ParameterDomain&, const ParameterDomain&) = default;
};

// Service-time families with analytic theta-derivatives:
//   shifted_uniform:    offset + theta_slope*theta + width*u      d/dtheta = theta_slope
//   exponential_scale:  -theta*ln(1-u)                            d/dtheta = -ln(1-u)
//   deterministic:      offset + theta_slope*theta                d/dtheta = theta_slope
struct ServiceFamily {
  enum class Kind { shifted_uniform, exponential_scale, deterministic };

  Kind kind = Kind::deterministic;
  double offset = 0.0;
  double theta_slope = 0.0;
  double width = 0.0;

  bool uses_uniform() const { return kind != Kind::deterministic; }
  friend bool operator==(const ServiceFamily&, const ServiceFamily&) = default;
};

const char* service_kind_name(ServiceFamily::Kind kind);

Tangent sample_service(const ServiceFamily& family, double theta, double u);

// Analytic envelope of a family over a theta domain, used by the sufficient
// unbiasedness-condition checks. lipschitz_mean is E[sup_theta |dtau/dtheta|];
// value_hi may be +inf (exponential_scale).
struct ServiceBounds {
  double value_lo = 0.0;
  double value_hi = 0.0;
  double lipschitz_mean = 0.0;
  bool continuous = false;
};

ServiceBounds service_bounds(const ServiceFamily& family, const ParameterDomain& domain);

// Per-departure routing distribution over explicit targets:
//   constant: p_r fixed, score identically 0
//   affine:   p_r(theta) = base_r + slope_r*theta, score d/dtheta ln p_r = slope_r/p_r(theta)
// Targets are kept in ascending node order; sampling inverts the CDF in that
// order with the strict rule u < CDF(r).
struct RoutingDistribution {
  enum class Kind { constant, affine };

  Kind kind = Kind::constant;
  std::vector<int> targets;
  std::vector<double> base;
  std::vector<double> slope;  // empty for constant

  friend bool operator==(const RoutingDistribution&, const RoutingDistribution&) = default;
};

const char* routing_kind_name(RoutingDistribution::Kind kind);

double routing_pmf(const RoutingDistribution& dist, double theta, int target);
double routing_score(const RoutingDistribution& dist, double theta, int target);
int sample_route(const RoutingDistribution& dist, double theta, double u);

}  // namespace qnet
