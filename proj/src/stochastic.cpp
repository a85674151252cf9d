#include "qnet/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qnet/errors.hpp"

namespace qnet {

const char* service_kind_name(ServiceFamily::Kind kind) {
  switch (kind) {
    case ServiceFamily::Kind::shifted_uniform: return "shifted_uniform";
    case ServiceFamily::Kind::exponential_scale: return "exponential_scale";
    case ServiceFamily::Kind::deterministic: return "deterministic";
  }
  return "?";
}

Tangent sample_service(const ServiceFamily& family, double theta, double u) {
  switch (family.kind) {
    case ServiceFamily::Kind::shifted_uniform:
      return {family.offset + family.theta_slope * theta + family.width * u, family.theta_slope};
    case ServiceFamily::Kind::exponential_scale: {
      const double e = -std::log1p(-u);  // exact tail for u near 1
      return {theta * e, e};
    }
    case ServiceFamily::Kind::deterministic:
      return {family.offset + family.theta_slope * theta, family.theta_slope};
  }
  fail(Errc::invalid_service, "unknown service family");
}

ServiceBounds service_bounds(const ServiceFamily& family, const ParameterDomain& domain) {
  const double lin_lo = family.offset + std::min(family.theta_slope * domain.lo,
                                                 family.theta_slope * domain.hi);
  const double lin_hi = family.offset + std::max(family.theta_slope * domain.lo,
                                                 family.theta_slope * domain.hi);
  switch (family.kind) {
    case ServiceFamily::Kind::shifted_uniform:
      return {lin_lo, lin_hi + family.width, std::abs(family.theta_slope), family.width > 0.0};
    case ServiceFamily::Kind::exponential_scale:
      // values reach down to 0 and are unbounded above; E[-ln(1-U)] = 1
      return {0.0, std::numeric_limits<double>::infinity(), 1.0, true};
    case ServiceFamily::Kind::deterministic:
      return {lin_lo, lin_hi, std::abs(family.theta_slope), false};
  }
  fail(Errc::invalid_service, "unknown service family");
}

const char* routing_kind_name(RoutingDistribution::Kind kind) {
  switch (kind) {
    case RoutingDistribution::Kind::constant: return "constant";
    case RoutingDistribution::Kind::affine: return "affine";
  }
  return "?";
}

namespace {

std::size_t target_position(const RoutingDistribution& dist, int target) {
  for (std::size_t i = 0; i < dist.targets.size(); ++i) {
    if (dist.targets[i] == target) return i;
  }
  fail(Errc::target_not_in_support,
       "node " + std::to_string(target) + " is not a routing target");
}

double pmf_at(const RoutingDistribution& dist, double theta, std::size_t pos) {
  double p = dist.base[pos];
  if (dist.kind == RoutingDistribution::Kind::affine) p += dist.slope[pos] * theta;
  return p;
}

}  // namespace

double routing_pmf(const RoutingDistribution& dist, double theta, int target) {
  return pmf_at(dist, theta, target_position(dist, target));
}

double routing_score(const RoutingDistribution& dist, double theta, int target) {
  const std::size_t pos = target_position(dist, target);
  if (dist.kind == RoutingDistribution::Kind::constant) return 0.0;
  return dist.slope[pos] / pmf_at(dist, theta, pos);
}

int sample_route(const RoutingDistribution& dist, double theta, double u) {
  double cdf = 0.0;
  for (std::size_t i = 0; i < dist.targets.size(); ++i) {
    cdf += pmf_at(dist, theta, i);
    if (u < cdf) return dist.targets[i];
  }
  return dist.targets.back();  // u landed in the rounding slack at the top
}

}  // namespace qnet
