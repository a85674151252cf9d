#include "qnet/criteria.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qnet/errors.hpp"
#include "qnet/network.hpp"
#include "qnet/simulate.hpp"

namespace qnet {

const char* criterion_name(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::system_time: return "S";
    case CriterionKind::waiting_time: return "W";
    case CriterionKind::throughput: return "T";
    case CriterionKind::utilization: return "U";
    case CriterionKind::number_in_system: return "J";
    case CriterionKind::queue_length: return "Q";
    case CriterionKind::raw_service: return "rawF";
  }
  return "?";
}

CriterionKind parse_criterion(const std::string& name) {
  if (name == "S") return CriterionKind::system_time;
  if (name == "W") return CriterionKind::waiting_time;
  if (name == "T") return CriterionKind::throughput;
  if (name == "U") return CriterionKind::utilization;
  if (name == "J") return CriterionKind::number_in_system;
  if (name == "Q") return CriterionKind::queue_length;
  if (name == "rawF") return CriterionKind::raw_service;
  fail(Errc::bad_config, "unknown criterion \"" + name + "\"");
}

namespace {

Tangent ratio(Tangent num, Tangent den) {
  return {num.value / den.value,
          (num.deriv * den.value - num.value * den.deriv) / (den.value * den.value)};
}

Tangent raw_service_value(const Trajectory& traj, const ValidatedNetwork& net) {
  const NodeTrace& tagged = traj.node(net.tagged_node());
  if (tagged.routes.empty())
    fail(Errc::insufficient_completions, "tagged node routed no customer");
  const int target = tagged.routes.front();
  const std::size_t index = static_cast<std::size_t>(net.node(target).initial_customers);
  const NodeTrace& trace = traj.node(target);
  if (trace.services.size() <= index)
    fail(Errc::insufficient_completions,
         "routed node never served the forwarded customer");
  return trace.services[index];
}

}  // namespace

Tangent evaluate_criterion(CriterionKind kind, const Trajectory& traj, const ValidatedNetwork& net,
                           int node, int completions) {
  if (kind == CriterionKind::raw_service) return raw_service_value(traj, net);

  const NodeTrace& trace = traj.node(node);
  const std::size_t k = static_cast<std::size_t>(completions);
  if (completions < 1 || trace.departures.size() < k || trace.arrivals.size() < k ||
      trace.services.size() < k)
    fail(Errc::insufficient_completions,
         "node " + std::to_string(node) + " completed " + std::to_string(trace.departures.size()) +
             " of " + std::to_string(completions) + " services");

  Tangent sum_da{0.0, 0.0};   // sum of D - A
  Tangent sum_tau{0.0, 0.0};  // sum of tau
  for (std::size_t i = 0; i < k; ++i) {
    sum_da += trace.departures[i] - trace.arrivals[i];
    sum_tau += trace.services[i];
  }
  const Tangent last = trace.departures[k - 1];
  const double kd = static_cast<double>(completions);

  switch (kind) {
    case CriterionKind::system_time:
      return {sum_da.value / kd, sum_da.deriv / kd};
    case CriterionKind::waiting_time: {
      const Tangent waited = sum_da - sum_tau;
      return {waited.value / kd, waited.deriv / kd};
    }
    case CriterionKind::throughput:
      if (last.value <= 0.0) fail(Errc::zero_departure, "stopping departure epoch is zero");
      return {kd / last.value, -kd * last.deriv / (last.value * last.value)};
    case CriterionKind::utilization:
      if (last.value <= 0.0) fail(Errc::zero_departure, "stopping departure epoch is zero");
      return ratio(sum_tau, last);
    case CriterionKind::number_in_system:
      if (last.value <= 0.0) fail(Errc::zero_departure, "stopping departure epoch is zero");
      return ratio(sum_da, last);
    case CriterionKind::queue_length:
      if (last.value <= 0.0) fail(Errc::zero_departure, "stopping departure epoch is zero");
      return ratio(sum_da - sum_tau, last);
    case CriterionKind::raw_service:
      break;
  }
  fail(Errc::bad_config, "unknown criterion");
}

ConditionReport check_unbiasedness_conditions(const ValidatedNetwork& net, CriterionKind kind) {
  const bool needs_ratio_bounds =
      kind == CriterionKind::throughput || kind == CriterionKind::utilization ||
      kind == CriterionKind::number_in_system || kind == CriterionKind::queue_length;

  ConditionReport report;
  report.criterion = kind;
  report.all_satisfied = true;
  for (int node = 1; node <= net.node_count(); ++node) {
    const ServiceFamily& family = net.node(node).service;
    const ServiceBounds b = service_bounds(family, net.theta_domain());
    NodeConditionReport r;
    r.node = node;
    r.family = service_kind_name(family.kind);
    r.value_lo = b.value_lo;
    r.value_hi = b.value_hi;
    r.lipschitz_mean = b.lipschitz_mean;
    r.continuous = b.continuous;

    if (!std::isfinite(b.lipschitz_mean)) {
      r.status = "violated";
      r.detail = "mean theta-Lipschitz bound is not finite";
    } else if (!needs_ratio_bounds) {
      r.status = "satisfied";
      r.detail = "mean theta-Lipschitz bound " + std::to_string(b.lipschitz_mean);
    } else if (b.value_lo <= 0.0) {
      r.status = "violated";
      r.detail = "service values are not bounded away from 0 (lower bound " +
                 std::to_string(b.value_lo) + ")";
    } else if (!std::isfinite(b.value_hi)) {
      r.status = "violated";
      r.detail = "service values are unbounded above";
    } else {
      r.status = "satisfied";
      r.detail = "value range [" + std::to_string(b.value_lo) + ", " + std::to_string(b.value_hi) +
                 "], ratio bound " +
                 std::to_string(b.value_hi * b.lipschitz_mean / (b.value_lo * b.value_lo));
    }
    if (r.status != "satisfied") report.all_satisfied = false;
    report.nodes.push_back(std::move(r));
  }
  return report;
}

}  // namespace qnet
