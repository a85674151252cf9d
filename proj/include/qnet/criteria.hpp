#pragma once

#include <string>
#include <vector>

#include "qnet/tangent.hpp"

namespace qnet {

class ValidatedNetwork;
struct Trajectory;

// Performance functionals of the first K completions at a node n
// (D = departure, A = arrival, tau = service time, sums over k = 1..K):
//   system_time       S = sum(D-A)/K
//   waiting_time      W = sum(D-A-tau)/K
//   throughput        T = K/D[K]
//   utilization       U = sum(tau)/D[K]
//   number_in_system  J = sum(D-A)/D[K]
//   queue_length      Q = sum(D-A-tau)/D[K]
// raw_service is the escape hatch for the two-node single-customer model: the
// service time drawn by the first customer the tagged node routes onward. It
// is oracle-only and not part of the standard six.
enum class CriterionKind {
  system_time,
  waiting_time,
  throughput,
  utilization,
  number_in_system,
  queue_length,
  raw_service,
};

const char* criterion_name(CriterionKind kind);         // "S".."Q", "rawF"
CriterionKind parse_criterion(const std::string& name);  // throws BadConfig

// Value and exact theta-derivative via tangent arithmetic on the trajectory.
Tangent evaluate_criterion(CriterionKind kind, const Trajectory& traj, const ValidatedNetwork& net,
                           int node, int completions);

// Sufficient-condition check for estimator unbiasedness, per node and
// criterion, from analytic family bounds: time averages (S, W) need a finite
// mean Lipschitz bound; ratio criteria (T, U, J, Q) additionally need service
// values bounded away from 0 and from above across the whole theta domain.
struct NodeConditionReport {
  int node = 0;
  std::string family;
  double value_lo = 0.0;
  double value_hi = 0.0;
  double lipschitz_mean = 0.0;
  bool continuous = false;
  std::string status;  // "satisfied" | "violated" | "unknown"
  std::string detail;
};

struct ConditionReport {
  CriterionKind criterion = CriterionKind::system_time;
  bool all_satisfied = false;
  std::vector<NodeConditionReport> nodes;
};

ConditionReport check_unbiasedness_conditions(const ValidatedNetwork& net, CriterionKind kind);

}  // namespace qnet
