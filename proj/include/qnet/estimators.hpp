#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qnet/criteria.hpp"
#include "qnet/network.hpp"
#include "qnet/rng.hpp"
#include "qnet/simulate.hpp"

namespace qnet {

struct EstimateSummary {
  std::string estimator;
  double mean = 0.0;
  double sample_variance = 0.0;  // unbiased, n-1
  int reps = 0;
  double ci95_halfwidth = 0.0;  // 1.96 * sqrt(variance / reps)
  long long ties = 0;           // derivative-ambiguous max/min ties seen across reps
};

// Mean, unbiased sample variance and normal-approximation CI of a sample,
// reduced in index order. Needs at least two samples.
EstimateSummary mc_summary(std::span<const double> samples, std::string estimator_tag);

// Which routing decisions enter the likelihood-ratio score of a replication:
// fixed_horizon scores the whole pre-drawn table, online scores only the
// decisions the run actually consumed.
enum class PsiMode { fixed_horizon, online };

const char* psi_mode_name(PsiMode mode);
PsiMode parse_psi_mode(const std::string& name);

struct Replication {
  Tangent value;  // criterion value and pathwise derivative
  RoutingTable table;
  std::vector<int> decision_counts;
  long long ties = 0;
  std::uint64_t branch_hash = 0;
};

Replication replicate_F(const ValidatedNetwork& net, CriterionKind kind, double theta,
                        const RandomStream& stream, std::uint64_t replication);

// Mean of the pathwise derivative alone. Biased whenever routing depends on
// theta; kept as the comparison baseline.
EstimateSummary naive_ipa_estimate(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                   int reps, std::uint64_t seed);

// Pathwise derivative plus F times the routing score: per replication
//   G = dF/dtheta + F * sum of d/dtheta ln p over scored decisions.
EstimateSummary corrected_estimate(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                   int reps, std::uint64_t seed, PsiMode mode);

// Single-pass online estimator for the utilization criterion at the tagged
// node. Independent scalar implementation (no tangent types): per-node
// derivative accumulators g_i, tagged sums t, t', score sum s, maintained
// during one event-driven run; returns (t'*d - t*g_n)/d^2 + t*s/d.
double online_estimate_alg51(const ValidatedNetwork& net, double theta, const RandomStream& stream,
                             std::uint64_t replication);

EstimateSummary alg51_estimate(const ValidatedNetwork& net, double theta, int reps,
                               std::uint64_t seed);

// Per-replication central difference (F(theta+h) - F(theta-h)) / 2h. With
// crn=true both runs read the same substreams; otherwise they use disjoint
// replication labels.
EstimateSummary finite_difference_estimate(const ValidatedNetwork& net, CriterionKind kind,
                                           double theta, double h, int reps, std::uint64_t seed,
                                           bool crn);

}  // namespace qnet
