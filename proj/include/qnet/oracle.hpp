#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qnet/criteria.hpp"
#include "qnet/network.hpp"

namespace qnet {

// Closed forms for the two-node single-customer model with routing
// probabilities (theta, 1-theta) and service laws theta+u+1 / theta+u:
//   ef  = E[F] = 2*theta + 1/2        def = dE[F]/dtheta = 2
//   edf = E[dF/dtheta] = 1            eg  = E[G] = 2
// Defined for theta in (0, 1).
struct ToyExact {
  double ef = 0.0;
  double def = 0.0;
  double edf = 0.0;
  double eg = 0.0;
};

ToyExact toy_exact(double theta);

// Exhaustive-enumeration oracle: enumerate every positive-probability routing
// table R, integrate F(theta, u | R) over the consumed service uniforms with a
// midpoint lattice, and mix with the table likelihoods.
//   ef       = sum_R Phi(theta,R) * E^[F|R]
//   def      = central difference of that mixture in theta (step h), same lattice
//   edf      = sum_R Phi * E^[dF/dtheta | R]
//   eg       = sum_R Phi * (E^[dF|R] + E^[F|R] * Psi(theta,R))
//   residual = |def - eg|, the two sides of the product-rule identity
// grid_budget is the total lattice size per table: the per-axis count is
// floor(grid_budget^(1/dim)) where dim counts the stochastic service draws the
// run consumes under that table (probed at theta and theta+-h; deterministic
// services use no coordinate). dim above dim_cap is refused.
struct OracleResult {
  double ef = 0.0;
  double def = 0.0;
  double edf = 0.0;
  double eg = 0.0;
  double residual = 0.0;
  int tables = 0;
  long long lattice_points = 0;
};

OracleResult brute_force_oracle(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                int grid_budget, double h = 1e-4, std::size_t table_cap = 1'000'000,
                                int dim_cap = 4);

// (E[F], dE[F]/dtheta) slice of the full oracle result.
std::pair<double, double> brute_force_expectation(const ValidatedNetwork& net, CriterionKind kind,
                                                  double theta, int grid_budget);

// |d/dtheta sum_R Phi*E^[F|R]  -  sum_R Phi*(E^[dF|R] + E^[F|R]*Psi)|.
double theorem2_identity_check(const ValidatedNetwork& net, CriterionKind kind, double theta,
                               int grid_budget);

// k-th arrival epoch by literal enumeration: min over all k-subsets of the
// subset max. Subsets range over positions, so duplicates are kept. n <= 24.
double subset_enum_arrival(std::span<const double> values, int k);

// Two parallel FIFO servers fed by one queue: each customer takes the
// earliest-free server (ties -> server 1), starts at max(arrival, free time).
// Returns departure epochs sorted ascending. Arrivals must be nondecreasing.
std::vector<double> two_server_event_oracle(std::span<const double> arrivals,
                                            std::span<const double> services);

}  // namespace qnet
