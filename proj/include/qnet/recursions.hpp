#pragma once

#include <span>
#include <vector>

#include "qnet/tangent.hpp"

namespace qnet {

// Single-server FIFO departure recursion
//   D[k] = max(A[k], D[k-1]) + tau[k],   D[0] = 0,
// with the max resolving value ties toward A. Arrivals must be nondecreasing
// in value; |services| >= |arrivals| (extra services are ignored).
std::vector<Tangent> gg1_departures(std::span<const Tangent> arrivals,
                                    std::span<const Tangent> services,
                                    long long* ties = nullptr);

// Same departures through the unrolled form
//   D[k] = max_{i<=k} (A[i] + tau[i] + ... + tau[k]).
// Candidate sums accumulate left-to-right from A[i] and ties resolve to the
// largest i, exactly what unrolling the recursion produces, so results match
// gg1_departures bit for bit.
std::vector<Tangent> gg1_closed_form(std::span<const Tangent> arrivals,
                                     std::span<const Tangent> services,
                                     long long* ties = nullptr);

// Two-server FIFO departure epochs (k-th completion time across both servers):
//   D[k] = [max_{i<=k} ((A[i] v D[i-2]) + tau[i])] ^ [(A[k+1] v D[k-1]) + tau[k+1]]
// with D[j] = 0 for j <= 0 and the second bracket dropped when A[k+1] does not
// exist. Value ties resolve to the first operand. Standalone evaluator; the
// network simulator itself is single-server only.
std::vector<Tangent> gg2_departures(std::span<const Tangent> arrivals,
                                    std::span<const Tangent> services,
                                    long long* ties = nullptr);

// k-th order statistic by value; among equal values the earliest element wins,
// so tangents of tied departures are selected by insertion order.
Tangent kth_arrival_from_departures(std::span<const Tangent> departures, int k);

// k-th arrival seen by a node holding initial_customers at time zero: the
// first initial_customers arrivals are zero tangents, later ones come from the
// routed stream (1-based within real_arrivals).
Tangent compose_arrivals(std::span<const Tangent> real_arrivals, int initial_customers, int k);

}  // namespace qnet
