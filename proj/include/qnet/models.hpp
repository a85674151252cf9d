#pragma once

#include "qnet/network.hpp"

namespace qnet {

// Two-node encoding of the single-customer branching model. Node 1 holds the
// only customer and routes it with probabilities (theta, 1-theta) to itself or
// to node 2; whichever node receives it draws the service the raw_service
// criterion reports (theta+u+1 at node 1, theta+u at node 2). The run stops at
// node 1's second completion, which both branches reach.
NetworkSpec toy_network_spec();

// Two-node network for exhaustive oracle checks: stochastic services only at
// node 1 (two uniforms per run), affine routing at node 1, deterministic
// service and constant return routing at node 2.
NetworkSpec two_node_affine_spec();

// Three-node deterministic cycle 1 -> 2 -> 3 -> 1 with shifted-uniform
// services everywhere; the routing table is a single point, so score terms
// vanish and pathwise derivatives alone are unbiased.
NetworkSpec cycle3_spec(int completions = 8, int horizon = 24);

// Three nodes with theta-dependent routing at nodes 1 and 2 (node 2's realized
// decision count varies run to run) and a constant return at node 3. Used for
// the online-vs-fixed-horizon score comparisons.
NetworkSpec three_node_mixed_spec(int completions = 20, int horizon = 0);  // horizon 0 -> 2K+2

}  // namespace qnet
