#include "qnet/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qnet/errors.hpp"
#include "qnet/simulate.hpp"

namespace qnet {

ToyExact toy_exact(double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    fail(Errc::out_of_domain, "closed forms hold for theta in (0, 1)");
  return {2.0 * theta + 0.5, 2.0, 1.0, 2.0};
}

namespace {

using Label = std::pair<int, int>;  // (node, service index k)

// Runs one trajectory with every stochastic draw pinned to u = 1/2 and
// appends any label not yet mapped. Event order can shift with theta, so the
// probe runs at theta and theta +- h and the union keeps first-use order.
void probe_consumed_draws(const ValidatedNetwork& net, const RoutingTable& table, double theta,
                          std::vector<Label>& labels, std::map<Label, int>& index) {
  ServiceSource source = [&](int node, int k) -> Tangent {
    const ServiceFamily& fam = net.node(node).service;
    if (fam.uses_uniform()) {
      const Label label{node, k};
      if (index.emplace(label, static_cast<int>(labels.size())).second) labels.push_back(label);
    }
    return sample_service(fam, theta, 0.5);
  };
  simulate_with_table(net, table, source);
}

long long checked_pow(long long base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

bool pow_within(long long base, int exp, long long cap) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > cap) return false;
  }
  return true;
}

// Largest m with m^dim <= budget (dim >= 2).
int lattice_axis(int budget, int dim) {
  int m = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(budget),
                                                           1.0 / static_cast<double>(dim)))));
  while (pow_within(m + 1, dim, budget)) ++m;
  while (m > 1 && !pow_within(m, dim, budget)) --m;
  return m;
}

struct TableIntegrals {
  double f = 0.0;    // E^[F | R] at theta
  double df = 0.0;   // E^[dF/dtheta | R] at theta
  double fp = 0.0;   // E^[F | R] at theta + h
  double fm = 0.0;   // E^[F | R] at theta - h
  long long points = 0;
};

TableIntegrals integrate_table(const ValidatedNetwork& net, CriterionKind kind,
                               const RoutingTable& table, double theta, double h, int grid_budget,
                               int dim_cap) {
  std::vector<Label> labels;
  std::map<Label, int> index;
  probe_consumed_draws(net, table, theta, labels, index);
  probe_consumed_draws(net, table, theta + h, labels, index);
  probe_consumed_draws(net, table, theta - h, labels, index);

  const int dim = static_cast<int>(labels.size());
  if (dim > dim_cap)
    fail(Errc::too_many_coordinates, "table consumes " + std::to_string(dim) +
                                         " stochastic draws, cap is " + std::to_string(dim_cap));

  const int m = dim == 0 ? 1 : (dim == 1 ? grid_budget : lattice_axis(grid_budget, dim));
  const long long points = dim == 0 ? 1 : checked_pow(m, dim);

  std::vector<double> coord(static_cast<std::size_t>(std::max(dim, 1)), 0.5);
  auto source_at = [&](double th) {
    return ServiceSource([&, th](int node, int k) -> Tangent {
      const ServiceFamily& fam = net.node(node).service;
      double u = 0.5;
      if (fam.uses_uniform()) {
        const auto it = index.find({node, k});
        if (it == index.end())
          fail(Errc::too_many_coordinates,
               "lattice run consumed a draw the probes never saw (node " + std::to_string(node) +
                   ", service " + std::to_string(k) + ")");
        u = coord[static_cast<std::size_t>(it->second)];
      }
      return sample_service(fam, th, u);
    });
  };
  const ServiceSource at_theta = source_at(theta);
  const ServiceSource at_plus = source_at(theta + h);
  const ServiceSource at_minus = source_at(theta - h);

  TableIntegrals sums;
  sums.points = points;
  std::vector<int> idx(static_cast<std::size_t>(std::max(dim, 1)), 0);
  for (long long p = 0; p < points; ++p) {
    for (int a = 0; a < dim; ++a)
      coord[static_cast<std::size_t>(a)] =
          (static_cast<double>(idx[static_cast<std::size_t>(a)]) + 0.5) / static_cast<double>(m);

    const Trajectory center = simulate_with_table(net, table, at_theta);
    const Tangent f = evaluate_criterion(kind, center, net, net.tagged_node(), net.completions());
    sums.f += f.value;
    sums.df += f.deriv;
    const Trajectory plus = simulate_with_table(net, table, at_plus);
    sums.fp += evaluate_criterion(kind, plus, net, net.tagged_node(), net.completions()).value;
    const Trajectory minus = simulate_with_table(net, table, at_minus);
    sums.fm += evaluate_criterion(kind, minus, net, net.tagged_node(), net.completions()).value;

    for (int a = dim - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < m) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  const double scale = 1.0 / static_cast<double>(points);
  sums.f *= scale;
  sums.df *= scale;
  sums.fp *= scale;
  sums.fm *= scale;
  return sums;
}

}  // namespace

OracleResult brute_force_oracle(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                int grid_budget, double h, std::size_t table_cap, int dim_cap) {
  if (grid_budget < 1) fail(Errc::bad_config, "grid budget must be at least 1");
  if (h <= 0.0) fail(Errc::bad_config, "probe step must be positive");
  if (!net.theta_domain().contains(theta - h) || !net.theta_domain().contains(theta + h))
    fail(Errc::out_of_domain, "oracle needs [theta-h, theta+h] inside the parameter domain");

  const std::vector<RoutingTable> tables = enumerate_routing_tables(net, table_cap);

  OracleResult out;
  out.tables = static_cast<int>(tables.size());
  double efp = 0.0, efm = 0.0;
  for (const RoutingTable& table : tables) {
    const TableIntegrals sums = integrate_table(net, kind, table, theta, h, grid_budget, dim_cap);
    const double lik = table_likelihood(net, theta, table);
    const double psi = table_score(net, theta, table);
    out.ef += lik * sums.f;
    out.edf += lik * sums.df;
    out.eg += lik * (sums.df + sums.f * psi);
    efp += table_likelihood(net, theta + h, table) * sums.fp;
    efm += table_likelihood(net, theta - h, table) * sums.fm;
    out.lattice_points += sums.points;
  }
  out.def = (efp - efm) / (2.0 * h);
  out.residual = std::abs(out.def - out.eg);
  return out;
}

std::pair<double, double> brute_force_expectation(const ValidatedNetwork& net, CriterionKind kind,
                                                  double theta, int grid_budget) {
  const OracleResult r = brute_force_oracle(net, kind, theta, grid_budget);
  return {r.ef, r.def};
}

double theorem2_identity_check(const ValidatedNetwork& net, CriterionKind kind, double theta,
                               int grid_budget) {
  return brute_force_oracle(net, kind, theta, grid_budget).residual;
}

double subset_enum_arrival(std::span<const double> values, int k) {
  const int n = static_cast<int>(values.size());
  if (n > 24) fail(Errc::support_too_large, "subset enumeration is capped at 24 values");
  if (k < 1 || k > n)
    fail(Errc::k_too_large, "order statistic " + std::to_string(k) + " of " + std::to_string(n) +
                                " values");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) mx = std::max(mx, values[static_cast<std::size_t>(i)]);
    best = std::min(best, mx);
  }
  return best;
}

std::vector<double> two_server_event_oracle(std::span<const double> arrivals,
                                            std::span<const double> services) {
  if (arrivals.size() != services.size())
    fail(Errc::length_mismatch, "arrival and service sequences differ in length");
  for (std::size_t i = 1; i < arrivals.size(); ++i)
    if (arrivals[i] < arrivals[i - 1]) fail(Errc::bad_config, "arrivals must be nondecreasing");

  double free_at[2] = {0.0, 0.0};
  std::vector<double> departures;
  departures.reserve(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    const int s = free_at[0] <= free_at[1] ? 0 : 1;
    const double start = std::max(arrivals[i], free_at[s]);
    free_at[s] = start + services[i];
    departures.push_back(free_at[s]);
  }
  std::sort(departures.begin(), departures.end());
  return departures;
}

}  // namespace qnet
