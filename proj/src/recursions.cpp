#include "qnet/recursions.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "qnet/errors.hpp"

namespace qnet {

namespace {

void check_lengths(std::span<const Tangent> arrivals, std::span<const Tangent> services) {
  if (services.size() < arrivals.size())
    fail(Errc::length_mismatch, "need one service per arrival (" +
                                    std::to_string(arrivals.size()) + " arrivals, " +
                                    std::to_string(services.size()) + " services)");
}

}  // namespace

std::vector<Tangent> gg1_departures(std::span<const Tangent> arrivals,
                                    std::span<const Tangent> services, long long* ties) {
  check_lengths(arrivals, services);
  std::vector<Tangent> out;
  out.reserve(arrivals.size());
  Tangent prev{0.0, 0.0};
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    prev = tmax(arrivals[k], prev, ties) + services[k];
    out.push_back(prev);
  }
  return out;
}

std::vector<Tangent> gg1_closed_form(std::span<const Tangent> arrivals,
                                     std::span<const Tangent> services, long long* ties) {
  check_lengths(arrivals, services);
  std::vector<Tangent> out;
  out.reserve(arrivals.size());
  // cand[i] = A[i] + tau[i] + ... + tau[k], accumulated left to right so every
  // candidate is the same float the recursion would have carried.
  std::vector<Tangent> cand;
  cand.reserve(arrivals.size());
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    for (Tangent& c : cand) c += services[k];
    cand.push_back(arrivals[k] + services[k]);
    // Scan descending: ties go to the larger start index, matching the
    // recursion's preference for the fresh arrival over the carried maximum.
    Tangent best = cand[k];
    for (std::size_t i = k; i-- > 0;) best = tmax(best, cand[i], ties);
    out.push_back(best);
  }
  return out;
}

std::vector<Tangent> gg2_departures(std::span<const Tangent> arrivals,
                                    std::span<const Tangent> services, long long* ties) {
  check_lengths(arrivals, services);
  const std::size_t m = arrivals.size();
  std::vector<Tangent> dep(m);
  auto d_at = [&](std::size_t one_based) -> Tangent {
    if (one_based == 0 || one_based > m) return {0.0, 0.0};  // D[j] = 0 for j <= 0
    return dep[one_based - 1];
  };
  for (std::size_t k = 1; k <= m; ++k) {
    Tangent first{-std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 1; i <= k; ++i) {
      const Tangent term =
          tmax(arrivals[i - 1], i >= 2 ? d_at(i - 2) : Tangent{0.0, 0.0}, ties) + services[i - 1];
      first = i == 1 ? term : tmax(first, term, ties);
    }
    if (k + 1 <= m) {
      const Tangent second = tmax(arrivals[k], d_at(k - 1), ties) + services[k];
      dep[k - 1] = tmin(first, second, ties);
    } else {
      dep[k - 1] = first;  // no (k+1)-th arrival: the second bracket is +inf
    }
  }
  return dep;
}

Tangent kth_arrival_from_departures(std::span<const Tangent> departures, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > departures.size())
    fail(Errc::k_too_large, "order statistic " + std::to_string(k) + " of " +
                                std::to_string(departures.size()) + " departures");
  std::vector<std::size_t> order(departures.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return departures[a].value < departures[b].value;
  });
  return departures[order[static_cast<std::size_t>(k - 1)]];
}

Tangent compose_arrivals(std::span<const Tangent> real_arrivals, int initial_customers, int k) {
  if (k < 1) fail(Errc::k_too_large, "arrival index must be >= 1");
  if (k <= initial_customers) return {0.0, 0.0};
  const std::size_t idx = static_cast<std::size_t>(k - initial_customers);
  if (idx > real_arrivals.size())
    fail(Errc::missing_arrival, "arrival " + std::to_string(k) + " requires routed arrival " +
                                    std::to_string(idx) + " but only " +
                                    std::to_string(real_arrivals.size()) + " exist");
  return real_arrivals[idx - 1];
}

}  // namespace qnet
