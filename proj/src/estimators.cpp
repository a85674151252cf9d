#include "qnet/estimators.hpp"

#include <cmath>
#include <deque>
#include <queue>
#include <string>
#include <vector>

#include "qnet/errors.hpp"

namespace qnet {

EstimateSummary mc_summary(std::span<const double> samples, std::string estimator_tag) {
  if (samples.size() < 2) fail(Errc::too_few_samples, "need at least two replications");
  EstimateSummary s;
  s.estimator = std::move(estimator_tag);
  s.reps = static_cast<int>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  s.mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (double x : samples) ss += (x - s.mean) * (x - s.mean);
  s.sample_variance = ss / static_cast<double>(samples.size() - 1);
  s.ci95_halfwidth = 1.96 * std::sqrt(s.sample_variance / static_cast<double>(samples.size()));
  return s;
}

const char* psi_mode_name(PsiMode mode) {
  return mode == PsiMode::fixed_horizon ? "fixed-horizon" : "online";
}

PsiMode parse_psi_mode(const std::string& name) {
  if (name == "fixed-horizon") return PsiMode::fixed_horizon;
  if (name == "online") return PsiMode::online;
  fail(Errc::bad_config, "unknown psi mode \"" + name + "\"");
}

namespace {

void check_theta(const ValidatedNetwork& net, double theta) {
  if (!net.theta_domain().contains(theta))
    fail(Errc::out_of_domain, "theta " + std::to_string(theta) + " outside [" +
                                  std::to_string(net.theta_domain().lo) + ", " +
                                  std::to_string(net.theta_domain().hi) + "]");
}

}  // namespace

Replication replicate_F(const ValidatedNetwork& net, CriterionKind kind, double theta,
                        const RandomStream& stream, std::uint64_t replication) {
  check_theta(net, theta);
  SimResult run = simulate_network(net, theta, stream, replication);
  Replication rep;
  rep.value = evaluate_criterion(kind, run.trajectory, net, net.tagged_node(), net.completions());
  rep.decision_counts = run.trajectory.decision_counts();
  rep.ties = run.trajectory.tie_count;
  rep.branch_hash = run.trajectory.branch_hash;
  rep.table = std::move(run.table);
  return rep;
}

EstimateSummary naive_ipa_estimate(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                   int reps, std::uint64_t seed) {
  const RandomStream stream{seed};
  std::vector<double> samples(static_cast<std::size_t>(reps));
  long long ties = 0;
  for (int i = 0; i < reps; ++i) {
    const Replication r = replicate_F(net, kind, theta, stream, static_cast<std::uint64_t>(i));
    samples[static_cast<std::size_t>(i)] = r.value.deriv;
    ties += r.ties;
  }
  EstimateSummary s = mc_summary(samples, "naive-ipa");
  s.ties = ties;
  return s;
}

EstimateSummary corrected_estimate(const ValidatedNetwork& net, CriterionKind kind, double theta,
                                   int reps, std::uint64_t seed, PsiMode mode) {
  const RandomStream stream{seed};
  const std::vector<int> full(static_cast<std::size_t>(net.node_count()), net.horizon());
  std::vector<double> samples(static_cast<std::size_t>(reps));
  long long ties = 0;
  for (int i = 0; i < reps; ++i) {
    const Replication r = replicate_F(net, kind, theta, stream, static_cast<std::uint64_t>(i));
    const double psi =
        mode == PsiMode::fixed_horizon
            ? table_score(net, theta, r.table, full)
            : table_score(net, theta, r.table, r.decision_counts);
    samples[static_cast<std::size_t>(i)] = r.value.deriv + r.value.value * psi;
    ties += r.ties;
  }
  EstimateSummary s = mc_summary(samples, "lr-corrected");
  s.ties = ties;
  return s;
}

// Scalar single-pass run: no tangent types, just the per-node derivative
// accumulators g, the tagged-node sums t and t', and the score sum s, updated
// at each completion the way the shared event engine orders them.
double online_estimate_alg51(const ValidatedNetwork& net, double theta, const RandomStream& stream,
                             std::uint64_t replication) {
  check_theta(net, theta);
  const RoutingTable table = draw_routing_table(net, theta, stream, replication);
  const int tagged = net.tagged_node();
  const int completions = net.completions();

  struct Event {
    double time;
    int node;
    int k;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.node != b.node) return a.node > b.node;
      return a.k > b.k;
    }
  };
  struct State {
    std::deque<double> waiting;
    bool busy = false;
    int services_started = 0;
    double last_departure = 0.0;
    double inflight_value = 0.0;
    double inflight_deriv = 0.0;
    double g = 0.0;
  };

  std::vector<State> state(static_cast<std::size_t>(net.node_count()));
  std::priority_queue<Event, std::vector<Event>, Later> events;
  double t = 0.0, tp = 0.0, s = 0.0;

  auto start_service = [&](int node) {
    State& st = state[static_cast<std::size_t>(node - 1)];
    const double head = st.waiting.front();
    st.waiting.pop_front();
    const int j = ++st.services_started;
    const double u = stream.uniform(replication, static_cast<std::uint32_t>(node),
                                    Purpose::service, static_cast<std::uint32_t>(j));
    const Tangent tau = sample_service(net.node(node).service, theta, u);
    st.inflight_value = tau.value;
    st.inflight_deriv = tau.deriv;
    events.push({(head > st.last_departure ? head : st.last_departure) + tau.value, node, j});
    st.busy = true;
  };

  for (int node = 1; node <= net.node_count(); ++node) {
    State& st = state[static_cast<std::size_t>(node - 1)];
    for (int c = 0; c < net.node(node).initial_customers; ++c) st.waiting.push_back(0.0);
    if (!st.waiting.empty()) start_service(node);
  }

  for (;;) {
    if (events.empty())
      fail(Errc::starvation, "event queue drained before the stopping completion");
    const Event ev = events.top();
    events.pop();
    State& st = state[static_cast<std::size_t>(ev.node - 1)];
    st.busy = false;
    st.last_departure = ev.time;
    st.g += st.inflight_deriv;

    if (ev.node == tagged) {
      t += st.inflight_value;
      tp += st.inflight_deriv;
      if (ev.k == completions) {
        const double d = ev.time;
        return (tp * d - t * st.g) / (d * d) + t * s / d;
      }
    }

    if (ev.k > net.horizon())
      fail(Errc::horizon_exceeded, "node " + std::to_string(ev.node) +
                                       " needs routing decision " + std::to_string(ev.k) +
                                       " beyond horizon " + std::to_string(net.horizon()));
    const int target = table.at(ev.node, ev.k);
    s += routing_score(net.node(ev.node).routing, theta, target);

    State& ts = state[static_cast<std::size_t>(target - 1)];
    if (!ts.busy) ts.g = st.g;  // the derivative rides along to an idle server
    ts.waiting.push_back(ev.time);
    if (!ts.busy) start_service(target);
    if (!st.busy && !st.waiting.empty()) start_service(ev.node);
  }
}

EstimateSummary alg51_estimate(const ValidatedNetwork& net, double theta, int reps,
                               std::uint64_t seed) {
  const RandomStream stream{seed};
  std::vector<double> samples(static_cast<std::size_t>(reps));
  for (int i = 0; i < reps; ++i)
    samples[static_cast<std::size_t>(i)] =
        online_estimate_alg51(net, theta, stream, static_cast<std::uint64_t>(i));
  return mc_summary(samples, "alg51");
}

EstimateSummary finite_difference_estimate(const ValidatedNetwork& net, CriterionKind kind,
                                           double theta, double h, int reps, std::uint64_t seed,
                                           bool crn) {
  if (h <= 0.0) fail(Errc::bad_config, "finite-difference step must be positive");
  check_theta(net, theta - h);
  check_theta(net, theta + h);
  const RandomStream stream{seed};
  std::vector<double> samples(static_cast<std::size_t>(reps));
  long long ties = 0;
  for (int i = 0; i < reps; ++i) {
    const std::uint64_t up = crn ? static_cast<std::uint64_t>(i) : 2 * static_cast<std::uint64_t>(i);
    const std::uint64_t dn = crn ? static_cast<std::uint64_t>(i) : 2 * static_cast<std::uint64_t>(i) + 1;
    const Replication plus = replicate_F(net, kind, theta + h, stream, up);
    const Replication minus = replicate_F(net, kind, theta - h, stream, dn);
    samples[static_cast<std::size_t>(i)] = (plus.value.value - minus.value.value) / (2.0 * h);
    ties += plus.ties + minus.ties;
  }
  EstimateSummary s = mc_summary(samples, "fd");
  s.ties = ties;
  return s;
}

}  // namespace qnet
