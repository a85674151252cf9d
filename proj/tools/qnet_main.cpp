#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnet/errors.hpp"
#include "qnet/estimators.hpp"
#include "qnet/models.hpp"
#include "qnet/network.hpp"
#include "qnet/oracle.hpp"
#include "qnet/records.hpp"
#include "qnet/simulate.hpp"

namespace {

struct LoadedSpec {
  qnet::ValidatedNetwork net;
  std::string spec_hash;
};

qnet::NetworkSpec builtin_model(const std::string& name) {
  if (name == "toy") return qnet::toy_network_spec();
  if (name == "two-node-affine") return qnet::two_node_affine_spec();
  if (name == "cycle3") return qnet::cycle3_spec();
  if (name == "three-node") return qnet::three_node_mixed_spec();
  qnet::fail(qnet::Errc::bad_config,
             "unknown model \"" + name + "\" (toy, two-node-affine, cycle3, three-node)");
}

LoadedSpec resolve_spec(const std::string& config_path, const std::string& model) {
  if (!config_path.empty() && !model.empty())
    qnet::fail(qnet::Errc::bad_config, "give --config or --model, not both");
  if (config_path.empty() && model.empty())
    qnet::fail(qnet::Errc::bad_config, "one of --config or --model is required");
  qnet::NetworkSpec spec =
      config_path.empty() ? builtin_model(model) : qnet::load_network_spec(config_path);
  const std::string canonical = qnet::network_spec_to_json(spec);
  return {qnet::validate_network(std::move(spec)), qnet::fnv1a64_hex(canonical)};
}

void deliver(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  f << text;
  if (!f) qnet::fail(qnet::Errc::bad_config, "cannot write " + out_path);
}

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;  // 0 -> no sweep
};

SweepRange parse_sweep(const std::string& text) {
  SweepRange r;
  if (text.empty()) return r;
  const auto a = text.find(':');
  const auto b = text.rfind(':');
  if (a == std::string::npos || b == a)
    qnet::fail(qnet::Errc::bad_config, "--sweep wants LO:HI:N");
  try {
    r.lo = std::stod(text.substr(0, a));
    r.hi = std::stod(text.substr(a + 1, b - a - 1));
    r.points = std::stoi(text.substr(b + 1));
  } catch (const std::exception&) {
    qnet::fail(qnet::Errc::bad_config, "--sweep wants LO:HI:N");
  }
  if (r.points < 1 || r.hi < r.lo) qnet::fail(qnet::Errc::bad_config, "--sweep wants LO:HI:N with N >= 1 and HI >= LO");
  return r;
}

std::string render_records(const std::vector<std::string>& json_texts,
                           const std::vector<std::string>& csv_rows, const char* csv_header,
                           const std::string& format) {
  if (format == "csv") {
    std::string out = csv_header;
    out += '\n';
    for (const std::string& row : csv_rows) {
      out += row;
      out += '\n';
    }
    return out;
  }
  if (json_texts.size() == 1) return json_texts.front();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const std::string& text : json_texts) arr.push_back(nlohmann::ordered_json::parse(text));
  return arr.dump(2) + "\n";
}

struct EstimateArgs {
  std::string config, model, estimator = "lr-corrected", criterion = "U", psi = "fixed-horizon";
  std::string output = "json", out_path, sweep;
  double theta = 0.5;
  double fd_step = 0.01;
  int reps = 10000;
  std::uint64_t seed = 0;
};

qnet::EstimateSummary run_one_estimate(const qnet::ValidatedNetwork& net, const EstimateArgs& a,
                                       double theta, std::uint64_t seed) {
  const qnet::CriterionKind kind = qnet::parse_criterion(a.criterion);
  if (a.estimator == "naive-ipa")
    return qnet::naive_ipa_estimate(net, kind, theta, a.reps, seed);
  if (a.estimator == "lr-corrected")
    return qnet::corrected_estimate(net, kind, theta, a.reps, seed, qnet::parse_psi_mode(a.psi));
  if (a.estimator == "alg51") {
    if (kind != qnet::CriterionKind::utilization)
      qnet::fail(qnet::Errc::bad_config, "alg51 is defined for the utilization criterion (U)");
    return qnet::alg51_estimate(net, theta, a.reps, seed);
  }
  if (a.estimator == "fd")
    return qnet::finite_difference_estimate(net, kind, theta, a.fd_step, a.reps, seed, true);
  qnet::fail(qnet::Errc::bad_config, "unknown estimator \"" + a.estimator +
                                         "\" (naive-ipa, lr-corrected, alg51, fd)");
}

void run_estimate(const EstimateArgs& a) {
  const LoadedSpec loaded = resolve_spec(a.config, a.model);
  const SweepRange sweep = parse_sweep(a.sweep);

  std::vector<double> thetas;
  std::vector<std::uint64_t> seeds;
  if (sweep.points == 0) {
    thetas.push_back(a.theta);
    seeds.push_back(a.seed);
  } else {
    const qnet::RandomStream root{a.seed};
    for (int i = 0; i < sweep.points; ++i) {
      const double frac =
          sweep.points == 1 ? 0.0
                            : static_cast<double>(i) / static_cast<double>(sweep.points - 1);
      thetas.push_back(sweep.lo + frac * (sweep.hi - sweep.lo));
      seeds.push_back(root.child_seed(static_cast<std::uint64_t>(i)));
    }
  }

  std::vector<std::string> json_texts, csv_rows;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const qnet::EstimateSummary s = run_one_estimate(loaded.net, a, thetas[i], seeds[i]);
    qnet::EstimateRecord rec;
    rec.estimator = s.estimator;
    rec.criterion = a.criterion;
    rec.theta = thetas[i];
    rec.reps = s.reps;
    rec.mean = s.mean;
    rec.variance = s.sample_variance;
    rec.ci95 = s.ci95_halfwidth;
    rec.psi_mode = a.estimator == "lr-corrected" ? a.psi : "-";
    rec.ties = s.ties;
    rec.seed = seeds[i];
    rec.spec_hash = loaded.spec_hash;
    json_texts.push_back(qnet::to_json_text(rec));
    csv_rows.push_back(qnet::to_csv_row(rec));
  }
  deliver(render_records(json_texts, csv_rows, qnet::kEstimateCsvHeader, a.output), a.out_path);
}

struct OracleArgs {
  std::string config, model, criterion = "U", output = "json", out_path;
  double theta = 0.5;
  double probe_step = 1e-4;
  int grid = 2000;
};

void run_oracle(const OracleArgs& a) {
  const LoadedSpec loaded = resolve_spec(a.config, a.model);
  const qnet::OracleResult r = qnet::brute_force_oracle(
      loaded.net, qnet::parse_criterion(a.criterion), a.theta, a.grid, a.probe_step);
  qnet::OracleRecord rec;
  rec.theta = a.theta;
  rec.ef = r.ef;
  rec.def = r.def;
  rec.edf = r.edf;
  rec.eg = r.eg;
  rec.residual = r.residual;
  rec.grid = a.grid;
  rec.spec_hash = loaded.spec_hash;
  deliver(render_records({qnet::to_json_text(rec)}, {qnet::to_csv_row(rec)},
                         qnet::kOracleCsvHeader, a.output),
          a.out_path);
}

struct SimulateArgs {
  std::string config, model, out_path;
  double theta = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
};

void run_simulate(const SimulateArgs& a) {
  const LoadedSpec loaded = resolve_spec(a.config, a.model);
  const qnet::RandomStream stream{a.seed};
  const qnet::SimResult run = qnet::simulate_network(loaded.net, a.theta, stream, a.rep);

  std::string out = "node,k,event,value,deriv,route\n";
  for (int node = 1; node <= loaded.net.node_count(); ++node) {
    const qnet::NodeTrace& trace = run.trajectory.node(node);
    for (std::size_t i = 0; i < trace.arrivals.size(); ++i) {
      out += std::to_string(node) + ',' + std::to_string(i + 1) + ",A," +
             qnet::csv_number(trace.arrivals[i].value) + ',' +
             qnet::csv_number(trace.arrivals[i].deriv) + ",\n";
    }
    for (std::size_t i = 0; i < trace.departures.size(); ++i) {
      const std::string route =
          i < trace.routes.size() ? std::to_string(trace.routes[i]) : std::string();
      out += std::to_string(node) + ',' + std::to_string(i + 1) + ",D," +
             qnet::csv_number(trace.departures[i].value) + ',' +
             qnet::csv_number(trace.departures[i].deriv) + ',' + route + '\n';
    }
  }
  char tail[128];
  std::snprintf(tail, sizeof(tail), "# stop_node=%d stop_count=%d ties=%lld branch_hash=%016llx\n",
                run.trajectory.stop_node, run.trajectory.stop_count,
                static_cast<long long>(run.trajectory.tie_count),
                static_cast<unsigned long long>(run.trajectory.branch_hash));
  out += tail;
  deliver(out, a.out_path);
}

void run_toy(double theta) {
  const qnet::ToyExact t = qnet::toy_exact(theta);
  nlohmann::ordered_json j;
  j["theta"] = theta;
  j["ef"] = t.ef;
  j["def"] = t.def;
  j["edf"] = t.edf;
  j["eg"] = t.eg;
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-network simulation and gradient estimation"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of E[F] derivatives");
  estimate->add_option("--config", est.config, "network spec JSON file");
  estimate->add_option("--model", est.model, "built-in model name");
  estimate->add_option("--estimator", est.estimator, "naive-ipa | lr-corrected | alg51 | fd");
  estimate->add_option("--criterion", est.criterion, "S | W | T | U | J | Q | rawF");
  estimate->add_option("--theta", est.theta, "parameter value");
  estimate->add_option("--reps", est.reps, "replication count")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est.seed, "root seed");
  estimate->add_option("--fd-step", est.fd_step, "central-difference step (fd only)");
  estimate->add_option("--psi-mode", est.psi, "fixed-horizon | online (lr-corrected only)");
  estimate->add_option("--output", est.output, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  estimate->add_option("--out", est.out_path, "write to file instead of stdout");
  estimate->add_option("--sweep", est.sweep, "theta sweep LO:HI:N (each point gets a child seed)");
  estimate->callback([&] { run_estimate(est); });

  OracleArgs ora;
  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive-enumeration gradient oracle");
  oracle->add_option("--config", ora.config, "network spec JSON file");
  oracle->add_option("--model", ora.model, "built-in model name");
  oracle->add_option("--criterion", ora.criterion, "S | W | T | U | J | Q | rawF");
  oracle->add_option("--theta", ora.theta, "parameter value");
  oracle->add_option("--grid-m", ora.grid, "total lattice budget per table")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--probe-step", ora.probe_step, "central-difference step for dE[F]");
  oracle->add_option("--output", ora.output, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  oracle->add_option("--out", ora.out_path, "write to file instead of stdout");
  oracle->callback([&] { run_oracle(ora); });

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "dump one trajectory as CSV");
  simulate->add_option("--config", sim.config, "network spec JSON file");
  simulate->add_option("--model", sim.model, "built-in model name");
  simulate->add_option("--theta", sim.theta, "parameter value");
  simulate->add_option("--seed", sim.seed, "root seed");
  simulate->add_option("--rep", sim.rep, "replication index");
  simulate->add_option("--out", sim.out_path, "write to file instead of stdout");
  simulate->callback([&] { run_simulate(sim); });

  double toy_theta = 0.5;
  CLI::App* toy = app.add_subcommand("toy", "closed forms for the built-in toy model");
  toy->add_option("--theta", toy_theta, "parameter value in (0, 1)");
  toy->callback([&] { run_toy(toy_theta); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const qnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qnet::is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
