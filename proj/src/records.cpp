#include "qnet/records.hpp"

#include <cstdio>

#include "json.hpp"

namespace qnet {

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lf", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lf", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(std::span<const char>(text.data(), text.size()))));
  return buf;
}

std::string to_csv_row(const EstimateRecord& r) {
  std::string row = r.estimator;
  row += ',';
  row += r.criterion;
  row += ',';
  row += csv_number(r.theta);
  row += ',';
  row += std::to_string(r.reps);
  row += ',';
  row += csv_number(r.mean);
  row += ',';
  row += csv_number(r.variance);
  row += ',';
  row += csv_number(r.ci95);
  row += ',';
  row += r.psi_mode;
  row += ',';
  row += std::to_string(r.ties);
  row += ',';
  row += std::to_string(r.seed);
  return row;
}

std::string to_json_text(const EstimateRecord& r) {
  nlohmann::ordered_json j;
  j["estimator"] = r.estimator;
  j["criterion"] = r.criterion;
  j["theta"] = r.theta;
  j["reps"] = r.reps;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["ci95"] = r.ci95;
  j["psi_mode"] = r.psi_mode;
  j["ties"] = r.ties;
  j["seed"] = r.seed;
  j["spec_hash"] = r.spec_hash;
  return j.dump(2) + "\n";
}

std::string to_csv_row(const OracleRecord& r) {
  std::string row = csv_number(r.theta);
  row += ',';
  row += csv_number(r.ef);
  row += ',';
  row += csv_number(r.def);
  row += ',';
  row += csv_number(r.edf);
  row += ',';
  row += csv_number(r.eg);
  row += ',';
  row += csv_number(r.residual);
  row += ',';
  row += std::to_string(r.grid);
  return row;
}

std::string to_json_text(const OracleRecord& r) {
  nlohmann::ordered_json j;
  j["theta"] = r.theta;
  j["ef"] = r.ef;
  j["def"] = r.def;
  j["edf"] = r.edf;
  j["eg"] = r.eg;
  j["residual"] = r.residual;
  j["grid"] = r.grid;
  j["spec_hash"] = r.spec_hash;
  return j.dump(2) + "\n";
}

}  // namespace qnet
