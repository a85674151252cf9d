#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qnet/estimators.hpp"
#include "qnet/oracle.hpp"

namespace qnet {

// FNV-1a over raw bytes; stable fingerprint for config provenance.
std::uint64_t fnv1a64(std::span<const char> bytes);
std::string fnv1a64_hex(const std::string& text);

// Shortest decimal that parses back to exactly v.
std::string csv_number(double v);

struct EstimateRecord {
  std::string estimator;
  std::string criterion;
  double theta = 0.0;
  int reps = 0;
  double mean = 0.0;
  double variance = 0.0;
  double ci95 = 0.0;
  std::string psi_mode;
  long long ties = 0;
  std::uint64_t seed = 0;
  std::string spec_hash;  // JSON only; the CSV column set is fixed
};

inline constexpr const char* kEstimateCsvHeader =
    "estimator,criterion,theta,reps,mean,variance,ci95,psi_mode,ties,seed";

std::string to_csv_row(const EstimateRecord& r);
std::string to_json_text(const EstimateRecord& r);

struct OracleRecord {
  double theta = 0.0;
  double ef = 0.0;
  double def = 0.0;
  double edf = 0.0;
  double eg = 0.0;
  double residual = 0.0;
  int grid = 0;
  std::string spec_hash;
};

inline constexpr const char* kOracleCsvHeader = "theta,ef,def,edf,eg,residual,grid";

std::string to_csv_row(const OracleRecord& r);
std::string to_json_text(const OracleRecord& r);

}  // namespace qnet
