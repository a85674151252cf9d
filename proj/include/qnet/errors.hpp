#pragma once

#include <stdexcept>
#include <string>

namespace qnet {

// Error categories used across the library. The CLI maps configuration and
// validation failures to exit code 1 and run-time failures to exit code 2.
enum class Errc {
  // spec validation
  invalid_topology,
  invalid_probability,
  empty_population,
  horizon_too_small,
  invalid_service,
  invalid_domain,
  bad_config,
  // dynamics
  length_mismatch,
  k_too_large,
  missing_arrival,
  starvation,
  horizon_exceeded,
  // criteria
  insufficient_completions,
  zero_departure,
  // estimation and oracles
  too_few_samples,
  support_too_large,
  too_many_coordinates,
  out_of_domain,
  target_not_in_support,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_topology: return "InvalidTopology";
    case Errc::invalid_probability: return "InvalidProbability";
    case Errc::empty_population: return "EmptyPopulation";
    case Errc::horizon_too_small: return "HorizonTooSmall";
    case Errc::invalid_service: return "InvalidService";
    case Errc::invalid_domain: return "InvalidDomain";
    case Errc::bad_config: return "BadConfig";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::missing_arrival: return "MissingArrival";
    case Errc::starvation: return "Starvation";
    case Errc::horizon_exceeded: return "HorizonExceeded";
    case Errc::insufficient_completions: return "InsufficientCompletions";
    case Errc::zero_departure: return "ZeroDeparture";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::support_too_large: return "SupportTooLarge";
    case Errc::too_many_coordinates: return "TooManyCoordinates";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::target_not_in_support: return "TargetNotInSupport";
  }
  return "UnknownError";
}

constexpr bool is_validation_error(Errc c) {
  switch (c) {
    case Errc::invalid_topology:
    case Errc::invalid_probability:
    case Errc::empty_population:
    case Errc::horizon_too_small:
    case Errc::invalid_service:
    case Errc::invalid_domain:
    case Errc::bad_config:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qnet
