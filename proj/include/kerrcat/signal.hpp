#pragma once
#include <cstdint>
#include <string>

namespace kerrcat {

// Coin estimate: S = m/M - 1/2, sigma_S = 1/sqrt(4M).
struct SignalEstimate {
  std::int64_t m_counts = 0;
  std::int64_t shots = 0;
  double S = 0.0;
  double sigma_S = 0.0;
  std::uint64_t seed = 0;
  std::string params_digest;

  friend bool operator==(const SignalEstimate&, const SignalEstimate&) = default;
};

}  // namespace kerrcat
