#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace flatproc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Raised for every violated precondition or degenerate configuration.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scalar result with its Monte Carlo standard error (0 for exact values).
struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream split: stream i of a master seed depends only on (seed, i),
// so replications give identical results regardless of how they are scheduled.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = splitmix64(master_seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

}  // namespace flatproc
