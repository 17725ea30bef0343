#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>

namespace afem {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Standard normal addressed by (seed, rho, n): one Philox block keyed by the
/// seed with counter (n_lo, n_hi, rho, 0), then Box-Muller on its first two
/// 64-bit halves. No state, so any increment can be regenerated alone.
double counter_normal(std::uint64_t seed, std::uint32_t rho, std::uint64_t n);

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);
/// Seed of Monte Carlo sample `index`: splitmix64(base + golden * (index + 1)).
std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index);

/// Wiener increments dW^rho_n ~ N(0, dt), rho = 0..rho_count-1, n = 0..steps-1.
class NoisePath {
 public:
  NoisePath(std::uint64_t seed, int steps, double dt, int rho_count);

  std::uint64_t seed() const { return seed_; }
  int steps() const { return steps_; }
  double dt() const { return dt_; }
  int rho_count() const { return static_cast<int>(increments_.rows()); }
  double increment(int rho, int n) const { return increments_(rho, n); }
  const Eigen::MatrixXd& increments() const { return increments_; }

 private:
  std::uint64_t seed_;
  int steps_;
  double dt_;
  Eigen::MatrixXd increments_;
};

}  // namespace afem
