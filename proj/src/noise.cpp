#include "accelfem/noise.hpp"

#include "accelfem/types.hpp"

#include <cmath>
#include <numbers>

namespace afem {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += w0;
    k[1] += w1;
  }
  return c;
}

double counter_normal(std::uint64_t seed, std::uint32_t rho, std::uint64_t n) {
  const auto r = philox4x32({static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32), rho, 0u},
                            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
  // u1 in (0, 1], u2 in [0, 1)
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9E3779B97F4A7C15ull * (index + 1));
}

NoisePath::NoisePath(std::uint64_t seed, int steps, double dt, int rho_count)
    : seed_(seed), steps_(steps), dt_(dt), increments_(rho_count, steps) {
  if (steps < 1) throw InputError("noise path needs at least one step");
  if (!(dt > 0.0)) throw InputError("noise path needs dt > 0");
  if (rho_count < 0) throw InputError("negative noise count");
  const double scale = std::sqrt(dt);
  for (int rho = 0; rho < rho_count; ++rho)
    for (int n = 0; n < steps; ++n) increments_(rho, n) = scale * counter_normal(seed, static_cast<std::uint32_t>(rho), static_cast<std::uint64_t>(n));
}

}  // namespace afem
