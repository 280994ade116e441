#include "dtsim/rng.hpp"

#include <cmath>
#include <limits>

#include "dtsim/errors.hpp"

namespace dtsim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, Substream stream, std::uint64_t child)
    : engine_(splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream))) + child)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw InvariantViolation("rng: below(0)");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

SimTime exponential_from_uniform(double u, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConfigError("exponential draw requires a positive finite rate");
  }
  return -std::log(u) / rate;
}

SimTime draw_exponential(RandomStream& stream, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConfigError("exponential draw requires a positive finite rate");
  }
  // u = 1 gives a zero gap; resample so deltas stay strictly positive.
  double u = stream.uniform_open_closed();
  while (u == 1.0) u = stream.uniform_open_closed();
  return exponential_from_uniform(u, rate);
}

}  // namespace dtsim
