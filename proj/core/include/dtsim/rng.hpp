#pragma once

#include <cstdint>
#include <random>

#include "dtsim/kernel.hpp"

namespace dtsim {

// Named random substreams; draws on one never perturb another.
enum class Substream : std::uint64_t {
  Workload = 1,
  Mobility = 2,
  MoverSelection = 3,
};

// Deterministic stream keyed by (seed, substream, child). mt19937_64 is fully
// specified by the standard and the float conversions below are done by hand,
// so sequences are identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Substream stream, std::uint64_t child = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }
  // Uniform integer on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// -ln(u) / rate for u in (0, 1]. Throws ConfigError when rate <= 0.
SimTime exponential_from_uniform(double u, double rate);
SimTime draw_exponential(RandomStream& stream, double rate);

}  // namespace dtsim
