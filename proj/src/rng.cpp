#include "concrete_geom/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace concrete {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngState::RngState(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

double RngState::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngState::uniform_open() {
  constexpr double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::clamp(uniform(), lo, hi);
}

RngState RngState::derive(std::uint64_t stream) const {
  return RngState(mix_seed(seed_ ^ mix_seed(stream + 1)));
}

}  // namespace concrete
