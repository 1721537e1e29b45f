#include "partlab/rng.hpp"

#include <cmath>
#include <limits>

#include "partlab/error.hpp"

namespace partlab {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngHandle::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngHandle::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngHandle::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorKind::OutOfRange, "empty index range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t w;
  do {
    w = next_u64();
  } while (w >= limit);
  return w % bound;
}

double RngHandle::normal() {
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RngHandle::exponential(double rate) {
  if (!(rate > 0.0)) throw Error(ErrorKind::InvalidParams, "exponential rate must be positive");
  return -std::log(uniform_open()) / rate;
}

double RngHandle::gamma(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorKind::InvalidParams, "gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngHandle::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  const double s = x + y;
  // Both draws can underflow to zero for tiny shapes; the variate is then
  // concentrated at the endpoints, picked with the beta mean.
  if (s == 0.0) return uniform() < a / (a + b) ? 1.0 : 0.0;
  return x / s;
}

}  // namespace partlab
