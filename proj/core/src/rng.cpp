#include "cramer/rng.hpp"

#include <cmath>
#include <numbers>

namespace cramer {

double RandomStream::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double RandomStream::exponential() noexcept { return -std::log(uniform()); }

}  // namespace cramer
