#include "bcnet/rng.hpp"

#include <cmath>

namespace bcnet {

double RngStream::gaussian() {
  if (has_cache_) {
    has_cache_ = false;
    return cache_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  cache_ = r * std::sin(a);
  has_cache_ = true;
  return r * std::cos(a);
}

}  // namespace bcnet
