#pragma once

#include <cstdint>
#include <random>

namespace bcnet {

// Stateless mixing. Every random quantity in the library is keyed off a
// (seed, coordinates...) tuple through these, so results are independent of
// evaluation order and of how work is batched across replicas.
namespace mix {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

inline std::uint64_t key2(std::uint64_t a, std::uint64_t b) {
  return combine(splitmix64(a), b);
}

inline std::uint64_t key3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return combine(key2(a, b), c);
}

// Uniform in [0, 1) with 53 significant bits.
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace mix

// Sequential uniform/Gaussian source. mt19937_64 is bit-specified by the
// standard; the Gaussian transform is our own Box-Muller so that streams do
// not depend on the standard library's unspecified normal_distribution.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : eng_(key) {}

  double uniform() {  // in (0, 1]; never 0, safe under log()
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double gaussian();

  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace bcnet
