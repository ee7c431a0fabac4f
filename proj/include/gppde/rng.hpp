#ifndef GPPDE_RNG_HPP_
#define GPPDE_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace gppde {

// Seeded random stream with hand-rolled output transforms.  The standard
// distribution adaptors are implementation-defined, so results would not be
// reproducible across standard libraries; the raw mt19937_64 stream is.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in {0, ..., n-1}.  Modulo bias is ~n/2^64, irrelevant
  // for the index ranges used here.
  int uniform_int(int n) {
    return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
  }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gppde

#endif  // GPPDE_RNG_HPP_
