#ifndef TVTRACK_RNG_HPP
#define TVTRACK_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace tvtrack {

// Seedable 64-bit generator used everywhere randomness is needed.
// Uniform doubles come from the top 53 bits of mt19937_64 output and
// Gaussians from the Box-Muller transform, so streams are reproducible
// for a given seed within one build. Bit-exact agreement across standard
// library implementations is not promised, only within-build determinism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; the paired draw is cached
  double normal();

  Eigen::VectorXd normal_vector(int d);
  Eigen::MatrixXd normal_matrix(int rows, int cols);  // filled row major

  // independent stream seed derived from (base, stream) via splitmix64
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tvtrack

#endif
