#ifndef OHO_RNG_HPP
#define OHO_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace oho {

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact output
// sequence mandated by the standard); all value transforms are implemented here
// rather than via std::*_distribution, whose output is implementation-defined.
// This keeps traces byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double normal();

  // Fisher-Yates with Rng::below.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed from a master seed and a purpose tag
// (splitmix64 finalizer). Used to decouple e.g. the training-batch shuffle
// from validation sampling so that enabling one never perturbs the other.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt);

}  // namespace oho

#endif  // OHO_RNG_HPP
