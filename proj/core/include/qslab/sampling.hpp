#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "qslab/linalg.hpp"
#include "qslab/qstate.hpp"

namespace qslab {

// SplitMix64 finalizer applied to (key + counter * golden gamma). Output i of a
// stream depends only on (key, i), so substreams never depend on scheduling.
// Stream splitting: substream(seed, i) uses key = mix64(seed ^ mix64(i + gamma)).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static CounterRng substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return CounterRng(substream_key(seed, index));
  }
  static std::uint64_t substream_key(std::uint64_t seed, std::uint64_t index) noexcept;
  static std::uint64_t mix64(std::uint64_t z) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;
  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Standard normal via Box-Muller; the spare value is cached.
  double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

BlochVector random_unit_vector(CounterRng& rng);
// Uniform in the unit ball: Gaussian direction, radius u^(1/3).
BlochVector random_ball_vector(CounterRng& rng);

std::vector<cplx> random_ket(std::size_t dim, CounterRng& rng);
// Haar unitary: QR of a complex Ginibre matrix with R's diagonal made positive.
ComplexMatrix random_unitary(std::size_t dim, CounterRng& rng);
// GUE-distributed Hermitian matrix.
ComplexMatrix random_hermitian(std::size_t dim, CounterRng& rng);
// Hermitian with operator norm exactly 1 (GUE direction rescaled).
ComplexMatrix random_unit_hermitian(std::size_t dim, CounterRng& rng);
// Mixed state from the Hilbert-Schmidt (Ginibre) ensemble.
DensityMatrix random_density(std::size_t dim, CounterRng& rng);
DensityMatrix random_pure_state(std::size_t dim, CounterRng& rng);

}  // namespace qslab
