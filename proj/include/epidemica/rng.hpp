#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace epidemica {

// SplitMix64 finalizer. Used both as a seed-derivation step and as the
// mixing round of the counter-based draw function below.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Domain tags keep independent random streams derived from one master seed
// from ever colliding (trace generation vs. event draws vs. seed/target picks).
enum class RngDomain : std::uint64_t {
  stream_generation = 1,
  infection_draw = 2,
  patch_draw = 3,
  seed_selection = 4,
  target_selection = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_id,
                                    RngDomain domain) noexcept {
  return mix64(mix64(mix64(master_seed) ^ trial_id) ^ static_cast<std::uint64_t>(domain));
}

// Stateless counter-based PRF: one uniform in [0,1) per (master_seed, trial,
// key, domain) tuple. Draws are independent of the order events are visited
// and of any probability parameter, which is what makes coupled
// (common-random-number) comparisons exact rather than statistical.
constexpr double counter_uniform01(std::uint64_t master_seed, std::uint64_t trial_id,
                                   std::uint64_t key, RngDomain domain) noexcept {
  std::uint64_t h = mix64(derive_seed(master_seed, trial_id, domain) ^ mix64(key));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Thin wrapper over mt19937_64 with explicit, implementation-independent
// mappings to doubles (std::uniform_real_distribution is not guaranteed to
// produce identical sequences across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Exponential via inversion; guards the log against a zero uniform.
  double exponential(double rate) {
    double u = uniform01();
    return -std::log1p(-u) / rate;
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace epidemica
