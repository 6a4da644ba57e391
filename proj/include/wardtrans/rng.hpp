#ifndef WARDTRANS_RNG_HPP
#define WARDTRANS_RNG_HPP

#include <cstdint>
#include <string>

#include <gsl/gsl_rng.h>

namespace wardtrans {

// SplitMix64 step; used to derive independent stream seeds from a base seed.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a; stable across platforms, used to key streams by ward/model names.
std::uint64_t fnv1a(const std::string& text);

// Seed for the k-th worker stream of a run (chains, simulation replicates).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Mersenne-Twister random stream (GSL backend). One instance per chain or
/// per simulation replicate; never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  ~Rng();
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  Rng(Rng&& other) noexcept;
  Rng& operator=(Rng&& other) noexcept;

  double uniform();                    // U[0,1)
  double uniform_pos();                // U(0,1), endpoints excluded
  double uniform(double lo, double hi);        // U[lo,hi)
  double uniform_open(double lo, double hi);   // U(lo,hi)
  std::size_t uniform_index(std::size_t n);    // 0..n-1
  double normal(double sd);
  double exponential(double mean);
  double beta(double a, double b);
  double lognormal(double zeta, double sigma);
  unsigned poisson(double mu);
  bool bernoulli(double p);

 private:
  gsl_rng* r_;
};

}  // namespace wardtrans

#endif
