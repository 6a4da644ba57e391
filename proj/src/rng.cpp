#include "wardtrans/rng.hpp"

#include <gsl/gsl_randist.h>

namespace wardtrans {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = mix64(base ^ mix64(stream + 1));
  return s ? s : 0x7f4a7c15ULL;  // gsl treats seed 0 as "use default"
}

Rng::Rng(std::uint64_t seed) : r_(gsl_rng_alloc(gsl_rng_mt19937)) {
  gsl_rng_set(r_, seed ? seed : 0x7f4a7c15ULL);
}

Rng::~Rng() {
  if (r_) gsl_rng_free(r_);
}

Rng::Rng(Rng&& other) noexcept : r_(other.r_) { other.r_ = nullptr; }

Rng& Rng::operator=(Rng&& other) noexcept {
  if (this != &other) {
    if (r_) gsl_rng_free(r_);
    r_ = other.r_;
    other.r_ = nullptr;
  }
  return *this;
}

double Rng::uniform() { return gsl_rng_uniform(r_); }

double Rng::uniform_pos() { return gsl_rng_uniform_pos(r_); }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::uniform_open(double lo, double hi) {
  return lo + (hi - lo) * uniform_pos();
}

std::size_t Rng::uniform_index(std::size_t n) {
  return static_cast<std::size_t>(gsl_rng_uniform_int(r_, n));
}

double Rng::normal(double sd) { return gsl_ran_gaussian(r_, sd); }

double Rng::exponential(double mean) { return gsl_ran_exponential(r_, mean); }

double Rng::beta(double a, double b) { return gsl_ran_beta(r_, a, b); }

double Rng::lognormal(double zeta, double sigma) {
  return gsl_ran_lognormal(r_, zeta, sigma);
}

unsigned Rng::poisson(double mu) { return gsl_ran_poisson(r_, mu); }

bool Rng::bernoulli(double p) { return gsl_rng_uniform(r_) < p; }

}  // namespace wardtrans
