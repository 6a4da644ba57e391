#ifndef WARDTRANS_LIKELIHOOD_HPP
#define WARDTRANS_LIKELIHOOD_HPP

#include "wardtrans/timeline.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

/// Prior hyperparameters: Beta for p and phi, Exponential (rate
/// parameterization, mean 1/rate) for the colonization rates.
struct PriorConfig {
  double p_alpha = 1, p_beta = 1;
  double phi_alpha = 1, phi_beta = 1;
  double beta0_rate = 1e-6;
  double beta1_rate = 1e-6;
  double beta2_rate = 1e-6;

  // The no-background variant pins beta0 near zero through its prior
  // (rate 1e6) rather than fixing it to zero.
  static PriorConfig defaults_for(ModelKind kind);
  void validate() const;
};

// Colonization hazard per susceptible patient given C colonized-unisolated
// and Q colonized-isolated patients: beta0 + beta1*C + beta2*Q for the
// linear variants, indicators instead of counts for the non-linear one.
double colonization_rate(const Theta& theta, int colonized, int isolated);

CountsSummary counts_summary(const WardData& ward, const Augmentation& aug);

// log pi(y, c | theta) given precomputed hazard statistics and counts.
// Returns -inf when a colonization fires at zero rate or when p/phi sit on
// a boundary that conflicts with the counts.
double log_likelihood_from_stats(const WardData& ward, const HazardStats& stats,
                                 const CountsSummary& counts,
                                 const Theta& theta);

// Full-route evaluation: rebuilds the timeline from scratch.
double log_augmented_likelihood(const WardData& ward, const Augmentation& aug,
                                const Theta& theta);

// The beta-dependent part of the log likelihood (colonization product term
// minus the exposure integral); used by the random-walk parameter updates.
double beta_terms(const HazardStats& stats, const Theta& theta);

double log_prior(const Theta& theta, const PriorConfig& prior);

}  // namespace wardtrans

#endif
