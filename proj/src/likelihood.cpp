#include "wardtrans/likelihood.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <cmath>

namespace wardtrans {

PriorConfig PriorConfig::defaults_for(ModelKind kind) {
  PriorConfig prior;
  if (kind == ModelKind::NoBackground) prior.beta0_rate = 1e6;
  return prior;
}

void PriorConfig::validate() const {
  if (!(p_alpha > 0 && p_beta > 0 && phi_alpha > 0 && phi_beta > 0 &&
        beta0_rate > 0 && beta1_rate > 0 && beta2_rate > 0)) {
    throw ValidationError("prior hyperparameters must be positive");
  }
}

double colonization_rate(const Theta& theta, int colonized, int isolated) {
  if (theta.kind == ModelKind::NonLinear) {
    return theta.beta0 + (colonized > 0 ? theta.beta1 : 0.0) +
           (isolated > 0 ? theta.beta2 : 0.0);
  }
  return theta.beta0 + theta.beta1 * colonized + theta.beta2 * isolated;
}

CountsSummary counts_summary(const WardData& ward, const Augmentation& aug) {
  CountsSummary counts;
  counts.n_A = ward.n_new_admissions;
  counts.n_TP = ward.n_positive_tests;
  for (std::size_t j = 0; j < ward.size(); ++j) {
    if (!aug.is_colonized(j)) continue;
    const auto& ep = ward.episodes[j];
    if (ep.admission_class == AdmissionClass::NewAdmission &&
        aug.col_time(j) == ep.admit) {
      ++counts.n_CA;
    }
    counts.n_FN += ep.false_negatives_from(aug.col_time(j));
  }
  return counts;
}

namespace {

// count * log(prob), with the 0 * log(0) = 0 convention; -inf when a
// zero-probability factor has positive count.
inline double count_term(long count, double prob) {
  if (count == 0) return 0.0;
  if (prob <= 0) return -kInf;
  return count * std::log(prob);
}

}  // namespace

double beta_terms(const HazardStats& stats, const Theta& theta) {
  double sum = 0;
  for (const auto& cp : stats.col_points) {
    const double rate =
        colonization_rate(theta, cp.colonized_before, cp.isolated_before);
    if (rate <= 0) return -kInf;
    sum += std::log(rate);
  }
  return sum - integrate_hazard(stats, theta);
}

double log_likelihood_from_stats(const WardData& ward, const HazardStats& stats,
                                 const CountsSummary& counts,
                                 const Theta& theta) {
  double ll = count_term(counts.n_CA, theta.phi) +
              count_term(counts.n_A - counts.n_CA, 1.0 - theta.phi) +
              count_term(counts.n_TP, theta.p) +
              count_term(counts.n_FN, 1.0 - theta.p);
  if (ll == -kInf) return -kInf;
  const double bt = beta_terms(stats, theta);
  if (bt == -kInf) return -kInf;
  (void)ward;
  return ll + bt;
}

double log_augmented_likelihood(const WardData& ward, const Augmentation& aug,
                                const Theta& theta) {
  const WardTimeline timeline = build_timeline(ward, aug);
  return log_likelihood_from_stats(ward, timeline.stats(),
                                   counts_summary(ward, aug), theta);
}

double log_prior(const Theta& theta, const PriorConfig& prior) {
  if (!theta.in_support()) return -kInf;
  auto beta_logpdf = [](double x, double a, double b) {
    if (x <= 0 || x >= 1) {
      // Boundary values are fine for the uniform prior, impossible otherwise.
      if (a == 1 && b == 1 && x >= 0 && x <= 1) return 0.0;
      return -kInf;
    }
    return (a - 1) * std::log(x) + (b - 1) * std::log(1 - x) -
           gsl_sf_lnbeta(a, b);
  };
  auto exp_logpdf = [](double x, double rate) {
    return std::log(rate) - rate * x;
  };
  return beta_logpdf(theta.p, prior.p_alpha, prior.p_beta) +
         beta_logpdf(theta.phi, prior.phi_alpha, prior.phi_beta) +
         exp_logpdf(theta.beta0, prior.beta0_rate) +
         exp_logpdf(theta.beta1, prior.beta1_rate) +
         exp_logpdf(theta.beta2, prior.beta2_rate);
}

}  // namespace wardtrans
