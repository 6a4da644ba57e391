#ifndef WARDTRANS_ASSESS_HPP
#define WARDTRANS_ASSESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wardtrans/mcmc.hpp"
#include "wardtrans/simulate.hpp"
#include "wardtrans/stats.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

struct DicConfig {
  long iterations = 50000;  // augmentation-only chain at the posterior mean
  long burn_in = 1000;
  long thin = 10;
  double phi0 = 0.3;
  long min_snapshots = 500;
  std::uint64_t seed = 1;
};

// DIC_6 = -4 E_{theta,c}[log pi(y,c|theta)] + 2 E_c[log pi(y,c|theta_hat)],
// with theta_hat the posterior mean and the second expectation taken over a
// fresh augmentation-only chain run at theta_hat.
double dic6(const PosteriorSamples& samples, const WardData& ward,
            ModelKind model, const DicConfig& config);

struct PppConfig {
  long replicates = 0;       // 0 -> one per `sample_stride` chain draws
  long sample_stride = 100;  // take every 100th thinned sample
  SimPolicy policy;          // replayed test times, detection precautions
  std::uint64_t seed = 1;
  int threads = 1;
};

// Share of forward simulations whose number of detected colonizations
// (episodes with a positive test) is >= the observed number.
double posterior_predictive_pvalue(const PosteriorSamples& samples,
                                   const WardData& ward, ModelKind model,
                                   const PppConfig& config);

struct TrajectoryBands {
  double interval_days = 14;
  std::vector<long> observed;
  std::vector<double> mean;
  std::vector<double> lower;  // 2.5%
  std::vector<double> upper;  // 97.5%
};

struct TrajectoryConfig {
  double interval_days = 14;
  long n_sims = 2000;
  SimPolicy policy;
  std::uint64_t seed = 1;
  int threads = 1;
};

TrajectoryBands predictive_trajectories(const PosteriorSamples& samples,
                                        const WardData& ward, ModelKind model,
                                        const TrajectoryConfig& config);

struct HiddenCarriage {
  bool defined = false;  // false when no episode is colonized
  double p_hidden = 0;   // colonized-days spent outside precautions
  double p_wait = 0;     // colonized-days between first positive and precautions
};

HiddenCarriage hidden_carriage(const WardData& ward,
                               const std::vector<double>& col_times);

struct HiddenCarriageSummary {
  long snapshots_used = 0;
  double hidden_median = 0;
  CredibleInterval hidden_ci;
  double wait_median = 0;
  CredibleInterval wait_ci;
};

HiddenCarriageSummary summarize_hidden_carriage(const PosteriorSamples& samples,
                                                const WardData& ward);

struct EfficacySummary {
  double prob_beta1_greater = 0;  // P(beta1 > beta2 | y)
  double log_ratio_median = 0;    // log(beta1/beta2)
  CredibleInterval log_ratio_ci;
  double log_ratio_mean = 0;
  double log_ratio_variance = 0;  // feeds the cross-ward pooling
};

EfficacySummary efficacy_summary(const PosteriorSamples& samples);

struct PooledEstimate {
  double estimate = 0;
  double variance = 0;
  double lower = 0, upper = 0;  // 95% interval
};

// Fixed-effect inverse-variance pooling of per-ward estimates.
PooledEstimate pool_efficacy(
    const std::vector<std::pair<double, double>>& estimates_and_variances);

struct MonthlyPrevalence {
  double observed_mean = 0;    // detected prevalence, averaged over blocks
  double observed_sd = 0;      // spread across blocks
  double predicted_median = 0; // posterior over augmentation snapshots
  double predicted_sd = 0;
};

MonthlyPrevalence monthly_prevalence(const PosteriorSamples& samples,
                                     const WardData& ward, double block_days);

struct AssessConfig {
  double interval_days = 14;
  long trajectory_sims = 2000;
  long ppp_replicates = 0;
  long ppp_sample_stride = 100;
  double block_days = 30;
  DicConfig dic;
  SimPolicy policy;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct AssessmentReport {
  std::string ward_id;
  ModelKind model = ModelKind::Full;
  double dic6 = 0;
  double ppp = 0;
  TrajectoryBands bands;
  HiddenCarriageSummary carriage;
  EfficacySummary efficacy;
  MonthlyPrevalence prevalence;
};

AssessmentReport run_assessment(const PosteriorSamples& samples,
                                const WardData& ward, ModelKind model,
                                const AssessConfig& config);

}  // namespace wardtrans

#endif
