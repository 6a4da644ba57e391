#ifndef WARDTRANS_MCMC_HPP
#define WARDTRANS_MCMC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "wardtrans/index_set.hpp"
#include "wardtrans/likelihood.hpp"
#include "wardtrans/rng.hpp"
#include "wardtrans/timeline.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

struct SamplerConfig {
  long iterations = 200000;
  long burn_in = 10000;
  long thin = 10;
  // Per-beta random-walk proposal standard deviations; a non-positive entry
  // resolves to 0.002/day, scaled down to 2/rate when the prior pins the
  // parameter to a much smaller range (the no-background beta0).
  std::array<double, 3> rw_sd{0, 0, 0};
  double phi0 = 0.3;  // proposal mass on colonized-at-admission
  long moves_per_iteration = 1;
  long snapshot_stride = 10;     // in thinned draws; 0 disables snapshots
  long recompute_stride = 1000;  // full-likelihood refresh cadence; 0 disables
  bool check_invariants = false;
  long log_stride = 0;  // progress lines to stderr every N iterations
  double init_beta_mean = 0.01;  // initial betas ~ Exp(mean), not the prior
  std::uint64_t seed = 1;
  PriorConfig prior;
  ModelKind model = ModelKind::Full;

  void validate() const;
  std::array<double, 3> resolved_rw_sd() const;
};

struct MoveCounters {
  long attempts = 0;
  long accepts = 0;
  long rejected_negative = 0;  // random-walk proposals below zero
  double rate() const { return attempts ? double(accepts) / attempts : 0.0; }
};

struct ThetaDraw {
  long iteration = 0;
  Theta theta;
  double loglik = 0;
  long n1 = 0;    // colonized episodes without a positive test
  long n_CA = 0;
  long n_FN = 0;
  double colonized_days = 0;
};

struct AugSnapshot {
  long draw_index = 0;  // index into draws
  std::vector<double> col_times;
};

struct PosteriorSamples {
  ModelKind model = ModelKind::Full;
  std::uint64_t seed = 0;
  long iterations = 0, burn_in = 0, thin = 0;
  std::vector<ThetaDraw> draws;
  std::vector<AugSnapshot> snapshots;
  std::array<MoveCounters, 3> beta_updates;
  MoveCounters add_move, delete_move, shift_move;
  double max_recompute_rel_error = 0;

  Theta posterior_mean() const;
  std::vector<double> component(int which) const;  // 0..4 = p,phi,b0,b1,b2
};

// Non-posterior part of the log acceptance ratios of the add/delete moves.
// For matched states the add factor and the reverse delete factor cancel
// exactly (detailed balance of the proposal pair).
double log_add_factor(long n0, long n1, double phi0, double stay_length,
                      bool at_admission);
double log_delete_factor(long n0, long n1, double phi0, double stay_length,
                         bool at_admission);

/// Current point of one Metropolis-within-Gibbs chain over (theta, c).
/// Keeps the sorted event list and sufficient statistics maintained
/// incrementally across colonization-time moves; a full rebuild is available
/// as a cross-check.
class ChainState {
 public:
  ChainState(const WardData& ward, const Theta& theta,
             const PriorConfig& prior, double phi0, Augmentation aug);

  // Conjugate draws: p ~ Beta(a_p + n_TP, b_p + n_FN),
  // phi ~ Beta(a_phi + n_CA, b_phi + n_A - n_CA).
  void gibbs_update_p(Rng& rng);
  void gibbs_update_phi(Rng& rng);

  // Gaussian random walk on each beta in turn; negative proposals are
  // rejected immediately.
  void rw_update_betas(Rng& rng, const std::array<double, 3>& sd,
                       std::array<MoveCounters, 3>& counters);

  // Colonization-time moves. Return true when the proposal is accepted;
  // an infeasible move (empty candidate set) counts as a rejected attempt.
  bool move_add(Rng& rng, MoveCounters& counter);
  bool move_delete(Rng& rng, MoveCounters& counter);
  bool move_shift(Rng& rng, MoveCounters& counter);

  const WardData& ward() const { return *ward_; }
  const Theta& theta() const { return theta_; }
  void set_theta(const Theta& theta) { theta_ = theta; }
  const Augmentation& augmentation() const { return aug_; }
  const HazardStats& stats() const { return stats_; }
  CountsSummary counts() const;

  long n0() const { return static_cast<long>(n0_set_.size()); }
  long n1() const { return static_cast<long>(n1_set_.size()); }
  long np() const { return static_cast<long>(p_set_.size()); }
  double colonized_days() const;

  // log pi(y, c | theta) from the incrementally maintained statistics.
  double log_likelihood() const;
  // Full rebuild from (ward, augmentation); replaces the cached statistics
  // and returns the freshly computed value.
  double recompute_log_likelihood();

 private:
  void rebuild_cache();
  void insert_col_event(std::int32_t ep, double c);
  void erase_col_event(std::int32_t ep, double c);
  double eval(const HazardStats& stats, long n_ca, long n_fn) const;

  const WardData* ward_;
  Theta theta_;
  PriorConfig prior_;
  double phi0_;
  Augmentation aug_;

  std::vector<TimelineEvent> events_;
  std::vector<TimelineEvent> fixed_events_;
  SweepScratch scratch_;
  HazardStats stats_, proposal_stats_;
  long n_ca_ = 0, n_fn_ = 0;

  IndexSet n0_set_, n1_set_;
  std::vector<std::int32_t> p_set_;
};

PosteriorSamples run_chain(const WardData& ward, const SamplerConfig& config);

/// Augmentation-only chain at fixed theta; returns the thinned trace of
/// log pi(y, c | theta). Used for the conditional expectation in DIC.
struct AugChainConfig {
  long iterations = 50000;
  long burn_in = 1000;
  long thin = 10;
  double phi0 = 0.3;
  long moves_per_iteration = 1;
  std::uint64_t seed = 1;
};

std::vector<double> augmentation_loglik_chain(const WardData& ward,
                                              const Theta& theta,
                                              const AugChainConfig& config);

}  // namespace wardtrans

#endif
