#include "wardtrans/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wardtrans {

void SamplerConfig::validate() const {
  prior.validate();
  if (iterations <= 0 || burn_in < 0 || burn_in >= iterations) {
    throw ValidationError("sampler: need 0 <= burn_in < iterations");
  }
  if (thin <= 0) throw ValidationError("sampler: thin must be positive");
  if (!(phi0 > 0 && phi0 < 1)) {
    throw ValidationError("sampler: phi0 must lie in (0, 1)");
  }
  if (moves_per_iteration < 0 || snapshot_stride < 0 || recompute_stride < 0) {
    throw ValidationError("sampler: strides must be non-negative");
  }
  if (init_beta_mean <= 0) {
    throw ValidationError("sampler: init_beta_mean must be positive");
  }
  for (double sd : rw_sd) {
    if (sd < 0) throw ValidationError("sampler: rw_sd must be >= 0 (0 = auto)");
  }
}

std::array<double, 3> SamplerConfig::resolved_rw_sd() const {
  const double rates[3] = {prior.beta0_rate, prior.beta1_rate,
                           prior.beta2_rate};
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    if (rw_sd[i] > 0) {
      out[i] = rw_sd[i];
    } else {
      out[i] = (rates[i] > 1.0) ? 2.0 / rates[i] : 0.002;
    }
  }
  return out;
}

Theta PosteriorSamples::posterior_mean() const {
  Theta mean;
  mean.kind = model;
  mean.p = mean.phi = mean.beta0 = mean.beta1 = mean.beta2 = 0;
  if (draws.empty()) return mean;
  for (const auto& d : draws) {
    mean.p += d.theta.p;
    mean.phi += d.theta.phi;
    mean.beta0 += d.theta.beta0;
    mean.beta1 += d.theta.beta1;
    mean.beta2 += d.theta.beta2;
  }
  const double n = static_cast<double>(draws.size());
  mean.p /= n;
  mean.phi /= n;
  mean.beta0 /= n;
  mean.beta1 /= n;
  mean.beta2 /= n;
  return mean;
}

std::vector<double> PosteriorSamples::component(int which) const {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    switch (which) {
      case 0: out.push_back(d.theta.p); break;
      case 1: out.push_back(d.theta.phi); break;
      case 2: out.push_back(d.theta.beta0); break;
      case 3: out.push_back(d.theta.beta1); break;
      case 4: out.push_back(d.theta.beta2); break;
      default: throw std::out_of_range("theta component index");
    }
  }
  return out;
}

ChainState::ChainState(const WardData& ward, const Theta& theta,
                       const PriorConfig& prior, double phi0, Augmentation aug)
    : ward_(&ward),
      theta_(theta),
      prior_(prior),
      phi0_(phi0),
      aug_(std::move(aug)),
      fixed_events_(fixed_events(ward)) {
  aug_.validate(ward);
  rebuild_cache();
}

void ChainState::rebuild_cache() {
  const auto col = colonization_events(*ward_, aug_);
  events_.resize(fixed_events_.size() + col.size());
  std::merge(fixed_events_.begin(), fixed_events_.end(), col.begin(), col.end(),
             events_.begin(), event_less);
  sweep_events(*ward_, aug_, events_, scratch_, stats_);

  n_ca_ = 0;
  n_fn_ = 0;
  n0_set_.init(ward_->size());
  n1_set_.init(ward_->size());
  p_set_.clear();
  for (std::size_t j = 0; j < ward_->size(); ++j) {
    const auto& ep = ward_->episodes[j];
    switch (aug_.group_of(*ward_, j)) {
      case EpisodeGroup::P:
        p_set_.push_back(static_cast<std::int32_t>(j));
        break;
      case EpisodeGroup::N1:
        n1_set_.insert(static_cast<std::int32_t>(j));
        break;
      case EpisodeGroup::N0:
        n0_set_.insert(static_cast<std::int32_t>(j));
        break;
      case EpisodeGroup::Readmission:
        break;
    }
    if (aug_.is_colonized(j)) {
      n_fn_ += ep.false_negatives_from(aug_.col_time(j));
      if (ep.admission_class == AdmissionClass::NewAdmission &&
          aug_.col_time(j) == ep.admit) {
        ++n_ca_;
      }
    }
  }
}

namespace {

// Log posterior-ratio contribution of (proposed - current); keeps the
// -inf-minus--inf case well defined (a finite proposal always escapes a
// zero-likelihood state).
inline double loglik_gap(double proposed, double current) {
  if (proposed == -kInf) return -kInf;
  if (current == -kInf) return kInf;
  return proposed - current;
}

}  // namespace

CountsSummary ChainState::counts() const {
  CountsSummary counts;
  counts.n_A = ward_->n_new_admissions;
  counts.n_TP = ward_->n_positive_tests;
  counts.n_CA = n_ca_;
  counts.n_FN = n_fn_;
  return counts;
}

double ChainState::colonized_days() const {
  double total = 0;
  for (std::size_t j = 0; j < ward_->size(); ++j) {
    if (aug_.is_colonized(j)) {
      total += ward_->episodes[j].discharge - aug_.col_time(j);
    }
  }
  return total;
}

double ChainState::eval(const HazardStats& stats, long n_ca, long n_fn) const {
  CountsSummary counts;
  counts.n_A = ward_->n_new_admissions;
  counts.n_TP = ward_->n_positive_tests;
  counts.n_CA = n_ca;
  counts.n_FN = n_fn;
  return log_likelihood_from_stats(*ward_, stats, counts, theta_);
}

double ChainState::log_likelihood() const { return eval(stats_, n_ca_, n_fn_); }

double ChainState::recompute_log_likelihood() {
  rebuild_cache();
  return log_likelihood();
}

void ChainState::insert_col_event(std::int32_t ep, double c) {
  const TimelineEvent ev{c, kRankColonize, ep};
  auto it = std::lower_bound(events_.begin(), events_.end(), ev, event_less);
  events_.insert(it, ev);
}

void ChainState::erase_col_event(std::int32_t ep, double c) {
  const TimelineEvent ev{c, kRankColonize, ep};
  auto it = std::lower_bound(events_.begin(), events_.end(), ev, event_less);
  events_.erase(it);
}

void ChainState::gibbs_update_p(Rng& rng) {
  theta_.p = rng.beta(prior_.p_alpha + ward_->n_positive_tests,
                      prior_.p_beta + n_fn_);
}

void ChainState::gibbs_update_phi(Rng& rng) {
  theta_.phi = rng.beta(prior_.phi_alpha + n_ca_,
                        prior_.phi_beta + (ward_->n_new_admissions - n_ca_));
}

void ChainState::rw_update_betas(Rng& rng, const std::array<double, 3>& sd,
                                 std::array<MoveCounters, 3>& counters) {
  const double prior_rate[3] = {prior_.beta0_rate, prior_.beta1_rate,
                                prior_.beta2_rate};
  double* beta[3] = {&theta_.beta0, &theta_.beta1, &theta_.beta2};
  for (int i = 0; i < 3; ++i) {
    ++counters[i].attempts;
    const double current = *beta[i];
    const double proposed = current + rng.normal(sd[i]);
    if (proposed < 0) {
      ++counters[i].rejected_negative;
      continue;
    }
    const double bt_current = beta_terms(stats_, theta_);
    *beta[i] = proposed;
    const double bt_proposed = beta_terms(stats_, theta_);
    const double log_ratio = loglik_gap(bt_proposed, bt_current) -
                             prior_rate[i] * (proposed - current);
    if (std::log(rng.uniform_pos()) < log_ratio) {
      ++counters[i].accepts;
    } else {
      *beta[i] = current;
    }
  }
}

double log_add_factor(long n0, long n1, double phi0, double stay_length,
                      bool at_admission) {
  double factor = std::log(double(n0)) - std::log(double(n1 + 1));
  factor += at_admission ? -std::log(phi0)
                         : std::log(stay_length) - std::log(1 - phi0);
  return factor;
}

double log_delete_factor(long n0, long n1, double phi0, double stay_length,
                         bool at_admission) {
  double factor = std::log(double(n1)) - std::log(double(n0 + 1));
  factor += at_admission ? std::log(phi0)
                         : std::log(1 - phi0) - std::log(stay_length);
  return factor;
}

bool ChainState::move_add(Rng& rng, MoveCounters& counter) {
  ++counter.attempts;
  const long n0 = static_cast<long>(n0_set_.size());
  const long n1 = static_cast<long>(n1_set_.size());
  if (n0 == 0) return false;

  const std::int32_t j = n0_set_[rng.uniform_index(n0_set_.size())];
  const auto& ep = ward_->episodes[static_cast<std::size_t>(j)];
  const bool at_admission = rng.uniform() < phi0_;
  const double c =
      at_admission ? ep.admit : rng.uniform_open(ep.admit, ep.discharge);

  const double ll_current = eval(stats_, n_ca_, n_fn_);
  aug_.set_col_time(j, c);
  if (c > ep.admit) insert_col_event(j, c);
  sweep_events(*ward_, aug_, events_, scratch_, proposal_stats_);
  const long n_ca_new = n_ca_ + (at_admission ? 1 : 0);
  const long n_fn_new = n_fn_ + ep.false_negatives_from(c);
  const double ll_proposed = eval(proposal_stats_, n_ca_new, n_fn_new);

  const double log_ratio =
      loglik_gap(ll_proposed, ll_current) +
      log_add_factor(n0, n1, phi0_, ep.discharge - ep.admit, at_admission);

  if (std::log(rng.uniform_pos()) < log_ratio) {
    std::swap(stats_, proposal_stats_);
    n_ca_ = n_ca_new;
    n_fn_ = n_fn_new;
    n0_set_.erase(j);
    n1_set_.insert(j);
    ++counter.accepts;
    return true;
  }
  if (c > ep.admit) erase_col_event(j, c);
  aug_.clear(j);
  return false;
}

bool ChainState::move_delete(Rng& rng, MoveCounters& counter) {
  ++counter.attempts;
  const long n0 = static_cast<long>(n0_set_.size());
  const long n1 = static_cast<long>(n1_set_.size());
  if (n1 == 0) return false;

  const std::int32_t j = n1_set_[rng.uniform_index(n1_set_.size())];
  const auto& ep = ward_->episodes[static_cast<std::size_t>(j)];
  const double c = aug_.col_time(j);
  const bool at_admission = (c == ep.admit);

  const double ll_current = eval(stats_, n_ca_, n_fn_);
  aug_.clear(j);
  if (c > ep.admit) erase_col_event(j, c);
  sweep_events(*ward_, aug_, events_, scratch_, proposal_stats_);
  const long n_ca_new = n_ca_ - (at_admission ? 1 : 0);
  const long n_fn_new = n_fn_ - ep.false_negatives_from(c);
  const double ll_proposed = eval(proposal_stats_, n_ca_new, n_fn_new);

  const double log_ratio =
      loglik_gap(ll_proposed, ll_current) +
      log_delete_factor(n0, n1, phi0_, ep.discharge - ep.admit, at_admission);

  if (std::log(rng.uniform_pos()) < log_ratio) {
    std::swap(stats_, proposal_stats_);
    n_ca_ = n_ca_new;
    n_fn_ = n_fn_new;
    n1_set_.erase(j);
    n0_set_.insert(j);
    ++counter.accepts;
    return true;
  }
  aug_.set_col_time(j, c);
  if (c > ep.admit) insert_col_event(j, c);
  return false;
}

bool ChainState::move_shift(Rng& rng, MoveCounters& counter) {
  ++counter.attempts;
  const std::size_t n1 = n1_set_.size();
  const std::size_t np = p_set_.size();
  if (n1 + np == 0) return false;

  const std::size_t pick = rng.uniform_index(n1 + np);
  const std::int32_t j =
      pick < n1 ? n1_set_[pick] : p_set_[pick - n1];
  const bool in_p = pick >= n1;
  const auto& ep = ward_->episodes[static_cast<std::size_t>(j)];
  const double upper = in_p ? ep.first_positive : ep.discharge;

  const double c_old = aug_.col_time(j);
  const bool old_at_admission = (c_old == ep.admit);

  bool new_at_admission;
  double c_new;
  if (upper <= ep.admit) {
    // Admission-instant positive: the only feasible colonization time.
    new_at_admission = true;
    c_new = ep.admit;
  } else {
    new_at_admission = rng.uniform() < phi0_;
    c_new = new_at_admission ? ep.admit : rng.uniform_open(ep.admit, upper);
  }
  if (c_new == c_old) {
    ++counter.accepts;
    return true;
  }

  const double ll_current = eval(stats_, n_ca_, n_fn_);
  if (c_old > ep.admit) erase_col_event(j, c_old);
  if (c_new > ep.admit) insert_col_event(j, c_new);
  aug_.set_col_time(j, c_new);
  sweep_events(*ward_, aug_, events_, scratch_, proposal_stats_);

  long n_ca_new = n_ca_;
  if (ep.admission_class == AdmissionClass::NewAdmission) {
    n_ca_new += (new_at_admission ? 1 : 0) - (old_at_admission ? 1 : 0);
  }
  const long n_fn_new =
      n_fn_ - ep.false_negatives_from(c_old) + ep.false_negatives_from(c_new);
  const double ll_proposed = eval(proposal_stats_, n_ca_new, n_fn_new);

  // Proposal density ratio q(c_old)/q(c_new); the shared 1/(n1+np) cancels.
  const double log_q_old = old_at_admission
                               ? std::log(phi0_)
                               : std::log(1 - phi0_) - std::log(upper - ep.admit);
  const double log_q_new = new_at_admission
                               ? std::log(phi0_)
                               : std::log(1 - phi0_) - std::log(upper - ep.admit);
  const double log_ratio =
      loglik_gap(ll_proposed, ll_current) + log_q_old - log_q_new;

  if (std::log(rng.uniform_pos()) < log_ratio) {
    std::swap(stats_, proposal_stats_);
    n_ca_ = n_ca_new;
    n_fn_ = n_fn_new;
    ++counter.accepts;
    return true;
  }
  if (c_new > ep.admit) erase_col_event(j, c_new);
  if (c_old > ep.admit) insert_col_event(j, c_old);
  aug_.set_col_time(j, c_old);
  return false;
}

namespace {

double relative_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

PosteriorSamples run_chain(const WardData& ward, const SamplerConfig& config) {
  config.validate();
  Rng rng(config.seed);

  Theta theta;
  theta.kind = config.model;
  theta.p = rng.beta(config.prior.p_alpha, config.prior.p_beta);
  theta.phi = rng.beta(config.prior.phi_alpha, config.prior.phi_beta);
  theta.beta0 = rng.exponential(config.init_beta_mean);
  theta.beta1 = rng.exponential(config.init_beta_mean);
  theta.beta2 = rng.exponential(config.init_beta_mean);

  ChainState chain(ward, theta, config.prior, config.phi0,
                   Augmentation::initial_for_chain(ward));

  PosteriorSamples out;
  out.model = config.model;
  out.seed = config.seed;
  out.iterations = config.iterations;
  out.burn_in = config.burn_in;
  out.thin = config.thin;
  out.draws.reserve((config.iterations - config.burn_in) / config.thin);
  const auto sd = config.resolved_rw_sd();

  for (long it = 1; it <= config.iterations; ++it) {
    chain.gibbs_update_p(rng);
    chain.gibbs_update_phi(rng);
    chain.rw_update_betas(rng, sd, out.beta_updates);
    for (long k = 0; k < config.moves_per_iteration; ++k) {
      switch (rng.uniform_index(3)) {
        case 0: chain.move_add(rng, out.add_move); break;
        case 1: chain.move_delete(rng, out.delete_move); break;
        default: chain.move_shift(rng, out.shift_move); break;
      }
    }
    if (config.check_invariants) chain.augmentation().validate(ward);
    if (config.recompute_stride > 0 && it % config.recompute_stride == 0) {
      const double incremental = chain.log_likelihood();
      const double full = chain.recompute_log_likelihood();
      out.max_recompute_rel_error =
          std::max(out.max_recompute_rel_error, relative_gap(incremental, full));
    }
    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0) {
      ThetaDraw draw;
      draw.iteration = it;
      draw.theta = chain.theta();
      draw.loglik = chain.log_likelihood();
      draw.n1 = chain.n1();
      const auto counts = chain.counts();
      draw.n_CA = counts.n_CA;
      draw.n_FN = counts.n_FN;
      draw.colonized_days = chain.colonized_days();
      if (config.snapshot_stride > 0 &&
          static_cast<long>(out.draws.size()) % config.snapshot_stride == 0) {
        out.snapshots.push_back({static_cast<long>(out.draws.size()),
                                 chain.augmentation().col_times()});
      }
      out.draws.push_back(std::move(draw));
    }
    if (config.log_stride > 0 && it % config.log_stride == 0) {
      std::fprintf(stderr, "[%s] iter %ld/%ld loglik %.3f n1 %ld\n",
                   to_string(config.model).c_str(), it, config.iterations,
                   chain.log_likelihood(), chain.n1());
    }
  }
  return out;
}

std::vector<double> augmentation_loglik_chain(const WardData& ward,
                                              const Theta& theta,
                                              const AugChainConfig& config) {
  if (config.iterations <= 0 || config.burn_in < 0 ||
      config.burn_in >= config.iterations || config.thin <= 0) {
    throw ValidationError("augmentation chain: bad iteration settings");
  }
  Rng rng(config.seed);
  ChainState chain(ward, theta, PriorConfig{}, config.phi0,
                   Augmentation::initial_for_chain(ward));
  MoveCounters scrap;
  std::vector<double> trace;
  trace.reserve((config.iterations - config.burn_in) / config.thin);
  for (long it = 1; it <= config.iterations; ++it) {
    for (long k = 0; k < config.moves_per_iteration; ++k) {
      switch (rng.uniform_index(3)) {
        case 0: chain.move_add(rng, scrap); break;
        case 1: chain.move_delete(rng, scrap); break;
        default: chain.move_shift(rng, scrap); break;
      }
    }
    if (it > config.burn_in && (it - config.burn_in) % config.thin == 0) {
      trace.push_back(chain.log_likelihood());
    }
  }
  return trace;
}

}  // namespace wardtrans
