#include "wardtrans/assess.hpp"

#include <algorithm>
#include <cmath>

#include "wardtrans/parallel.hpp"

namespace wardtrans {

namespace {

void require_snapshots(const PosteriorSamples& samples, long minimum) {
  if (samples.snapshots.empty()) {
    throw ValidationError(
        "assessment needs augmentation snapshots; rerun the fit with "
        "sampler.snapshot_stride > 0");
  }
  if (static_cast<long>(samples.snapshots.size()) < minimum) {
    throw ValidationError(
        "assessment needs at least " + std::to_string(minimum) +
        " augmentation snapshots, found " +
        std::to_string(samples.snapshots.size()) +
        "; lower sampler.snapshot_stride or lengthen the chain");
  }
}

void require_model(const PosteriorSamples& samples, ModelKind model) {
  if (samples.model != model) {
    throw ValidationError("posterior samples were drawn under model '" +
                          to_string(samples.model) + "', not '" +
                          to_string(model) + "'");
  }
}

}  // namespace

double dic6(const PosteriorSamples& samples, const WardData& ward,
            ModelKind model, const DicConfig& config) {
  require_model(samples, model);
  require_snapshots(samples, config.min_snapshots);
  if (samples.draws.empty()) throw ValidationError("dic6: no posterior draws");

  double joint_mean = 0;
  for (const auto& d : samples.draws) joint_mean += d.loglik;
  joint_mean /= static_cast<double>(samples.draws.size());

  const Theta theta_hat = samples.posterior_mean();
  AugChainConfig aug_config;
  aug_config.iterations = config.iterations;
  aug_config.burn_in = config.burn_in;
  aug_config.thin = config.thin;
  aug_config.phi0 = config.phi0;
  aug_config.seed = config.seed;
  const auto trace = augmentation_loglik_chain(ward, theta_hat, aug_config);
  if (trace.empty()) throw ValidationError("dic6: empty conditional chain");
  double conditional_mean = 0;
  for (double v : trace) conditional_mean += v;
  conditional_mean /= static_cast<double>(trace.size());

  return -4.0 * joint_mean + 2.0 * conditional_mean;
}

double posterior_predictive_pvalue(const PosteriorSamples& samples,
                                   const WardData& ward, ModelKind model,
                                   const PppConfig& config) {
  require_model(samples, model);
  const long n_draws = static_cast<long>(samples.draws.size());
  if (n_draws == 0) throw ValidationError("ppp: no posterior draws");
  const long replicates = config.replicates > 0
                              ? config.replicates
                              : std::max<long>(1, n_draws / config.sample_stride);

  const long observed = total_detected_colonizations(ward);
  std::vector<long> counts(static_cast<std::size_t>(replicates), 0);
  parallel_for(replicates, config.threads, [&](long r) {
    const auto& draw =
        samples.draws[static_cast<std::size_t>((r * config.sample_stride) % n_draws)];
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    const auto sim = simulate_colonization(ward, draw.theta, config.policy, rng);
    counts[static_cast<std::size_t>(r)] = total_detected_colonizations(sim.observed);
  });

  long at_least = 0;
  for (long c : counts) {
    if (c >= observed) ++at_least;
  }
  return static_cast<double>(at_least) / static_cast<double>(replicates);
}

TrajectoryBands predictive_trajectories(const PosteriorSamples& samples,
                                        const WardData& ward, ModelKind model,
                                        const TrajectoryConfig& config) {
  require_model(samples, model);
  const long n_draws = static_cast<long>(samples.draws.size());
  if (n_draws == 0) throw ValidationError("trajectories: no posterior draws");
  if (config.n_sims <= 0) throw ValidationError("trajectories: n_sims must be > 0");

  TrajectoryBands bands;
  bands.interval_days = config.interval_days;
  bands.observed = detected_colonizations_by_interval(ward, config.interval_days);
  const std::size_t n_bins = bands.observed.size();

  std::vector<std::vector<long>> paths(static_cast<std::size_t>(config.n_sims));
  parallel_for(config.n_sims, config.threads, [&](long r) {
    // Spread the parameter draws evenly across the chain.
    const auto idx = static_cast<std::size_t>(
        std::min<long>(n_draws - 1,
                       static_cast<long>(r * (double)n_draws / config.n_sims)));
    Rng rng(derive_seed(config.seed, 0x74726a00ULL + static_cast<std::uint64_t>(r)));
    const auto sim =
        simulate_colonization(ward, samples.draws[idx].theta, config.policy, rng);
    paths[static_cast<std::size_t>(r)] =
        detected_colonizations_by_interval(sim.observed, config.interval_days);
  });

  bands.mean.resize(n_bins);
  bands.lower.resize(n_bins);
  bands.upper.resize(n_bins);
  std::vector<double> column(paths.size());
  for (std::size_t b = 0; b < n_bins; ++b) {
    for (std::size_t r = 0; r < paths.size(); ++r) {
      column[r] = static_cast<double>(paths[r][b]);
    }
    bands.mean[b] = mean(column);
    bands.lower[b] = quantile(column, 0.025);
    bands.upper[b] = quantile(column, 0.975);
  }
  return bands;
}

HiddenCarriage hidden_carriage(const WardData& ward,
                               const std::vector<double>& col_times) {
  if (col_times.size() != ward.size()) {
    throw ValidationError("hidden_carriage: snapshot size mismatch");
  }
  double hidden = 0, wait = 0, denominator = 0;
  for (std::size_t j = 0; j < ward.size(); ++j) {
    const double c = col_times[j];
    if (!(c < kInf)) continue;
    const auto& ep = ward.episodes[j];
    denominator += ep.discharge - c;
    hidden += std::max(std::min(ep.first_precaution, ep.discharge) - c, 0.0);
    if (ep.first_positive <= ep.first_precaution &&
        ep.first_precaution <= ep.discharge) {
      wait += ep.first_precaution - ep.first_positive;
    }
  }
  HiddenCarriage out;
  if (denominator > 0) {
    out.defined = true;
    out.p_hidden = hidden / denominator;
    out.p_wait = wait / denominator;
  }
  return out;
}

HiddenCarriageSummary summarize_hidden_carriage(const PosteriorSamples& samples,
                                                const WardData& ward) {
  require_snapshots(samples, 1);
  std::vector<double> hidden, wait;
  for (const auto& snap : samples.snapshots) {
    const auto hc = hidden_carriage(ward, snap.col_times);
    if (!hc.defined) continue;
    hidden.push_back(hc.p_hidden);
    wait.push_back(hc.p_wait);
  }
  if (hidden.empty()) {
    throw ValidationError(
        "hidden carriage undefined: no snapshot has a colonized episode");
  }
  HiddenCarriageSummary out;
  out.snapshots_used = static_cast<long>(hidden.size());
  out.hidden_median = median(hidden);
  out.hidden_ci = credible_interval_95(hidden);
  out.wait_median = median(wait);
  out.wait_ci = credible_interval_95(wait);
  return out;
}

EfficacySummary efficacy_summary(const PosteriorSamples& samples) {
  if (samples.draws.empty()) throw ValidationError("efficacy: no draws");
  std::vector<double> log_ratio;
  log_ratio.reserve(samples.draws.size());
  long greater = 0;
  for (const auto& d : samples.draws) {
    if (d.theta.beta1 > d.theta.beta2) ++greater;
    log_ratio.push_back(d.theta.beta1 == d.theta.beta2
                            ? 0.0
                            : std::log(d.theta.beta1 / d.theta.beta2));
  }
  EfficacySummary out;
  out.prob_beta1_greater =
      static_cast<double>(greater) / static_cast<double>(samples.draws.size());
  out.log_ratio_median = median(log_ratio);
  out.log_ratio_ci = credible_interval_95(log_ratio);
  out.log_ratio_mean = mean(log_ratio);
  out.log_ratio_variance =
      log_ratio.size() > 1 ? sample_variance(log_ratio) : 0.0;
  return out;
}

PooledEstimate pool_efficacy(
    const std::vector<std::pair<double, double>>& estimates_and_variances) {
  if (estimates_and_variances.empty()) {
    throw ValidationError("pool_efficacy: no ward estimates");
  }
  double weight_sum = 0, weighted = 0;
  for (const auto& [estimate, variance] : estimates_and_variances) {
    if (!(variance > 0) || !std::isfinite(variance)) {
      throw ValidationError("pool_efficacy: every estimate needs a positive, "
                            "finite variance");
    }
    weight_sum += 1.0 / variance;
    weighted += estimate / variance;
  }
  PooledEstimate out;
  out.estimate = weighted / weight_sum;
  out.variance = 1.0 / weight_sum;
  const double half_width = 1.959963984540054 * std::sqrt(out.variance);
  out.lower = out.estimate - half_width;
  out.upper = out.estimate + half_width;
  return out;
}

MonthlyPrevalence monthly_prevalence(const PosteriorSamples& samples,
                                     const WardData& ward, double block_days) {
  require_snapshots(samples, 1);
  if (block_days <= 0) throw ValidationError("monthly prevalence: bad block size");

  const long days = static_cast<long>(std::floor(ward.study_length));
  const long blocks = std::max<long>(
      1, static_cast<long>(std::ceil(ward.study_length / block_days)));

  // Block average of a per-day prevalence, skipping empty-ward days.
  auto block_means = [&](auto&& carrier_count) {
    std::vector<double> out;
    for (long b = 0; b < blocks; ++b) {
      double sum = 0;
      long used = 0;
      for (long day = static_cast<long>(b * block_days);
           day < std::min<long>(days, static_cast<long>((b + 1) * block_days));
           ++day) {
        const double t = static_cast<double>(day) + 0.5;
        long present = 0, carriers = 0;
        for (std::size_t j = 0; j < ward.size(); ++j) {
          const auto& ep = ward.episodes[j];
          if (ep.admit <= t && t < ep.discharge) {
            ++present;
            if (carrier_count(j, t)) ++carriers;
          }
        }
        if (present > 0) {
          sum += static_cast<double>(carriers) / present;
          ++used;
        }
      }
      if (used > 0) out.push_back(sum / used);
    }
    return out;
  };

  MonthlyPrevalence out;
  const auto observed = block_means([&](std::size_t j, double t) {
    return ward.episodes[j].first_positive <= t;
  });
  if (!observed.empty()) {
    out.observed_mean = mean(observed);
    out.observed_sd = observed.size() > 1 ? sample_sd(observed) : 0.0;
  }

  std::vector<double> predicted;
  for (const auto& snap : samples.snapshots) {
    const auto per_block = block_means([&](std::size_t j, double t) {
      return snap.col_times[j] <= t;
    });
    if (!per_block.empty()) predicted.push_back(mean(per_block));
  }
  if (!predicted.empty()) {
    out.predicted_median = median(predicted);
    out.predicted_sd = predicted.size() > 1 ? sample_sd(predicted) : 0.0;
  }
  return out;
}

AssessmentReport run_assessment(const PosteriorSamples& samples,
                                const WardData& ward, ModelKind model,
                                const AssessConfig& config) {
  AssessmentReport report;
  report.ward_id = ward.ward_id;
  report.model = model;
  report.dic6 = dic6(samples, ward, model, config.dic);

  PppConfig ppp;
  ppp.replicates = config.ppp_replicates;
  ppp.sample_stride = config.ppp_sample_stride;
  ppp.policy = config.policy;
  ppp.seed = derive_seed(config.seed, 0x707070ULL);
  ppp.threads = config.threads;
  report.ppp = posterior_predictive_pvalue(samples, ward, model, ppp);

  TrajectoryConfig traj;
  traj.interval_days = config.interval_days;
  traj.n_sims = config.trajectory_sims;
  traj.policy = config.policy;
  traj.seed = derive_seed(config.seed, 0x747272ULL);
  traj.threads = config.threads;
  report.bands = predictive_trajectories(samples, ward, model, traj);

  report.carriage = summarize_hidden_carriage(samples, ward);
  report.efficacy = efficacy_summary(samples);
  report.prevalence = monthly_prevalence(samples, ward, config.block_days);
  return report;
}

}  // namespace wardtrans
