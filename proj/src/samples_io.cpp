#include "wardtrans/samples_io.hpp"

#include <charconv>
#include <map>

#include <json.hpp>

#include "wardtrans/csv.hpp"

namespace wardtrans {

namespace {

double to_double(const std::string& field, const std::string& context) {
  double value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(context + ": bad number '" + field + "'");
  }
  return value;
}

long to_long(const std::string& field, const std::string& context) {
  long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(context + ": bad integer '" + field + "'");
  }
  return value;
}

}  // namespace

std::string samples_to_csv(const PosteriorSamples& samples) {
  std::string out = "iteration,p,phi,beta0,beta1,beta2,loglik,n1,n_CA,n_FN\n";
  for (const auto& d : samples.draws) {
    out += std::to_string(d.iteration);
    out += ',';
    out += format_double(d.theta.p);
    out += ',';
    out += format_double(d.theta.phi);
    out += ',';
    out += format_double(d.theta.beta0);
    out += ',';
    out += format_double(d.theta.beta1);
    out += ',';
    out += format_double(d.theta.beta2);
    out += ',';
    out += format_double(d.loglik);
    out += ',';
    out += std::to_string(d.n1);
    out += ',';
    out += std::to_string(d.n_CA);
    out += ',';
    out += std::to_string(d.n_FN);
    out += '\n';
  }
  return out;
}

std::string snapshots_to_csv(const PosteriorSamples& samples,
                             const WardData& ward) {
  std::string out = "draw,episode_id,col_time\n";
  for (const auto& snap : samples.snapshots) {
    for (std::size_t j = 0; j < snap.col_times.size(); ++j) {
      if (!(snap.col_times[j] < kInf)) continue;
      out += std::to_string(snap.draw_index);
      out += ',';
      out += ward.episodes[j].episode_id;
      out += ',';
      out += format_double(snap.col_times[j]);
      out += '\n';
    }
  }
  return out;
}

PosteriorSamples read_samples_csv(const std::string& samples_path,
                                  const std::string& snapshots_path,
                                  const WardData& ward, ModelKind model) {
  PosteriorSamples samples;
  samples.model = model;

  const CsvTable table = read_csv(samples_path);
  const auto c_it = table.col("iteration");
  const auto c_p = table.col("p");
  const auto c_phi = table.col("phi");
  const auto c_b0 = table.col("beta0");
  const auto c_b1 = table.col("beta1");
  const auto c_b2 = table.col("beta2");
  const auto c_ll = table.col("loglik");
  const auto c_n1 = table.col("n1");
  const auto c_nca = table.col("n_CA");
  const auto c_nfn = table.col("n_FN");
  samples.draws.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string ctx = samples_path + ":" + std::to_string(table.line_of(i));
    ThetaDraw d;
    d.iteration = to_long(row[c_it], ctx);
    d.theta.kind = model;
    d.theta.p = to_double(row[c_p], ctx);
    d.theta.phi = to_double(row[c_phi], ctx);
    d.theta.beta0 = to_double(row[c_b0], ctx);
    d.theta.beta1 = to_double(row[c_b1], ctx);
    d.theta.beta2 = to_double(row[c_b2], ctx);
    d.loglik = to_double(row[c_ll], ctx);
    d.n1 = to_long(row[c_n1], ctx);
    d.n_CA = to_long(row[c_nca], ctx);
    d.n_FN = to_long(row[c_nfn], ctx);
    samples.draws.push_back(d);
  }

  std::map<std::string, std::size_t> index_of;
  for (std::size_t j = 0; j < ward.size(); ++j) {
    index_of[ward.episodes[j].episode_id] = j;
  }
  const CsvTable snaps = read_csv(snapshots_path);
  const auto s_draw = snaps.col("draw");
  const auto s_ep = snaps.col("episode_id");
  const auto s_time = snaps.col("col_time");
  AugSnapshot* current = nullptr;
  for (std::size_t i = 0; i < snaps.rows.size(); ++i) {
    const auto& row = snaps.rows[i];
    const std::string ctx = snapshots_path + ":" + std::to_string(snaps.line_of(i));
    const long draw = to_long(row[s_draw], ctx);
    if (!current || current->draw_index != draw) {
      samples.snapshots.push_back({draw, std::vector<double>(ward.size(), kInf)});
      current = &samples.snapshots.back();
    }
    auto it = index_of.find(row[s_ep]);
    if (it == index_of.end()) {
      throw ValidationError(ctx + ": unknown episode '" + row[s_ep] + "'");
    }
    current->col_times[it->second] = to_double(row[s_time], ctx);
  }
  return samples;
}

std::string report_to_json(const AssessmentReport& report) {
  nlohmann::json j;
  j["ward"] = report.ward_id;
  j["model"] = to_string(report.model);
  j["dic6"] = report.dic6;
  j["posterior_predictive_pvalue"] = report.ppp;
  j["hidden_carriage"] = {
      {"snapshots_used", report.carriage.snapshots_used},
      {"p_hidden_median", report.carriage.hidden_median},
      {"p_hidden_ci", {report.carriage.hidden_ci.lower, report.carriage.hidden_ci.upper}},
      {"p_wait_median", report.carriage.wait_median},
      {"p_wait_ci", {report.carriage.wait_ci.lower, report.carriage.wait_ci.upper}},
  };
  j["efficacy"] = {
      {"prob_beta1_greater", report.efficacy.prob_beta1_greater},
      {"log_ratio_median", report.efficacy.log_ratio_median},
      {"log_ratio_ci", {report.efficacy.log_ratio_ci.lower, report.efficacy.log_ratio_ci.upper}},
      {"log_ratio_mean", report.efficacy.log_ratio_mean},
      {"log_ratio_variance", report.efficacy.log_ratio_variance},
  };
  j["monthly_prevalence"] = {
      {"observed_mean", report.prevalence.observed_mean},
      {"observed_sd", report.prevalence.observed_sd},
      {"predicted_median", report.prevalence.predicted_median},
      {"predicted_sd", report.prevalence.predicted_sd},
  };
  return j.dump(2) + "\n";
}

std::string trajectory_bands_to_csv(const TrajectoryBands& bands) {
  std::string out = "interval_start,observed,mean,lower,upper\n";
  for (std::size_t b = 0; b < bands.observed.size(); ++b) {
    out += format_double(b * bands.interval_days);
    out += ',';
    out += std::to_string(bands.observed[b]);
    out += ',';
    out += format_double(bands.mean[b]);
    out += ',';
    out += format_double(bands.lower[b]);
    out += ',';
    out += format_double(bands.upper[b]);
    out += '\n';
  }
  return out;
}

}  // namespace wardtrans
