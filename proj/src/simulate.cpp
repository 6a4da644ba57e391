#include "wardtrans/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "wardtrans/index_set.hpp"
#include "wardtrans/likelihood.hpp"
#include "wardtrans/timeline.hpp"

namespace wardtrans {

void SimPolicy::validate() const {
  if (compliance < 0 || compliance > 1) {
    throw ValidationError("simulate: compliance must lie in [0, 1]");
  }
  if (detection_delay < 0) {
    throw ValidationError("simulate: detection delay must be >= 0");
  }
}

void SyntheticWardConfig::validate() const {
  policy.validate();
  if (beds < 1) throw ValidationError("simulate: beds must be >= 1");
  if (study_days < 1) throw ValidationError("simulate: study_days must be >= 1");
  if (arrival_rate <= 0) throw ValidationError("simulate: arrival_rate must be > 0");
  if (los_median <= 0 || los_sd < 0) {
    throw ValidationError("simulate: bad length-of-stay parameters");
  }
  if (!theta.in_support()) throw ValidationError("simulate: theta outside support");
  if (readmission_prob < 0 || readmission_prob >= 1) {
    throw ValidationError("simulate: readmission_prob must lie in [0, 1)");
  }
  if (readmission_gap_mean <= 0 || readmission_window < 0) {
    throw ValidationError("simulate: bad readmission settings");
  }
}

namespace {

constexpr std::int8_t kRankTest = 5;

struct SimEvent {
  double time;
  std::int8_t rank;
  std::int32_t episode;
};

struct SimEventAfter {
  bool operator()(const SimEvent& x, const SimEvent& y) const {
    if (x.time != y.time) return x.time > y.time;
    if (x.rank != y.rank) return x.rank > y.rank;
    return x.episode > y.episode;
  }
};

struct EngineResult {
  std::vector<std::vector<TestObs>> tests;
  std::vector<std::vector<Interval>> precautions;
  std::vector<AdmissionClass> classes;
  std::vector<double> col_times;
};

// Event-driven pass over one admission frame. Colonizations between state
// changes are drawn from competing exponentials, which is exact for
// piecewise-constant rates. When `persons` is given, admission classes are
// re-derived from the simulated positives (readmission within `window` days
// of one); otherwise the frame's classes are used.
EngineResult run_engine(const WardData& frame, const Theta& theta,
                        const SimPolicy& policy, Rng& rng,
                        const std::vector<std::string>* persons,
                        double window) {
  const std::size_t n = frame.size();
  EngineResult out;
  out.tests.resize(n);
  out.precautions.resize(n);
  out.classes.resize(n, AdmissionClass::NewAdmission);
  out.col_times.assign(n, kInf);

  std::priority_queue<SimEvent, std::vector<SimEvent>, SimEventAfter> queue;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& ep = frame.episodes[j];
    const auto idx = static_cast<std::int32_t>(j);
    queue.push({ep.admit, kRankAdmit, idx});
    queue.push({ep.discharge, kRankDischarge, idx});
    if (policy.test_mode == TestScheduleMode::ReplayObserved) {
      for (const auto& t : ep.tests) queue.push({t.time, kRankTest, idx});
    } else {
      for (double t = ep.admit; t < ep.discharge; t += 7.0) {
        queue.push({t, kRankTest, idx});
      }
    }
    if (policy.precaution_mode == PrecautionMode::ReplayObserved) {
      for (const auto& iv : ep.precautions) {
        queue.push({iv.start, kRankPrecautionStart, idx});
        queue.push({iv.end, kRankPrecautionEnd, idx});
        out.precautions[j].push_back(iv);
      }
    }
  }

  IndexSet susceptibles;
  susceptibles.init(n);
  std::vector<std::uint8_t> isolated(n, 0), detected(n, 0);
  std::map<std::string, double> last_positive;
  int colonized_count = 0, isolated_count = 0;
  double now = 0;

  while (!queue.empty()) {
    const SimEvent ev = queue.top();
    // Colonization events strictly before the next state change.
    for (;;) {
      const double rate =
          colonization_rate(theta, colonized_count, isolated_count);
      const double total = static_cast<double>(susceptibles.size()) * rate;
      if (total <= 0) break;
      const double t_col = now + rng.exponential(1.0 / total);
      if (t_col >= ev.time) break;
      const std::int32_t j = susceptibles[rng.uniform_index(susceptibles.size())];
      susceptibles.erase(j);
      out.col_times[j] = t_col;
      if (isolated[j]) ++isolated_count; else ++colonized_count;
      now = t_col;
    }
    queue.pop();
    now = ev.time;
    const auto j = static_cast<std::size_t>(ev.episode);
    const auto& ep = frame.episodes[j];

    switch (ev.rank) {
      case kRankAdmit: {
        AdmissionClass cls = ep.admission_class;
        if (persons) {
          cls = AdmissionClass::NewAdmission;
          auto it = last_positive.find((*persons)[j]);
          if (it != last_positive.end() && it->second <= ep.admit &&
              ep.admit - it->second < window) {
            cls = AdmissionClass::ColonizedOnReadmission;
          }
        }
        out.classes[j] = cls;
        const bool colonized_on_admission =
            cls == AdmissionClass::ColonizedOnReadmission ||
            rng.bernoulli(theta.phi);
        if (colonized_on_admission) {
          out.col_times[j] = ep.admit;
          if (isolated[j]) ++isolated_count; else ++colonized_count;
        } else {
          susceptibles.insert(ev.episode);
        }
        break;
      }
      case kRankDischarge:
        if (out.col_times[j] < kInf) {
          if (isolated[j]) --isolated_count; else --colonized_count;
        } else {
          susceptibles.erase(ev.episode);
        }
        break;
      case kRankPrecautionStart:
        if (!isolated[j]) {
          isolated[j] = 1;
          if (out.col_times[j] < kInf && now < ep.discharge) {
            --colonized_count;
            ++isolated_count;
          }
        }
        break;
      case kRankPrecautionEnd:
        if (isolated[j]) {
          isolated[j] = 0;
          if (out.col_times[j] < kInf && now < ep.discharge) {
            --isolated_count;
            ++colonized_count;
          }
        }
        break;
      case kRankTest: {
        if (policy.test_mode == TestScheduleMode::AdmissionPlusWeekly &&
            !rng.bernoulli(policy.compliance)) {
          break;  // swab skipped
        }
        const bool colonized = out.col_times[j] <= ev.time;
        const bool positive = colonized && rng.bernoulli(theta.p);
        out.tests[j].push_back({ev.time, positive});
        if (positive) {
          if (persons) {
            auto& slot = last_positive[(*persons)[j]];
            slot = std::max(slot, ev.time);
          }
          if (policy.precaution_mode == PrecautionMode::OnDetection &&
              !detected[j]) {
            detected[j] = 1;
            const double start = ev.time + policy.detection_delay;
            if (start < ep.discharge) {
              queue.push({start, kRankPrecautionStart, ev.episode});
              queue.push({ep.discharge, kRankPrecautionEnd, ev.episode});
              out.precautions[j].push_back({start, ep.discharge});
            }
          }
        }
        break;
      }
      default:
        break;
    }
  }
  return out;
}

SimResult assemble(const WardData& frame, EngineResult&& engine) {
  SimResult result;
  result.observed = frame;
  for (std::size_t j = 0; j < frame.size(); ++j) {
    auto& ep = result.observed.episodes[j];
    ep.tests = std::move(engine.tests[j]);
    ep.precautions = std::move(engine.precautions[j]);
    ep.admission_class = engine.classes[j];
  }
  result.observed.finalize();
  result.truth = Augmentation(result.observed);
  for (std::size_t j = 0; j < frame.size(); ++j) {
    if (engine.col_times[j] < kInf) {
      result.truth.set_col_time(j, engine.col_times[j]);
    }
  }
  return result;
}

}  // namespace

SimResult simulate_colonization(const WardData& frame, const Theta& theta,
                                const SimPolicy& policy, Rng& rng) {
  policy.validate();
  return assemble(frame, run_engine(frame, theta, policy, rng, nullptr, 0));
}

SyntheticWard generate_synthetic_ward(const SyntheticWardConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const long days = static_cast<long>(std::floor(config.study_days));

  const double zeta = std::log(config.los_median);
  const double spread = config.los_sd / config.los_median;
  const double sigma =
      std::sqrt(std::log((1.0 + std::sqrt(1.0 + 4.0 * spread * spread)) / 2.0));

  struct Arrival {
    double time;
    long person;
    int ordinal;
  };
  auto later = [](const Arrival& x, const Arrival& y) {
    if (x.time != y.time) return x.time > y.time;
    return x.person > y.person;
  };
  std::priority_queue<Arrival, std::vector<Arrival>, decltype(later)> arrivals(later);

  long person_count = 0;
  for (double t = rng.exponential(1.0 / config.arrival_rate); t < days;
       t += rng.exponential(1.0 / config.arrival_rate)) {
    arrivals.push({t, person_count++, 1});
  }

  WardData ward;
  ward.ward_id = config.ward_id;
  ward.study_length = static_cast<double>(days);
  ward.readmission_window = config.readmission_window;

  if (config.ward_id.empty() || config.ward_id.find('#') != std::string::npos) {
    throw ValidationError("simulate: ward_id must be non-empty and without '#'");
  }
  std::vector<int> day_occupancy(static_cast<std::size_t>(days), 0);
  char idbuf[64];
  while (!arrivals.empty()) {
    const Arrival arr = arrivals.top();
    arrivals.pop();
    const long admit_day = static_cast<long>(std::floor(arr.time));
    if (admit_day >= days) continue;
    if (day_occupancy[static_cast<std::size_t>(admit_day)] >= config.beds) {
      continue;  // ward full, arrival blocked
    }
    const long los = std::max<long>(1, std::llround(rng.lognormal(zeta, sigma)));
    const long discharge_day = std::min(admit_day + los, days);
    for (long d = admit_day; d < discharge_day; ++d) {
      ++day_occupancy[static_cast<std::size_t>(d)];
    }
    std::snprintf(idbuf, sizeof idbuf, "%s-P%05ld#%d", config.ward_id.c_str(),
                  arr.person, arr.ordinal);
    PatientEpisode ep;
    ep.episode_id = idbuf;
    ep.admit = static_cast<double>(admit_day);
    ep.discharge = static_cast<double>(discharge_day);
    ward.episodes.push_back(std::move(ep));
    if (config.readmission_prob > 0 && rng.bernoulli(config.readmission_prob)) {
      const long gap = std::max<long>(
          1, std::llround(rng.exponential(config.readmission_gap_mean)));
      arrivals.push({static_cast<double>(discharge_day + gap), arr.person,
                     arr.ordinal + 1});
    }
  }
  if (ward.episodes.empty()) {
    throw ValidationError("simulate: no admissions fell inside the study window");
  }
  ward.finalize();

  std::vector<std::string> persons(ward.size());
  for (std::size_t j = 0; j < ward.size(); ++j) {
    const auto& id = ward.episodes[j].episode_id;
    persons[j] = id.substr(0, id.find('#'));
  }

  const std::vector<std::string>* person_table =
      config.readmission_prob > 0 ? &persons : nullptr;
  auto sim = assemble(ward, run_engine(ward, config.theta, config.policy, rng,
                                       person_table, config.readmission_window));

  SyntheticWard out;
  out.ward = std::move(sim.observed);
  out.truth = std::move(sim.truth);
  out.theta = config.theta;
  out.person_ids = std::move(persons);
  return out;
}

std::vector<long> detected_colonizations_by_interval(const WardData& ward,
                                                     double interval_days) {
  if (interval_days <= 0) {
    throw ValidationError("detected_colonizations_by_interval: interval must be > 0");
  }
  const long bins = std::max<long>(
      1, static_cast<long>(std::ceil(ward.study_length / interval_days)));
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& ep : ward.episodes) {
    if (!ep.has_positive()) continue;
    auto bin = static_cast<long>(ep.first_positive / interval_days);
    bin = std::min(bin, bins - 1);
    ++counts[static_cast<std::size_t>(bin)];
  }
  return counts;
}

long total_detected_colonizations(const WardData& ward) {
  long count = 0;
  for (const auto& ep : ward.episodes) {
    if (ep.has_positive()) ++count;
  }
  return count;
}

WardData resample_test_results(const WardData& frame, const Augmentation& truth,
                               double sensitivity, Rng& rng) {
  WardData out = frame;
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (auto& test : out.episodes[j].tests) {
      const bool colonized =
          truth.is_colonized(j) && truth.col_time(j) <= test.time;
      test.positive = colonized && rng.bernoulli(sensitivity);
    }
  }
  out.finalize();
  return out;
}

}  // namespace wardtrans
