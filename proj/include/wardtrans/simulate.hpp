#ifndef WARDTRANS_SIMULATE_HPP
#define WARDTRANS_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wardtrans/rng.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans {

enum class TestScheduleMode { ReplayObserved, AdmissionPlusWeekly };
enum class PrecautionMode { ReplayObserved, OnDetection };

struct SimPolicy {
  TestScheduleMode test_mode = TestScheduleMode::ReplayObserved;
  double compliance = 0.9;  // per scheduled swab, AdmissionPlusWeekly only
  PrecautionMode precaution_mode = PrecautionMode::OnDetection;
  double detection_delay = 1.0;  // days from first positive to precautions

  void validate() const;
};

struct SimResult {
  WardData observed;   // same stays, re-drawn tests/precautions
  Augmentation truth;  // true colonization assignment
};

// Forward-simulates colonization, testing and (per policy) precautions on a
// fixed admission frame. Admission classes are taken from the frame:
// re-admission episodes start colonized, new admissions import with
// probability phi, susceptibles are colonized by the piecewise-constant
// hazard via competing exponentials between state changes.
SimResult simulate_colonization(const WardData& frame, const Theta& theta,
                                const SimPolicy& policy, Rng& rng);

struct SyntheticWardConfig {
  std::string ward_id = "SYN1";
  int beds = 10;
  double study_days = 510;      // about 17 months
  double arrival_rate = 2.5;    // patients/day offered (blocked when full)
  double los_median = 3.5;      // log-normal length of stay, days
  double los_sd = 4.7;
  Theta theta;
  SimPolicy policy{TestScheduleMode::AdmissionPlusWeekly, 0.9,
                   PrecautionMode::OnDetection, 1.0};
  double readmission_prob = 0;       // per discharge; 0 disables readmissions
  double readmission_gap_mean = 30;  // days between discharge and return
  double readmission_window = 180;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticWard {
  WardData ward;
  Augmentation truth;
  Theta theta;
  // person ids parallel to ward.episodes; used when readmissions are on
  std::vector<std::string> person_ids;
};

// Poisson arrivals thinned by bed availability, log-normal stays snapped to
// whole days, then the colonization/testing process on top. When
// readmissions are enabled, admission classes are derived from the simulated
// positive tests with the same rule the ingest classifier applies.
SyntheticWard generate_synthetic_ward(const SyntheticWardConfig& config);

// Patients whose first positive test falls in each consecutive interval of
// `interval_days`, over [0, T_E].
std::vector<long> detected_colonizations_by_interval(const WardData& ward,
                                                     double interval_days);

// Number of episodes with at least one positive test.
long total_detected_colonizations(const WardData& ward);

// Re-draws every test result given a colonization truth (times and schedule
// kept). Used by the joint-distribution sampler test.
WardData resample_test_results(const WardData& frame, const Augmentation& truth,
                               double sensitivity, Rng& rng);

}  // namespace wardtrans

#endif
