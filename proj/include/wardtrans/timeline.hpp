#ifndef WARDTRANS_TIMELINE_HPP
#define WARDTRANS_TIMELINE_HPP

#include <cstdint>
#include <vector>

#include "wardtrans/types.hpp"

namespace wardtrans {

// Deterministic within-instant ordering of simultaneous events. Left limits
// at a colonization instant therefore include same-instant discharges and
// precaution ends, but not same-instant admissions or precaution starts.
enum EventRank : std::int8_t {
  kRankDischarge = 0,
  kRankPrecautionEnd = 1,
  kRankColonize = 2,
  kRankPrecautionStart = 3,
  kRankAdmit = 4,
};

struct TimelineEvent {
  double time = 0;
  std::int8_t rank = 0;
  std::int32_t episode = -1;
};

inline bool event_less(const TimelineEvent& x, const TimelineEvent& y) {
  if (x.time != y.time) return x.time < y.time;
  if (x.rank != y.rank) return x.rank < y.rank;
  return x.episode < y.episode;
}

/// Ward-state counts (S, C, Q) on one interval of constancy.
struct StateInterval {
  double start = 0;
  double end = 0;
  int susceptible = 0;  // S
  int colonized = 0;    // C, colonized and not isolated
  int isolated = 0;     // Q, colonized and isolated
};

/// Counts observed just before an on-ward colonization fires.
struct ColonizationPoint {
  std::int32_t episode = -1;
  int colonized_before = 0;  // n_C(j) = C(c_j-)
  int isolated_before = 0;   // n_Q(j) = Q(c_j-)
};

/// Theta-independent ingredients of the Poisson-process likelihood:
/// exact exposure integrals and per-colonization left-limit counts.
struct HazardStats {
  double exposure_s = 0;       // ∫ S dt
  double exposure_sc = 0;      // ∫ S·C dt
  double exposure_sq = 0;      // ∫ S·Q dt
  double exposure_s_cpos = 0;  // ∫ S·1{C>0} dt
  double exposure_s_qpos = 0;  // ∫ S·1{Q>0} dt
  std::vector<ColonizationPoint> col_points;  // in event order

  void clear() {
    exposure_s = exposure_sc = exposure_sq = 0;
    exposure_s_cpos = exposure_s_qpos = 0;
    col_points.clear();
  }
};

/// Piecewise-constant ward state under one augmentation, with left-limit
/// queries and exact hazard integrals. Immutable once built.
class WardTimeline {
 public:
  const std::vector<StateInterval>& intervals() const { return intervals_; }
  const HazardStats& stats() const { return stats_; }
  double study_length() const { return study_length_; }

  // Left-limit counts (S, C, Q) at t in (0, T_E]: the state after all
  // events ordered before colonizations at time t. Throws std::out_of_range.
  StateInterval counts_just_before(double t) const;

  // State on the interval containing t (post-instant convention).
  StateInterval state_at(double t) const;

 private:
  friend WardTimeline build_timeline(const WardData&, const Augmentation&);
  friend void sweep_events(const WardData&, const Augmentation&,
                           const std::vector<TimelineEvent>&, struct SweepScratch&,
                           HazardStats&, WardTimeline*);
  std::vector<StateInterval> intervals_;
  HazardStats stats_;
  double study_length_ = 0;
  // Per-event post-state for left-limit queries.
  std::vector<TimelineEvent> events_;
  std::vector<StateInterval> post_state_;
};

WardTimeline build_timeline(const WardData& ward, const Augmentation& aug);

// Exact ∫ S(t)·lambda(t) dt for the model variant of theta (no quadrature).
double integrate_hazard(const WardTimeline& timeline, const Theta& theta);
double integrate_hazard(const HazardStats& stats, const Theta& theta);

// Admission/discharge/precaution events of the ward, sorted; computed once.
std::vector<TimelineEvent> fixed_events(const WardData& ward);

// Colonization events (episodes with c strictly after admission), sorted.
std::vector<TimelineEvent> colonization_events(const WardData& ward,
                                               const Augmentation& aug);

/// Reusable per-episode buffers for sweeps; one per chain.
struct SweepScratch {
  std::vector<std::uint8_t> state;     // 0 absent, 1 S, 2 C, 3 Q
  std::vector<std::uint8_t> isolated;  // precaution flag, tracked even for S
  void resize(std::size_t n) {
    state.assign(n, 0);
    isolated.assign(n, 0);
  }
};

// Single pass over sorted events computing hazard statistics; `record`, when
// non-null, also captures intervals and per-event states for queries.
void sweep_events(const WardData& ward, const Augmentation& aug,
                  const std::vector<TimelineEvent>& events,
                  SweepScratch& scratch, HazardStats& out,
                  WardTimeline* record = nullptr);

}  // namespace wardtrans

#endif
