#include "wardtrans/timeline.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace wardtrans {

std::vector<TimelineEvent> fixed_events(const WardData& ward) {
  std::vector<TimelineEvent> events;
  events.reserve(2 * ward.size());
  for (std::size_t j = 0; j < ward.size(); ++j) {
    const auto& ep = ward.episodes[j];
    const auto idx = static_cast<std::int32_t>(j);
    events.push_back({ep.admit, kRankAdmit, idx});
    events.push_back({ep.discharge, kRankDischarge, idx});
    for (const auto& iv : ep.precautions) {
      events.push_back({iv.start, kRankPrecautionStart, idx});
      events.push_back({iv.end, kRankPrecautionEnd, idx});
    }
  }
  std::sort(events.begin(), events.end(), event_less);
  return events;
}

std::vector<TimelineEvent> colonization_events(const WardData& ward,
                                               const Augmentation& aug) {
  std::vector<TimelineEvent> events;
  for (std::size_t j = 0; j < ward.size(); ++j) {
    if (aug.is_colonized(j) && aug.col_time(j) > ward.episodes[j].admit) {
      events.push_back({aug.col_time(j), kRankColonize,
                        static_cast<std::int32_t>(j)});
    }
  }
  std::sort(events.begin(), events.end(), event_less);
  return events;
}

namespace {

enum : std::uint8_t { kAbsent = 0, kSusceptible = 1, kColonized = 2, kIsolated = 3 };

struct Counts {
  int s = 0, c = 0, q = 0;
};

inline void leave(Counts& n, std::uint8_t state) {
  switch (state) {
    case kSusceptible: --n.s; break;
    case kColonized: --n.c; break;
    case kIsolated: --n.q; break;
    default: break;
  }
}

}  // namespace

void sweep_events(const WardData& ward, const Augmentation& aug,
                  const std::vector<TimelineEvent>& events,
                  SweepScratch& scratch, HazardStats& out,
                  WardTimeline* record) {
  out.clear();
  scratch.resize(ward.size());
  auto& state = scratch.state;
  auto& isolated = scratch.isolated;

  Counts n;
  double prev = 0;
  double run_start = 0;  // start of the current interval of constancy

  if (record) {
    record->study_length_ = ward.study_length;
    record->intervals_.clear();
    record->events_ = events;
    record->post_state_.clear();
    record->post_state_.reserve(events.size());
  }

  auto flush = [&](double now) {
    const double dt = now - prev;
    if (dt > 0) {
      out.exposure_s += dt * n.s;
      out.exposure_sc += dt * n.s * n.c;
      out.exposure_sq += dt * n.s * n.q;
      if (n.c > 0) out.exposure_s_cpos += dt * n.s;
      if (n.q > 0) out.exposure_s_qpos += dt * n.s;
      prev = now;
    }
  };
  auto record_interval = [&](double now) {
    if (record && now > run_start) {
      record->intervals_.push_back({run_start, now, n.s, n.c, n.q});
      run_start = now;
    }
  };

  for (const auto& ev : events) {
    flush(ev.time);
    record_interval(ev.time);
    const auto j = static_cast<std::size_t>(ev.episode);
    switch (ev.rank) {
      case kRankDischarge:
        leave(n, state[j]);
        state[j] = kAbsent;
        break;
      case kRankPrecautionEnd:
        isolated[j] = 0;
        if (state[j] == kIsolated) {
          state[j] = kColonized;
          --n.q;
          ++n.c;
        }
        break;
      case kRankColonize:
        out.col_points.push_back({ev.episode, n.c, n.q});
        if (state[j] == kSusceptible) {
          --n.s;
          if (isolated[j]) {
            state[j] = kIsolated;
            ++n.q;
          } else {
            state[j] = kColonized;
            ++n.c;
          }
        }
        break;
      case kRankPrecautionStart:
        isolated[j] = 1;
        if (state[j] == kColonized) {
          state[j] = kIsolated;
          --n.c;
          ++n.q;
        }
        break;
      case kRankAdmit: {
        const bool colonized_on_admission =
            aug.is_colonized(j) && aug.col_time(j) == ward.episodes[j].admit;
        if (colonized_on_admission) {
          if (isolated[j]) {
            state[j] = kIsolated;
            ++n.q;
          } else {
            state[j] = kColonized;
            ++n.c;
          }
        } else {
          state[j] = kSusceptible;
          ++n.s;
        }
        break;
      }
      default:
        assert(false);
    }
    if (record) record->post_state_.push_back({ev.time, ev.time, n.s, n.c, n.q});
  }
  flush(ward.study_length);
  record_interval(ward.study_length);
}

WardTimeline build_timeline(const WardData& ward, const Augmentation& aug) {
  auto events = fixed_events(ward);
  auto col = colonization_events(ward, aug);
  std::vector<TimelineEvent> merged(events.size() + col.size());
  std::merge(events.begin(), events.end(), col.begin(), col.end(),
             merged.begin(), event_less);

  WardTimeline timeline;
  SweepScratch scratch;
  sweep_events(ward, aug, merged, scratch, timeline.stats_, &timeline);
  return timeline;
}

StateInterval WardTimeline::counts_just_before(double t) const {
  if (!(t > 0 && t <= study_length_)) {
    throw std::out_of_range("counts_just_before: t outside (0, T_E]");
  }
  // First event not ordered before a colonization at time t.
  const TimelineEvent probe{t, kRankColonize, -1};
  auto it = std::lower_bound(events_.begin(), events_.end(), probe, event_less);
  if (it == events_.begin()) return {t, t, 0, 0, 0};
  const auto& post = post_state_[static_cast<std::size_t>(it - events_.begin()) - 1];
  return {t, t, post.susceptible, post.colonized, post.isolated};
}

StateInterval WardTimeline::state_at(double t) const {
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), t,
      [](double v, const StateInterval& iv) { return v < iv.start; });
  if (it == intervals_.begin()) return {t, t, 0, 0, 0};
  --it;
  if (t >= it->end) return {t, t, 0, 0, 0};
  return *it;
}

double integrate_hazard(const HazardStats& stats, const Theta& theta) {
  switch (theta.kind) {
    case ModelKind::Full:
    case ModelKind::NoBackground:
      return theta.beta0 * stats.exposure_s + theta.beta1 * stats.exposure_sc +
             theta.beta2 * stats.exposure_sq;
    case ModelKind::NonLinear:
      return theta.beta0 * stats.exposure_s +
             theta.beta1 * stats.exposure_s_cpos +
             theta.beta2 * stats.exposure_s_qpos;
  }
  return 0;
}

double integrate_hazard(const WardTimeline& timeline, const Theta& theta) {
  return integrate_hazard(timeline.stats(), theta);
}

}  // namespace wardtrans
