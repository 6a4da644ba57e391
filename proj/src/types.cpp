#include "wardtrans/types.hpp"

#include <algorithm>
#include <map>

namespace wardtrans {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Full: return "full";
    case ModelKind::NoBackground: return "no_background";
    case ModelKind::NonLinear: return "non_linear";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "full") return ModelKind::Full;
  if (name == "no_background") return ModelKind::NoBackground;
  if (name == "non_linear") return ModelKind::NonLinear;
  throw ValidationError("unknown model kind '" + name +
                        "' (expected full, no_background or non_linear)");
}

void PatientEpisode::finalize() {
  std::sort(tests.begin(), tests.end(),
            [](const TestObs& x, const TestObs& y) { return x.time < y.time; });
  std::sort(precautions.begin(), precautions.end(),
            [](const Interval& x, const Interval& y) { return x.start < y.start; });
  first_positive = kInf;
  negative_test_times.clear();
  for (const auto& t : tests) {
    if (t.positive) {
      if (t.time < first_positive) first_positive = t.time;
    } else {
      negative_test_times.push_back(t.time);
    }
  }
  std::sort(negative_test_times.begin(), negative_test_times.end());
  first_precaution = precautions.empty() ? kInf : precautions.front().start;
}

long PatientEpisode::false_negatives_from(double c) const {
  auto it = std::lower_bound(negative_test_times.begin(),
                             negative_test_times.end(), c);
  return static_cast<long>(negative_test_times.end() - it);
}

void WardData::finalize() {
  for (auto& ep : episodes) ep.finalize();
  std::sort(episodes.begin(), episodes.end(),
            [](const PatientEpisode& x, const PatientEpisode& y) {
              if (x.admit != y.admit) return x.admit < y.admit;
              return x.episode_id < y.episode_id;
            });
  n_new_admissions = 0;
  n_positive_tests = 0;
  for (const auto& ep : episodes) {
    if (!(ep.admit < ep.discharge)) {
      throw ValidationError("episode '" + ep.episode_id +
                            "': admission must precede discharge");
    }
    if (ep.admit < 0 || ep.discharge > study_length) {
      throw ValidationError("episode '" + ep.episode_id +
                            "': outside the study window [0, T_E]");
    }
    for (const auto& t : ep.tests) {
      if (t.time < ep.admit || t.time > ep.discharge) {
        throw ValidationError("episode '" + ep.episode_id +
                              "': test outside the stay");
      }
      if (t.positive) ++n_positive_tests;
    }
    double prev_end = -kInf;
    for (const auto& iv : ep.precautions) {
      if (!(iv.start < iv.end) || iv.start < ep.admit || iv.end > ep.discharge) {
        throw ValidationError("episode '" + ep.episode_id +
                              "': bad precaution interval");
      }
      if (iv.start < prev_end) {
        throw ValidationError("episode '" + ep.episode_id +
                              "': overlapping precaution intervals");
      }
      prev_end = iv.end;
    }
    if (ep.admission_class == AdmissionClass::NewAdmission) ++n_new_admissions;
  }
}

long WardData::occupancy_at(double t) const {
  long n = 0;
  for (const auto& ep : episodes) {
    if (ep.admit <= t && t < ep.discharge) ++n;
  }
  return n;
}

Augmentation::Augmentation(const WardData& ward)
    : col_time_(ward.size(), kNever) {
  for (std::size_t j = 0; j < ward.size(); ++j) {
    if (ward.episodes[j].admission_class == AdmissionClass::ColonizedOnReadmission) {
      col_time_[j] = ward.episodes[j].admit;
    }
  }
}

Augmentation Augmentation::initial_for_chain(const WardData& ward) {
  Augmentation aug(ward);
  for (std::size_t j = 0; j < ward.size(); ++j) {
    const auto& ep = ward.episodes[j];
    if (ep.admission_class == AdmissionClass::NewAdmission && ep.has_positive()) {
      aug.col_time_[j] = ep.first_positive;
    }
  }
  return aug;
}

EpisodeGroup Augmentation::group_of(const WardData& ward, std::size_t j) const {
  const auto& ep = ward.episodes[j];
  if (ep.admission_class == AdmissionClass::ColonizedOnReadmission) {
    return EpisodeGroup::Readmission;
  }
  if (ep.has_positive()) return EpisodeGroup::P;
  return is_colonized(j) ? EpisodeGroup::N1 : EpisodeGroup::N0;
}

void Augmentation::validate(const WardData& ward) const {
  if (col_time_.size() != ward.size()) {
    throw ValidationError("augmentation size mismatch");
  }
  for (std::size_t j = 0; j < ward.size(); ++j) {
    const auto& ep = ward.episodes[j];
    const double c = col_time_[j];
    switch (group_of(ward, j)) {
      case EpisodeGroup::Readmission:
        if (c != ep.admit) {
          throw ValidationError("episode '" + ep.episode_id +
                                "': readmission episodes are colonized at admission");
        }
        break;
      case EpisodeGroup::P:
        if (!(c >= ep.admit && c <= ep.first_positive)) {
          throw ValidationError("episode '" + ep.episode_id +
                                "': colonization time must lie in [a, first positive]");
        }
        break;
      case EpisodeGroup::N1:
        if (!(c >= ep.admit && c <= ep.discharge)) {
          throw ValidationError("episode '" + ep.episode_id +
                                "': colonization time outside the stay");
        }
        break;
      case EpisodeGroup::N0:
        break;
    }
  }
}

std::vector<AdmissionClass> classify_admissions(
    const std::vector<RawEpisode>& episodes, double readmission_window) {
  // Group episode indices by person, ordered by admission time.
  std::map<std::string, std::vector<std::size_t>> by_person;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    by_person[episodes[i].person_id].push_back(i);
  }
  std::vector<AdmissionClass> out(episodes.size(), AdmissionClass::NewAdmission);
  for (auto& [person, idx] : by_person) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return episodes[x].admit < episodes[y].admit;
    });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      if (episodes[idx[k]].admit < episodes[idx[k - 1]].discharge) {
        throw ValidationError("person '" + person + "': overlapping episodes");
      }
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double a = episodes[idx[k]].admit;
      bool recent_positive = false;
      // Positive tests from any earlier (or this person's earlier part of
      // an) episode; a positive at the admission instant counts as before it.
      for (std::size_t m = 0; m < idx.size() && !recent_positive; ++m) {
        if (m == k) continue;
        for (double pt : episodes[idx[m]].positive_test_times) {
          if (pt <= a && a - pt < readmission_window) {
            recent_positive = true;
            break;
          }
        }
      }
      if (recent_positive) out[idx[k]] = AdmissionClass::ColonizedOnReadmission;
    }
  }
  return out;
}

}  // namespace wardtrans
