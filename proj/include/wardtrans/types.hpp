#ifndef WARDTRANS_TYPES_HPP
#define WARDTRANS_TYPES_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wardtrans {

// All times are real days since the study start T_S (so T_S == 0 and the
// study ends at T_E).
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Raised for malformed or inconsistent input data; the CLI maps it to
/// exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestObs {
  double time = 0;
  bool positive = false;
};

/// Half-open interval [start, end).
struct Interval {
  double start = 0;
  double end = 0;
  double length() const { return end - start; }
};

enum class AdmissionClass { NewAdmission, ColonizedOnReadmission };

enum class ModelKind { Full, NoBackground, NonLinear };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// One formal patient: a single admission-to-discharge stay. A person
/// readmitted outside the carriage window reappears as a distinct episode
/// that the model treats as a new patient.
struct PatientEpisode {
  std::string episode_id;
  double admit = 0;      // a_j
  double discharge = 0;  // d_j
  std::vector<TestObs> tests;          // sorted ascending by time
  std::vector<Interval> precautions;   // sorted, disjoint, within [a, d]
  AdmissionClass admission_class = AdmissionClass::NewAdmission;

  // Derived observation summaries, filled in by finalize().
  double first_positive = kInf;    // t_j; +inf when no positive test
  double first_precaution = kInf;  // p_j; +inf when never under precautions
  std::vector<double> negative_test_times;  // sorted

  void finalize();
  bool has_positive() const { return first_positive < kInf; }
  // Negative tests at times >= c; these are the episode's false negatives
  // when it is colonized from time c.
  long false_negatives_from(double c) const;
};

/// Validated per-ward data set over the study window [0, T_E].
struct WardData {
  std::string ward_id;
  double study_length = 0;  // T_E
  double readmission_window = 180.0;
  std::vector<PatientEpisode> episodes;  // sorted by (admit, episode_id)

  long n_new_admissions = 0;  // n_A
  long n_positive_tests = 0;  // n_TP (fixed by the data)

  void finalize();  // fills derived fields and validates invariants
  std::size_t size() const { return episodes.size(); }
  // Number of patients present at time t (episode intervals are [a, d)).
  long occupancy_at(double t) const;
};

/// Model parameters theta = (p, phi, beta0, beta1, beta2) with the model
/// variant they belong to.
struct Theta {
  double p = 0.5;     // test sensitivity
  double phi = 0.1;   // importation probability
  double beta0 = 0;   // background colonization rate, per day
  double beta1 = 0;   // rate per colonized unisolated patient, per day
  double beta2 = 0;   // rate per colonized isolated patient, per day
  ModelKind kind = ModelKind::Full;

  bool in_support() const {
    return p >= 0 && p <= 1 && phi >= 0 && phi <= 1 && beta0 >= 0 &&
           beta1 >= 0 && beta2 >= 0;
  }
};

/// Membership in the latent-update partition: P has a positive test,
/// N1/N0 are colonized/uncolonized episodes without one, Readmission
/// episodes are colonized by fiat and never updated.
enum class EpisodeGroup { P, N1, N0, Readmission };

/// The latent colonization assignment c. Episode j is colonized from
/// col_time[j] to discharge; kNever (+inf) marks a never-colonized episode.
class Augmentation {
 public:
  static constexpr double kNever = kInf;

  Augmentation() = default;
  explicit Augmentation(const WardData& ward);  // nobody colonized except
                                                // readmission episodes (c=a)

  // Initial state used by the sampler: c_j = first positive time for
  // episodes in P, N1 empty.
  static Augmentation initial_for_chain(const WardData& ward);

  std::size_t size() const { return col_time_.size(); }
  bool is_colonized(std::size_t j) const { return col_time_[j] < kNever; }
  double col_time(std::size_t j) const { return col_time_[j]; }
  void set_col_time(std::size_t j, double c) { col_time_[j] = c; }
  void clear(std::size_t j) { col_time_[j] = kNever; }
  const std::vector<double>& col_times() const { return col_time_; }

  EpisodeGroup group_of(const WardData& ward, std::size_t j) const;

  // Throws ValidationError when any invariant fails (range of c, P always
  // colonized with c <= t_j, readmission episodes pinned at c = a).
  void validate(const WardData& ward) const;

 private:
  std::vector<double> col_time_;
};

/// Count statistics entering the importation and test-sensitivity factors.
struct CountsSummary {
  long n_A = 0;    // new admissions
  long n_CA = 0;   // new admissions colonized at admission
  long n_TP = 0;   // positive tests (fixed by data)
  long n_FN = 0;   // negative tests at or after the episode's colonization
};

/// Raw admission record used for classification, before ward assembly.
struct RawEpisode {
  std::string person_id;
  std::string ward_id;
  double admit = 0;
  double discharge = 0;
  std::vector<double> positive_test_times;
};

// Assigns NewAdmission / ColonizedOnReadmission per episode, in the order
// given. An episode is colonized on re-admission iff the same person has a
// positive test at time pt <= admit with admit - pt < window (so window 0
// classifies everything as new). Episodes of one person must not overlap.
std::vector<AdmissionClass> classify_admissions(
    const std::vector<RawEpisode>& episodes, double readmission_window);

}  // namespace wardtrans

#endif
