#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support/micro_wards.hpp"
#include "wardtrans/types.hpp"

using namespace wardtrans;
using namespace wardtrans::testsupport;

namespace {

RawEpisode raw(const std::string& person, double admit, double discharge,
               std::vector<double> positives = {}) {
  RawEpisode ep;
  ep.person_id = person;
  ep.ward_id = "W";
  ep.admit = admit;
  ep.discharge = discharge;
  ep.positive_test_times = std::move(positives);
  return ep;
}

}  // namespace

TEST_CASE("classification follows the carriage window") {
  // positive day 10, discharged 12, readmitted day 50: within the window
  std::vector<RawEpisode> episodes{raw("A", 0, 12, {10}), raw("A", 50, 60)};
  auto classes = classify_admissions(episodes, 180);
  CHECK(classes[0] == AdmissionClass::NewAdmission);
  CHECK(classes[1] == AdmissionClass::ColonizedOnReadmission);

  // readmission 190 days after the positive: new admission again
  episodes = {raw("B", 0, 12, {10}), raw("B", 200, 210)};
  classes = classify_admissions(episodes, 180);
  CHECK(classes[1] == AdmissionClass::NewAdmission);

  // no prior positive at all
  episodes = {raw("C", 0, 5), raw("C", 20, 30)};
  classes = classify_admissions(episodes, 180);
  CHECK(classes[1] == AdmissionClass::NewAdmission);
}

TEST_CASE("classification counts an admission-instant positive as prior") {
  std::vector<RawEpisode> episodes{raw("A", 0, 20, {20}), raw("A", 20, 30)};
  const auto classes = classify_admissions(episodes, 180);
  CHECK(classes[1] == AdmissionClass::ColonizedOnReadmission);
}

TEST_CASE("window zero classifies everything as new") {
  std::vector<RawEpisode> episodes{raw("A", 0, 12, {10}), raw("A", 12, 20),
                                   raw("A", 30, 40)};
  const auto classes = classify_admissions(episodes, 0);
  for (auto c : classes) CHECK(c == AdmissionClass::NewAdmission);
}

TEST_CASE("classification is invariant to person permutation and time shifts") {
  std::vector<RawEpisode> episodes{raw("A", 0, 12, {10}), raw("A", 50, 60),
                                   raw("B", 5, 9), raw("B", 300, 310)};
  const auto base = classify_admissions(episodes, 180);

  std::vector<RawEpisode> swapped{episodes[2], episodes[3], episodes[0],
                                  episodes[1]};
  const auto swapped_classes = classify_admissions(swapped, 180);
  CHECK(swapped_classes[0] == base[2]);
  CHECK(swapped_classes[1] == base[3]);
  CHECK(swapped_classes[2] == base[0]);
  CHECK(swapped_classes[3] == base[1]);

  std::vector<RawEpisode> shifted = episodes;
  for (auto& ep : shifted) {
    ep.admit += 1000;
    ep.discharge += 1000;
    for (auto& t : ep.positive_test_times) t += 1000;
  }
  const auto shifted_classes = classify_admissions(shifted, 180);
  CHECK(shifted_classes == base);
}

TEST_CASE("overlapping episodes of one person are rejected") {
  std::vector<RawEpisode> episodes{raw("A", 0, 12), raw("A", 10, 20)};
  CHECK_THROWS_AS(classify_admissions(episodes, 180), ValidationError);
}

TEST_CASE("episode derived fields") {
  PatientEpisode ep;
  ep.episode_id = "E";
  ep.admit = 0;
  ep.discharge = 10;
  ep.tests = {{6, false}, {2, false}, {4, true}, {8, true}};
  ep.precautions = {{5, 10}};
  ep.finalize();

  CHECK(ep.first_positive == 4);
  CHECK(ep.first_precaution == 5);
  CHECK(ep.negative_test_times == std::vector<double>{2, 6});
  CHECK(ep.false_negatives_from(0) == 2);
  CHECK(ep.false_negatives_from(3) == 1);   // only the test at 6
  CHECK(ep.false_negatives_from(6) == 1);   // a test at c counts
  CHECK(ep.false_negatives_from(6.5) == 0);
  CHECK(ep.false_negatives_from(kInf) == 0);
}

TEST_CASE("ward validation catches bad structure") {
  CHECK_THROWS_AS(make_ward(10, {{"E", 5, 5}}), ValidationError);
  CHECK_THROWS_AS(make_ward(10, {{"E", 0, 12}}), ValidationError);  // past T_E
  CHECK_THROWS_AS(make_ward(10, {{"E", 2, 8, {{1, false}}}}), ValidationError);
  CHECK_THROWS_AS(make_ward(10, {{"E", 2, 8, {}, {{1, 3}}}}), ValidationError);
  CHECK_THROWS_AS(make_ward(10, {{"E", 0, 8, {}, {{1, 4}, {3, 6}}}}),
                  ValidationError);

  const auto ward = make_ward(10, {{"A", 0, 4, {{1, true}}},
                                   {"B", 2, 8, {{3, false}}}});
  CHECK(ward.n_new_admissions == 2);
  CHECK(ward.n_positive_tests == 1);
  CHECK(ward.occupancy_at(3) == 2);
  CHECK(ward.occupancy_at(4) == 1);  // half-open stay
}

TEST_CASE("augmentation groups and invariants") {
  const auto ward = make_ward(
      20, {{"P", 0, 10, {{4, true}}},
           {"N", 2, 12},
           {"R", 5, 15, {}, {}, AdmissionClass::ColonizedOnReadmission}});
  const auto jp = index_of(ward, "P");
  const auto jn = index_of(ward, "N");
  const auto jr = index_of(ward, "R");

  Augmentation aug = Augmentation::initial_for_chain(ward);
  CHECK(aug.group_of(ward, jp) == EpisodeGroup::P);
  CHECK(aug.group_of(ward, jn) == EpisodeGroup::N0);
  CHECK(aug.group_of(ward, jr) == EpisodeGroup::Readmission);
  CHECK(aug.col_time(jp) == 4);      // starts at the first positive
  CHECK(aug.col_time(jr) == 5);      // admission, fixed
  CHECK_FALSE(aug.is_colonized(jn));
  aug.validate(ward);

  aug.set_col_time(jn, 3);
  CHECK(aug.group_of(ward, jn) == EpisodeGroup::N1);
  aug.validate(ward);

  SUBCASE("P must be colonized at or before its first positive") {
    aug.set_col_time(jp, 6);
    CHECK_THROWS_AS(aug.validate(ward), ValidationError);
  }
  SUBCASE("readmission colonization time is pinned to admission") {
    aug.set_col_time(jr, 7);
    CHECK_THROWS_AS(aug.validate(ward), ValidationError);
  }
  SUBCASE("colonization must fall inside the stay") {
    aug.set_col_time(jn, 1);  // before admission at 2
    CHECK_THROWS_AS(aug.validate(ward), ValidationError);
  }
}

TEST_CASE("model kind names round trip") {
  for (auto kind :
       {ModelKind::Full, ModelKind::NoBackground, ModelKind::NonLinear}) {
    CHECK(model_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(model_kind_from_string("cubic"), ValidationError);
}

TEST_CASE("theta support") {
  Theta theta;
  CHECK(theta.in_support());
  theta.beta1 = -0.1;
  CHECK_FALSE(theta.in_support());
}
