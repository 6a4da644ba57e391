#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/micro_wards.hpp"
#include "wardtrans/rng.hpp"
#include "wardtrans/likelihood.hpp"
#include "wardtrans/timeline.hpp"

using namespace wardtrans;
using namespace wardtrans::testsupport;

namespace {

Theta full_theta(double b0, double b1, double b2) {
  Theta theta;
  theta.beta0 = b0;
  theta.beta1 = b1;
  theta.beta2 = b2;
  return theta;
}

}  // namespace

TEST_CASE("single never-colonized patient") {
  const auto ward = make_ward(10, {{"A", 0, 10}});
  const auto timeline = build_timeline(ward, Augmentation(ward));
  REQUIRE(timeline.intervals().size() == 1);
  CHECK(timeline.intervals()[0].susceptible == 1);
  CHECK(timeline.intervals()[0].colonized == 0);
  CHECK(timeline.intervals()[0].isolated == 0);
  CHECK(timeline.stats().exposure_s == 10);
}

TEST_CASE("import isolated from day 4") {
  const auto ward = make_ward(10, {{"A", 0, 10, {}, {{4, 10}}}});
  Augmentation aug(ward);
  aug.set_col_time(0, 0);
  const auto timeline = build_timeline(ward, aug);
  const auto at2 = timeline.state_at(2);
  CHECK(at2.colonized == 1);
  CHECK(at2.isolated == 0);
  const auto at7 = timeline.state_at(7);
  CHECK(at7.colonized == 0);
  CHECK(at7.isolated == 1);
  CHECK(timeline.stats().exposure_s == 0);
}

TEST_CASE("two patients, one colonized mid-stay") {
  const auto ward = make_ward(10, {{"A", 0, 10}, {"B", 0, 10}});
  Augmentation aug(ward);
  aug.set_col_time(index_of(ward, "B"), 5);
  const auto timeline = build_timeline(ward, aug);
  CHECK(timeline.state_at(2).susceptible == 2);
  CHECK(timeline.state_at(6).susceptible == 1);
  CHECK(timeline.state_at(6).colonized == 1);

  SUBCASE("left limit excludes the colonization itself") {
    const auto before = timeline.counts_just_before(5);
    CHECK(before.susceptible == 2);
    CHECK(before.colonized == 0);
    REQUIRE(timeline.stats().col_points.size() == 1);
    CHECK(timeline.stats().col_points[0].colonized_before == 0);
  }
  SUBCASE("non-event points return the enclosing interval") {
    const auto mid = timeline.counts_just_before(7.25);
    CHECK(mid.susceptible == 1);
    CHECK(mid.colonized == 1);
  }
  SUBCASE("queries outside (0, T_E] are rejected") {
    CHECK_THROWS_AS(timeline.counts_just_before(0), std::out_of_range);
    CHECK_THROWS_AS(timeline.counts_just_before(10.5), std::out_of_range);
  }
}

TEST_CASE("simultaneous discharge and colonization: discharge applies first") {
  // A is colonized throughout and discharges at 5; B is colonized exactly at
  // t=5. The departing patient must not appear in B's left-limit counts.
  const auto tie = make_ward(10, {{"A", 0, 5}, {"B", 0, 10}});
  Augmentation aug_tie(tie);
  aug_tie.set_col_time(index_of(tie, "A"), 0);
  aug_tie.set_col_time(index_of(tie, "B"), 5);
  const auto tied = build_timeline(tie, aug_tie);

  // Brute-force reference: replay with the discharge perturbed earlier.
  const auto earlier = make_ward(10, {{"A", 0, 5 - 1e-9}, {"B", 0, 10}});
  Augmentation aug_earlier(earlier);
  aug_earlier.set_col_time(index_of(earlier, "A"), 0);
  aug_earlier.set_col_time(index_of(earlier, "B"), 5);
  const auto reference = build_timeline(earlier, aug_earlier);

  REQUIRE(tied.stats().col_points.size() == 1);
  REQUIRE(reference.stats().col_points.size() == 1);
  CHECK(tied.stats().col_points[0].colonized_before ==
        reference.stats().col_points[0].colonized_before);
  CHECK(tied.stats().col_points[0].colonized_before == 0);

  // Perturbing the discharge later instead puts A inside the left limit.
  const auto later = make_ward(10, {{"A", 0, 5 + 1e-9}, {"B", 0, 10}});
  Augmentation aug_later(later);
  aug_later.set_col_time(index_of(later, "A"), 0);
  aug_later.set_col_time(index_of(later, "B"), 5);
  CHECK(build_timeline(later, aug_later).stats().col_points[0].colonized_before == 1);
}

TEST_CASE("hazard integral worked example") {
  // S = 1 and C = 1 on [0, 2]
  const auto ward = make_ward(2, {{"A", 0, 2}, {"B", 0, 2}});
  Augmentation aug(ward);
  aug.set_col_time(index_of(ward, "B"), 0);
  const auto timeline = build_timeline(ward, aug);

  CHECK(integrate_hazard(timeline, full_theta(0.01, 0.02, 0)) ==
        doctest::Approx(0.06).epsilon(1e-12));
  CHECK(integrate_hazard(timeline, full_theta(0, 0, 0)) == 0.0);
}

TEST_CASE("non-linear model uses presence, not counts") {
  const auto ward = make_ward(4, {{"A", 0, 4}, {"B", 0, 4}, {"C", 0, 4},
                                  {"D", 0, 4}});
  Augmentation aug(ward);
  aug.set_col_time(0, 0);
  aug.set_col_time(1, 0);
  aug.set_col_time(2, 0);  // C(t) = 3, S(t) = 1
  const auto timeline = build_timeline(ward, aug);

  Theta nonlinear = full_theta(0.01, 0.02, 0.5);
  nonlinear.kind = ModelKind::NonLinear;
  CHECK(integrate_hazard(timeline, nonlinear) ==
        doctest::Approx((0.01 + 0.02) * 4).epsilon(1e-12));

  const Theta full = full_theta(0.01, 0.02, 0.5);
  CHECK(integrate_hazard(timeline, full) ==
        doctest::Approx((0.01 + 3 * 0.02) * 4).epsilon(1e-12));
}

TEST_CASE("hazard integral matches a Riemann sum") {
  const auto ward = make_ward(
      20, {{"A", 0, 7, {}, {{2, 5}}},
           {"B", 1, 9},
           {"C", 4, 16, {}, {{10, 14}}},
           {"D", 6, 20},
           {"E", 11, 18}});
  Augmentation aug(ward);
  aug.set_col_time(index_of(ward, "A"), 1.5);
  aug.set_col_time(index_of(ward, "C"), 4);
  aug.set_col_time(index_of(ward, "E"), 14.25);
  const auto timeline = build_timeline(ward, aug);
  const Theta theta = full_theta(0.013, 0.031, 0.007);

  const double dt = 1e-3;
  double riemann = 0;
  for (double t = dt / 2; t < 20; t += dt) {
    const auto s = timeline.state_at(t);
    riemann += dt * s.susceptible *
               colonization_rate(theta, s.colonized, s.isolated);
  }
  CHECK(integrate_hazard(timeline, theta) ==
        doctest::Approx(riemann).epsilon(2e-3));
}

TEST_CASE("hazard integral is linear in the betas for the full model") {
  const auto ward = make_ward(12, {{"A", 0, 12}, {"B", 2, 9}, {"C", 3, 11}});
  Augmentation aug(ward);
  aug.set_col_time(index_of(ward, "B"), 4);
  const auto timeline = build_timeline(ward, aug);

  const Theta x = full_theta(0.02, 0.005, 0.001);
  const Theta y = full_theta(0.007, 0.04, 0.09);
  Theta combination = full_theta(2 * x.beta0 + 3 * y.beta0,
                                 2 * x.beta1 + 3 * y.beta1,
                                 2 * x.beta2 + 3 * y.beta2);
  CHECK(integrate_hazard(timeline, combination) ==
        doctest::Approx(2 * integrate_hazard(timeline, x) +
                        3 * integrate_hazard(timeline, y)).epsilon(1e-12));
}

TEST_CASE("a colonization move only disturbs intervals inside the stay") {
  const auto ward = make_ward(30, {{"A", 0, 12}, {"B", 3, 20}, {"C", 8, 26}});
  Augmentation without(ward);
  Augmentation with(ward);
  const auto jb = index_of(ward, "B");
  with.set_col_time(jb, 9);

  const auto t0 = build_timeline(ward, without);
  const auto t1 = build_timeline(ward, with);
  const double c = 9, d = ward.episodes[jb].discharge;
  for (double t : {1.0, 2.5, 8.5, 21.0, 25.0, 29.0}) {
    const auto a = t0.state_at(t);
    const auto b = t1.state_at(t);
    if (t < c || t >= d) {
      CHECK(a.susceptible == b.susceptible);
      CHECK(a.colonized == b.colonized);
      CHECK(a.isolated == b.isolated);
    }
  }
}
