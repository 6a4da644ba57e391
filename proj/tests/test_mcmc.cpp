#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/micro_wards.hpp"
#include "support/stat_tests.hpp"
#include "wardtrans/mcmc.hpp"
#include "wardtrans/simulate.hpp"
#include "wardtrans/stats.hpp"

using namespace wardtrans;
using namespace wardtrans::testsupport;

namespace {

Theta theta_full(double p, double phi, double b0, double b1, double b2) {
  Theta theta;
  theta.p = p;
  theta.phi = phi;
  theta.beta0 = b0;
  theta.beta1 = b1;
  theta.beta2 = b2;
  return theta;
}

}  // namespace

TEST_CASE("gibbs update for p draws the conjugate posterior") {
  // 30 positives and 10 negatives on a re-admission carrier: n_TP = 30 and,
  // with c = a, every negative is a false negative.
  std::vector<TestObs> tests;
  for (int i = 0; i < 30; ++i) tests.push_back({1.0 + i, true});
  for (int i = 0; i < 10; ++i) tests.push_back({31.0 + i, false});
  const auto ward = make_ward(
      45, {{"R", 0, 45, tests, {}, AdmissionClass::ColonizedOnReadmission}});

  ChainState chain(ward, theta_full(0.5, 0.5, 0.01, 0, 0), PriorConfig{}, 0.3,
                   Augmentation::initial_for_chain(ward));
  CHECK(chain.counts().n_TP == 30);
  CHECK(chain.counts().n_FN == 10);

  Rng rng(7);
  std::vector<double> draws(100000);
  for (auto& d : draws) {
    chain.gibbs_update_p(rng);
    d = chain.theta().p;
  }
  // Beta(31, 11): mean 31/42, sd 0.0671
  CHECK(std::fabs(mean(draws) - 31.0 / 42.0) < 4 * 0.0671 / std::sqrt(1e5));
  const double pvalue = ks_test_pvalue(
      draws, [](double x) { return beta_cdf(x, 31, 11); });
  CHECK(pvalue > 0.01);
}

TEST_CASE("gibbs update for phi draws the conjugate posterior") {
  std::vector<EpisodeSpec> specs;
  for (int i = 0; i < 100; ++i) {
    specs.push_back({"E" + std::to_string(i + 10), 0, 10});
  }
  const auto ward = make_ward(10, specs);
  Augmentation aug(ward);
  for (std::size_t j = 0; j < 12; ++j) aug.set_col_time(j, ward.episodes[j].admit);

  ChainState chain(ward, theta_full(0.5, 0.5, 0.01, 0, 0), PriorConfig{}, 0.3,
                   aug);
  CHECK(chain.counts().n_A == 100);
  CHECK(chain.counts().n_CA == 12);

  Rng rng(11);
  std::vector<double> draws(100000);
  for (auto& d : draws) {
    chain.gibbs_update_phi(rng);
    d = chain.theta().phi;
  }
  // Beta(13, 89): mean 13/102, sd 0.0329
  CHECK(std::fabs(mean(draws) - 13.0 / 102.0) < 4 * 0.0329 / std::sqrt(1e5));
}

TEST_CASE("gibbs updates reproduce the prior without data") {
  const auto ward = empty_ward();
  PriorConfig prior;
  prior.p_alpha = 2.5;
  prior.p_beta = 4.0;
  ChainState chain(ward, theta_full(0.5, 0.5, 0, 0, 0), prior, 0.3,
                   Augmentation(ward));
  Rng rng(3);
  std::vector<double> draws(20000);
  for (auto& d : draws) {
    chain.gibbs_update_p(rng);
    d = chain.theta().p;
  }
  CHECK(ks_test_pvalue(draws, [](double x) { return beta_cdf(x, 2.5, 4.0); }) >
        0.01);
}

TEST_CASE("move proposal factors match their closed forms") {
  // interior add: n0 (d-a) / ((1-phi0)(n1+1)) with ratio 1 caps at 8
  CHECK(std::exp(log_add_factor(4, 1, 0.5, 2, false)) ==
        doctest::Approx(8.0).epsilon(1e-12));
  // admission add: n0 / (phi0 (n1+1))
  CHECK(std::exp(log_add_factor(1, 3, 0.5, 2, true)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // delete mirrors
  CHECK(std::exp(log_delete_factor(2, 3, 0.25, 4, false)) ==
        doctest::Approx(0.75 * 3 / (3.0 * 4)).epsilon(1e-12));
  CHECK(std::exp(log_delete_factor(2, 3, 0.25, 4, true)) ==
        doctest::Approx(0.25 * 3 / 3.0).epsilon(1e-12));
}

TEST_CASE("add and delete factors cancel across matched states") {
  // Adding j to (n0, n1) leads to (n0-1, n1+1); deleting j there reverses
  // the move, so the non-posterior parts must cancel exactly.
  for (const bool at_admission : {false, true}) {
    for (const auto [n0, n1] : {std::pair<long, long>{4, 1}, {1, 0}, {7, 6}}) {
      const double forward = log_add_factor(n0, n1, 0.3, 5.5, at_admission);
      const double backward =
          log_delete_factor(n0 - 1, n1 + 1, 0.3, 5.5, at_admission);
      CHECK(forward + backward == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("negative random-walk proposals are rejected outright") {
  const auto ward = make_ward(10, {{"A", 0, 10}});
  SamplerConfig config;
  config.iterations = 400;
  config.burn_in = 100;
  config.thin = 1;
  config.seed = 99;
  config.rw_sd = {5.0, 5.0, 5.0};  // almost every proposal goes negative
  config.prior.beta0_rate = 1.0;
  config.prior.beta1_rate = 1.0;
  config.prior.beta2_rate = 1.0;
  config.init_beta_mean = 0.5;
  const auto samples = run_chain(ward, config);

  CHECK(samples.beta_updates[0].rejected_negative > 0);
  for (const auto& d : samples.draws) {
    CHECK(d.theta.beta0 >= 0);
    CHECK(d.theta.beta1 >= 0);
    CHECK(d.theta.beta2 >= 0);
  }
}

TEST_CASE("deleting the carrier a later colonization depends on is rejected") {
  const auto ward = make_ward(10, {{"A", 0, 10}, {"B", 0, 10, {{5, true}}}});
  Augmentation aug(ward);
  const auto ja = index_of(ward, "A");
  aug.set_col_time(ja, ward.episodes[ja].admit);       // import, in N1
  aug.set_col_time(index_of(ward, "B"), 5);            // needs a carrier at 5-

  ChainState chain(ward, theta_full(0.7, 0.3, 0.0, 0.02, 0.0), PriorConfig{},
                   0.3, aug);
  REQUIRE(chain.n1() == 1);
  Rng rng(5);
  MoveCounters counter;
  for (int i = 0; i < 50; ++i) {
    CHECK_FALSE(chain.move_delete(rng, counter));
  }
  CHECK(counter.attempts == 50);
  CHECK(counter.accepts == 0);
  CHECK(chain.augmentation().is_colonized(ja));
}

TEST_CASE("moves on an empty candidate set count as rejected attempts") {
  const auto ward = make_ward(
      10, {{"R", 0, 10, {}, {}, AdmissionClass::ColonizedOnReadmission}});
  ChainState chain(ward, theta_full(0.5, 0.5, 0.01, 0.01, 0.01), PriorConfig{},
                   0.3, Augmentation(ward));
  CHECK(chain.n0() == 0);
  CHECK(chain.n1() == 0);
  CHECK(chain.np() == 0);
  Rng rng(1);
  MoveCounters add, del, shift;
  CHECK_FALSE(chain.move_add(rng, add));
  CHECK_FALSE(chain.move_delete(rng, del));
  CHECK_FALSE(chain.move_shift(rng, shift));
  CHECK(add.attempts == 1);
  CHECK(chain.augmentation().col_time(0) == 0);  // readmission stays pinned
}

TEST_CASE("chains are deterministic given the seed") {
  SyntheticWardConfig sim;
  sim.beds = 4;
  sim.study_days = 60;
  sim.arrival_rate = 1.0;
  sim.theta = theta_full(0.8, 0.15, 0.02, 0.05, 0.01);
  sim.seed = 42;
  const auto ward = generate_synthetic_ward(sim).ward;

  SamplerConfig config;
  config.iterations = 3000;
  config.burn_in = 500;
  config.thin = 5;
  config.seed = 1234;
  config.check_invariants = true;
  const auto a = run_chain(ward, config);
  const auto b = run_chain(ward, config);

  REQUIRE(a.draws.size() == b.draws.size());
  CHECK(a.draws.size() ==
        static_cast<std::size_t>((config.iterations - config.burn_in) / config.thin));
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    CHECK(a.draws[i].theta.p == b.draws[i].theta.p);
    CHECK(a.draws[i].theta.beta1 == b.draws[i].theta.beta1);
    CHECK(a.draws[i].loglik == b.draws[i].loglik);
    CHECK(a.draws[i].n_FN == b.draws[i].n_FN);
  }

  SamplerConfig other = config;
  other.seed = 4321;
  const auto c = run_chain(ward, other);
  bool any_different = false;
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    any_different |= a.draws[i].theta.p != c.draws[i].theta.p;
  }
  CHECK(any_different);
}

TEST_CASE("incrementally maintained likelihood matches full recomputation") {
  SyntheticWardConfig sim;
  sim.beds = 5;
  sim.study_days = 90;
  sim.arrival_rate = 1.2;
  sim.theta = theta_full(0.75, 0.2, 0.01, 0.08, 0.02);
  sim.seed = 7;
  const auto ward = generate_synthetic_ward(sim).ward;

  SamplerConfig config;
  config.iterations = 20000;
  config.burn_in = 100;
  config.thin = 50;
  config.seed = 5;
  config.recompute_stride = 1;  // compare after every iteration
  config.check_invariants = true;
  const auto samples = run_chain(ward, config);
  CHECK(samples.max_recompute_rel_error <= 1e-9);
}

TEST_CASE("joint-distribution check keeps the prior calibrated") {
  // Successive-conditional sampler: alternate the MCMC kernel on (theta, c)
  // with re-simulation of the test results given (theta, c). The theta
  // marginals must stay at the prior.
  const auto frame = make_ward(
      30, {{"A", 0, 12, {{2, false}, {9, false}}},
           {"B", 3, 18, {{5, false}, {12, false}}, {{8, 14}}},
           {"C", 6, 27, {{7, false}, {20, false}}},
           {"D", 10, 22, {{15, false}}},
           {"E", 16, 30, {{18, false}, {25, false}}}});

  PriorConfig prior;
  prior.beta0_rate = prior.beta1_rate = prior.beta2_rate = 5.0;  // mean 0.2
  SimPolicy policy;
  policy.test_mode = TestScheduleMode::ReplayObserved;
  policy.precaution_mode = PrecautionMode::ReplayObserved;

  Rng rng(2024);
  Theta theta = theta_full(rng.uniform(), rng.uniform(), rng.exponential(0.2),
                           rng.exponential(0.2), rng.exponential(0.2));
  auto joint = simulate_colonization(frame, theta, policy, rng);

  const std::array<double, 3> sd{0.1, 0.1, 0.1};
  std::array<MoveCounters, 3> beta_counters;
  MoveCounters move_counter;
  std::vector<double> ps, phis, beta1s;
  WardData ward = joint.observed;
  Augmentation aug = joint.truth;
  const long steps = 60000;
  for (long it = 0; it < steps; ++it) {
    ChainState chain(ward, theta, prior, 0.3, aug);
    chain.gibbs_update_p(rng);
    chain.gibbs_update_phi(rng);
    chain.rw_update_betas(rng, sd, beta_counters);
    switch (rng.uniform_index(3)) {
      case 0: chain.move_add(rng, move_counter); break;
      case 1: chain.move_delete(rng, move_counter); break;
      default: chain.move_shift(rng, move_counter); break;
    }
    theta = chain.theta();
    aug = chain.augmentation();
    ward = resample_test_results(frame, aug, theta.p, rng);
    if (it % 20 == 19) {
      ps.push_back(theta.p);
      phis.push_back(theta.phi);
      beta1s.push_back(theta.beta1);
    }
  }

  CHECK(std::fabs(mean(ps) - 0.5) < 0.05);
  CHECK(std::fabs(mean(phis) - 0.5) < 0.05);
  CHECK(std::fabs(mean(beta1s) - 0.2) < 0.05);
}
