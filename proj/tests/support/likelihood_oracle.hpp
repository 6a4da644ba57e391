#ifndef WARDTRANS_TESTS_LIKELIHOOD_ORACLE_HPP
#define WARDTRANS_TESTS_LIKELIHOOD_ORACLE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "support/micro_wards.hpp"
#include "wardtrans/types.hpp"

namespace wardtrans::testsupport {

/// A hand-constructed instance together with the log likelihood worked out
/// directly from the model's factorization (importation and sensitivity
/// factors, one rate term per on-ward colonization, exposure integral).
/// The expected values below are written as explicit arithmetic, not via the
/// timeline machinery.
struct LikelihoodInstance {
  std::string name;
  WardData ward;
  Augmentation aug;
  Theta theta;
  double expected;
};

inline std::vector<LikelihoodInstance> likelihood_oracle_instances() {
  std::vector<LikelihoodInstance> out;
  const double p = 0.7, phi = 0.2, b0 = 0.01, b1 = 0.02, b2 = 0.03;
  Theta theta;
  theta.p = p;
  theta.phi = phi;
  theta.beta0 = b0;
  theta.beta1 = b1;
  theta.beta2 = b2;

  {  // one patient, never colonized, no tests
    auto ward = make_ward(8, {{"A", 0, 8}});
    Augmentation aug(ward);
    out.push_back({"single-susceptible", ward, aug, theta,
                   std::log(1 - phi) - b0 * 8});
  }
  {  // empty ward: empty products and integral
    auto ward = empty_ward(10);
    Augmentation aug(ward);
    out.push_back({"empty-ward", ward, aug, theta, 0.0});
  }
  {  // import with one positive test; S(t) = 0 throughout
    auto ward = make_ward(10, {{"A", 0, 10, {{3, true}}}});
    Augmentation aug(ward);
    aug.set_col_time(0, 0);
    out.push_back({"import-one-positive", ward, aug, theta,
                   std::log(phi) + std::log(p)});
  }
  {  // one patient colonized on the ward at c = 4, no tests
    auto ward = make_ward(10, {{"A", 0, 10}});
    Augmentation aug(ward);
    aug.set_col_time(0, 4);
    out.push_back({"single-onward-colonization", ward, aug, theta,
                   std::log(1 - phi) + std::log(b0) - b0 * 4});
  }
  {  // two susceptible patients for ten days
    auto ward = make_ward(10, {{"A", 0, 10}, {"B", 0, 10}});
    Augmentation aug(ward);
    out.push_back({"two-susceptibles", ward, aug, theta,
                   2 * std::log(1 - phi) - 2 * b0 * 10});
  }
  {  // import isolated on [4, 10) next to one susceptible
    auto ward = make_ward(10, {{"A", 0, 10, {}, {{4, 10}}}, {"B", 0, 10}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    out.push_back({"import-isolated", ward, aug, theta,
                   std::log(phi) + std::log(1 - phi) -
                       ((b0 + b1) * 4 + (b0 + b2) * 6)});
  }
  {  // import plus a ward colonization at c = 5 under pressure C = 1
    auto ward = make_ward(10, {{"A", 0, 10}, {"B", 0, 10}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    aug.set_col_time(index_of(ward, "B"), 5);
    out.push_back({"import-plus-transmission", ward, aug, theta,
                   std::log(phi) + std::log(1 - phi) + std::log(b0 + b1) -
                       (b0 + b1) * 5});
  }
  {  // as above, with negative tests at 2 (true negative) and 6 (false)
    auto ward = make_ward(
        10, {{"A", 0, 10}, {"B", 0, 10, {{2, false}, {6, false}}}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    aug.set_col_time(index_of(ward, "B"), 5);
    out.push_back({"false-negative-after-c", ward, aug, theta,
                   std::log(phi) + std::log(1 - phi) + std::log(b0 + b1) -
                       (b0 + b1) * 5 + std::log(1 - p)});
  }
  {  // non-linear model: two imports exert the pressure of one
    auto ward = make_ward(6, {{"A", 0, 6}, {"B", 0, 6}, {"C", 0, 6}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    aug.set_col_time(index_of(ward, "B"), 0);
    aug.set_col_time(index_of(ward, "C"), 3);
    Theta nonlinear = theta;
    nonlinear.kind = ModelKind::NonLinear;
    out.push_back({"non-linear-saturation", ward, aug, nonlinear,
                   2 * std::log(phi) + std::log(1 - phi) + std::log(b0 + b1) -
                       (b0 + b1) * 3});
  }
  {  // full model on the same assignment uses the count
    auto ward = make_ward(6, {{"A", 0, 6}, {"B", 0, 6}, {"C", 0, 6}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    aug.set_col_time(index_of(ward, "B"), 0);
    aug.set_col_time(index_of(ward, "C"), 3);
    out.push_back({"full-model-count-pressure", ward, aug, theta,
                   2 * std::log(phi) + std::log(1 - phi) + std::log(b0 + 2 * b1) -
                       (b0 + 2 * b1) * 3});
  }
  {  // re-admission episode: no importation factor, tests still count
    auto ward = make_ward(
        5, {{"R", 0, 5, {{1, true}, {3, false}}, {},
             AdmissionClass::ColonizedOnReadmission},
            {"B", 0, 5}});
    Augmentation aug(ward);  // R pinned at admission
    out.push_back({"readmission-carrier", ward, aug, theta,
                   std::log(1 - phi) + std::log(p) + std::log(1 - p) -
                       (b0 + b1) * 5});
  }
  {  // isolation toggling changes which rate the colonization sees
    auto ward = make_ward(10, {{"A", 0, 10, {}, {{2, 6}}}, {"B", 0, 10}});
    Augmentation aug(ward);
    aug.set_col_time(index_of(ward, "A"), 0);
    aug.set_col_time(index_of(ward, "B"), 7);
    out.push_back({"isolation-window", ward, aug, theta,
                   std::log(phi) + std::log(1 - phi) + std::log(b0 + b1) -
                       ((b0 + b1) * 2 + (b0 + b2) * 4 + (b0 + b1) * 1)});
  }
  {  // colonization at zero rate: impossible under beta0 = 0
    auto ward = make_ward(10, {{"A", 0, 10}});
    Augmentation aug(ward);
    aug.set_col_time(0, 5);
    Theta no_background = theta;
    no_background.beta0 = 0;
    out.push_back({"zero-rate-colonization", ward, aug, no_background, -kInf});
  }
  {  // a false negative under perfect sensitivity is impossible
    auto ward = make_ward(10, {{"A", 0, 10, {{4, false}}}});
    Augmentation aug(ward);
    aug.set_col_time(0, 0);
    Theta perfect = theta;
    perfect.p = 1.0;
    out.push_back({"perfect-sensitivity-conflict", ward, aug, perfect, -kInf});
  }
  return out;
}

}  // namespace wardtrans::testsupport

#endif
