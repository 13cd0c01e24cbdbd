#include <cmath>

#include "doctest.h"
#include "homlo/analytic_model.hpp"
#include "homlo/errors.hpp"
#include "homlo/estimator.hpp"

using namespace homlo;
using namespace homlo::analytic;
using doctest::Approx;

TEST_SUITE("analytic_model") {

TEST_CASE("g2 from emission probabilities") {
  CHECK(g2_from_probs(1.0, 0.0) == 0.0);
  CHECK(g2_from_probs(0.0, 1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(g2_from_probs(0.96, 0.02) == Approx(0.04).epsilon(1e-12));
  CHECK_THROWS_AS(g2_from_probs(0.0, 0.0), UndefinedQuantity);
}

TEST_CASE("loss-degraded probabilities") {
  auto p = loss_degraded_probs(1.0, 0.0, 1.0);
  CHECK(p.p0 == 0.0);
  CHECK(p.p1 == 1.0);
  CHECK(p.p2 == 0.0);
  p = loss_degraded_probs(1.0, 0.0, 0.5);
  CHECK(p.p0 == Approx(0.5));
  CHECK(p.p1 == Approx(0.5));
  CHECK(p.p2 == 0.0);
  p = loss_degraded_probs(0.96, 0.02, 1.0);
  CHECK(p.p0 == Approx(0.0).epsilon(1e-15));
  CHECK(p.p1 == Approx(0.96));
  CHECK(p.p2 == Approx(0.02));

  SUBCASE("populations sum to p1 + p2 and mean scales with eta") {
    for (double eta : {0.0, 0.1, 0.37, 0.8, 1.0}) {
      const auto q = loss_degraded_probs(0.7, 0.2, eta);
      CHECK(q.p0 + q.p1 + q.p2 == Approx(0.9).epsilon(1e-14));
      CHECK(q.p1 + 2 * q.p2 == Approx(eta * (0.7 + 0.4)).epsilon(1e-14));
    }
  }
}

TEST_CASE("cross-output coincidences") {
  CHECK(cross_coincidence(1, 1, 0, 1) == Approx(1.0));
  CHECK(cross_coincidence(1, 1, 0, 0) == Approx(3.0));
  CHECK(cross_coincidence(0.7, 0, 0.3, 0.4) == Approx(0.49));
  // M = 0 reduces to independent fields
  for (double a : {0.1, 1.0, 3.0})
    for (double p : {0.05, 1.0})
      CHECK(cross_coincidence(a, p, 0.04, 0.0) == Approx(a * a + p * p * 0.04 + 2 * a * p).epsilon(1e-14));
}

TEST_CASE("HOM visibility") {
  CHECK(hom_visibility(1, 1, 0, 1) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(hom_visibility(0.203, 1.0, 0.0412, 0.76) == Approx(0.6318).epsilon(1e-4));
  CHECK(hom_visibility(0.5, 0.8, 0.02, 0.0) == 0.0);
  CHECK_THROWS_AS(hom_visibility(0, 0, 0.1, 0.5), UndefinedQuantity);
  CHECK_THROWS_AS(hom_visibility(1, 1, 0.1, 1.5), InvalidParameter);
}

TEST_CASE("overlap from visibility") {
  CHECK(overlap_from_visibility(0.6318, 0.203, 1.0, 0.0412) == Approx(0.760).epsilon(1e-3));
  CHECK(overlap_from_visibility(2.0 / 3.0, 1.0, 1.0, 0.0) == Approx(1.0).epsilon(1e-14));
  CHECK(overlap_from_visibility(0.0, 0.4, 2.0, 0.3) == 0.0);
  CHECK_THROWS_AS(overlap_from_visibility(0.5, 0.0, 1.0, 0.04), UndefinedQuantity);
  CHECK_THROWS_AS(overlap_from_visibility(0.5, 1.0, 0.0, 0.04), UndefinedQuantity);

  SUBCASE("round trip") {
    for (double a : {0.001, 0.03, 0.2, 1.0, 7.0, 50.0})
      for (double p : {0.01, 0.3, 1.0, 2.0})
        for (double g : {0.0, 0.0412, 0.3})
          for (double m : {0.0, 0.13, 0.5, 0.76, 1.0}) {
            const double v = hom_visibility(a, p, g, m);
            CHECK(std::abs(overlap_from_visibility(v, a, p, g) - m) <= 1e-12);
          }
  }
}

TEST_CASE("auto correlation at one output") {
  CHECK(auto_g2_zero(0.8, 0.0, 0.04, 0.3) == Approx(1.0));
  CHECK(auto_g2_zero(0.0, 0.5, 0.04, 0.3) == Approx(0.04));
  CHECK(auto_g2_zero(2.0, 1.0, 0.0412, 0.76) == Approx(1.2312).epsilon(1e-4));
  CHECK(auto_g2_zero(2.0, 1.0, 0.0, 1.0) == Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(auto_g2_zero(0.0, 0.0, 0.04, 0.5), UndefinedQuantity);

  SUBCASE("strictly increasing in M") {
    for (double r : {0.05, 0.5, 2.0, 10.0}) {
      double prev = auto_g2_at_ratio(r, 0.0412, 0.0);
      for (int i = 1; i <= 100; ++i) {
        const double cur = auto_g2_at_ratio(r, 0.0412, i / 100.0);
        CHECK(cur > prev);
        prev = cur;
      }
    }
  }

  SUBCASE("bounded below by min(1, g2) and above by the peak value") {
    for (double g = 0.0; g <= 1.0; g += 0.05)
      for (double m = 0.0; m <= 1.0; m += 0.1) {
        const auto peak = peak_analysis(g, m);
        const double ceiling = peak.g2_auto_max ? *peak.g2_auto_max : std::max(1.0, g);
        for (double lr = -4.0; lr <= 4.0; lr += 0.1) {
          const double v = auto_g2_at_ratio(std::pow(10.0, lr), g, m);
          CHECK(v >= std::min(1.0, g) - 1e-12);
          CHECK(v <= ceiling + 1e-12);
          if (g == 0.0) CHECK(v <= 4.0 / 3.0 + 1e-12);
        }
      }
  }

  SUBCASE("a multi-photon source lifts the maximum above 4/3") {
    CHECK(*peak_analysis(0.0412, 1.0).g2_auto_max > 4.0 / 3.0);
  }
}

TEST_CASE("peak analysis") {
  auto rep = peak_analysis(0.0412, 0.76);
  CHECK(rep.r_vhom_star == Approx(0.2030).epsilon(1e-4));
  CHECK(rep.v_max == Approx(0.6318).epsilon(1e-4));
  REQUIRE(rep.r_auto_star);
  CHECK(*rep.r_auto_star == Approx(2.2616).epsilon(1e-4));
  CHECK(*rep.g2_auto_max == Approx(1.2330).epsilon(1e-4));

  rep = peak_analysis(0.0, 1.0);
  CHECK(*rep.r_auto_star == Approx(2.0));
  CHECK(*rep.g2_auto_max == Approx(4.0 / 3.0).epsilon(1e-15));

  rep = peak_analysis(0.0412, 0.0);
  CHECK_FALSE(rep.r_auto_star);
  CHECK_FALSE(rep.g2_auto_max);
  CHECK(rep.v_max == 0.0);

  SUBCASE("maxima agree with a numeric search") {
    for (double g : {0.0, 0.01, 0.0412, 0.2})
      for (double m : {0.1, 0.5, 0.76, 1.0}) {
        const auto pr = peak_analysis(g, m);
        if (g > 0) {
          const auto vmax = estimate::minimize_bounded(
              [&](double lr) { return -hom_visibility_at_ratio(std::exp(lr), g, m); }, std::log(1e-4), std::log(1e3),
              1e-12);
          CHECK(std::abs(std::exp(vmax.x) - pr.r_vhom_star) <= 1e-6);
          CHECK(-vmax.f == Approx(pr.v_max).epsilon(1e-12));
        }
        const auto amax = estimate::minimize_bounded(
            [&](double r) { return -auto_g2_at_ratio(r, g, m); }, 1e-3, 100.0, 1e-12);
        CHECK(std::abs(amax.x - *pr.r_auto_star) <= 1e-6);
        CHECK(-amax.f == Approx(*pr.g2_auto_max).epsilon(1e-12));
      }
  }
}

TEST_CASE("effective overlap") {
  CHECK(effective_overlap(1.0, 0.905) == Approx(0.905));
  CHECK(effective_overlap(0.37, 1.0) == Approx(0.37));
  CHECK(effective_overlap(0.84, 0.905) == Approx(0.7602).epsilon(1e-12));
  CHECK_THROWS_AS(effective_overlap(1.2, 0.9), InvalidParameter);
}

TEST_CASE("correction factor matches the inversion") {
  for (double r : {0.01, 0.203, 1.0, 30.0})
    CHECK(visibility_correction_factor(r, 0.0412) == Approx(1 + r / 2 + 0.0412 / (2 * r)).epsilon(1e-14));
}

}
