#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "homlo/errors.hpp"
#include "homlo/mode_overlap.hpp"

using namespace homlo;
using namespace homlo::overlap;
using doctest::Approx;

namespace {

SampledProfile amplitude_of(const SampledProfile& intensity) { return amplitude_from_intensity(intensity); }

SampledProfile grid(Domain d, Kind k, double lo, double hi, double dx, auto f) {
  SampledProfile p{d, k, {}, {}};
  const auto n = static_cast<int>(std::llround((hi - lo) / dx));
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * dx;
    p.xs.push_back(x);
    p.values.push_back(f(x));
  }
  return p;
}

}  // namespace

TEST_SUITE("mode_overlap") {

TEST_CASE("amplitude from intensity") {
  const auto flat = amplitude_of(grid(Domain::time, Kind::intensity, 0.0, 1.0, 0.01, [](double) { return 5.0; }));
  CHECK(flat.kind == Kind::amplitude);
  for (double v : flat.values) CHECK(v == Approx(1.0).epsilon(1e-12));

  const double tau = 100.0;
  const auto expo = amplitude_of(exponential_intensity(tau, 1.0, 1500.0));
  for (std::size_t i = 1; i < expo.values.size(); i += 97)
    CHECK(expo.values[i] / expo.values[0] == Approx(std::exp(-expo.xs[i] / (2 * tau))).epsilon(1e-12));
  CHECK(squared_norm(expo) == Approx(1.0).epsilon(1e-9));

  auto spike = grid(Domain::time, Kind::intensity, 0.0, 10.0, 1.0, [](double x) { return x == 4.0 ? 3.0 : 0.0; });
  const auto a = amplitude_of(spike);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK((a.values[i] > 0) == (i == 4));

  auto zero = grid(Domain::time, Kind::intensity, 0.0, 1.0, 0.1, [](double) { return 0.0; });
  CHECK_THROWS_AS(amplitude_of(zero), UndefinedQuantity);
}

TEST_CASE("profile validation") {
  SampledProfile bad{Domain::time, Kind::intensity, {0.0, 2.0, 1.0}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  SampledProfile negative{Domain::time, Kind::intensity, {0.0, 1.0}, {1.0, -1.0}};
  CHECK_THROWS_AS(negative.validate(), InvalidParameter);
  SampledProfile ragged{Domain::time, Kind::intensity, {0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(ragged.validate(), InvalidParameter);
}

TEST_CASE("overlap integral") {
  const auto g = amplitude_of(gaussian_intensity(Domain::frequency, 0.0, 1.0, 0.01, -8.0, 8.0));
  CHECK(overlap_integral(g, g).value == Approx(1.0).epsilon(1e-9));

  const auto e1 = amplitude_of(exponential_intensity(170.0, 1.0, 4000.0));
  const auto e2 = amplitude_of(exponential_intensity(100.0, 1.0, 4000.0));
  CHECK(std::abs(overlap_integral(e1, e2).value - 4 * 170.0 * 100.0 / (270.0 * 270.0)) <= 1e-4);

  // |psi|^2 of unit variance
  const double s = 1.0;
  const auto ga = amplitude_of(gaussian_intensity(Domain::frequency, 0.0, s, 0.01, -10.0, 12.0));
  const auto gb = amplitude_of(gaussian_intensity(Domain::frequency, 2.0, s, 0.01, -10.0, 12.0));
  CHECK(std::abs(overlap_integral(ga, gb).value - std::exp(-1.0)) <= 1e-4);

  SUBCASE("disjoint ranges") {
    const auto left = amplitude_of(gaussian_intensity(Domain::time, 0.0, 1.0, 0.1, -5.0, 5.0));
    const auto right = amplitude_of(gaussian_intensity(Domain::time, 20.0, 1.0, 0.1, 15.0, 25.0));
    const auto v = overlap_integral(left, right);
    CHECK(v.value == 0.0);
    CHECK(v.warning.has_value());
  }
  SUBCASE("mismatched domains are rejected") {
    const auto t = amplitude_of(gaussian_intensity(Domain::time, 0.0, 1.0, 0.1, -5.0, 5.0));
    CHECK_THROWS_AS(overlap_integral(t, g), InvalidParameter);
  }
  SUBCASE("symmetry") {
    const auto e3 = amplitude_of(exponential_intensity(137.0, 0.7, 2000.0));
    CHECK(std::abs(overlap_integral(e1, e3).value - overlap_integral(e3, e1).value) <= 1e-12);
    CHECK(std::abs(overlap_integral(ga, gb).value - overlap_integral(gb, ga).value) <= 1e-12);
  }
  SUBCASE("Cauchy-Schwarz on random profiles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      auto make = [&] {
        SampledProfile p{Domain::time, Kind::intensity, {}, {}};
        double x = u(rng);
        const int n = 5 + static_cast<int>(u(rng) * 60);
        for (int i = 0; i < n; ++i) {
          x += 0.01 + u(rng);
          p.xs.push_back(x);
          p.values.push_back(u(rng) < 0.2 ? 0.0 : u(rng));
        }
        p.values[n / 2] += 0.1;
        return amplitude_of(p);
      };
      const auto a = make();
      const auto b = make();
      const double v = overlap_integral(a, b).value;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  SUBCASE("grid refinement") {
    for (double dx : {2.0, 1.0, 0.5}) {
      const auto c1 = overlap_integral(amplitude_of(exponential_intensity(170.0, dx, 3000.0)),
                                       amplitude_of(exponential_intensity(100.0, dx, 3000.0)));
      const auto c2 = overlap_integral(amplitude_of(exponential_intensity(170.0, dx / 2, 3000.0)),
                                       amplitude_of(exponential_intensity(100.0, dx / 2, 3000.0)));
      CHECK(std::abs(c1.value - c2.value) < 1e-3);
    }
  }
}

TEST_CASE("spectral window") {
  const auto spec = gaussian_intensity(Domain::frequency, 0.0, 5.0, 0.5, -30.0, 30.0);
  const auto cut = spectral_window(spec, 2.0, 10.0);
  CHECK(cut.xs.front() >= -8.0);
  CHECK(cut.xs.back() <= 12.0);
  CHECK(cut.xs.size() == 41);
  CHECK_THROWS_AS(spectral_window(spec, 0.0, -1.0), InvalidParameter);
}

TEST_CASE("fringe visibility") {
  std::vector<double> constant(2000, 3.0);
  auto f = fringe_visibility_overlap(constant, 500);
  CHECK(f.visibility == 0.0);
  CHECK(f.m_p == 0.0);

  std::vector<double> full, between;
  for (int i = 0; i < 100000; ++i) {
    const double phi = 2 * std::numbers::pi * i / 100000.0;
    full.push_back(1.0 + std::cos(phi) >= 0 ? 1.0 + std::cos(phi) : 0.0);
    between.push_back(2.0 + std::cos(phi));
  }
  std::vector<double> square(1000, 0.0);
  for (int i = 0; i < 500; ++i) square[i] = 4.0;
  f = fringe_visibility_overlap(square, 500);
  CHECK(f.visibility == Approx(1.0));
  CHECK(f.m_p == Approx(1.0));

  f = fringe_visibility_overlap(between, 50);
  CHECK(f.visibility == Approx(0.5).epsilon(1e-4));
  CHECK(f.m_p == Approx(0.25).epsilon(1e-4));
  f = fringe_visibility_overlap(full, 50);
  CHECK(f.visibility == Approx(1.0).epsilon(1e-4));

  CHECK_THROWS_AS(fringe_visibility_overlap(std::vector<double>(10, 1.0), 6), InvalidParameter);
  CHECK_THROWS_AS(fringe_visibility_overlap(std::vector<double>(10, 0.0), 5), UndefinedQuantity);

  SUBCASE("two-field fringe follows cos^2 of the polarization angle") {
    for (double theta : {0.0, 0.3, 0.7, 1.1, std::numbers::pi / 2}) {
      std::vector<double> intensity;
      for (int i = 0; i < 200000; ++i) {
        const double phi = 2 * std::numbers::pi * i / 200000.0;
        intensity.push_back(2.0 + 2.0 * std::cos(theta) * std::cos(phi));
      }
      const auto fr = fringe_visibility_overlap(intensity, 500);
      CHECK(std::abs(fr.m_p - std::pow(std::cos(theta), 2)) <= 1e-3);
    }
  }

  SUBCASE("tail scatter propagates to the uncertainty") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> noisy;
    for (int i = 0; i < 20000; ++i) noisy.push_back(2.0 + std::cos(i * 0.01) + noise(rng));
    const auto fr = fringe_visibility_overlap(noisy, 500);
    CHECK(fr.visibility_err > 0.0);
    CHECK(fr.m_p_err == Approx(2 * fr.visibility * fr.visibility_err).epsilon(1e-12));
  }
}

TEST_CASE("total overlap") {
  auto b = total_overlap(0.910, 0.85, 0.976);
  CHECK(b.m_total == Approx(0.755).epsilon(1e-3));
  CHECK_FALSE(b.m_tilde);
  b = total_overlap(0.910, 0.85, 0.34, 1.0);
  CHECK(b.m_total == Approx(0.263).epsilon(1e-3));
  b = total_overlap(1, 1, 1, 1);
  CHECK(b.m_total == 1.0);
  b = total_overlap(0.9, 0.8, 0.7, 0.6, 0.905);
  CHECK(std::abs(b.m_total - 0.9 * 0.8 * 0.7 * 0.6) <= 1e-12);
  CHECK(*b.m_tilde == Approx(b.m_total * 0.905));
  CHECK_THROWS_AS(total_overlap(1.1, 1, 1), InvalidParameter);
}

}
