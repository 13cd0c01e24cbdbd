// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "homlo/analytic_model.hpp"
#include "homlo/estimator.hpp"
#include "homlo/fock_oracle.hpp"
#include "homlo/io.hpp"
#include "homlo/mode_overlap.hpp"
#include "homlo/synthetic.hpp"
#include "homlo/tagstream.hpp"

using namespace homlo;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

void oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst_g2 = 0.0, worst_v = 0.0;
  int points = 0;
  const BeamSplitterSpec bs(0.5);
  for (double mu_a : {0.01, 0.1, 0.3, 1.0, 2.0}) {
    const int cutoff = fock::recommended_cutoff(mu_a);
    for (double mu_p : {0.03, 0.3, 1.0})
      for (double g : {0.0, 0.04}) {
        const auto src = SourceParams::from_statistics(mu_p, g);
        const auto perp = fock::mix_on_beam_splitter(src, LocalOscillator::with_overlap(mu_a, 0.0), bs, cutoff);
        const double c_perp = fock::cross_correlations(perp).n2n3;
        for (double m : {0.0, 0.5, 1.0}) {
          const auto s = fock::mix_on_beam_splitter(src, LocalOscillator::with_overlap(mu_a, m), bs, cutoff);
          const double g2 = fock::auto_correlation(s, fock::Spatial::out_2);
          const double v = (c_perp - fock::cross_correlations(s).n2n3) / c_perp;
          worst_g2 = std::max(worst_g2, std::abs(g2 - analytic::auto_g2_zero(mu_a, mu_p, g, m)));
          worst_v = std::max(worst_v, std::abs(v - analytic::hom_visibility(mu_a, mu_p, g, m)));
          ++points;
        }
      }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(worst_g2 <= 1e-6 && worst_v <= 1e-6 && secs < 60.0, "oracle/formula equivalence",
         fmt("%d points, max|dg2|=%.2e, max|dV|=%.2e (tol 1e-6), %.1f s (limit 60 s)", points, worst_g2, worst_v,
             secs));
}

void peak_identities() {
  const double g = 0.0412, m = 0.76;
  const auto best = estimate::minimize_bounded(
      [&](double lr) { return -analytic::hom_visibility_at_ratio(std::exp(lr), g, m); }, std::log(1e-3),
      std::log(1e2), 1e-12);
  const double r_star = std::exp(best.x);
  const double v_max = -best.f;
  const auto rep = analytic::peak_analysis(g, m);
  const bool ok = std::abs(r_star - 0.2030) <= 1e-4 && std::abs(v_max - 0.6318) <= 1e-4 &&
                  std::abs(rep.r_vhom_star - r_star) <= 1e-6 && std::abs(rep.v_max - v_max) <= 1e-9 &&
                  std::abs(r_star - 0.203) <= 0.001;
  report(ok, "V_HOM peak location and height",
         fmt("numeric argmax r*=%.5f (0.2030+-1e-4; reported 0.203+-0.001), V_max=%.5f (0.6318+-1e-4), closed form "
             "r*=%.5f V_max=%.5f",
             r_star, v_max, rep.r_vhom_star, rep.v_max));
}

void bunching_ceiling() {
  const double ideal = analytic::auto_g2_at_ratio(2.0, 0.0, 1.0);
  const auto best = estimate::minimize_bounded([](double r) { return -analytic::auto_g2_at_ratio(r, 0.0, 1.0); },
                                               0.01, 100.0, 1e-12);
  const auto src = SourceParams{1.0, 0.0, 1.0};
  const auto state = fock::mix_on_beam_splitter(src, LocalOscillator::with_overlap(2.0, 1.0), BeamSplitterSpec(0.5),
                                                 fock::recommended_cutoff(2.0));
  const double oracle = fock::auto_correlation(state, fock::Spatial::out_2);
  const double realistic = analytic::auto_g2_at_ratio(2.0, 0.0412, 0.76);
  const bool ok = std::abs(ideal - 4.0 / 3.0) <= 1e-9 && std::abs(best.x - 2.0) <= 1e-6 &&
                  std::abs(oracle - 4.0 / 3.0) <= 1e-6 && std::abs(realistic - 1.2312) <= 1e-4;
  report(ok, "bunching ceiling",
         fmt("ideal g2_auto(r=2)=%.12f (4/3 to 1e-9, argmax r=%.6f, oracle %.9f); M=0.76 g2=0.0412 r=2: %.5f "
             "(1.2312+-1e-4; measured 1.243+-0.002 not expected to match)",
             ideal, best.x, oracle, realistic));
}

void table_products() {
  const double m_p[] = {0.976, 0.86, 0.72, 0.34, 0.0};
  const double printed[] = {0.76, 0.67, 0.56, 0.27, 0.0};
  double worst = 0.0;
  std::string values;
  for (int i = 0; i < 5; ++i) {
    const double prod = overlap::total_overlap(0.910, 0.85, m_p[i]).m_total;
    worst = std::max(worst, std::abs(prod - printed[i]));
    values += fmt("%s%.3f", i ? ", " : "", prod);
  }
  report(worst <= 0.01, "overlap table products", fmt("M_t*M_f*M_p = {%s}, max dev %.4f (tol 0.01)", values.c_str(), worst));
}

void overlap_analytics() {
  double worst = 0.0;
  for (auto [t1, t2] : {std::pair{170.0, 100.0}, std::pair{120.0, 80.0}, std::pair{300.0, 60.0}}) {
    const double end = 20.0 * std::max(t1, t2);
    const auto v = overlap::overlap_integral(
        overlap::amplitude_from_intensity(overlap::exponential_intensity(t1, 1.0, end)),
        overlap::amplitude_from_intensity(overlap::exponential_intensity(t2, 1.0, end)));
    worst = std::max(worst, std::abs(v.value - 4 * t1 * t2 / ((t1 + t2) * (t1 + t2))));
  }
  const double sigma = 1.0;
  for (double delta : {0.5, 1.0, 2.0}) {
    using overlap::Domain;
    const auto a = overlap::gaussian_intensity(Domain::frequency, 0.0, sigma, 0.01 * sigma, -12.0, 14.0);
    const auto b = overlap::gaussian_intensity(Domain::frequency, delta, sigma, 0.01 * sigma, -12.0, 14.0);
    const auto v = overlap::overlap_integral(overlap::amplitude_from_intensity(a), overlap::amplitude_from_intensity(b));
    worst = std::max(worst, std::abs(v.value - std::exp(-delta * delta / (4 * sigma * sigma))));
  }
  report(worst <= 1e-4, "overlap integrals vs closed forms",
         fmt("exponential pairs at 1 ps, detuned Gaussians at 0.01 sigma: max dev %.2e (tol 1e-4)", worst));
}

void fit_coverage() {
  const double m_true = 0.76, g = 0.0412;
  const int trials = 1000;
  const std::uint64_t seed = 20261016;
  std::vector<double> ratios;
  for (int i = 0; i < 20; ++i) ratios.push_back(0.01 * std::pow(3000.0, i / 19.0));

  std::string detail;
  bool ok = true;
  for (auto model : {estimate::Model::vhom, estimate::Model::auto_g2}) {
    std::vector<estimate::SweepPoint> clean;
    for (double r : ratios) {
      const double y = estimate::model_value(model, r, g, m_true);
      clean.push_back({r, y, 0.02 * y});
    }
    const double exact_err = std::abs(estimate::fit_curve(model, clean, g).m_hat - m_true);

    int covered = 0;
    for (int t = 0; t < trials; ++t) {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(model), static_cast<std::uint64_t>(t)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> n01;
      auto noisy = clean;
      for (auto& p : noisy) p.y += n01(rng) * p.y_err;
      const auto fit = estimate::fit_curve(model, noisy, g);
      if (std::abs(fit.m_hat - m_true) <= 2 * fit.m_err) ++covered;
    }
    const double frac = covered / double(trials);
    ok = ok && frac >= 0.95 && exact_err <= 1e-9;
    detail += fmt("%s%s: %d/%d covered (>=95%%), noiseless |dM|=%.1e", detail.empty() ? "" : "; ",
                  estimate::to_string(model).c_str(), covered, trials, exact_err);
  }
  // an exact 2-sigma interval covers 95.45%; 1000 trials scatter by 6.6 around 954.5
  report(ok, "fit coverage",
         detail + fmt(" [seed %llu; exact-interval expectation 954.5+-6.6 per model]",
                      static_cast<unsigned long long>(seed)));
}

void tag_closure() {
  const double ratio = 2.0, m = 0.76, g = 0.0412, mu_psi = 1.0;
  const double mu_alpha = ratio * mu_psi;
  const std::uint64_t pulses = 10'000'000;
  const synthetic::DetectorModel det{};
  const tags::Picoseconds bin = 100, rep = det.rep_period_ps;
  const tags::Picoseconds tau_max = 70'000;
  const int cutoff = fock::recommended_cutoff(mu_alpha);

  const auto src = SourceParams::from_statistics(mu_psi, g);
  const auto table = synthetic::oracle_table(src, LocalOscillator::with_overlap(mu_alpha, m), BeamSplitterSpec(0.5), cutoff);
  const auto stream = synthetic::pulsed_tags(table, pulses, det, 20261016);
  const auto single = tags::build_histogram(stream, {2, 3}, bin, tau_max, rep);
  const auto chunked = tags::build_histogram_chunked(stream, {2, 3}, bin, tau_max, rep, 8, true);
  const auto qd = tags::g2_zero(single);
  const double expected = analytic::auto_g2_at_ratio(ratio, g, m);

  std::ostringstream a, b;
  io::write_histogram_csv(a, single);
  io::write_histogram_csv(b, chunked);
  const bool identical = a.str() == b.str();

  const auto coherent_table = synthetic::oracle_table(SourceParams{0.0, 0.0, 1.0}, LocalOscillator::with_overlap(mu_alpha, m),
                                                      BeamSplitterSpec(0.5), cutoff);
  const auto coherent = synthetic::pulsed_tags(coherent_table, pulses, det, 20261017);
  const auto poisson = tags::g2_zero(tags::build_histogram(coherent, {2, 3}, bin, tau_max, rep));

  const bool ok = std::abs(qd.value - expected) <= 3 * qd.stat_err && std::abs(poisson.value - 1.0) <= 3 * poisson.stat_err &&
                  identical;
  report(ok, "tag pipeline closure",
         fmt("1e7 pulses: g2_auto=%.4f+-%.4f vs %.4f (%.2f sigma); coherent %.4f+-%.4f (%.2f sigma); chunked==single: %s",
             qd.value, qd.stat_err, expected, std::abs(qd.value - expected) / qd.stat_err, poisson.value,
             poisson.stat_err, std::abs(poisson.value - 1.0) / poisson.stat_err, identical ? "yes" : "no"));
}

void calibration() {
  const double mu = estimate::calibrate_mu_alpha({1e-9, 50.0, 925e-9, 1.0 / 82e6});
  const double rel = std::abs(mu - 5.676e-4) / 5.676e-4;
  report(rel <= 1e-3, "oscillator calibration", fmt("mu_alpha=%.5e vs 5.676e-4, rel dev %.2e (tol 1e-3)", mu, rel));
}

}  // namespace

int main() {
  const std::vector<void (*)()> checks{oracle_equivalence, peak_identities, bunching_ceiling, table_products,
                                       overlap_analytics,  fit_coverage,    tag_closure,      calibration};
  for (auto check : checks) {
    try {
      check();
    } catch (const std::exception& e) {
      report(false, "exception", e.what());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}
