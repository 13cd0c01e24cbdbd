#include "homlo/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "homlo/analytic_model.hpp"
#include "homlo/errors.hpp"

namespace homlo::estimate {

double PowerCalibration::p_alpha() const { return std::pow(10.0, -attenuation_db / 10.0) * p0_w; }

double calibrate_mu_alpha(const PowerCalibration& cal) {
  if (!(cal.p0_w >= 0.0)) throw InvalidParameter("monitor power must be non-negative");
  if (!(cal.lambda_m > 0.0) || !(cal.tau_rep_s > 0.0))
    throw InvalidParameter("wavelength and repetition period must be positive");
  if (!std::isfinite(cal.attenuation_db)) throw InvalidParameter("attenuation must be finite");
  return cal.p_alpha() * cal.lambda_m * cal.tau_rep_s / (kPlanck * kSpeedOfLight);
}

double polarization_efficiency_correction(double rate_parallel, double rate_rotated) {
  if (!(rate_parallel > 0.0)) throw InvalidParameter("parallel count rate must be positive");
  if (!(rate_rotated > 0.0)) throw UndefinedQuantity("rotated count rate is zero; correction undefined");
  return rate_parallel / rate_rotated;
}

CorrectedMu apply_efficiency_correction(double mu, double mu_err, double rate_parallel, double rate_rotated,
                                        double integration_s) {
  const double factor = polarization_efficiency_correction(rate_parallel, rate_rotated);
  if (!(integration_s > 0.0)) throw InvalidParameter("integration time must be positive");
  if (!(mu >= 0.0) || !(mu_err >= 0.0)) throw InvalidParameter("mu and its error must be non-negative");
  const double rel_factor = std::sqrt(1.0 / (rate_parallel * integration_s) + 1.0 / (rate_rotated * integration_s));
  const double rel_mu = mu > 0.0 ? mu_err / mu : 0.0;
  const double corrected = mu * factor;
  return {corrected, corrected * std::hypot(rel_mu, rel_factor)};
}

std::string to_string(Model model) { return model == Model::vhom ? "vhom" : "auto"; }

Model model_from_string(const std::string& name) {
  if (name == "vhom") return Model::vhom;
  if (name == "auto") return Model::auto_g2;
  throw InvalidParameter("unknown fit model '" + name + "' (expected vhom or auto)");
}

double model_value(Model model, double ratio, double g2_psi, double overlap) {
  return model == Model::vhom ? analytic::hom_visibility_at_ratio(ratio, g2_psi, overlap)
                              : analytic::auto_g2_at_ratio(ratio, g2_psi, overlap);
}

ScalarMinimum minimize_bounded(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  if (!(hi > lo)) throw InvalidParameter("minimization bounds must satisfy lo < hi");
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double rel = 1e-12;
  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evals = 1;
  for (int iter = 0; iter < 500; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = rel * std::abs(x) + tolerance / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }
    const double u = x + (std::abs(d) >= tol1 ? d : (d > 0.0 ? tol1 : -tol1));
    const double fu = f(u);
    ++evals;
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  ScalarMinimum best{x, fx, evals};
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    ++best.evaluations;
    if (fe <= best.f) best = {edge, fe, best.evaluations};
  }
  return best;
}

namespace {

void check_sweep(std::span<const SweepPoint> points) {
  if (points.size() < 3) throw IllConditionedFit("fit needs at least three sweep points");
  double rmin = points.front().ratio, rmax = points.front().ratio;
  for (const auto& p : points) {
    if (!(p.ratio > 0.0)) throw InvalidParameter("sweep ratios must be positive");
    if (!(p.y_err > 0.0)) throw InvalidParameter("sweep uncertainties must be positive");
    if (!std::isfinite(p.y)) throw InvalidParameter("sweep values must be finite");
    rmin = std::min(rmin, p.ratio);
    rmax = std::max(rmax, p.ratio);
  }
  if (rmax - rmin <= 1e-12 * rmax) throw IllConditionedFit("all sweep points share one abscissa");
}

double chi2(Model model, std::span<const SweepPoint> points, double g2_psi, double overlap, double scale) {
  double acc = 0.0;
  for (const auto& p : points) {
    const double z = (p.y - model_value(model, scale * p.ratio, g2_psi, overlap)) / p.y_err;
    acc += z * z;
  }
  return acc;
}

// Second derivative by central differences, one-sided at a bound.
double curvature(const std::function<double(double)>& f, double x, double lo, double hi, double h) {
  if (x - h < lo) return (f(x) - 2.0 * f(x + h) + f(x + 2.0 * h)) / (h * h);
  if (x + h > hi) return (f(x) - 2.0 * f(x - h) + f(x - 2.0 * h)) / (h * h);
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace

FitResult fit_curve(Model model, std::span<const SweepPoint> points, double g2_psi, const FitOptions& options) {
  check_sweep(points);
  if (!(g2_psi >= 0.0)) throw InvalidParameter("g2_psi must be non-negative");
  FitResult out{};
  out.model = model;
  out.n_points = points.size();

  auto best_overlap = [&](double scale) {
    return minimize_bounded([&](double m) { return chi2(model, points, g2_psi, m, scale); }, 0.0, 1.0,
                            options.tolerance);
  };

  double scale = 1.0;
  std::size_t n_params = 1;
  if (!options.fit_ratio_scale) {
    const auto best = best_overlap(1.0);
    out.m_hat = best.x;
    const double c = curvature([&](double m) { return chi2(model, points, g2_psi, m, 1.0); }, best.x, 0.0, 1.0, 1e-4);
    if (!(c > 0.0)) throw IllConditionedFit("chi-square has no curvature in M");
    out.m_err = std::sqrt(2.0 / c);
  } else {
    n_params = 2;
    if (points.size() < 4) throw IllConditionedFit("two-parameter fit needs at least four points");
    const auto outer = minimize_bounded([&](double s) { return best_overlap(s).f; }, 0.1, 10.0, 1e-9);
    scale = outer.x;
    out.m_hat = best_overlap(scale).x;
    // Hessian of chi^2 in (M, s) by central differences
    const double hm = 1e-4, hs = 1e-4 * scale;
    auto f = [&](double m, double s) { return chi2(model, points, g2_psi, std::clamp(m, 0.0, 1.0), s); };
    const double m0 = std::clamp(out.m_hat, hm, 1.0 - hm);
    Eigen::Matrix2d hess;
    hess(0, 0) = (f(m0 + hm, scale) - 2.0 * f(m0, scale) + f(m0 - hm, scale)) / (hm * hm);
    hess(1, 1) = (f(m0, scale + hs) - 2.0 * f(m0, scale) + f(m0, scale - hs)) / (hs * hs);
    hess(0, 1) = hess(1, 0) = (f(m0 + hm, scale + hs) - f(m0 + hm, scale - hs) - f(m0 - hm, scale + hs) +
                               f(m0 - hm, scale - hs)) / (4.0 * hm * hs);
    if (!(hess.determinant() > 0.0) || !(hess(0, 0) > 0.0))
      throw IllConditionedFit("chi-square Hessian is not positive definite");
    const Eigen::Matrix2d cov = 2.0 * hess.inverse();
    out.m_err = std::sqrt(cov(0, 0));
    out.ratio_scale = scale;
    out.ratio_scale_err = std::sqrt(cov(1, 1));
  }

  double total = 0.0;
  for (const auto& p : points) {
    const double z = (p.y - model_value(model, scale * p.ratio, g2_psi, out.m_hat)) / p.y_err;
    out.residuals.push_back(z);
    total += z * z;
  }
  out.chi2_red = total / static_cast<double>(points.size() - n_params);
  return out;
}

FitResult fit_vhom_curve(std::span<const SweepPoint> points, double g2_psi, const FitOptions& options) {
  return fit_curve(Model::vhom, points, g2_psi, options);
}

FitResult fit_auto_curve(std::span<const SweepPoint> points, double g2_psi, const FitOptions& options) {
  return fit_curve(Model::auto_g2, points, g2_psi, options);
}

std::vector<PointOverlap> pointwise_overlap(std::span<const SweepPoint> points, double g2_psi) {
  if (!(g2_psi >= 0.0)) throw InvalidParameter("g2_psi must be non-negative");
  std::vector<PointOverlap> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.ratio > 0.0)) {
      out.push_back({p.ratio, 0.0, 0.0, true});
      continue;
    }
    const double factor = analytic::visibility_correction_factor(p.ratio, g2_psi);
    out.push_back({p.ratio, p.y * factor, std::abs(p.y_err) * factor, false});
  }
  return out;
}

double brightness_from_auto_peak(double mu_alpha_at_peak, const BeamSplitterSpec& bs, double overlap,
                                 double g2_psi) {
  if (!(mu_alpha_at_peak > 0.0)) throw InvalidParameter("peak oscillator level must be positive");
  if (!(overlap > 0.0 && overlap <= 1.0)) throw UndefinedQuantity("no bunching maximum without overlap (M = 0)");
  if (!(bs.R() > 0.0)) throw UndefinedQuantity("brightness undefined for R = 0");
  const double denom = 1.0 + overlap - g2_psi;
  if (!(denom > 0.0)) throw UndefinedQuantity("no bunching maximum for g2_psi >= 1 + M");
  return bs.T() * mu_alpha_at_peak * overlap / (bs.R() * denom);
}

}  // namespace homlo::estimate
