#pragma once
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homlo/params.hpp"

namespace homlo::estimate {

inline constexpr double kPlanck = 6.62607015e-34;       // J s, exact (SI 2019)
inline constexpr double kSpeedOfLight = 299792458.0;    // m / s, exact

/// @brief Power-meter chain for the local oscillator.
struct PowerCalibration {
  double p0_w;            ///< monitor power
  double attenuation_db;  ///< C, monitor to interference point
  double lambda_m;
  double tau_rep_s;

  /// P_alpha = 10^(-C/10) P0.
  double p_alpha() const;
};

/// mu_alpha = P_alpha lambda tau_rep / (h c).
double calibrate_mu_alpha(const PowerCalibration& cal);

/// Factor by which the oscillator mean photon number must be raised so a rotated
/// polarization yields the same detected rate as the parallel one.
double polarization_efficiency_correction(double rate_parallel, double rate_rotated);

struct CorrectedMu {
  double mu;
  double err;
};

/// Scales mu by the efficiency factor; the factor's relative error (Poisson on both rates
/// over `integration_s`) is added in quadrature to the relative error of mu.
CorrectedMu apply_efficiency_correction(double mu, double mu_err, double rate_parallel, double rate_rotated,
                                        double integration_s);

struct SweepPoint {
  double ratio;  ///< mu_alpha / mu_psi
  double y;
  double y_err;
};

enum class Model { vhom, auto_g2 };
std::string to_string(Model model);
Model model_from_string(const std::string& name);

/// Model value at ratio r for overlap M (and fixed g2_psi).
double model_value(Model model, double ratio, double g2_psi, double overlap);

struct FitOptions {
  /// Also fit a common scale s on the abscissa (r -> s r), e.g. a brightness miscalibration.
  bool fit_ratio_scale{false};
  double tolerance{1e-10};
};

struct FitResult {
  double m_hat;
  double m_err;
  double chi2_red;
  std::size_t n_points;
  Model model;
  std::optional<double> ratio_scale;
  std::optional<double> ratio_scale_err;
  std::vector<double> residuals;  ///< (y - model) / y_err
};

/// Weighted least squares for M in [0, 1] with g2_psi held fixed. The error is the
/// inverse curvature of chi^2 at the optimum, sigma = sqrt(2 / chi2'').
/// @throws IllConditionedFit for fewer than three points or a single abscissa
FitResult fit_curve(Model model, std::span<const SweepPoint> points, double g2_psi, const FitOptions& options = {});
FitResult fit_vhom_curve(std::span<const SweepPoint> points, double g2_psi, const FitOptions& options = {});
FitResult fit_auto_curve(std::span<const SweepPoint> points, double g2_psi, const FitOptions& options = {});

struct PointOverlap {
  double ratio;
  double m;
  double m_err;
  bool skipped;  ///< ratio <= 0; correction factor undefined
};

/// Visibility inverted point by point; errors scale with the multi-photon correction factor.
std::vector<PointOverlap> pointwise_overlap(std::span<const SweepPoint> points, double g2_psi);

/// Source brightness from the oscillator level maximizing single-output bunching,
/// mu_psi = T mu_alpha* M / (R (1 + M - g2_psi)).
double brightness_from_auto_peak(double mu_alpha_at_peak, const BeamSplitterSpec& bs, double overlap,
                                 double g2_psi);

struct ScalarMinimum {
  double x;
  double f;
  int evaluations;
};

/// Brent's bounded minimization (golden section with parabolic steps); the bounds
/// themselves are also evaluated so boundary optima are returned exactly.
ScalarMinimum minimize_bounded(const std::function<double(double)>& f, double lo, double hi, double tolerance);

}  // namespace homlo::estimate
