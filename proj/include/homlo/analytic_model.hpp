#pragma once
#include <optional>

/// Closed-form photon statistics for a Fock-diagonal source mixed with a
/// coherent state on a balanced splitter. All correlation values are
/// dimensionless; coincidence moments drop the common 1/4 splitter factor.
namespace homlo::analytic {

/// Photon-number populations of the source after a channel of transmission eta.
struct LossDegradedProbs {
  double p0, p1, p2;
};

/// @brief Locations and heights of the visibility and bunching maxima versus r = mu_alpha / mu_psi.
struct PeakReport {
  double r_vhom_star;                  ///< sqrt(g2_psi)
  double v_max;                        ///< M / (sqrt(g2_psi) + 1)
  std::optional<double> r_auto_star;   ///< (1 + M - g2_psi) / M; absent when M = 0
  std::optional<double> g2_auto_max;
};

double g2_from_probs(double p1, double p2);

LossDegradedProbs loss_degraded_probs(double p1, double p2, double eta);

/// Cross-output coincidence moment mu_a^2 + mu_p^2 g2 + 2 mu_a mu_p (1 - M).
double cross_coincidence(double mu_alpha, double mu_psi, double g2_psi, double overlap);

/// (G_0 - G_M) / G_0 with G the cross-output coincidence moment.
double hom_visibility(double mu_alpha, double mu_psi, double g2_psi, double overlap);

/// Inverse of hom_visibility: M = V (1 + mu_a/(2 mu_p) g2_a + mu_p/(2 mu_a) g2_p).
double overlap_from_visibility(double visibility, double mu_alpha, double mu_psi, double g2_psi,
                               double g2_alpha = 1.0);

/// Multi-photon correction factor multiplying V in overlap_from_visibility, in terms of r.
double visibility_correction_factor(double ratio, double g2_psi, double g2_alpha = 1.0);

/// Single-output zero-delay correlation after mixing.
double auto_g2_zero(double mu_alpha, double mu_psi, double g2_psi, double overlap);

/// hom_visibility and auto_g2_zero as functions of r = mu_alpha / mu_psi only.
double hom_visibility_at_ratio(double ratio, double g2_psi, double overlap);
double auto_g2_at_ratio(double ratio, double g2_psi, double overlap);

PeakReport peak_analysis(double g2_psi, double overlap);

/// Overlap seen by the interference when source photons are only partially indistinguishable.
double effective_overlap(double overlap, double m_psi);

}  // namespace homlo::analytic
