#include "homlo/analytic_model.hpp"

#include <cmath>

#include "homlo/errors.hpp"

namespace homlo::analytic {

namespace {

void require_overlap(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidParameter("overlap must lie in [0, 1]");
}

void require_non_negative(double mu_alpha, double mu_psi, double g2_psi) {
  if (!(mu_alpha >= 0.0) || !(mu_psi >= 0.0) || !(g2_psi >= 0.0))
    throw InvalidParameter("mean photon numbers and g2_psi must be non-negative");
}

}  // namespace

double g2_from_probs(double p1, double p2) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw InvalidParameter("probabilities must be non-negative");
  const double s = p1 + 2.0 * p2;
  if (s <= 0.0) throw UndefinedQuantity("g2 undefined without emission (p1 = p2 = 0)");
  return 2.0 * p2 / (s * s);
}

LossDegradedProbs loss_degraded_probs(double p1, double p2, double eta) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || p1 + p2 > 1.0 + 1e-15)
    throw InvalidParameter("emission probabilities must satisfy p1, p2 >= 0 and p1 + p2 <= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  return {(1.0 - eta) * (p1 + p2 - eta * p2), eta * (p1 + 2.0 * p2 - 2.0 * eta * p2), eta * eta * p2};
}

double cross_coincidence(double mu_alpha, double mu_psi, double g2_psi, double overlap) {
  require_non_negative(mu_alpha, mu_psi, g2_psi);
  require_overlap(overlap);
  return mu_alpha * mu_alpha + mu_psi * mu_psi * g2_psi + 2.0 * mu_alpha * mu_psi * (1.0 - overlap);
}

double hom_visibility(double mu_alpha, double mu_psi, double g2_psi, double overlap) {
  const double g0 = cross_coincidence(mu_alpha, mu_psi, g2_psi, 0.0);
  if (g0 <= 0.0) throw UndefinedQuantity("visibility undefined: no coincidences without interference");
  return (g0 - cross_coincidence(mu_alpha, mu_psi, g2_psi, overlap)) / g0;
}

double visibility_correction_factor(double ratio, double g2_psi, double g2_alpha) {
  if (!(ratio > 0.0)) throw UndefinedQuantity("correction factor diverges at mu_alpha / mu_psi = 0");
  return 1.0 + 0.5 * ratio * g2_alpha + 0.5 * g2_psi / ratio;
}

double overlap_from_visibility(double visibility, double mu_alpha, double mu_psi, double g2_psi,
                               double g2_alpha) {
  if (!(mu_alpha > 0.0) || !(mu_psi > 0.0))
    throw UndefinedQuantity("correction factor diverges when a mean photon number is zero");
  return visibility * visibility_correction_factor(mu_alpha / mu_psi, g2_psi, g2_alpha);
}

double auto_g2_zero(double mu_alpha, double mu_psi, double g2_psi, double overlap) {
  require_non_negative(mu_alpha, mu_psi, g2_psi);
  require_overlap(overlap);
  const double total = mu_alpha + mu_psi;
  if (total <= 0.0) throw UndefinedQuantity("g2_auto undefined when both fields are empty");
  return (mu_alpha * mu_alpha + mu_psi * mu_psi * g2_psi + 2.0 * mu_alpha * mu_psi * (1.0 + overlap)) /
         (total * total);
}

double hom_visibility_at_ratio(double ratio, double g2_psi, double overlap) {
  return hom_visibility(ratio, 1.0, g2_psi, overlap);
}

double auto_g2_at_ratio(double ratio, double g2_psi, double overlap) {
  return auto_g2_zero(ratio, 1.0, g2_psi, overlap);
}

PeakReport peak_analysis(double g2_psi, double overlap) {
  if (!(g2_psi >= 0.0)) throw InvalidParameter("g2_psi must be non-negative");
  require_overlap(overlap);
  PeakReport rep{};
  const double root_g = std::sqrt(g2_psi);
  rep.r_vhom_star = root_g;
  rep.v_max = overlap / (root_g + 1.0);
  if (overlap > 0.0) {
    // d/dr of auto_g2_at_ratio vanishes where M r = 1 + M - g2
    const double r = (1.0 + overlap - g2_psi) / overlap;
    if (r > 0.0) {
      rep.r_auto_star = r;
      rep.g2_auto_max = auto_g2_at_ratio(r, g2_psi, overlap);
    }
  }
  return rep;
}

double effective_overlap(double overlap, double m_psi) {
  require_overlap(overlap);
  require_overlap(m_psi);
  return overlap * m_psi;
}

}  // namespace homlo::analytic
