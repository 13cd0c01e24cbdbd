#include "homlo/params.hpp"

#include <cmath>
#include <string>

#include "homlo/errors.hpp"

namespace homlo {

double SourceParams::mu_psi() const { return eta * (p1 + 2.0 * p2); }

double SourceParams::g2_psi() const {
  const double s = p1 + 2.0 * p2;
  if (s <= 0.0) throw UndefinedQuantity("g2_psi undefined for p1 = p2 = 0");
  return 2.0 * p2 / (s * s);
}

void SourceParams::validate() const {
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || p1 + p2 > 1.0 + 1e-15)
    throw InvalidParameter("emission probabilities must satisfy p1, p2 >= 0 and p1 + p2 <= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  if (!(m_psi >= 0.0 && m_psi <= 1.0)) throw InvalidParameter("m_psi must lie in [0, 1]");
  if (tau_lt_ps && !(*tau_lt_ps > 0.0)) throw InvalidParameter("tau_lt_ps must be positive");
}

SourceParams SourceParams::from_statistics(double mu_psi, double g2_psi) {
  if (!(mu_psi > 0.0)) throw InvalidParameter("mu_psi must be positive");
  if (!(g2_psi >= 0.0 && g2_psi <= 0.5))
    throw InvalidParameter("g2_psi must lie in [0, 1/2] for a vacuum-free source");
  // g (1 + p2)^2 = 2 p2, smaller root
  double p2 = 0.0;
  if (g2_psi > 0.0) {
    const double b = 2.0 - 2.0 * g2_psi;
    p2 = (b - std::sqrt(b * b - 4.0 * g2_psi * g2_psi)) / (2.0 * g2_psi);
  }
  SourceParams s;
  s.p2 = p2;
  s.p1 = 1.0 - p2;
  s.eta = mu_psi / (1.0 + p2);
  if (s.eta > 1.0)
    throw InvalidParameter("mu_psi = " + std::to_string(mu_psi) + " exceeds the lossless source brightness");
  return s;
}

double LocalOscillator::polarization_overlap() const {
  const double c = std::cos(theta);
  return c * c;
}

void LocalOscillator::validate() const {
  if (!(mu_alpha >= 0.0)) throw InvalidParameter("mu_alpha must be non-negative");
  if (!(lambda_m > 0.0) || !(tau_rep_s > 0.0))
    throw InvalidParameter("wavelength and repetition period must be positive");
}

LocalOscillator LocalOscillator::with_overlap(double mu_alpha, double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidParameter("overlap must lie in [0, 1]");
  LocalOscillator lo;
  lo.mu_alpha = mu_alpha;
  lo.theta = std::acos(std::sqrt(overlap));
  return lo;
}

BeamSplitterSpec::BeamSplitterSpec(double transmission) : t_(transmission) {
  if (!(transmission >= 0.0 && transmission <= 1.0))
    throw InvalidParameter("beam splitter transmission must lie in [0, 1]");
}

}  // namespace homlo
