#pragma once
#include <optional>

namespace homlo {

/// @brief Quantum-dot emission: diagonal mixture of |0>, |1>, |2> sent through a lossy channel.
struct SourceParams {
  double p1{1.0};                    ///< one-photon emission probability
  double p2{0.0};                    ///< two-photon emission probability
  double eta{1.0};                   ///< channel transmission to the beam splitter
  std::optional<double> tau_lt_ps;   ///< radiative lifetime, used by profile generators
  double m_psi{1.0};                 ///< indistinguishability of successive source photons

  /// Mean photon number at the beam splitter, eta * (p1 + 2 p2).
  double mu_psi() const;
  /// Zero-delay intensity correlation 2 p2 / (p1 + 2 p2)^2; independent of eta.
  double g2_psi() const;
  /// Throws InvalidParameter when a field violates its domain.
  void validate() const;

  /// @brief Source with vanishing vacuum emission (p1 + p2 = 1) reproducing
  /// the requested brightness and purity.
  /// @throws InvalidParameter if mu_psi cannot be reached with eta <= 1 or g2_psi > 1/2
  static SourceParams from_statistics(double mu_psi, double g2_psi);
};

/// @brief Pulsed coherent local oscillator.
struct LocalOscillator {
  double mu_alpha{0.0};     ///< |alpha|^2
  double theta{0.0};        ///< polarization angle relative to the source (rad)
  double lambda_m{925e-9};  ///< wavelength
  double tau_rep_s{1.0 / 82e6};

  static constexpr double g2_alpha() { return 1.0; }
  /// Polarization overlap cos^2(theta).
  double polarization_overlap() const;
  void validate() const;

  /// Oscillator whose polarization angle realizes overlap M = cos^2(theta).
  static LocalOscillator with_overlap(double mu_alpha, double overlap);
};

/// @brief Lossless two-port splitter. R is always derived as 1 - T.
class BeamSplitterSpec {
 public:
  explicit BeamSplitterSpec(double transmission = 0.5);
  double T() const { return t_; }
  double R() const { return 1.0 - t_; }

 private:
  double t_;
};

}  // namespace homlo
