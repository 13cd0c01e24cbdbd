#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace homlo::overlap {

enum class Domain { time, frequency };
enum class Kind { intensity, amplitude };

/// @brief Real profile sampled on a strictly increasing grid (ps or GHz).
struct SampledProfile {
  Domain domain{Domain::time};
  Kind kind{Kind::intensity};
  std::vector<double> xs;
  std::vector<double> values;

  /// Throws InvalidParameter on unsorted grids, size mismatch or negative intensities.
  void validate() const;
};

/// Trapezoidal integral of |values|^2 over the profile grid.
double squared_norm(const SampledProfile& profile);

/// Square root of an intensity trace, L2-normalized.
SampledProfile amplitude_from_intensity(const SampledProfile& intensity);

/// Amplitude profile scaled to unit L2 norm.
SampledProfile normalized(const SampledProfile& amplitude);

struct OverlapValue {
  double value;
  std::optional<std::string> warning;
};

/// @brief |int psi1 psi2 dx|^2 for L2-normalized amplitudes.
///
/// Each profile is normalized over its own grid, then both are linearly interpolated
/// onto the union of their sample points inside the common range and integrated with
/// the trapezoidal rule. Disjoint ranges give 0 with a warning.
OverlapValue overlap_integral(const SampledProfile& psi1, const SampledProfile& psi2);

/// Hard spectral window [center - half_width, center + half_width] applied to an intensity spectrum.
SampledProfile spectral_window(const SampledProfile& spectrum, double center, double half_width);

/// @brief Polarization overlap from a fringe record.
struct FringeOverlap {
  double i_max;
  double i_min;
  double visibility;
  double visibility_err;
  double m_p;
  double m_p_err;
};

/// Averages the k largest and k smallest readings; V = (Imax - Imin) / (Imax + Imin), M_p = V^2.
/// The standard errors of the two tail means are propagated to V and M_p.
FringeOverlap fringe_visibility_overlap(std::span<const double> samples, std::size_t k = 500);

struct OverlapBreakdown {
  double m_t, m_f, m_p, m_s;
  double m_total;
  std::optional<double> m_tilde;
};

OverlapBreakdown total_overlap(double m_t, double m_f, double m_p, double m_s = 1.0,
                               std::optional<double> m_psi = std::nullopt);

/// Radiative decay e^{-t/tau} sampled on [0, t_end] with spacing dt (intensity).
SampledProfile exponential_intensity(double tau, double dt, double t_end);
/// Gaussian intensity of standard deviation sigma centered at mu over [lo, hi].
SampledProfile gaussian_intensity(Domain domain, double mu, double sigma, double dx, double lo, double hi);

}  // namespace homlo::overlap
