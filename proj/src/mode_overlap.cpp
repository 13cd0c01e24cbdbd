#include "homlo/mode_overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homlo/errors.hpp"

namespace homlo::overlap {

namespace {

double interpolate(const SampledProfile& p, double x) {
  const auto it = std::upper_bound(p.xs.begin(), p.xs.end(), x);
  if (it == p.xs.begin()) return p.values.front();
  if (it == p.xs.end()) return p.values.back();
  const auto hi = static_cast<std::size_t>(it - p.xs.begin());
  const auto lo = hi - 1;
  const double f = (x - p.xs[lo]) / (p.xs[hi] - p.xs[lo]);
  return p.values[lo] + f * (p.values[hi] - p.values[lo]);
}

std::vector<double> sampled_grid(double lo, double hi, double dx) {
  if (!(dx > 0.0) || !(hi > lo)) throw InvalidParameter("grid needs dx > 0 and hi > lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dx + 1e-9)) + 1;
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + dx * static_cast<double>(i);
  return xs;
}

}  // namespace

void SampledProfile::validate() const {
  if (xs.size() != values.size()) throw InvalidParameter("profile grid and values differ in length");
  if (xs.size() < 2) throw InvalidParameter("profile needs at least two samples");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw InvalidParameter("profile grid must be strictly increasing");
  if (kind == Kind::intensity)
    for (double v : values)
      if (!(v >= 0.0)) throw InvalidParameter("intensity samples must be non-negative");
}

double squared_norm(const SampledProfile& profile) {
  double acc = 0.0;
  for (std::size_t i = 1; i < profile.xs.size(); ++i) {
    const double a = profile.values[i - 1];
    const double b = profile.values[i];
    acc += 0.5 * (a * a + b * b) * (profile.xs[i] - profile.xs[i - 1]);
  }
  return acc;
}

SampledProfile normalized(const SampledProfile& amplitude) {
  amplitude.validate();
  const double n2 = squared_norm(amplitude);
  if (!(n2 > 0.0)) throw UndefinedQuantity("cannot normalize an all-zero profile");
  SampledProfile out = amplitude;
  out.kind = Kind::amplitude;
  const double s = 1.0 / std::sqrt(n2);
  for (double& v : out.values) v *= s;
  return out;
}

SampledProfile amplitude_from_intensity(const SampledProfile& intensity) {
  if (intensity.kind != Kind::intensity) throw InvalidParameter("expected an intensity profile");
  intensity.validate();
  SampledProfile amp = intensity;
  amp.kind = Kind::amplitude;
  for (double& v : amp.values) v = std::sqrt(v);
  return normalized(amp);
}

OverlapValue overlap_integral(const SampledProfile& psi1, const SampledProfile& psi2) {
  if (psi1.domain != psi2.domain) throw InvalidParameter("profiles live in different domains");
  if (psi1.kind != Kind::amplitude || psi2.kind != Kind::amplitude)
    throw InvalidParameter("overlap integral expects amplitude profiles");
  const auto a = normalized(psi1);
  const auto b = normalized(psi2);
  const double lo = std::max(a.xs.front(), b.xs.front());
  const double hi = std::min(a.xs.back(), b.xs.back());
  if (!(hi > lo)) return {0.0, std::string("profiles do not share a common range")};

  std::vector<double> grid;
  grid.reserve(a.xs.size() + b.xs.size() + 2);
  grid.push_back(lo);
  grid.push_back(hi);
  for (double x : a.xs)
    if (x > lo && x < hi) grid.push_back(x);
  for (double x : b.xs)
    if (x > lo && x < hi) grid.push_back(x);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double acc = 0.0;
  double prev = interpolate(a, grid[0]) * interpolate(b, grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = interpolate(a, grid[i]) * interpolate(b, grid[i]);
    acc += 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
    prev = cur;
  }
  return {std::min(1.0, acc * acc), std::nullopt};
}

SampledProfile spectral_window(const SampledProfile& spectrum, double center, double half_width) {
  if (spectrum.kind != Kind::intensity) throw InvalidParameter("spectral window applies to intensity spectra");
  if (!(half_width > 0.0)) throw InvalidParameter("window half width must be positive");
  spectrum.validate();
  SampledProfile out{spectrum.domain, spectrum.kind, {}, {}};
  for (std::size_t i = 0; i < spectrum.xs.size(); ++i) {
    if (std::abs(spectrum.xs[i] - center) <= half_width) {
      out.xs.push_back(spectrum.xs[i]);
      out.values.push_back(spectrum.values[i]);
    }
  }
  if (out.xs.size() < 2) throw InvalidParameter("spectral window keeps fewer than two samples");
  return out;
}

FringeOverlap fringe_visibility_overlap(std::span<const double> samples, std::size_t k) {
  if (k == 0) throw InvalidParameter("tail size must be positive");
  if (samples.size() < 2 * k) throw InvalidParameter("fringe record shorter than twice the tail size");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  auto mean_and_sem = [k](auto first) {
    const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(k), 0.0) / static_cast<double>(k);
    double ss = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(k); ++it) ss += (*it - mean) * (*it - mean);
    const double sd = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
    return std::pair{mean, sd / std::sqrt(static_cast<double>(k))};
  };
  const auto [i_min, e_min] = mean_and_sem(sorted.begin());
  const auto [i_max, e_max] = mean_and_sem(sorted.end() - static_cast<std::ptrdiff_t>(k));

  const double sum = i_max + i_min;
  if (sum == 0.0) throw UndefinedQuantity("fringe visibility undefined for a zero signal");
  FringeOverlap out{};
  out.i_max = i_max;
  out.i_min = i_min;
  out.visibility = (i_max - i_min) / sum;
  // dV/dImax = 2 Imin / S^2, dV/dImin = -2 Imax / S^2
  out.visibility_err = 2.0 * std::hypot(i_min * e_max, i_max * e_min) / (sum * sum);
  out.m_p = out.visibility * out.visibility;
  out.m_p_err = 2.0 * std::abs(out.visibility) * out.visibility_err;
  return out;
}

OverlapBreakdown total_overlap(double m_t, double m_f, double m_p, double m_s, std::optional<double> m_psi) {
  for (double m : {m_t, m_f, m_p, m_s})
    if (!(m >= 0.0 && m <= 1.0)) throw InvalidParameter("overlap factors must lie in [0, 1]");
  if (m_psi && !(*m_psi >= 0.0 && *m_psi <= 1.0)) throw InvalidParameter("m_psi must lie in [0, 1]");
  OverlapBreakdown out{m_t, m_f, m_p, m_s, m_t * m_f * m_p * m_s, std::nullopt};
  if (m_psi) out.m_tilde = out.m_total * *m_psi;
  return out;
}

SampledProfile exponential_intensity(double tau, double dt, double t_end) {
  if (!(tau > 0.0)) throw InvalidParameter("lifetime must be positive");
  SampledProfile p{Domain::time, Kind::intensity, sampled_grid(0.0, t_end, dt), {}};
  p.values.reserve(p.xs.size());
  for (double t : p.xs) p.values.push_back(std::exp(-t / tau));
  return p;
}

SampledProfile gaussian_intensity(Domain domain, double mu, double sigma, double dx, double lo, double hi) {
  if (!(sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  SampledProfile p{domain, Kind::intensity, sampled_grid(lo, hi, dx), {}};
  p.values.reserve(p.xs.size());
  for (double x : p.xs) p.values.push_back(std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma)));
  return p;
}

}  // namespace homlo::overlap
