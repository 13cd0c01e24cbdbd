#include "homlo/synthetic.hpp"

#include <algorithm>
#include <random>

#include "homlo/errors.hpp"
#include "homlo/fock_oracle.hpp"

namespace homlo::synthetic {

PhotonNumberTable oracle_table(const SourceParams& source, const LocalOscillator& lo, const BeamSplitterSpec& bs,
                               int cutoff) {
  return fock::output_number_distribution(fock::mix_on_beam_splitter(source, lo, bs, cutoff));
}

tags::TagStream pulsed_tags(const PhotonNumberTable& table, std::uint64_t n_pulses, const DetectorModel& detectors,
                            std::uint64_t seed) {
  if (!(detectors.efficiency >= 0.0 && detectors.efficiency <= 1.0))
    throw InvalidParameter("detection efficiency must lie in [0, 1]");
  if (detectors.rep_period_ps <= 0 || detectors.jitter_ps < 0 || 2 * detectors.jitter_ps >= detectors.rep_period_ps)
    throw InvalidParameter("jitter must be non-negative and below half the repetition period");
  if (table.empty() || table.front().empty()) throw InvalidParameter("empty photon-number table");

  const std::size_t cols = table.front().size();
  std::vector<double> flat;
  flat.reserve(table.size() * cols);
  for (const auto& row : table) {
    if (row.size() != cols) throw InvalidParameter("ragged photon-number table");
    flat.insert(flat.end(), row.begin(), row.end());
  }

  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> photons(flat.begin(), flat.end());
  std::uniform_int_distribution<tags::Picoseconds> jitter(-detectors.jitter_ps, detectors.jitter_ps);

  std::vector<tags::TagRecord> records;
  for (std::uint64_t pulse = 0; pulse < n_pulses; ++pulse) {
    const std::size_t cell = photons(rng);
    const auto n2 = static_cast<std::uint64_t>(cell / cols);
    const auto n3 = static_cast<std::uint64_t>(cell % cols);
    if (n2 + n3 == 0) continue;
    bool click[4] = {false, false, false, false};
    if (n3 > 0) click[1] = std::binomial_distribution<std::uint64_t>(n3, detectors.efficiency)(rng) > 0;
    if (n2 > 0) {
      const auto detected = std::binomial_distribution<std::uint64_t>(n2, detectors.efficiency)(rng);
      const auto to_ch2 = std::binomial_distribution<std::uint64_t>(detected, 0.5)(rng);
      click[2] = to_ch2 > 0;
      click[3] = detected - to_ch2 > 0;
    }
    const auto t0 = static_cast<tags::Picoseconds>(pulse) * detectors.rep_period_ps + detectors.rep_period_ps;
    for (tags::Channel ch = 1; ch <= 3; ++ch)
      if (click[ch]) records.push_back({ch, t0 + jitter(rng)});
  }
  return tags::TagStream(std::move(records));
}

tags::TagStream poisson_tags(double rate_hz, double duration_s, const std::vector<tags::Channel>& channels,
                             std::uint64_t seed) {
  if (!(rate_hz > 0.0) || !(duration_s > 0.0)) throw InvalidParameter("rate and duration must be positive");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(rate_hz * 1e-12);  // per picosecond
  const double end_ps = duration_s * 1e12;
  std::vector<tags::TagRecord> records;
  for (auto ch : channels) {
    double t = 0.0;
    while ((t += gap(rng)) < end_ps) records.push_back({ch, static_cast<tags::Picoseconds>(t)});
  }
  std::vector<tags::Channel> declared = {1, 2, 3};
  for (auto ch : channels)
    if (std::find(declared.begin(), declared.end(), ch) == declared.end()) declared.push_back(ch);
  return tags::TagStream(std::move(records), declared);
}

}  // namespace homlo::synthetic
