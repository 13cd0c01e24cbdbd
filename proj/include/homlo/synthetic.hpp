#pragma once
#include <cstdint>
#include <vector>

#include "homlo/params.hpp"
#include "homlo/tagstream.hpp"

/// Seeded Monte Carlo generators producing detector tag streams with known ground truth.
namespace homlo::synthetic {

/// Joint photon-number distribution P(n2, n3) of the two splitter outputs per pulse.
using PhotonNumberTable = std::vector<std::vector<double>>;

/// @brief Per-pulse output statistics taken from the Fock-space model.
PhotonNumberTable oracle_table(const SourceParams& source, const LocalOscillator& lo, const BeamSplitterSpec& bs,
                               int cutoff);

/// @brief Threshold detectors behind the mixing splitter.
///
/// Output 3 feeds channel 1. Output 2 is split 50:50 onto channels 2 and 3, so (1, 2)
/// is the cross-correlation pair and (2, 3) the auto-correlation pair.
struct DetectorModel {
  double efficiency{0.03};             ///< probability that a photon reaches a detector and clicks
  tags::Picoseconds rep_period_ps{12195};
  tags::Picoseconds jitter_ps{50};     ///< uniform timing jitter half-width
};

/// Pulsed experiment; each detector produces at most one tag per pulse.
tags::TagStream pulsed_tags(const PhotonNumberTable& table, std::uint64_t n_pulses, const DetectorModel& detectors,
                            std::uint64_t seed);

/// Independent Poisson click trains on each listed channel.
tags::TagStream poisson_tags(double rate_hz, double duration_s, const std::vector<tags::Channel>& channels,
                             std::uint64_t seed);

}  // namespace homlo::synthetic
