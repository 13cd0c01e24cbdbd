#pragma once
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <vector>

namespace homlo::tags {

using Picoseconds = std::int64_t;
using Channel = std::uint8_t;

struct TagRecord {
  Channel channel;
  Picoseconds t_ps;
  bool operator==(const TagRecord&) const = default;
};

/// Detector time tags sorted by time, channels drawn from a declared set.
class TagStream {
 public:
  TagStream() = default;
  /// Stable-sorts by time; throws DataError on channels outside `channels`.
  explicit TagStream(std::vector<TagRecord> records, std::vector<Channel> channels = {1, 2, 3});

  const std::vector<TagRecord>& records() const { return records_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  /// Timestamps of one channel, in stream order.
  std::vector<Picoseconds> times(Channel channel) const;

 private:
  std::vector<TagRecord> records_;
  std::vector<Channel> channels_{1, 2, 3};
};

struct ParseOptions {
  /// Largest backwards step in time tolerated before the file is rejected.
  Picoseconds reorder_window_ps{0};
  std::vector<Channel> channels{1, 2, 3};
};

/// @brief Reads `channel,t_ps` lines. Blank lines, `#` comments and a leading
/// `channel,t_ps` header are skipped. Errors carry the 1-based line number.
TagStream parse_tags(std::istream& in, const ParseOptions& options = {});

struct ChannelPair {
  Channel a;
  Channel b;
};

/// @brief Start-stop coincidence histogram of t_b - t_a, odd bin count centered on tau = 0.
///
/// Bin k (|k| <= tau_max / bin_width) covers [k w - w/2, k w - w/2 + w) with w/2 rounded down.
struct CorrelationHistogram {
  Picoseconds bin_width;
  Picoseconds tau_max;
  Picoseconds rep_period;
  ChannelPair pair;
  std::vector<std::uint64_t> counts;

  std::size_t half_bins() const { return static_cast<std::size_t>(tau_max / bin_width); }
  Picoseconds bin_center(std::size_t i) const {
    return (static_cast<Picoseconds>(i) - static_cast<Picoseconds>(half_bins())) * bin_width;
  }
  std::uint64_t total() const;
  /// Element-wise sum; both histograms must share their binning.
  CorrelationHistogram& merge(const CorrelationHistogram& other);
};

CorrelationHistogram empty_histogram(ChannelPair pair, Picoseconds bin_width, Picoseconds tau_max,
                                     Picoseconds rep_period);

/// Two-pointer coincidence count over start tags of channel a. For a == b the
/// pairing of a record with itself is excluded.
CorrelationHistogram build_histogram(const TagStream& stream, ChannelPair pair, Picoseconds bin_width,
                                     Picoseconds tau_max, Picoseconds rep_period);

/// Same counts as build_histogram, computed over `n_chunks` disjoint ranges of start tags
/// (in parallel threads when `parallel`) and merged.
CorrelationHistogram build_histogram_chunked(const TagStream& stream, ChannelPair pair, Picoseconds bin_width,
                                             Picoseconds tau_max, Picoseconds rep_period, std::size_t n_chunks,
                                             bool parallel = true);

/// Normalized zero-delay correlation from peak areas.
struct G2Result {
  double value;
  double stat_err;
  std::uint64_t peak_area_0;
  double side_mean;
  Picoseconds window_ps;
  int n_side_peaks;
};

/// Half the repetition period rounded down to a whole number of bins.
Picoseconds default_window(Picoseconds rep_period, Picoseconds bin_width);

/// Ratio of a central area to the mean of side areas with Poisson errors on both.
/// @throws UndefinedQuantity if the side mean is zero
G2Result g2_from_areas(std::uint64_t peak_area_0, std::span<const std::uint64_t> side_areas);

/// @brief Central-peak area over the mean of `n_side_peaks` areas at tau = k tau_rep,
/// k = +-1 .. +-n/2. A bin belongs to a peak when its center lies within window/2 of it.
G2Result g2_zero(const CorrelationHistogram& hist, std::optional<Picoseconds> window = std::nullopt,
                 int n_side_peaks = 10);

struct Visibility {
  double value;
  double err;
};

/// V = (g_perp - g_par) / g_perp with first-order error propagation.
Visibility visibility_from_histograms(const G2Result& parallel, const G2Result& perpendicular);

}  // namespace homlo::tags
