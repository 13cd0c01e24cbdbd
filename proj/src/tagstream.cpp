#include "homlo/tagstream.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <string>
#include <string_view>
#include <thread>

#include "homlo/errors.hpp"

namespace homlo::tags {

namespace {

Picoseconds floor_div(Picoseconds a, Picoseconds b) {
  Picoseconds q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  s = trim(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

void validate_binning(Picoseconds bin_width, Picoseconds tau_max, Picoseconds rep_period) {
  if (bin_width <= 0 || tau_max < 0 || rep_period <= 0)
    throw InvalidParameter("bin width and repetition period must be positive, tau_max non-negative");
  if (tau_max % bin_width != 0) throw InvalidParameter("bin width must divide tau_max");
}

void count_range(std::span<const Picoseconds> starts, std::size_t first, std::size_t last,
                 std::span<const Picoseconds> stops, bool same_channel, CorrelationHistogram& hist) {
  const Picoseconds w = hist.bin_width;
  const Picoseconds half_w = w / 2;
  const auto half = static_cast<Picoseconds>(hist.half_bins());
  const Picoseconds lo_tau = -half * w - half_w;
  const Picoseconds hi_tau = half * w - half_w + w;  // exclusive
  if (first >= last) return;
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(stops.begin(), stops.end(), starts[first] + lo_tau) - stops.begin());
  for (std::size_t i = first; i < last; ++i) {
    const Picoseconds t0 = starts[i];
    while (lo < stops.size() && stops[lo] < t0 + lo_tau) ++lo;
    for (std::size_t j = lo; j < stops.size() && stops[j] < t0 + hi_tau; ++j) {
      if (same_channel && j == i) continue;
      const Picoseconds k = floor_div(stops[j] - t0 + half_w, w);
      ++hist.counts[static_cast<std::size_t>(k + half)];
    }
  }
}

}  // namespace

TagStream::TagStream(std::vector<TagRecord> records, std::vector<Channel> channels)
    : records_(std::move(records)), channels_(std::move(channels)) {
  for (const auto& r : records_)
    if (std::find(channels_.begin(), channels_.end(), r.channel) == channels_.end())
      throw DataError("unknown channel " + std::to_string(r.channel));
  std::stable_sort(records_.begin(), records_.end(),
                   [](const TagRecord& x, const TagRecord& y) { return x.t_ps < y.t_ps; });
}

std::vector<Picoseconds> TagStream::times(Channel channel) const {
  std::vector<Picoseconds> out;
  for (const auto& r : records_)
    if (r.channel == channel) out.push_back(r.t_ps);
  return out;
}

TagStream parse_tags(std::istream& in, const ParseOptions& options) {
  if (options.reorder_window_ps < 0) throw InvalidParameter("reorder window must be non-negative");
  std::vector<TagRecord> records;
  std::string line;
  std::size_t line_no = 0;
  Picoseconds latest = std::numeric_limits<Picoseconds>::min();
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (records.empty() && view.starts_with("channel")) continue;
    const auto comma = view.find(',');
    unsigned channel = 0;
    Picoseconds t = 0;
    if (comma == std::string_view::npos || !parse_int(view.substr(0, comma), channel) ||
        !parse_int(view.substr(comma + 1), t))
      throw DataError("line " + std::to_string(line_no) + ": expected 'channel,t_ps'");
    if (std::find(options.channels.begin(), options.channels.end(), channel) == options.channels.end())
      throw DataError("line " + std::to_string(line_no) + ": unknown channel " + std::to_string(channel));
    if (latest != std::numeric_limits<Picoseconds>::min() && t < latest - options.reorder_window_ps)
      throw DataError("line " + std::to_string(line_no) + ": timestamp " + std::to_string(t) +
                      " precedes earlier tag beyond the reorder window");
    latest = std::max(latest, t);
    records.push_back({static_cast<Channel>(channel), t});
  }
  return TagStream(std::move(records), options.channels);
}

std::uint64_t CorrelationHistogram::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

CorrelationHistogram& CorrelationHistogram::merge(const CorrelationHistogram& other) {
  if (other.bin_width != bin_width || other.tau_max != tau_max || other.counts.size() != counts.size() ||
      other.pair.a != pair.a || other.pair.b != pair.b)
    throw InvalidParameter("cannot merge histograms with different binning or channels");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  return *this;
}

CorrelationHistogram empty_histogram(ChannelPair pair, Picoseconds bin_width, Picoseconds tau_max,
                                     Picoseconds rep_period) {
  validate_binning(bin_width, tau_max, rep_period);
  CorrelationHistogram h{bin_width, tau_max, rep_period, pair, {}};
  h.counts.assign(2 * h.half_bins() + 1, 0);
  return h;
}

CorrelationHistogram build_histogram(const TagStream& stream, ChannelPair pair, Picoseconds bin_width,
                                     Picoseconds tau_max, Picoseconds rep_period) {
  return build_histogram_chunked(stream, pair, bin_width, tau_max, rep_period, 1, false);
}

CorrelationHistogram build_histogram_chunked(const TagStream& stream, ChannelPair pair, Picoseconds bin_width,
                                             Picoseconds tau_max, Picoseconds rep_period, std::size_t n_chunks,
                                             bool parallel) {
  auto hist = empty_histogram(pair, bin_width, tau_max, rep_period);
  if (n_chunks == 0) throw InvalidParameter("need at least one chunk");
  const auto starts = stream.times(pair.a);
  const auto stops = pair.a == pair.b ? starts : stream.times(pair.b);
  const bool same = pair.a == pair.b;

  std::vector<CorrelationHistogram> partial(n_chunks, hist);
  auto work = [&](std::size_t c) {
    const std::size_t first = starts.size() * c / n_chunks;
    const std::size_t last = starts.size() * (c + 1) / n_chunks;
    count_range(starts, first, last, stops, same, partial[c]);
  };
  if (parallel && n_chunks > 1) {
    std::vector<std::jthread> pool;
    for (std::size_t c = 0; c < n_chunks; ++c) pool.emplace_back(work, c);
  } else {
    for (std::size_t c = 0; c < n_chunks; ++c) work(c);
  }
  for (const auto& p : partial) hist.merge(p);
  return hist;
}

Picoseconds default_window(Picoseconds rep_period, Picoseconds bin_width) {
  if (rep_period <= 0 || bin_width <= 0) throw InvalidParameter("periods must be positive");
  return (rep_period / 2 / bin_width) * bin_width;
}

G2Result g2_from_areas(std::uint64_t peak_area_0, std::span<const std::uint64_t> side_areas) {
  if (side_areas.empty()) throw InvalidParameter("need side peaks for normalization");
  double side_sum = 0.0;
  for (auto s : side_areas) side_sum += static_cast<double>(s);
  const double n = static_cast<double>(side_areas.size());
  const double side_mean = side_sum / n;
  if (side_mean <= 0.0) throw UndefinedQuantity("side peaks are empty; normalization undefined");
  const double a = static_cast<double>(peak_area_0);
  const double value = a / side_mean;
  // var(A) = A (at least one count), var(side mean) = side_mean / n
  const double var = std::max(a, 1.0) / (side_mean * side_mean) + value * value / side_sum;
  return {value, std::sqrt(var), peak_area_0, side_mean, 0, static_cast<int>(side_areas.size())};
}

G2Result g2_zero(const CorrelationHistogram& hist, std::optional<Picoseconds> window, int n_side_peaks) {
  const Picoseconds w = window.value_or(default_window(hist.rep_period, hist.bin_width));
  if (w <= 0) throw InvalidParameter("integration window must be positive");
  if (2 * w > hist.rep_period) throw InvalidParameter("integration window exceeds half the repetition period");
  if (n_side_peaks < 2 || n_side_peaks % 2 != 0)
    throw InvalidParameter("number of side peaks must be even and at least 2");
  const Picoseconds reach = (n_side_peaks / 2) * hist.rep_period + w / 2;
  if (reach > hist.tau_max)
    throw InvalidParameter("histogram range too short for the requested side peaks");

  auto area = [&](Picoseconds center) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
      if (2 * std::abs(hist.bin_center(i) - center) <= w) acc += hist.counts[i];
    return acc;
  };
  std::vector<std::uint64_t> sides;
  for (int k = 1; k <= n_side_peaks / 2; ++k) {
    sides.push_back(area(-k * hist.rep_period));
    sides.push_back(area(k * hist.rep_period));
  }
  auto res = g2_from_areas(area(0), sides);
  res.window_ps = w;
  return res;
}

Visibility visibility_from_histograms(const G2Result& parallel, const G2Result& perpendicular) {
  if (!(perpendicular.value > 0.0)) throw UndefinedQuantity("visibility undefined for zero perpendicular g2");
  const double gp = perpendicular.value;
  const double value = (gp - parallel.value) / gp;
  const double err = std::hypot(parallel.stat_err / gp, parallel.value * perpendicular.stat_err / (gp * gp));
  return {value, err};
}

}  // namespace homlo::tags
