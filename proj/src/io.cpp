#include "homlo/io.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>
#include <string>

#include "homlo/errors.hpp"

namespace homlo::io {

namespace {

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(strip(cell));
  return out;
}

bool to_double(const std::string& s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

overlap::SampledProfile read_profile_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  overlap::SampledProfile p;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (!header) {
      if (cells.size() != 2 || cells[1] != "value") throw DataError(where(line_no) + "expected header 'x,value'");
      if (cells[0] == "t_ps")
        p.domain = overlap::Domain::time;
      else if (cells[0] == "f_GHz")
        p.domain = overlap::Domain::frequency;
      else
        throw DataError(where(line_no) + "x column must be 't_ps' or 'f_GHz'");
      header = true;
      continue;
    }
    double x = 0.0, v = 0.0;
    if (cells.size() != 2 || !to_double(cells[0], x) || !to_double(cells[1], v))
      throw DataError(where(line_no) + "expected two numeric columns");
    p.xs.push_back(x);
    p.values.push_back(v);
  }
  if (!header) throw DataError("profile file is empty");
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    throw DataError(e.what());
  }
  return p;
}

void write_profile_csv(std::ostream& out, const overlap::SampledProfile& profile) {
  out << (profile.domain == overlap::Domain::time ? "t_ps" : "f_GHz") << ",value\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < profile.xs.size(); ++i) out << profile.xs[i] << ',' << profile.values[i] << '\n';
}

std::vector<double> read_samples(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    double v = 0.0;
    if (!to_double(line, v)) {
      if (out.empty() && line_no == 1) continue;
      throw DataError(where(line_no) + "expected a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<estimate::SweepPoint> read_sweep_csv(std::istream& in) {
  std::vector<estimate::SweepPoint> points;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split(line);
    if (!header) {
      if (cells != std::vector<std::string>{"ratio", "y", "y_err"})
        throw DataError(where(line_no) + "expected header 'ratio,y,y_err'");
      header = true;
      continue;
    }
    estimate::SweepPoint p{};
    if (cells.size() != 3 || !to_double(cells[0], p.ratio) || !to_double(cells[1], p.y) ||
        !to_double(cells[2], p.y_err))
      throw DataError(where(line_no) + "expected three numeric columns");
    if (!(p.ratio > 0.0) || !(p.y_err > 0.0))
      throw DataError(where(line_no) + "ratio and y_err must be positive");
    points.push_back(p);
  }
  if (!header) throw DataError("sweep file is empty");
  return points;
}

void write_sweep_csv(std::ostream& out, std::span<const estimate::SweepPoint> points) {
  out << "ratio,y,y_err\n" << std::setprecision(17);
  for (const auto& p : points) out << p.ratio << ',' << p.y << ',' << p.y_err << '\n';
}

void write_tags_csv(std::ostream& out, const tags::TagStream& stream) {
  out << "channel,t_ps\n";
  for (const auto& r : stream.records()) out << static_cast<unsigned>(r.channel) << ',' << r.t_ps << '\n';
}

void write_histogram_csv(std::ostream& out, const tags::CorrelationHistogram& hist) {
  out << "tau_ps,counts\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) out << hist.bin_center(i) << ',' << hist.counts[i] << '\n';
}

nlohmann::json to_json(const tags::G2Result& r) {
  return {{"value", r.value},          {"stat_err", r.stat_err}, {"peak_area_0", r.peak_area_0},
          {"side_mean", r.side_mean},  {"window_ps", r.window_ps}, {"n_side_peaks", r.n_side_peaks}};
}

nlohmann::json to_json(const estimate::FitResult& r) {
  nlohmann::json j = {{"M_hat", r.m_hat},         {"M_err", r.m_err}, {"chi2_red", r.chi2_red},
                      {"n_points", r.n_points},   {"model", estimate::to_string(r.model)},
                      {"residuals", r.residuals}};
  if (r.ratio_scale) {
    j["ratio_scale"] = *r.ratio_scale;
    j["ratio_scale_err"] = *r.ratio_scale_err;
  }
  return j;
}

nlohmann::json to_json(const overlap::OverlapBreakdown& b) {
  nlohmann::json j = {{"M_t", b.m_t}, {"M_f", b.m_f}, {"M_p", b.m_p}, {"M_s", b.m_s}, {"M_total", b.m_total}};
  if (b.m_tilde) j["M_tilde"] = *b.m_tilde;
  return j;
}

}  // namespace homlo::io
