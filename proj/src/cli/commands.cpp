#include "homlo/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "homlo/analytic_model.hpp"
#include "homlo/errors.hpp"
#include "homlo/estimator.hpp"
#include "homlo/fock_oracle.hpp"
#include "homlo/io.hpp"
#include "homlo/mode_overlap.hpp"
#include "homlo/synthetic.hpp"
#include "homlo/tagstream.hpp"

namespace homlo::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
};

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

void merge_key(json& cfg, const json& defaults, const std::string& key, const json& value) {
  if (!defaults.contains(key)) throw ConfigError("unknown configuration key '" + key + "'");
  cfg[key] = value;
}

// defaults < config file < --set < dedicated flags
json load_config(const CommonArgs& args, const json& defaults) {
  json cfg = defaults;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot open config file '" + args.config_path + "'");
    json file;
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (!file.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : file.items()) merge_key(cfg, defaults, key, value);
  }
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    merge_key(cfg, defaults, kv.substr(0, eq), parse_value(kv.substr(eq + 1)));
  }
  if (args.seed && defaults.contains("seed")) cfg["seed"] = *args.seed;
  return cfg;
}

double number(const json& cfg, const std::string& key, double lo = -HUGE_VAL, double hi = HUGE_VAL) {
  const auto& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi))
    throw ConfigError("'" + key + "' = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return x;
}

std::int64_t integer(const json& cfg, const std::string& key, std::int64_t lo, std::int64_t hi) {
  const auto& v = cfg.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) throw ConfigError("'" + key + "' = " + std::to_string(x) + " out of range");
  return x;
}

std::optional<std::string> optional_path(const json& cfg, const std::string& key) {
  const auto& v = cfg.at(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a file path");
  return v.get<std::string>();
}

bool boolean(const json& cfg, const std::string& key) {
  const auto& v = cfg.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return v.get<bool>();
}

tags::ChannelPair channel_pair(const json& cfg, const std::string& key) {
  const auto& v = cfg.at(key);
  auto valid = [](const json& c) { return c.is_number_integer() && c.get<std::int64_t>() >= 0 && c.get<std::int64_t>() < 256; };
  if (!v.is_array() || v.size() != 2 || !valid(v[0]) || !valid(v[1]))
    throw ConfigError("'" + key + "' must be a pair of channel numbers");
  return {static_cast<tags::Channel>(v[0].get<int>()), static_cast<tags::Channel>(v[1].get<int>())};
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

class OutputDir {
 public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }
  bool enabled() const { return !dir_.empty(); }

  void write(const std::string& name, const std::string& content) const {
    if (!enabled()) return;
    std::ofstream out(fs::path(dir_) / name, std::ios::binary);
    if (!out) throw DataError("cannot write '" + (fs::path(dir_) / name).string() + "'");
    out << content;
  }
  void write_json(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
  /// Table plus its `<stem>.meta.json` sidecar.
  void write_table(const std::string& name, const std::string& csv, const json& meta) const {
    write(name, csv);
    write_json(fs::path(name).stem().string() + ".meta.json", meta);
  }

 private:
  std::string dir_;
};

json metadata(const std::string& command, const json& cfg) {
  return {{"tool", "homlo"}, {"version", kVersion}, {"command", command}, {"config", cfg}};
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

// ---------------------------------------------------------------- simulate

json simulate_defaults() {
  return {{"overlap", 0.76},
          {"g2_psi", 0.0412},
          {"m_psi", 1.0},
          {"mu_psi", 1.0},
          {"transmission", 0.5},
          {"r_min", 0.01},
          {"r_max", 30.0},
          {"n_points", 121},
          {"oracle_checks", json::array({0.203, 2.0})},
          {"seed", 0},
          {"tags", nullptr}};
}

json tag_defaults() {
  return {{"n_pulses", 1000000}, {"ratio", 2.0},          {"efficiency", 0.03},
          {"rep_period_ps", 12195}, {"jitter_ps", 50},    {"coherent_only", false}};
}

int cmd_simulate(const CommonArgs& args, std::ostream& out) {
  const json cfg = load_config(args, simulate_defaults());
  const double overlap = number(cfg, "overlap", 0.0, 1.0);
  const double g2 = number(cfg, "g2_psi", 0.0, 0.5);
  const double m_psi = number(cfg, "m_psi", 0.0, 1.0);
  const double mu_psi = number(cfg, "mu_psi", 1e-9, 2.0);
  const double transmission = number(cfg, "transmission", 0.0, 1.0);
  const double r_min = number(cfg, "r_min", 1e-9);
  const double r_max = number(cfg, "r_max", r_min);
  const auto n_points = integer(cfg, "n_points", 2, 100000);
  const auto seed = integer(cfg, "seed", 0, std::numeric_limits<std::int64_t>::max());
  if (!cfg["oracle_checks"].is_array()) throw ConfigError("'oracle_checks' must be an array of ratios");
  const double m_eff = analytic::effective_overlap(overlap, m_psi);

  std::ostringstream csv;
  csv << "ratio,v_hom,g2_auto,g2_cross_par,g2_cross_perp\n";
  std::vector<double> ratios;
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / static_cast<double>(n_points - 1));
    ratios.push_back(r);
    const double norm = (r + 1.0) * (r + 1.0);
    csv << fmt(r) << ',' << fmt(analytic::hom_visibility_at_ratio(r, g2, m_eff)) << ','
        << fmt(analytic::auto_g2_at_ratio(r, g2, m_eff)) << ','
        << fmt(analytic::cross_coincidence(r, 1.0, g2, m_eff) / norm) << ','
        << fmt(analytic::cross_coincidence(r, 1.0, g2, 0.0) / norm) << '\n';
  }

  const auto peaks = analytic::peak_analysis(g2, m_eff);
  json report = metadata("simulate", cfg);
  report["effective_overlap"] = m_eff;
  report["peaks"] = {{"r_vhom_star", peaks.r_vhom_star}, {"v_max", peaks.v_max}};
  report["peaks"]["r_auto_star"] = peaks.r_auto_star ? json(*peaks.r_auto_star) : json(nullptr);
  report["peaks"]["g2_auto_max"] = peaks.g2_auto_max ? json(*peaks.g2_auto_max) : json(nullptr);

  SourceParams source = SourceParams::from_statistics(mu_psi, g2);
  source.m_psi = m_psi;
  const BeamSplitterSpec bs(transmission);
  json checks = json::array();
  for (const auto& rv : cfg["oracle_checks"]) {
    if (!rv.is_number() || !(rv.get<double>() > 0.0)) throw ConfigError("oracle check ratios must be positive");
    const double r = rv.get<double>();
    const double mu_alpha = r * mu_psi;
    const int cutoff = fock::recommended_cutoff(mu_alpha);
    const auto par = fock::mix_on_beam_splitter(source, LocalOscillator::with_overlap(mu_alpha, overlap), bs, cutoff);
    const auto perp = fock::mix_on_beam_splitter(source, LocalOscillator::with_overlap(mu_alpha, 0.0), bs, cutoff);
    const double g_oracle = fock::auto_correlation(par, fock::Spatial::out_2);
    const double c_par = fock::cross_correlations(par).n2n3;
    const double c_perp = fock::cross_correlations(perp).n2n3;
    const double v_oracle = (c_perp - c_par) / c_perp;
    json c = {{"ratio", r}, {"cutoff", cutoff}, {"g2_auto_oracle", g_oracle}, {"v_hom_oracle", v_oracle}};
    if (transmission == 0.5) {
      c["g2_auto_analytic"] = analytic::auto_g2_at_ratio(r, g2, m_eff);
      c["v_hom_analytic"] = analytic::hom_visibility_at_ratio(r, g2, m_eff);
    }
    checks.push_back(c);
  }
  report["oracle_checks"] = checks;

  const OutputDir dir(args.out_dir);
  dir.write_table("sweep.csv", csv.str(), metadata("simulate", cfg));

  if (!cfg["tags"].is_null()) {
    if (!cfg["tags"].is_object()) throw ConfigError("'tags' must be an object");
    json tcfg = tag_defaults();
    for (const auto& [key, value] : cfg["tags"].items()) merge_key(tcfg, tag_defaults(), key, value);
    const auto n_pulses = integer(tcfg, "n_pulses", 1, 1'000'000'000);
    const double ratio = number(tcfg, "ratio", 1e-6, 1e3);
    synthetic::DetectorModel det;
    det.efficiency = number(tcfg, "efficiency", 0.0, 1.0);
    det.rep_period_ps = integer(tcfg, "rep_period_ps", 1, 1'000'000'000);
    det.jitter_ps = integer(tcfg, "jitter_ps", 0, det.rep_period_ps / 2 - 1);
    const bool coherent_only = boolean(tcfg, "coherent_only");

    SourceParams tag_source = source;
    if (coherent_only) tag_source = SourceParams{0.0, 0.0, 1.0, std::nullopt, 1.0};
    const double mu_alpha = ratio * mu_psi;
    const int cutoff = fock::recommended_cutoff(mu_alpha);
    const auto table_par =
        synthetic::oracle_table(tag_source, LocalOscillator::with_overlap(mu_alpha, overlap), bs, cutoff);
    const auto stream_par = synthetic::pulsed_tags(table_par, static_cast<std::uint64_t>(n_pulses), det,
                                                   static_cast<std::uint64_t>(seed));
    std::ostringstream tp;
    io::write_tags_csv(tp, stream_par);
    dir.write("tags_par.csv", tp.str());

    json truth = {{"ratio", ratio}, {"mu_alpha", mu_alpha}, {"n_pulses", n_pulses}, {"seed", seed},
                  {"efficiency", det.efficiency}, {"rep_period_ps", det.rep_period_ps},
                  {"coherent_only", coherent_only}};
    if (coherent_only) {
      truth["g2_auto"] = 1.0;
      truth["g2_cross"] = 1.0;
    } else {
      const auto table_perp =
          synthetic::oracle_table(tag_source, LocalOscillator::with_overlap(mu_alpha, 0.0), bs, cutoff);
      const auto stream_perp = synthetic::pulsed_tags(table_perp, static_cast<std::uint64_t>(n_pulses), det,
                                                      static_cast<std::uint64_t>(seed) + 1);
      std::ostringstream tq;
      io::write_tags_csv(tq, stream_perp);
      dir.write("tags_perp.csv", tq.str());
      truth["g2_auto"] = analytic::auto_g2_at_ratio(ratio, g2, m_eff);
      truth["v_hom"] = analytic::hom_visibility_at_ratio(ratio, g2, m_eff);
    }
    dir.write_json("tags_truth.json", truth);
    report["tags"] = truth;
  }

  dir.write_json("report.json", report);
  out << report.dump(2) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- analyze

json analyze_defaults() {
  return {{"bin_width_ps", 100},       {"tau_max_ps", nullptr},      {"rep_period_ps", 12195},
          {"window_ps", nullptr},      {"n_side_peaks", 10},         {"reorder_window_ps", 0},
          {"auto_pair", json::array({2, 3})}, {"cross_pair", json::array({1, 2})},       {"measure", json::array({"auto", "cross"})},
          {"chunks", 1}};
}

tags::TagStream load_tags(const std::string& path, tags::Picoseconds reorder) {
  auto in = open_input(path);
  tags::ParseOptions opts;
  opts.reorder_window_ps = reorder;
  try {
    auto stream = tags::parse_tags(in, opts);
    if (stream.empty()) throw DataError("tag file '" + path + "' contains no records");
    return stream;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

int cmd_analyze(const CommonArgs& args, const std::string& tag_path, const std::string& perp_path,
                std::ostream& out) {
  const json cfg = load_config(args, analyze_defaults());
  const auto bin = integer(cfg, "bin_width_ps", 1, 1'000'000'000);
  const auto rep = integer(cfg, "rep_period_ps", 1, 1'000'000'000'000);
  const auto n_side = static_cast<int>(integer(cfg, "n_side_peaks", 2, 1000));
  const auto reorder = integer(cfg, "reorder_window_ps", 0, std::numeric_limits<std::int64_t>::max());
  const auto chunks = static_cast<std::size_t>(integer(cfg, "chunks", 1, 1024));
  std::optional<tags::Picoseconds> window;
  if (!cfg["window_ps"].is_null()) window = integer(cfg, "window_ps", 1, rep);
  const tags::Picoseconds w = window.value_or(tags::default_window(rep, bin));
  tags::Picoseconds tau_max = 0;
  if (cfg["tau_max_ps"].is_null()) {
    const tags::Picoseconds reach = (n_side / 2) * rep + w;
    tau_max = ((reach + bin - 1) / bin) * bin;
  } else {
    tau_max = integer(cfg, "tau_max_ps", bin, std::numeric_limits<std::int64_t>::max() / 4);
  }
  if (!cfg["measure"].is_array()) throw ConfigError("'measure' must list 'auto' and/or 'cross'");
  std::vector<std::string> measure;
  for (const auto& m : cfg["measure"]) {
    if (!m.is_string() || (m != "auto" && m != "cross")) throw ConfigError("'measure' entries must be auto or cross");
    measure.push_back(m.get<std::string>());
  }
  const auto auto_pair = channel_pair(cfg, "auto_pair");
  const auto cross_pair = channel_pair(cfg, "cross_pair");

  const auto stream = load_tags(tag_path, reorder);
  std::optional<tags::TagStream> perp;
  if (!perp_path.empty()) perp = load_tags(perp_path, reorder);

  json result = metadata("analyze", cfg);
  result["inputs"] = {{"tags", tag_path}};
  result["side_normalization"] = "plain mean of side peaks at k*rep_period; no blinking correction";
  const OutputDir dir(args.out_dir);

  auto run_pair = [&](const tags::TagStream& s, tags::ChannelPair pair, const std::string& name) {
    const auto hist = tags::build_histogram_chunked(s, pair, bin, tau_max, rep, chunks, chunks > 1);
    std::ostringstream csv;
    io::write_histogram_csv(csv, hist);
    json meta = metadata("analyze", cfg);
    meta["channel_pair"] = {pair.a, pair.b};
    dir.write_table("hist_" + name + ".csv", csv.str(), meta);
    return tags::g2_zero(hist, w, n_side);
  };

  for (const auto& m : measure) {
    if (m == "auto") result["auto"] = io::to_json(run_pair(stream, auto_pair, "auto"));
    if (m == "cross") {
      const auto par = run_pair(stream, cross_pair, "cross");
      result["cross"] = io::to_json(par);
      if (perp) {
        result["inputs"]["tags_perp"] = perp_path;
        const auto orth = run_pair(*perp, cross_pair, "cross_perp");
        result["cross_perp"] = io::to_json(orth);
        const auto vis = tags::visibility_from_histograms(par, orth);
        result["visibility"] = {{"value", vis.value}, {"err", vis.err}};
      }
    }
  }
  dir.write_json("analysis.json", result);
  out << result.dump(2) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- overlap

json overlap_defaults() {
  return {{"time_a", nullptr},   {"time_b", nullptr},  {"freq_a", nullptr},   {"freq_b", nullptr},
          {"fringe", nullptr},   {"fringe_k", 500},    {"filter_center_GHz", nullptr},
          {"filter_half_width_GHz", nullptr},          {"M_t", nullptr},      {"M_f", nullptr},
          {"M_p", nullptr},      {"M_s", 1.0},         {"M_psi", nullptr}};
}

int cmd_overlap(const CommonArgs& args, std::ostream& out, std::ostream& err) {
  const json cfg = load_config(args, overlap_defaults());
  json result = metadata("overlap", cfg);

  auto profile_pair = [&](const std::string& ka, const std::string& kb, bool filter) -> std::optional<double> {
    const auto pa = optional_path(cfg, ka);
    const auto pb = optional_path(cfg, kb);
    if (!pa && !pb) return std::nullopt;
    if (!pa || !pb) throw ConfigError("'" + ka + "' and '" + kb + "' must be given together");
    auto ia = open_input(*pa);
    auto ib = open_input(*pb);
    auto a = io::read_profile_csv(ia);
    auto b = io::read_profile_csv(ib);
    if (filter) {
      const double c = number(cfg, "filter_center_GHz");
      const double hw = number(cfg, "filter_half_width_GHz", 0.0);
      a = overlap::spectral_window(a, c, hw);
      b = overlap::spectral_window(b, c, hw);
    }
    const auto v = overlap::overlap_integral(overlap::amplitude_from_intensity(a), overlap::amplitude_from_intensity(b));
    if (v.warning) {
      err << "warning: " << *v.warning << " (" << ka << ", " << kb << ")\n";
      result["warnings"].push_back(*v.warning);
    }
    return v.value;
  };

  auto factor = [&](const std::string& key, std::optional<double> measured) {
    if (measured) {
      result["sources"][key] = "profiles";
      return *measured;
    }
    if (cfg[key].is_null()) throw ConfigError("'" + key + "' needs either input profiles or a value");
    result["sources"][key] = "config";
    return number(cfg, key, 0.0, 1.0);
  };

  const bool filter = !cfg["filter_center_GHz"].is_null() || !cfg["filter_half_width_GHz"].is_null();
  const double m_t = factor("M_t", profile_pair("time_a", "time_b", false));
  const double m_f = factor("M_f", profile_pair("freq_a", "freq_b", filter));

  std::optional<double> m_p_measured;
  if (const auto fringe = optional_path(cfg, "fringe")) {
    auto in = open_input(*fringe);
    const auto samples = io::read_samples(in);
    const auto k = static_cast<std::size_t>(integer(cfg, "fringe_k", 1, 100'000'000));
    if (samples.size() < 2 * k) throw DataError(*fringe + ": fewer than 2k readings");
    const auto f = overlap::fringe_visibility_overlap(samples, k);
    result["fringe"] = {{"i_max", f.i_max}, {"i_min", f.i_min}, {"visibility", f.visibility},
                        {"visibility_err", f.visibility_err}, {"M_p", f.m_p}, {"M_p_err", f.m_p_err}};
    m_p_measured = f.m_p;
  }
  const double m_p = factor("M_p", m_p_measured);
  const double m_s = number(cfg, "M_s", 0.0, 1.0);
  std::optional<double> m_psi;
  if (!cfg["M_psi"].is_null()) m_psi = number(cfg, "M_psi", 0.0, 1.0);

  result["overlap"] = io::to_json(overlap::total_overlap(m_t, m_f, m_p, m_s, m_psi));
  OutputDir(args.out_dir).write_json("overlap.json", result);
  out << result.dump(2) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- fit

json fit_defaults() {
  return {{"model", "vhom"}, {"g2_psi", 0.0412}, {"fit_ratio_scale", false}, {"sweep", nullptr}};
}

int cmd_fit(const CommonArgs& args, const std::string& sweep_flag, std::ostream& out) {
  const json cfg = load_config(args, fit_defaults());
  if (!cfg["model"].is_string()) throw ConfigError("'model' must be vhom or auto");
  estimate::Model model{};
  try {
    model = estimate::model_from_string(cfg["model"].get<std::string>());
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
  const double g2 = number(cfg, "g2_psi", 0.0, 1.0);
  estimate::FitOptions options;
  options.fit_ratio_scale = boolean(cfg, "fit_ratio_scale");
  const auto path = !sweep_flag.empty() ? std::optional<std::string>(sweep_flag) : optional_path(cfg, "sweep");
  if (!path) throw ConfigError("fit needs a sweep file (--sweep or 'sweep')");

  auto in = open_input(*path);
  std::vector<estimate::SweepPoint> points;
  try {
    points = io::read_sweep_csv(in);
  } catch (const DataError& e) {
    throw DataError(*path + ": " + e.what());
  }
  const auto fit = estimate::fit_curve(model, points, g2, options);

  json result = metadata("fit", cfg);
  result["inputs"] = {{"sweep", *path}};
  result["fit"] = io::to_json(fit);
  const OutputDir dir(args.out_dir);
  if (model == estimate::Model::vhom) {
    std::ostringstream csv;
    csv << "ratio,M,M_err,skipped\n";
    for (const auto& p : estimate::pointwise_overlap(points, g2))
      csv << fmt(p.ratio) << ',' << fmt(p.m) << ',' << fmt(p.m_err) << ',' << (p.skipped ? 1 : 0) << '\n';
    dir.write_table("pointwise.csv", csv.str(), metadata("fit", cfg));
  }
  dir.write_json("fit.json", result);
  out << result.dump(2) << '\n';
  return kSuccess;
}

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON configuration file");
  sub->add_option("--seed", args.seed, "seed for synthetic generators (overrides config)");
  sub->add_option("--out", args.out_dir, "directory receiving CSV/JSON outputs");
  sub->add_option("--set", args.sets, "override a config key, key=value (value parsed as JSON)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon / local-oscillator interference: simulation, tag analysis, overlaps and fits",
               "homlo"};
  app.require_subcommand(1);
  CommonArgs args;
  std::string tag_path, perp_path, sweep_path;
  std::string time_a, time_b, freq_a, freq_b, fringe;

  auto* simulate = app.add_subcommand("simulate", "analytic sweeps, oracle spot checks, synthetic tags");
  add_common(simulate, args);
  auto* analyze = app.add_subcommand("analyze", "g2(0) and HOM visibility from time-tag files");
  add_common(analyze, args);
  analyze->add_option("--tags", tag_path, "tag CSV (channel,t_ps)")->required();
  analyze->add_option("--tags-perp", perp_path, "tag CSV recorded with orthogonal polarizations");
  auto* overlap_cmd = app.add_subcommand("overlap", "mode overlaps from profiles and fringe records");
  add_common(overlap_cmd, args);
  overlap_cmd->add_option("--time-a", time_a);
  overlap_cmd->add_option("--time-b", time_b);
  overlap_cmd->add_option("--freq-a", freq_a);
  overlap_cmd->add_option("--freq-b", freq_b);
  overlap_cmd->add_option("--fringe", fringe);
  auto* fit = app.add_subcommand("fit", "fit M to a visibility or bunching sweep");
  add_common(fit, args);
  fit->add_option("--sweep", sweep_path, "sweep CSV (ratio,y,y_err)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(args, out);
    if (*analyze) return cmd_analyze(args, tag_path, perp_path, out);
    if (*overlap_cmd) {
      for (const auto& [key, value] : {std::pair{"time_a", time_a}, {"time_b", time_b}, {"freq_a", freq_a},
                                       {"freq_b", freq_b}, {"fringe", fringe}})
        if (!value.empty()) args.sets.push_back(std::string(key) + "=\"" + value + "\"");
      return cmd_overlap(args, out, err);
    }
    if (*fit) return cmd_fit(args, sweep_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const UndefinedQuantity& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const TruncationError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const IllConditionedFit& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kConfigError;
}

}  // namespace homlo::cli
