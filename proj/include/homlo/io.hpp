#pragma once
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"

#include "homlo/estimator.hpp"
#include "homlo/mode_overlap.hpp"
#include "homlo/tagstream.hpp"

/// File formats shared by the library and the command-line tool.
namespace homlo::io {

/// `t_ps,value` or `f_GHz,value`; the header picks the domain. Read as intensity.
overlap::SampledProfile read_profile_csv(std::istream& in);
void write_profile_csv(std::ostream& out, const overlap::SampledProfile& profile);

/// One reading per line; an optional non-numeric header line is skipped.
std::vector<double> read_samples(std::istream& in);

/// `ratio,y,y_err` with a header row.
std::vector<estimate::SweepPoint> read_sweep_csv(std::istream& in);
void write_sweep_csv(std::ostream& out, std::span<const estimate::SweepPoint> points);

void write_tags_csv(std::ostream& out, const tags::TagStream& stream);
/// `tau_ps,counts`.
void write_histogram_csv(std::ostream& out, const tags::CorrelationHistogram& hist);

nlohmann::json to_json(const tags::G2Result& result);
nlohmann::json to_json(const estimate::FitResult& result);
nlohmann::json to_json(const overlap::OverlapBreakdown& breakdown);

}  // namespace homlo::io
