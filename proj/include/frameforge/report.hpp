#pragma once

// Serialization of results: canonical JSON, CSV tables and SVG trend plots.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "frameforge/multiplier.hpp"
#include "frameforge/reweight.hpp"
#include "frameforge/spec_json.hpp"

namespace frameforge {

Json to_json(const BoundsReport& b);
Json to_json(const Trend& t);
Json to_json(const WeightSeq& w);
Json to_json(const Claim& c);
Json to_json(const WeightCertificate& c);
Json to_json(const CandidateAttempt& a);
Json to_json(const BiorthogonalScan& s);
Json to_json(const NecessaryConditionsReport& r);
Json to_json(const WeightedFrameVerdict& v);
Json to_json(const InvertibilityVerdict& v);
Json to_json(const GrowthTest& g);
Json to_json(const UnconditionalityReport& r);
Json to_json(const ShiftedWeights& w);
Json to_json(const WeightShiftReport& r);
Json to_json(const DualityReport& r);
/// Echoes at most `echo_limit` members of Xi, Theta and m'.
Json to_json(const InterleaveConstruction& c, Index echo_limit = 8);

/// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string dump_report(const Json& j);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

/// Columns N, A, B, ratio, complete, excess.
CsvTable sweep_csv(std::span<const BoundsReport> reports);
/// Columns index, weight_re, weight_im; index is 1-based.
CsvTable weights_csv(const WeightSeq& w);

/// Log-log line plot of named positive series against N. Non-positive
/// values are left out of their line.
std::string svg_plot(const std::string& title, std::span<const double> ns,
                     const std::map<std::string, std::vector<double>>& series);

}  // namespace frameforge
