#pragma once

// Run artifacts.
//
// Results CSV, one record per frame after a header line:
//   frame,x,y,w,h,peak,seconds
// frame is 1-based, (x, y) is the 1-indexed top-left corner (the OTB
// convention), peak is the maximal detection response (1 for the init frame)
// and seconds is the wall time spent on the frame.
//
// Results JSON: {"frames": [records as above], "summary": {...}}.
// Curve CSVs: "threshold,value" per line after a header.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkcf/metrics.hpp"
#include "mkcf/tracker.hpp"

namespace mkcf {

struct ResultRecord {
  int frame = 0;
  BoundingBox box;  // 0-indexed in memory
  double peak = 0.0;
  double seconds = 0.0;
};

std::vector<ResultRecord> to_records(const SequenceRun& run);

/// Writes via a sibling temporary file renamed into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& value);

std::string format_results_csv(const std::vector<ResultRecord>& records);
nlohmann::json results_json(const std::vector<ResultRecord>& records, const nlohmann::json& summary);

/// Reads a results CSV; malformed lines raise kParse with the line number.
std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path);

std::string format_curve_csv(const std::vector<double>& thresholds, const std::vector<double>& values);

nlohmann::json summary_json(const EvaluationResult& eval);

}  // namespace mkcf
