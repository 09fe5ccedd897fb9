#include "mkcf/results_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mkcf {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

double parse_field(const std::string& token, const std::string& origin, std::size_t line_no) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
  }
  return v;
}

}  // namespace

std::vector<ResultRecord> to_records(const SequenceRun& run) {
  std::vector<ResultRecord> out;
  for (std::size_t i = 0; i < run.boxes.size(); ++i) {
    out.push_back({static_cast<int>(i + 1), run.boxes[i], run.peaks[i], run.seconds[i]});
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::kIo, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) raise(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    raise(ErrorKind::kIo, "cannot move results into " + path.string());
  }
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& value) {
  write_text_atomic(path, value.dump(2) + "\n");
}

std::string format_results_csv(const std::vector<ResultRecord>& records) {
  std::string out = "frame,x,y,w,h,peak,seconds\n";
  for (const auto& r : records) {
    out += std::to_string(r.frame) + "," + fmt(r.box.x + 1.0) + "," + fmt(r.box.y + 1.0) + "," +
           fmt(r.box.w) + "," + fmt(r.box.h) + "," + fmt(r.peak) + "," + fmt(r.seconds) + "\n";
  }
  return out;
}

nlohmann::json results_json(const std::vector<ResultRecord>& records, const nlohmann::json& summary) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& r : records) {
    frames.push_back({{"frame", r.frame},
                      {"x", r.box.x + 1.0},
                      {"y", r.box.y + 1.0},
                      {"w", r.box.w},
                      {"h", r.box.h},
                      {"peak", r.peak},
                      {"seconds", r.seconds}});
  }
  return {{"frames", frames}, {"summary", summary}};
}

std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::kIo, "cannot read results file " + path.string());
  const std::string origin = path.string();
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    if (line_no == 1 && line.rfind("frame", 0) == 0) continue;
    std::vector<std::string> tokens;
    std::istringstream fields(line);
    std::string token;
    while (std::getline(fields, token, ',')) tokens.push_back(token);
    if (tokens.size() != 7) {
      raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) + ": expected 7 fields, got " +
                                   std::to_string(tokens.size()));
    }
    ResultRecord r;
    const double frame = parse_field(tokens[0], origin, line_no);
    r.frame = static_cast<int>(frame);
    if (r.frame != frame || r.frame != static_cast<int>(out.size()) + 1) {
      raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) + ": expected frame " +
                                   std::to_string(out.size() + 1));
    }
    r.box = {parse_field(tokens[1], origin, line_no) - 1.0, parse_field(tokens[2], origin, line_no) - 1.0,
             parse_field(tokens[3], origin, line_no), parse_field(tokens[4], origin, line_no)};
    r.peak = parse_field(tokens[5], origin, line_no);
    r.seconds = parse_field(tokens[6], origin, line_no);
    out.push_back(r);
  }
  return out;
}

std::string format_curve_csv(const std::vector<double>& thresholds, const std::vector<double>& values) {
  std::string out = "threshold,value\n";
  for (std::size_t i = 0; i < thresholds.size() && i < values.size(); ++i) {
    out += fmt(thresholds[i]) + "," + fmt(values[i]) + "\n";
  }
  return out;
}

nlohmann::json summary_json(const EvaluationResult& eval) {
  return {{"precision_at_20", eval.precision_at_20},
          {"auc", eval.auc},
          {"frames", eval.ious.size()},
          {"precision_curve", eval.precision_curve},
          {"success_curve", eval.success_curve}};
}

}  // namespace mkcf
