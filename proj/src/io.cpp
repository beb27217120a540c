#include "vlp/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include "vlp/errors.hpp"
#include "vlp/units.hpp"

namespace vlp {
namespace {

constexpr std::size_t kFixedColumns = 13;  // everything except t and pr1..prN

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line, const char* column) {
  double v = 0;
  const auto* end = cell.data() + cell.size();
  const auto r = std::from_chars(cell.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || cell.empty())
    throw ParseError(std::string("bad value '") + std::string(cell) + "' in column " + column, line);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string sensor_log_header(std::size_t luminaires) {
  std::string h = "t";
  for (std::size_t i = 1; i <= luminaires; ++i) h += ",pr" + std::to_string(i);
  h += ",ax,ay,az,roll,pitch,yaw,h_bar0,gt_x,gt_y,gt_z,gt_roll,gt_pitch,gt_yaw";
  return h;
}

void write_sensor_log(std::ostream& out, std::span<const SensorFrame> frames) {
  const std::size_t n = frames.empty() ? 4 : frames.front().rss.size();
  out << sensor_log_header(n) << '\n';
  for (const auto& f : frames) {
    if (f.rss.size() != n) throw std::invalid_argument("write_sensor_log: inconsistent RSS count");
    out << format_double(f.timestamp);
    for (double p : f.rss) out << ',' << format_double(p);
    out << ',' << format_double(f.accel.x()) << ',' << format_double(f.accel.y()) << ',' << format_double(f.accel.z())
        << ',' << format_double(rad2deg(f.roll)) << ',' << format_double(rad2deg(f.pitch)) << ','
        << format_double(rad2deg(f.yaw)) << ',' << format_double(f.baro_altitude);
    if (f.has_ground_truth) {
      const auto& g = f.ground_truth;
      out << ',' << format_double(g.position.x()) << ',' << format_double(g.position.y()) << ','
          << format_double(g.position.z()) << ',' << format_double(rad2deg(g.roll)) << ','
          << format_double(rad2deg(g.pitch)) << ',' << format_double(rad2deg(g.yaw));
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
}

std::vector<SensorFrame> read_sensor_log(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty log", lineno);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < kFixedColumns + 2) throw ParseError("header has too few columns", lineno);
  const std::size_t n = header.size() - kFixedColumns - 1;
  if (line != sensor_log_header(n)) throw ParseError("unexpected header '" + line + "'", lineno);

  static const char* names[] = {"ax", "ay", "az", "roll", "pitch", "yaw", "h_bar0",
                                "gt_x", "gt_y", "gt_z", "gt_roll", "gt_pitch", "gt_yaw"};
  std::vector<SensorFrame> frames;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()),
                       lineno);
    SensorFrame f;
    f.timestamp = parse_cell(cells[0], lineno, "t");
    f.rss.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.rss[i] = parse_cell(cells[1 + i], lineno, "pr");
      if (f.rss[i] < 0) throw ParseError("negative RSS", lineno);
    }
    double v[13];
    std::size_t c = 1 + n;
    for (int j = 0; j < 7; ++j) v[j] = parse_cell(cells[c + j], lineno, names[j]);
    c += 7;
    bool truth_empty = true;
    for (int j = 0; j < 6; ++j) truth_empty = truth_empty && cells[c + j].empty();
    f.has_ground_truth = !truth_empty;
    if (f.has_ground_truth)
      for (int j = 0; j < 6; ++j) v[7 + j] = parse_cell(cells[c + j], lineno, names[7 + j]);
    f.accel = {v[0], v[1], v[2]};
    f.roll = deg2rad(v[3]);
    f.pitch = deg2rad(v[4]);
    f.yaw = deg2rad(v[5]);
    f.baro_altitude = v[6];
    if (f.has_ground_truth) {
      f.ground_truth.position = {v[7], v[8], v[9]};
      f.ground_truth.roll = deg2rad(v[10]);
      f.ground_truth.pitch = deg2rad(v[11]);
      f.ground_truth.yaw = deg2rad(v[12]);
      f.ground_truth.timestamp = f.timestamp;
    }
    if (!frames.empty() && !(f.timestamp > frames.back().timestamp))
      throw ParseError("timestamps must be strictly increasing", lineno);
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_estimate_trace(std::ostream& out, std::span<const TraceRow> rows) {
  out << "t,method,x,y,z,err,evals\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << ',' << method_tag(r.method) << ',' << format_double(r.position.x()) << ','
        << format_double(r.position.y()) << ',' << format_double(r.position.z()) << ','
        << (r.error ? format_double(*r.error) : std::string()) << ',' << r.evaluations << '\n';
  }
}

void write_height_trace(std::ostream& out, std::span<const HeightEstimate> heights,
                        std::span<const SensorFrame> frames) {
  if (heights.size() != frames.size()) throw std::invalid_argument("write_height_trace: stream lengths differ");
  out << "t,h_true,h_fused,h_vlp,h_bar\n";
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const auto& h = heights[i];
    out << format_double(h.timestamp) << ','
        << (frames[i].has_ground_truth ? format_double(frames[i].ground_truth.position.z()) : std::string()) << ','
        << format_double(h.h_fused) << ',' << (h.h_vlp ? format_double(*h.h_vlp) : std::string()) << ','
        << format_double(h.h_bar_corrected) << '\n';
  }
}

}  // namespace vlp
