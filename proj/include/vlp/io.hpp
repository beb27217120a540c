#pragma once

// CSV formats: sensor logs, estimate traces and height traces.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vlp/eval.hpp"
#include "vlp/fusion.hpp"
#include "vlp/sensors.hpp"

namespace vlp {

/// `t,pr1,...,prN,ax,ay,az,roll,pitch,yaw,h_bar0,gt_x,gt_y,gt_z,gt_roll,gt_pitch,gt_yaw`
std::string sensor_log_header(std::size_t luminaires);

/// Angles are written in degrees, RSS in watts, accelerations in G. Ground
/// truth cells are left empty for frames without truth.
void write_sensor_log(std::ostream& out, std::span<const SensorFrame> frames);

/// Throws ParseError carrying the 1-based line number on malformed input.
std::vector<SensorFrame> read_sensor_log(std::istream& in);

/// `t,method,x,y,z,err,evals`; err is empty when the frame had no truth.
void write_estimate_trace(std::ostream& out, std::span<const TraceRow> rows);

/// `t,h_true,h_fused,h_vlp,h_bar`; h_vlp is empty when no correction ran.
void write_height_trace(std::ostream& out, std::span<const HeightEstimate> heights,
                        std::span<const SensorFrame> frames);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace vlp
