/// @file io.hpp
/// @brief Run configuration, initial data families and on-disk formats.
///
/// Config files are line-oriented `section.key = value` text; `#` starts a
/// comment. Recognised keys:
///
///   grid.dimension        1 or 2                         (required)
///   grid.points           points per axis, >= 8          (required)
///   grid.length           torus side L > 0               (required)
///   initial.family        constant | sine | gaussian_bump | band_limited_random (required)
///   initial.c             base height                    (required)
///   initial.a             amplitude                      (default 0)
///   initial.k             wave numbers, e.g. `1` or `1,2` (default 1 per axis)
///   initial.sigma         bump width                     (default L/8)
///   initial.center        bump centre, e.g. `3.1,3.1`    (default L/2 per axis)
///   initial.seed          unsigned integer               (default 0)
///   flow.scheme           euler | rk4                    (default rk4)
///   flow.safety           (0, 1]                         (default 0.25)
///   flow.t_end            >= 0                           (required)
///   flow.max_steps        positive integer               (default 10000000)
///   output.stride         sample every k-th step         (default 10)
///   flow.sample_stride    alias of output.stride
///   output.directory      path                           (default ".")
///   output.snapshot_times comma-separated times          (default none)
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "imcf/certificates.hpp"
#include "imcf/decay.hpp"
#include "imcf/flow.hpp"
#include "imcf/state.hpp"

namespace imcf {

enum class InitialFamily { constant, sine, gaussian_bump, band_limited_random };

struct InitialConfig {
  InitialFamily family = InitialFamily::constant;
  double c = 1.0;
  double a = 0.0;
  std::vector<double> k;       ///< per-axis wave numbers (sine)
  double sigma = 0.0;          ///< 0 selects L/8
  std::vector<double> center;  ///< empty selects L/2 per axis
  std::uint64_t seed = 0;
};

struct RunConfig {
  Grid grid;
  InitialConfig initial;
  FlowConfig flow;
  std::filesystem::path directory = ".";
};

/// Throws ParseError (with line number) or ValidationError (all violations).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Builds the initial state and checks y > 0 (also analytically over the whole
/// torus) and H > 0 on the grid. Throws InadmissibleInitialData.
GraphState make_initial(const RunConfig& config);

/// Formats a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

/// Snapshot: `IMCF-SNAP 1`, `n=<n> shape=<p[,p]> L=<L> t=<t>`, then raw
/// little-endian binary64 values of y in row-major order.
void write_snapshot(const GraphState& state, const std::filesystem::path& path);
/// Throws IoError or FormatError.
GraphState read_snapshot(const std::filesystem::path& path);

/// monitors.csv with header `t,y_inf,...,P_max_sup`.
std::string monitors_csv(const std::vector<MonitorSample>& samples);
std::vector<MonitorSample> parse_monitors_csv(std::string_view text);

/// One line per certificate: `<name> <PASS|FAIL> worst_margin=<v> at_t=<v>`.
std::string certificates_text(const CertificateReport& report);
std::string rates_text(const RateReport& report);

/// Writes monitors.csv, certificates.txt, rates.txt, initial.snap (the first
/// sample's state, when given) and snap_<k>.snap per stored snapshot.
void write_outputs(const Trajectory& trajectory, const CertificateReport& report, const RateReport& fits,
                   const std::filesystem::path& directory, const GraphState* initial = nullptr);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace imcf
