#pragma once

#include <string>
#include <vector>

#include "wifidop/radio.hpp"
#include "wifidop/sim.hpp"

namespace wifidop {

/// Locale-independent formatting with round-trip precision (17 significant
/// digits); infinities print as "inf" / "-inf".
std::string format_double(double value);

/// Strict full-token parse; accepts "inf", "-inf" and "nan". Throws ParseError.
double parse_double(const std::string& token);

/// Reads an environment JSON file:
///   {"dimension": 3, "ss_threshold_dbm": -85.0, "receiver": {"gain": 1.0},
///    "aps": [{"id": "...", "x": , "y": , "z": , "tx_power_dbm": ,
///             "tx_gain": , "wavelength_m": }, ...]}
/// dBm fields are converted to milliwatts at this boundary; a null
/// ss_threshold_dbm disables the threshold (0 mW). Throws ParseError for
/// malformed JSON and ValidationError naming the missing/invalid field.
Environment load_environment(const std::string& path);

/// Reads a scan CSV with header `timestamp,ap_id,rss_dbm[,truth_x,truth_y,truth_z]`.
/// Rows sharing a timestamp form one scan; rss_dbm = -inf encodes
/// "not received" (0 mW). Scans are returned sorted by timestamp.
std::vector<RssScan> load_scans(const std::string& path);

/// Writes scans in the same CSV format; truth columns are emitted when any
/// scan carries ground truth.
void write_scans(const std::vector<RssScan>& scans, const std::string& path);

/// Reads a trajectory JSON file:
///   {"waypoints": [[x,y,z], ...], "speed_mps": 1.0, "sample_period_s": 1.0}
Trajectory load_trajectory(const std::string& path);

/// Writes the per-sample records of an evaluation report as CSV with header
/// time,truth_x,truth_y,truth_z,est_x,est_y,est_z,error_m,dop,visible,
/// qualified,classification,converged. Values round-trip exactly.
void write_report(const EvaluationReport& report, const std::string& path);

/// Reads records written by write_report. Summaries are recomputed with
/// summarize(), which reproduces the original bin statistics exactly.
std::vector<SampleRecord> load_report_records(const std::string& path);

}  // namespace wifidop
