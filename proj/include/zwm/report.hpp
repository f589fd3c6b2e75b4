// Copyright 2026 The ZWM Coherence Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * File formats: scan CSV, JSA matrix CSV, and JSON mirrors of both.
 *
 * Scan CSV: `#` comment header (toolkit version and resolved configuration),
 * then `position_nm,singles_d1,singles_d2,coincidence`, then one row per
 * position. Numbers use 12 significant digits.
 *
 * JSA CSV: comment header, a `signal_axis,...` row, an `idler_axis,...` row,
 * then one row of values per signal frequency.
 */

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zwm/config.hpp"
#include "zwm/errors.hpp"
#include "zwm/fringe.hpp"
#include "zwm/interferometer.hpp"
#include "zwm/spectral.hpp"
#include "zwm/version.hpp"

namespace zwm {

inline constexpr const char* kScanCsvHeader = "position_nm,singles_d1,singles_d2,coincidence";

/// `# name version` followed by one `# key = value` line per config entry.
inline std::string comment_header(const std::string& config_echo) {
  std::string out = std::string("# ") + kToolkitName + " " + kToolkitVersion + "\n";
  std::istringstream in(config_echo);
  std::string line;
  while (std::getline(in, line)) out += "# " + line + "\n";
  return out;
}

inline void write_scan_csv(std::ostream& os, const ScanResult& scan, const std::string& header) {
  using detail::format_number;
  os << header << kScanCsvHeader << '\n';
  for (std::size_t i = 0; i < scan.size(); ++i)
    os << format_number(scan.positions_nm[i]) << ',' << format_number(scan.singles_d1[i]) << ','
       << format_number(scan.singles_d2[i]) << ',' << format_number(scan.coincidence[i]) << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

inline double csv_number(const std::string& text, int line) {
  try {
    return parse_double("value", text, line);
  } catch (const ConfigError& e) {
    throw IoError(std::string("malformed CSV: ") + e.what());
  }
}

}  // namespace detail

inline ScanResult read_scan_csv(std::istream& is) {
  ScanResult scan;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body != kScanCsvHeader)
        throw IoError("line " + std::to_string(line_no) + ": expected header '" + kScanCsvHeader + "'");
      header_seen = true;
      continue;
    }
    const auto cells = detail::split_csv(body);
    if (cells.size() != 4) throw IoError("line " + std::to_string(line_no) + ": expected 4 columns");
    scan.positions_nm.push_back(detail::csv_number(cells[0], line_no));
    scan.singles_d1.push_back(detail::csv_number(cells[1], line_no));
    scan.singles_d2.push_back(detail::csv_number(cells[2], line_no));
    scan.coincidence.push_back(detail::csv_number(cells[3], line_no));
  }
  if (!header_seen) throw IoError("scan CSV has no header line");
  return scan;
}

enum class JsaComponent { real, imag };

inline void write_jsa_csv(std::ostream& os, const JointSpectralAmplitude& jsa, JsaComponent component,
                          const std::string& header) {
  using detail::format_number;
  os << header << "signal_axis";
  for (double w : jsa.grid.signal_axis()) os << ',' << format_number(w);
  os << "\nidler_axis";
  for (double w : jsa.grid.idler_axis()) os << ',' << format_number(w);
  os << '\n';
  for (Eigen::Index r = 0; r < jsa.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < jsa.values.cols(); ++c) {
      const Complex v = jsa.values(r, c);
      os << (c ? "," : "") << format_number(component == JsaComponent::real ? v.real() : v.imag());
    }
    os << '\n';
  }
}

/// Axes and one real matrix read back from a JSA CSV file.
struct JsaTable {
  std::vector<double> signal_axis;
  std::vector<double> idler_axis;
  std::vector<std::vector<double>> values;
};

inline JsaTable read_jsa_csv(std::istream& is) {
  JsaTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto cells = detail::split_csv(body);
    std::vector<double>* axis = nullptr;
    if (!cells.empty() && cells.front() == "signal_axis") axis = &t.signal_axis;
    if (!cells.empty() && cells.front() == "idler_axis") axis = &t.idler_axis;
    if (axis) {
      for (std::size_t i = 1; i < cells.size(); ++i) axis->push_back(detail::csv_number(cells[i], line_no));
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(detail::csv_number(c, line_no));
    if (row.size() != t.idler_axis.size())
      throw IoError("line " + std::to_string(line_no) + ": JSA row length does not match idler axis");
    t.values.push_back(std::move(row));
  }
  if (t.values.size() != t.signal_axis.size()) throw IoError("JSA row count does not match signal axis");
  return t;
}

inline nlohmann::ordered_json scan_to_json(const ScanResult& scan) {
  return {{"position_nm", scan.positions_nm},
          {"singles_d1", scan.singles_d1},
          {"singles_d2", scan.singles_d2},
          {"coincidence", scan.coincidence}};
}

inline nlohmann::ordered_json fit_to_json(const FitResult& fit) {
  return {{"offset", fit.offset},
          {"amplitude", fit.amplitude},
          {"period", fit.period},
          {"phase", fit.phase},
          {"visibility", fit.visibility},
          {"residual_rms", fit.residual_rms},
          {"covariance_diag", fit.covariance_diag},
          {"period_determined", fit.period_determined}};
}

/// JSON header object mirroring the CSV comment header.
inline nlohmann::ordered_json json_header(const ToolkitConfig& cfg) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& k : config_keys()) config[k.name] = k.get(cfg);
  return {{"toolkit", kToolkitName}, {"version", kToolkitVersion}, {"config", config}};
}

}  // namespace zwm
