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
 * Plain-text `key = value` configuration.
 *
 * One assignment per line, `#` starts a comment. Every key has a documented
 * default (see config_keys()); unknown or repeated keys are errors so that a
 * misspelling never silently falls back to a default.
 */

#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zwm/errors.hpp"
#include "zwm/interferometer.hpp"
#include "zwm/spectral.hpp"

namespace zwm {

/// Everything a CLI run can be configured with.
struct ToolkitConfig {
  ExperimentConfig experiment{};
  double scan_start_nm = 0.0;
  double scan_stop_nm = 2033.0;
  std::size_t scan_points = 200;

  SourceSpectrum source{};
  FilterSpec filter{};

  std::vector<double> envelope_positions_nm{-35000.0, -15000.0, 0.0, 15000.0, 35000.0};
  PositionConvention envelope_convention = PositionConvention::mirror_displacement;
  double envelope_window_nm = 1016.4;
  std::size_t envelope_window_points = 41;
  double envelope_curve_half_range_nm = 60000.0;
  std::size_t envelope_curve_points = 241;

  double gain_epsilon = 0.01;
  std::int64_t total_events = 100000;
  std::string input_scan;
  std::string fit_channel = "coincidence";

  /// Scan positions implied by start/stop/points.
  std::vector<double> scan_positions() const { return linspace(scan_start_nm, scan_stop_nm, scan_points); }

  ExperimentConfig resolved_experiment() const {
    ExperimentConfig e = experiment;
    e.scan_positions_nm = scan_positions();
    return e;
  }
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("line " + std::to_string(line) + ": " + key + " expects a finite number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    throw ConfigError("line " + std::to_string(line) + ": " + key + " expects an integer, got '" + text + "'");
  return v;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text, int line) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item), line));
  if (out.empty()) throw ConfigError("line " + std::to_string(line) + ": " + key + " expects a comma-separated list");
  return out;
}

inline void require(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) throw ConfigError("line " + std::to_string(line) + ": " + key + " " + what);
}

inline std::string convention_name(PositionConvention c) {
  return c == PositionConvention::optical_path ? "optical_path" : "mirror_displacement";
}

inline PositionConvention parse_convention(const std::string& key, const std::string& v, int line) {
  if (v == "optical_path") return PositionConvention::optical_path;
  if (v == "mirror_displacement") return PositionConvention::mirror_displacement;
  throw ConfigError("line " + std::to_string(line) + ": " + key + " must be optical_path or mirror_displacement");
}

inline std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
  return out;
}

using Setter = std::function<void(ToolkitConfig&, const std::string& key, const std::string& value, int line)>;
using Getter = std::function<std::string(const ToolkitConfig&)>;

struct KeySpec {
  const char* name;
  const char* doc;
  Setter set;
  Getter get;
};

}  // namespace detail

/// Recognized keys, in echo order.
inline const std::vector<detail::KeySpec>& config_keys() {
  using detail::format_number;
  using detail::parse_double;
  using detail::parse_integer;
  using detail::require;
  static const std::vector<detail::KeySpec> keys = {
      {"pair_number", "pairs emitted per source term (1 or 2)",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n == 1 || n == 2, k, l, "must be 1 or 2");
         c.experiment.pair_number = static_cast<int>(n);
       },
       [](const ToolkitConfig& c) { return std::to_string(c.experiment.pair_number); }},
      {"gamma", "idler mode overlap in [0, 1]",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x >= 0.0 && x <= 1.0, k, l, "must lie in [0, 1]");
         c.experiment.gamma = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.experiment.gamma); }},
      {"bs_transmission", "signal beam-splitter transmission amplitude t in [0, 1]",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x >= 0.0 && x <= 1.0, k, l, "must lie in [0, 1]");
         c.experiment.bs_transmission = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.experiment.bs_transmission); }},
      {"signal_wavelength", "signal wavelength in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.experiment.signal_wavelength_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.experiment.signal_wavelength_nm); }},
      {"idler_wavelength", "idler wavelength in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.experiment.idler_wavelength_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.experiment.idler_wavelength_nm); }},
      {"scan_start", "first scan position in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) { c.scan_start_nm = parse_double(k, v, l); },
       [](const ToolkitConfig& c) { return format_number(c.scan_start_nm); }},
      {"scan_stop", "last scan position in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) { c.scan_stop_nm = parse_double(k, v, l); },
       [](const ToolkitConfig& c) { return format_number(c.scan_stop_nm); }},
      {"scan_points", "number of scan positions (>= 1)",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n >= 1 && n <= 1000000, k, l, "must lie in [1, 1000000]");
         c.scan_points = static_cast<std::size_t>(n);
       },
       [](const ToolkitConfig& c) { return std::to_string(c.scan_points); }},
      {"position_convention", "optical_path or mirror_displacement (path = 2 x displacement)",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         c.experiment.position_convention = detail::parse_convention(k, v, l);
       },
       [](const ToolkitConfig& c) { return detail::convention_name(c.experiment.position_convention); }},
      {"detector_semantics", "threshold (>= 1 photon) or number_resolving (exactly 1)",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         if (v == "threshold")
           c.experiment.detector_semantics = DetectorSemantics::threshold;
         else if (v == "number_resolving")
           c.experiment.detector_semantics = DetectorSemantics::number_resolving;
         else
           throw ConfigError("line " + std::to_string(l) + ": " + k + " must be threshold or number_resolving");
       },
       [](const ToolkitConfig& c) {
         return std::string(c.experiment.detector_semantics == DetectorSemantics::threshold ? "threshold"
                                                                                           : "number_resolving");
       }},
      {"pump_center", "pump center wavelength in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.source.pump_center_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.source.pump_center_nm); }},
      {"pump_bandwidth", "pump intensity FWHM in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.source.pump_bandwidth_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.source.pump_bandwidth_nm); }},
      {"phasematch_width", "phase-matching amplitude width sigma in rad/s",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.source.phasematch_width = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.source.phasematch_width); }},
      {"phasematch_idler_weight", "idler detuning weight in the phase-mismatch coordinate",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         c.source.phasematch_idler_weight = parse_double(k, v, l);
       },
       [](const ToolkitConfig& c) { return format_number(c.source.phasematch_idler_weight); }},
      {"grid_points", "spectral grid points per axis",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n >= 8 && n <= 4096, k, l, "must lie in [8, 4096]");
         c.source.grid_points = static_cast<std::size_t>(n);
       },
       [](const ToolkitConfig& c) { return std::to_string(c.source.grid_points); }},
      {"grid_span_sigmas", "spectral grid half-span in marginal widths",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.source.grid_span_sigmas = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.source.grid_span_sigmas); }},
      {"filter_center", "signal filter center wavelength in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.filter.center_wavelength_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.filter.center_wavelength_nm); }},
      {"filter_fwhm", "signal filter FWHM in nm",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.filter.fwhm_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.filter.fwhm_nm); }},
      {"filter_shape", "gaussian or rectangular",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         if (v == "gaussian")
           c.filter.shape = FilterShape::gaussian;
         else if (v == "rectangular")
           c.filter.shape = FilterShape::rectangular;
         else
           throw ConfigError("line " + std::to_string(l) + ": " + k + " must be gaussian or rectangular");
       },
       [](const ToolkitConfig& c) {
         return std::string(c.filter.shape == FilterShape::gaussian ? "gaussian" : "rectangular");
       }},
      {"envelope_positions", "comma-separated centers (nm) of the extrema scans",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         c.envelope_positions_nm = detail::parse_list(k, v, l);
       },
       [](const ToolkitConfig& c) { return detail::join_numbers(c.envelope_positions_nm); }},
      {"envelope_convention", "coordinate of envelope positions (optical_path or mirror_displacement)",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         c.envelope_convention = detail::parse_convention(k, v, l);
       },
       [](const ToolkitConfig& c) { return detail::convention_name(c.envelope_convention); }},
      {"envelope_window", "local scan width (nm) around each envelope position",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.envelope_window_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.envelope_window_nm); }},
      {"envelope_window_points", "points per local extrema scan",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n >= 3 && n <= 100000, k, l, "must lie in [3, 100000]");
         c.envelope_window_points = static_cast<std::size_t>(n);
       },
       [](const ToolkitConfig& c) { return std::to_string(c.envelope_window_points); }},
      {"envelope_curve_half_range", "half-range (nm) of the tabulated envelope curve",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x > 0.0, k, l, "must be positive");
         c.envelope_curve_half_range_nm = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.envelope_curve_half_range_nm); }},
      {"envelope_curve_points", "points in the tabulated envelope curve",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n >= 2 && n <= 1000000, k, l, "must lie in [2, 1000000]");
         c.envelope_curve_points = static_cast<std::size_t>(n);
       },
       [](const ToolkitConfig& c) { return std::to_string(c.envelope_curve_points); }},
      {"gain_epsilon", "pair amplitude epsilon for the induced-emission check",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const double x = parse_double(k, v, l);
         require(x >= 0.0 && x < 1.0, k, l, "must lie in [0, 1)");
         c.gain_epsilon = x;
       },
       [](const ToolkitConfig& c) { return format_number(c.gain_epsilon); }},
      {"total_events", "trials per scan position for synthetic counts",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         const auto n = parse_integer(k, v, l);
         require(n >= 0, k, l, "must be non-negative");
         c.total_events = n;
       },
       [](const ToolkitConfig& c) { return std::to_string(c.total_events); }},
      {"input_scan", "CSV scan to fit (empty: synthesize from the configured scan)",
       [](ToolkitConfig& c, const std::string&, const std::string& v, int) { c.input_scan = v; },
       [](const ToolkitConfig& c) { return c.input_scan; }},
      {"fit_channel", "column fitted by the fit scenario",
       [](ToolkitConfig& c, const std::string& k, const std::string& v, int l) {
         require(v == "singles_d1" || v == "singles_d2" || v == "coincidence", k, l,
                 "must be singles_d1, singles_d2 or coincidence");
         c.fit_channel = v;
       },
       [](const ToolkitConfig& c) { return c.fit_channel; }},
  };
  return keys;
}

inline ToolkitConfig parse_config_text(const std::string& text) {
  ToolkitConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string body = detail::trim(raw);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    const auto& keys = config_keys();
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return key == k.name; });
    if (it == keys.end()) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (auto [pos, fresh] = seen.emplace(key, line); !fresh)
      throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' already set on line " +
                        std::to_string(pos->second));
    it->set(cfg, key, value, line);
  }
  if (cfg.scan_points > 1 && !(cfg.scan_stop_nm > cfg.scan_start_nm))
    throw ConfigError("scan_stop must exceed scan_start");
  return cfg;
}

inline ToolkitConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

/// Fully resolved configuration, one `key = value` per line in key order.
inline std::string echo_config(const ToolkitConfig& cfg) {
  std::string out;
  for (const auto& k : config_keys()) out += std::string(k.name) + " = " + k.get(cfg) + "\n";
  return out;
}

}  // namespace zwm
