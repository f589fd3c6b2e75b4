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
 * Scenario runner behind the command-line tool.
 *
 * Every scenario writes its data files plus a summary into the output
 * directory. CSV runs produce `<name>.csv` files and `summary.txt`; JSON runs
 * produce a single `results.json`. All files start with the toolkit version
 * and the resolved configuration, and contain nothing time- or host-dependent,
 * so equal manifests produce byte-identical output.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zwm/config.hpp"
#include "zwm/errors.hpp"
#include "zwm/fringe.hpp"
#include "zwm/interferometer.hpp"
#include "zwm/report.hpp"
#include "zwm/spectral.hpp"

namespace zwm {

enum class Scenario { scan, envelope, hom, emission, fit, jsa };
enum class OutputFormat { csv, json };

inline constexpr const char* kOutputDirEnv = "ZWM_OUT_DIR";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitDomain = 2, kExitIo = 3 };

inline std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::scan: return "scan";
    case Scenario::envelope: return "envelope";
    case Scenario::hom: return "hom";
    case Scenario::emission: return "emission";
    case Scenario::fit: return "fit";
    case Scenario::jsa: return "jsa";
  }
  return "scan";
}

inline Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::scan, Scenario::envelope, Scenario::hom, Scenario::emission, Scenario::fit,
                     Scenario::jsa})
    if (scenario_name(s) == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

inline OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

struct RunManifest {
  Scenario scenario = Scenario::scan;
  std::optional<std::string> config_path;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;
};

/// Output directory: explicit flag, else the environment variable, else ".".
inline std::string resolve_output_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

namespace detail {

using Json = nlohmann::ordered_json;

// Accumulates a scenario's artifacts before anything is written.
struct Artifacts {
  std::vector<std::pair<std::string, std::string>> csv_files;  // name → body (without header)
  Json data = Json::object();
  Json summary = Json::object();
};

inline std::string summary_value(const Json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline void fit_into(Json& summary, const std::string& prefix, const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  try {
    const FitResult fit = fit_sinusoid(xs, ys);
    summary[prefix + "_period_nm"] = fit.period;
    summary[prefix + "_visibility"] = fit.visibility;
    summary[prefix + "_period_determined"] = fit.period_determined;
  } catch (const FitError& e) {
    summary[prefix + "_fit_error"] = e.what();
  }
}

inline ToolkitConfig synced(ToolkitConfig cfg) {
  cfg.source.signal_center_nm = cfg.experiment.signal_wavelength_nm;
  cfg.source.idler_center_nm = cfg.experiment.idler_wavelength_nm;
  return cfg;
}

inline std::string scan_body(const ScanResult& scan) {
  std::ostringstream os;
  write_scan_csv(os, scan, "");
  return os.str();
}

inline Artifacts run_scan(const ToolkitConfig& cfg) {
  const ExperimentConfig exp = cfg.resolved_experiment();
  const ScanResult result = scan(exp);
  Artifacts a;
  a.csv_files.emplace_back("scan", scan_body(result));
  a.data["scan"] = scan_to_json(result);
  fit_into(a.summary, "singles_d1", result.positions_nm, result.singles_d1);
  fit_into(a.summary, "singles_d2", result.positions_nm, result.singles_d2);
  fit_into(a.summary, "coincidence", result.positions_nm, result.coincidence);
  // Period doubling is judged between the one-pair singles fringe and the
  // two-pair coincidence fringe over the same positions and overlap.
  ExperimentConfig one = exp, two = exp;
  one.pair_number = 1;
  two.pair_number = 2;
  const ScanResult one_scan = exp.pair_number == 1 ? result : scan(one);
  const ScanResult two_scan = exp.pair_number == 2 ? result : scan(two);
  Json ref = Json::object();
  fit_into(ref, "one_pair_singles", one_scan.positions_nm, one_scan.singles_d1);
  fit_into(ref, "two_pair_coincidence", two_scan.positions_nm, two_scan.coincidence);
  for (const auto& [k, v] : ref.items()) a.summary[k] = v;
  if (ref.contains("one_pair_singles_period_nm") && ref.contains("two_pair_coincidence_period_nm"))
    a.summary["period_ratio"] =
        ref["two_pair_coincidence_period_nm"].get<double>() / ref["one_pair_singles_period_nm"].get<double>();
  // Fundamental of the one-pair fringe in scan coordinates.
  const double fundamental = exp.idler_wavelength_nm / exp.optical_path_nm(1.0);
  if (result.size() >= 5) {
    const auto cmp = compare_classical_quantum(result, fundamental);
    a.summary["classical_product_second_harmonic_visibility"] = cmp.classical.second_visibility();
    a.summary["coincidence_second_harmonic_visibility"] = cmp.quantum.second_visibility();
  }
  a.summary["model_fringe_visibility"] = fringe_visibility(exp);
  return a;
}

inline Artifacts run_envelope(const ToolkitConfig& base) {
  const ToolkitConfig cfg = synced(base);
  const JointSpectralAmplitude jsa = apply_filter(build_jsa(cfg.source), Arm::signal, cfg.filter);
  ExperimentConfig exp = cfg.experiment;
  exp.position_convention = cfg.envelope_convention;

  std::vector<Extremum> extrema;
  std::ostringstream extrema_csv;
  extrema_csv << "position_nm,max_coincidence,min_coincidence,visibility\n";
  Json extrema_json = Json::array();
  for (double center : cfg.envelope_positions_nm) {
    const auto local = linspace(center - 0.5 * cfg.envelope_window_nm, center + 0.5 * cfg.envelope_window_nm,
                                cfg.envelope_window_points);
    const ScanResult r = fringe_with_envelope(exp, jsa, local);
    const auto& channel = exp.pair_number == 1 ? r.singles_d1 : r.coincidence;
    const Extremum e = local_extremum(center, channel);
    extrema.push_back(e);
    const double v = visibility(e.max, e.min);
    extrema_csv << format_number(center) << ',' << format_number(e.max) << ',' << format_number(e.min) << ','
                << format_number(v) << '\n';
    extrema_json.push_back({{"position_nm", center}, {"max", e.max}, {"min", e.min}, {"visibility", v}});
  }

  const auto curve_pos = linspace(-cfg.envelope_curve_half_range_nm, cfg.envelope_curve_half_range_nm,
                                  cfg.envelope_curve_points);
  std::vector<double> delays;
  for (double x : curve_pos) delays.push_back(exp.optical_path_nm(x) * 1e-9 / kSpeedOfLight);
  const auto env = coincidence_envelope(jsa, delays);
  std::ostringstream curve_csv;
  curve_csv << "position_nm,delay_s,idler_coherence,fringe_visibility\n";
  Json curve_json = Json::array();
  for (std::size_t k = 0; k < env.size(); ++k) {
    ExperimentConfig local = exp;
    local.gamma = exp.gamma * env[k].visibility;
    const double vf = fringe_visibility(local);
    curve_csv << format_number(curve_pos[k]) << ',' << format_number(env[k].delay_s) << ','
              << format_number(env[k].visibility) << ',' << format_number(vf) << '\n';
    curve_json.push_back({{"position_nm", curve_pos[k]},
                          {"delay_s", env[k].delay_s},
                          {"idler_coherence", env[k].visibility},
                          {"fringe_visibility", vf}});
  }

  // Carrier period from a short fringe at the balanced position.
  ExperimentConfig carrier = cfg.experiment;
  carrier.position_convention = PositionConvention::optical_path;
  const auto carrier_pos = linspace(-2.0 * carrier.idler_wavelength_nm, 2.0 * carrier.idler_wavelength_nm, 201);
  const ScanResult center_scan = fringe_with_envelope(carrier, jsa, carrier_pos);

  Artifacts a;
  a.csv_files.emplace_back("envelope_extrema", extrema_csv.str());
  a.csv_files.emplace_back("envelope_curve", curve_csv.str());
  a.csv_files.emplace_back("envelope_center_scan", scan_body(center_scan));
  a.data["extrema"] = extrema_json;
  a.data["curve"] = curve_json;
  a.data["center_scan"] = scan_to_json(center_scan);
  const double half = envelope_half_width(jsa);
  a.summary["idler_coherence_half_width_s"] = half;
  a.summary["idler_coherence_half_width_path_um"] = half * kSpeedOfLight * 1e6;
  fit_into(a.summary, "carrier", center_scan.positions_nm,
           exp.pair_number == 1 ? center_scan.singles_d1 : center_scan.coincidence);
  try {
    const EnvelopeFit ef = fit_envelope(extrema);
    a.summary["envelope_center_nm"] = ef.center;
    a.summary["envelope_fwhm_nm"] = ef.width_fwhm;
    a.summary["envelope_peak_visibility"] = ef.peak_visibility;
  } catch (const FitError& e) {
    a.summary["envelope_fit_error"] = e.what();
  }
  return a;
}

inline Artifacts run_hom(const ToolkitConfig& cfg) {
  const double t = cfg.experiment.bs_transmission;
  const double r2 = 1.0 - t * t;
  Artifacts a;
  a.summary["cross_term_coincidence_balanced"] = hom_cross_term_check();
  a.summary["cross_term_coincidence_configured"] = hom_cross_term_check(t);
  a.summary["expected_configured"] = (t * t - r2) * (t * t - r2);
  std::ostringstream csv;
  csv << "bs_transmission,cross_term_coincidence\n";
  Json rows = Json::array();
  for (double tt : linspace(0.0, 1.0, 21)) {
    const double p = hom_cross_term_check(tt);
    csv << format_number(tt) << ',' << format_number(p) << '\n';
    rows.push_back({{"bs_transmission", tt}, {"cross_term_coincidence", p}});
  }
  a.csv_files.emplace_back("hom", csv.str());
  a.data["hom"] = rows;
  return a;
}

inline Artifacts run_emission(const ToolkitConfig& cfg) {
  const EmissionRates blocked = emission_check(cfg.gain_epsilon, true);
  const EmissionRates open = emission_check(cfg.gain_epsilon, false);
  Artifacts a;
  std::ostringstream csv;
  csv << "i1_path,singles_rate_s2,pair_rate_s2\n"
      << "blocked," << format_number(blocked.singles_rate_s2) << ',' << format_number(blocked.pair_rate_s2) << '\n'
      << "unblocked," << format_number(open.singles_rate_s2) << ',' << format_number(open.pair_rate_s2) << '\n';
  a.csv_files.emplace_back("emission", csv.str());
  a.data["blocked"] = {{"singles_rate_s2", blocked.singles_rate_s2}, {"pair_rate_s2", blocked.pair_rate_s2}};
  a.data["unblocked"] = {{"singles_rate_s2", open.singles_rate_s2}, {"pair_rate_s2", open.pair_rate_s2}};
  a.summary["singles_ratio"] =
      blocked.singles_rate_s2 > 0 ? open.singles_rate_s2 / blocked.singles_rate_s2 : 1.0;
  a.summary["pair_ratio"] = blocked.pair_rate_s2 > 0 ? open.pair_rate_s2 / blocked.pair_rate_s2 : 1.0;
  return a;
}

inline Artifacts run_fit(const ToolkitConfig& cfg, std::uint64_t seed) {
  ScanResult data;
  Artifacts a;
  if (!cfg.input_scan.empty()) {
    std::ifstream in(cfg.input_scan);
    if (!in) throw IoError("cannot open input scan '" + cfg.input_scan + "'");
    data = read_scan_csv(in);
  } else {
    data = synthesize_counts(scan(cfg.resolved_experiment()), cfg.total_events, seed);
    a.csv_files.emplace_back("counts", scan_body(data));
    a.data["counts"] = scan_to_json(data);
  }
  const auto& ys = cfg.fit_channel == "singles_d1"   ? data.singles_d1
                   : cfg.fit_channel == "singles_d2" ? data.singles_d2
                                                     : data.coincidence;
  const FitResult fit = fit_sinusoid(data.positions_nm, ys);
  a.summary["channel"] = cfg.fit_channel;
  const Json fitted = fit_to_json(fit);
  for (const auto& [k, v] : fitted.items()) a.summary[k] = v;
  return a;
}

inline Artifacts run_jsa(const ToolkitConfig& base) {
  const ToolkitConfig cfg = synced(base);
  const JointSpectralAmplitude raw = build_jsa(cfg.source);
  const JointSpectralAmplitude filtered = apply_filter(raw, Arm::signal, cfg.filter);
  Artifacts a;
  for (const auto& [name, jsa] : {std::pair{std::string("jsa"), &raw}, std::pair{std::string("jsa_filtered"), &filtered}}) {
    std::ostringstream re, im;
    write_jsa_csv(re, *jsa, JsaComponent::real, "");
    write_jsa_csv(im, *jsa, JsaComponent::imag, "");
    a.csv_files.emplace_back(name + "_real", re.str());
    a.csv_files.emplace_back(name + "_imag", im.str());
    Json values = Json::array();
    for (Eigen::Index r = 0; r < jsa->values.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < jsa->values.cols(); ++c) row.push_back(jsa->values(r, c).real());
      values.push_back(row);
    }
    a.data[name] = {{"signal_axis", jsa->grid.signal_axis()}, {"idler_axis", jsa->grid.idler_axis()},
                    {"real", values}};
  }
  const auto s_raw = schmidt_analysis(raw);
  const auto s_filt = schmidt_analysis(filtered);
  a.summary["jsi_correlation"] = jsi_correlation(raw);
  a.summary["schmidt_number"] = s_raw.schmidt_number;
  a.summary["purity"] = s_raw.purity;
  a.summary["filtered_schmidt_number"] = s_filt.schmidt_number;
  a.summary["filtered_purity"] = s_filt.purity;
  a.summary["filter_transmission"] = apply_filter(raw, Arm::signal, cfg.filter, false).weight();
  const double half = envelope_half_width(filtered);
  a.summary["idler_coherence_half_width_s"] = half;
  return a;
}

}  // namespace detail

/// Executes a scenario and writes its artifacts. Throws on failure; use
/// run_and_report for exit-code mapping.
inline void run(const RunManifest& manifest, std::ostream& log) {
  const ToolkitConfig cfg = manifest.config_path ? parse_config(*manifest.config_path) : ToolkitConfig{};
  const std::string echo = echo_config(cfg);
  log << "scenario = " << scenario_name(manifest.scenario) << "\nseed = " << manifest.seed << "\n" << echo;

  detail::Artifacts art;
  switch (manifest.scenario) {
    case Scenario::scan: art = detail::run_scan(cfg); break;
    case Scenario::envelope: art = detail::run_envelope(cfg); break;
    case Scenario::hom: art = detail::run_hom(cfg); break;
    case Scenario::emission: art = detail::run_emission(cfg); break;
    case Scenario::fit: art = detail::run_fit(cfg, manifest.seed); break;
    case Scenario::jsa: art = detail::run_jsa(cfg); break;
  }

  namespace fs = std::filesystem;
  const fs::path dir(manifest.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  const std::string run_echo =
      "scenario = " + scenario_name(manifest.scenario) + "\nseed = " + std::to_string(manifest.seed) + "\n" + echo;
  const std::string header = comment_header(run_echo);
  if (manifest.format == OutputFormat::csv) {
    for (const auto& [name, body] : art.csv_files) detail::write_file(dir / (name + ".csv"), header + body);
    std::string summary = header;
    for (const auto& [k, v] : art.summary.items()) summary += k + " = " + detail::summary_value(v) + "\n";
    detail::write_file(dir / "summary.txt", summary);
  } else {
    detail::Json doc = json_header(cfg);
    doc["scenario"] = scenario_name(manifest.scenario);
    doc["seed"] = manifest.seed;
    doc["data"] = art.data;
    doc["summary"] = art.summary;
    detail::write_file(dir / "results.json", doc.dump(2) + "\n");
  }
  for (const auto& [k, v] : art.summary.items()) log << "summary." << k << " = " << detail::summary_value(v) << "\n";
}

/// run() with errors mapped to exit codes 0/1/2/3 (ok/config/domain/io).
inline int run_and_report(const RunManifest& manifest, std::ostream& log, std::ostream& err) {
  try {
    run(manifest, log);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace zwm
