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

// Command-line front end: runs one scenario and writes its data files.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "zwm/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Induced-coherence interferometer simulator and fringe analysis"};
  std::string scenario = "scan";
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
  std::string format = "csv";
  app.add_option("--scenario", scenario, "scan | envelope | hom | emission | fit | jsa")->capture_default_str();
  app.add_option("--config", config, "key = value configuration file (defaults when omitted)");
  app.add_option("--out", out, std::string("output directory (default: $") + zwm::kOutputDirEnv + " or .)");
  app.add_option("--seed", seed, "seed for synthetic count generation")->capture_default_str();
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_flag_callback("--print-defaults", [] {
    for (const auto& k : zwm::config_keys())
      std::cout << "# " << k.doc << "\n" << k.name << " = " << k.get(zwm::ToolkitConfig{}) << "\n";
    std::exit(0);
  }, "print every configuration key with its default and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zwm::kExitConfig;
  }

  zwm::RunManifest manifest;
  try {
    manifest.scenario = zwm::parse_scenario(scenario);
    manifest.format = zwm::parse_format(format);
  } catch (const zwm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return zwm::kExitConfig;
  }
  manifest.config_path = config;
  manifest.output_dir = zwm::resolve_output_dir(out);
  manifest.seed = seed;
  return zwm::run_and_report(manifest, std::cout, std::cerr);
}
