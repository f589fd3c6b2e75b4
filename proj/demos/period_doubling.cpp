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

// Prints the one-pair singles fringe and the two-pair coincidence fringe over
// two idler wavelengths of path difference, with their fitted periods.

#include <cstdio>

#include "zwm/zwm.hpp"

int main() {
  zwm::ExperimentConfig cfg;
  cfg.scan_positions_nm = zwm::linspace(0.0, 2.0 * cfg.idler_wavelength_nm, 81);

  cfg.pair_number = 1;
  const zwm::ScanResult one = zwm::scan(cfg);
  cfg.pair_number = 2;
  const zwm::ScanResult two = zwm::scan(cfg);

  std::printf("%12s %12s %12s\n", "path_nm", "singles(n=1)", "coinc(n=2)");
  for (std::size_t i = 0; i < one.size(); i += 4)
    std::printf("%12.1f %12.6f %12.6f\n", one.positions_nm[i], one.singles_d1[i], two.coincidence[i]);

  const auto singles = zwm::fit_sinusoid(one.positions_nm, one.singles_d1);
  const auto coinc = zwm::fit_sinusoid(two.positions_nm, two.coincidence);
  std::printf("singles period %.4f nm, visibility %.4f\n", singles.period, singles.visibility);
  std::printf("coincidence period %.4f nm, visibility %.4f\n", coinc.period, coinc.visibility);
  return 0;
}
