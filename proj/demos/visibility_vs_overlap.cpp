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

// Sweeps the idler overlap and compares the one-pair singles visibility, the
// two-pair coincidence visibility, and the classical product of singles.

#include <cstdio>

#include "zwm/zwm.hpp"

int main() {
  std::printf("%8s %14s %14s %18s\n", "gamma", "V_singles", "V_coinc", "V_product(2phi)");
  for (double gamma : {0.0, 0.25, 0.5, 0.7, 0.75, 1.0}) {
    zwm::ExperimentConfig cfg;
    cfg.gamma = gamma;
    cfg.pair_number = 1;
    const double vs = zwm::fringe_visibility(cfg);
    cfg.pair_number = 2;
    const double vc = zwm::fringe_visibility(cfg);

    cfg.pair_number = 1;
    cfg.scan_positions_nm = zwm::linspace(0.0, 3.0 * cfg.idler_wavelength_nm, 121);
    const auto singles = zwm::scan(cfg);
    const auto product = zwm::harmonic_content(singles.positions_nm, zwm::classical_product(singles),
                                               cfg.idler_wavelength_nm);
    std::printf("%8.3f %14.6f %14.6f %18.6f\n", gamma, vs, vc, product.second_visibility());
  }
  return 0;
}
