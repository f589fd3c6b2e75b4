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

#pragma once

#include "zwm/config.hpp"
#include "zwm/errors.hpp"
#include "zwm/fock.hpp"
#include "zwm/fringe.hpp"
#include "zwm/interferometer.hpp"
#include "zwm/optics.hpp"
#include "zwm/report.hpp"
#include "zwm/runner.hpp"
#include "zwm/spectral.hpp"
#include "zwm/version.hpp"
