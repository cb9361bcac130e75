// Copyright 2026 The spatialent Authors
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

#include <cstdint>
#include <string>

namespace spatialent::testing {

/// Outcome of one randomized property suite.
struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;  // empty when every case passed

  bool ok() const { return failures == 0 && cases > 0; }
};

/// Random chains of squeezing, phase, mode mixing and loss; the minimum
/// symplectic eigenvalue must stay >= 1 - 1e-9 after every operation.
SuiteResult physicality_closure(int chains = 1000, std::uint64_t seed = 20260101);

/// Unmixed product states (independent squeezed thermal modes, phases and
/// losses, no basis rotation) never violate I >= 1.
SuiteResult separable_bound(int cases = 500, std::uint64_t seed = 20260102);

/// I is non-decreasing in the source phase offset on [0, pi/2] and
/// non-increasing in the transmittance, for random squeezing levels.
SuiteResult monotone_degradation(int cases = 50, std::uint64_t seed = 20260103);

/// Same seed: bit-identical photocurrents and scan traces; different seed:
/// different records.
SuiteResult seeded_determinism(int cases = 5, std::uint64_t seed = 20260104);

/// bandpass(bandpass(s)) equals bandpass(s) for random series and bands.
SuiteResult filter_idempotence(int cases = 50, std::uint64_t seed = 20260105);

/// parse(serialize(c)) == c for random configs and every bundled scenario.
SuiteResult config_round_trip(int cases = 200, std::uint64_t seed = 20260106);

}  // namespace spatialent::testing
