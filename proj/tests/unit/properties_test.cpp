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

#include "../support/properties.hpp"

#include "gtest/gtest.h"

using namespace spatialent::testing;

namespace {

void expect_ok(const SuiteResult& r) {
  EXPECT_GT(r.cases, 0);
  EXPECT_TRUE(r.ok()) << r.name << ": " << r.failures << " failures, first: " << r.first_failure;
}

}  // namespace

TEST(Properties, physicality_closure) { expect_ok(physicality_closure()); }
TEST(Properties, separable_bound) { expect_ok(separable_bound()); }
TEST(Properties, monotone_degradation) { expect_ok(monotone_degradation()); }
TEST(Properties, seeded_determinism) { expect_ok(seeded_determinism()); }
TEST(Properties, filter_idempotence) { expect_ok(filter_idempotence()); }
TEST(Properties, config_round_trip) { expect_ok(config_round_trip()); }
