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

#include "spatialent/entanglement.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "spatialent/errors.hpp"
#include "spatialent/gouy.hpp"

using namespace spatialent;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianState chain(double db, double offset) {
  GaussianState st = vacuum({ModeLabel::hg(1, 0), ModeLabel::hg(0, 1)});
  st = apply_squeezed_thermal(st, "HG10", {-db, db, 0.0});
  st = apply_squeezed_thermal(st, "HG01", {-db, db, offset});
  const auto g = gouy_phase(CylLensSystem::mode_matched(0.25, std::numbers::sqrt2 * 0.25));
  st = apply_phase(st, "HG10", g.relative_phase(1, 0));
  st = apply_phase(st, "HG01", g.relative_phase(0, 1));
  return apply_basis_rotation(st, "HG10", "HG01", kPi / 4);
}

VarianceTrace flat(const std::string& name, std::size_t n, double v) {
  VarianceTrace t;
  t.channel = name;
  for (std::size_t k = 0; k < n; ++k) {
    t.phi.push_back(kPi * static_cast<double>(k) / static_cast<double>(n));
    t.variance.push_back(v);
  }
  return t;
}

}  // namespace

TEST(Inseparability, vacuum_is_one) {
  const auto r = inseparability_analytic(vacuum({ModeLabel::hg(1, 0), ModeLabel::hg(0, 1)}), "HG10", "HG01");
  EXPECT_NEAR(r.i_raw, 1.0, 1e-15);
  EXPECT_EQ(r.phi0, 0.0);
}

TEST(Inseparability, ideal_chain) {
  // Independent numpy reference.
  const auto r = inseparability_analytic(chain(4.0, 0.0), "HG10", "HG01");
  EXPECT_NEAR(r.i_raw, 0.3981071705534972, 1e-12);
  EXPECT_NEAR(r.phi0, kPi / 4, 1e-6);
  EXPECT_NEAR(r.v_sum, r.v_diff, 1e-12);
}

TEST(Inseparability, phase_offset_references) {
  const auto r = inseparability_analytic(chain(4.0, kPi / 7), "HG10", "HG01");
  EXPECT_NEAR(r.i_raw, 0.5027721471619313, 1e-9);
  EXPECT_NEAR(r.phi0, 1.00980, 1e-4);
  EXPECT_NEAR(inseparability_analytic(chain(4.0, kPi / 14), "HG10", "HG01").i_raw,
              0.4246056001829626, 1e-9);
}

TEST(Inseparability, correction_never_raises_subshot_values) {
  InseparabilityOptions opt;
  opt.electronic_noise = 0.05;
  const auto r = inseparability_analytic(chain(4.0, kPi / 7), "HG10", "HG01", opt);
  EXPECT_LE(r.i_corrected, r.i_raw);
  EXPECT_NEAR(r.i_corrected, 0.5027721471619313, 1e-9);
  opt.correction = NoiseCorrection::kPlainSubtraction;
  EXPECT_LT(inseparability_analytic(chain(4.0, kPi / 7), "HG10", "HG01", opt).i_corrected, r.i_corrected);
}

TEST(Inseparability, options_validated) {
  InseparabilityOptions opt;
  opt.grid_points = 2;
  EXPECT_THROW(inseparability_analytic(chain(1.0, 0.0), "HG10", "HG01", opt), InvalidParameter);
  opt.grid_points = 64;
  opt.electronic_noise = 1.0;
  EXPECT_THROW(inseparability_analytic(chain(1.0, 0.0), "HG10", "HG01", opt), InvalidParameter);
  EXPECT_THROW(inseparability_analytic(chain(1.0, 0.0), "HG10", "HG20"), UnknownMode);
}

TEST(ElectronicNoise, correction_examples) {
  EXPECT_NEAR(correct_electronic_noise(0.70, 0.05), 0.6842105263157894, 1e-15);
  EXPECT_NEAR(correct_electronic_noise(0.70, 0.05, 1.0, NoiseCorrection::kPlainSubtraction), 0.65,
              1e-15);
  EXPECT_NEAR(correct_electronic_noise(1.0, 0.05), 1.0, 1e-15);
  EXPECT_NEAR(correct_electronic_noise(measured_variance(0.4, 0.05), 0.05), 0.4, 1e-15);
  EXPECT_THROW(correct_electronic_noise(0.05, 0.05), NoiseFloorError);
  EXPECT_THROW(correct_electronic_noise(0.7, 1.0), InvalidParameter);
  EXPECT_THROW(correct_electronic_noise(0.7, -0.1), InvalidParameter);
  EXPECT_EQ(parse_noise_correction(to_string(NoiseCorrection::kPlainSubtraction)),
            NoiseCorrection::kPlainSubtraction);
  EXPECT_THROW(parse_noise_correction("none"), InvalidParameter);
}

TEST(FromTraces, flat_traces) {
  const auto one = inseparability_from_traces(flat("sum", 16, 1.0), flat("diff", 16, 1.0));
  EXPECT_DOUBLE_EQ(one.i_raw, 1.0);
  EXPECT_EQ(one.phi0, 0.0);
  const double v = 0.6760829753919818;
  EXPECT_NEAR(inseparability_from_traces(flat("sum", 16, v), flat("diff", 16, v)).i_raw, v, 1e-15);
}

TEST(FromTraces, input_errors) {
  EXPECT_THROW(inseparability_from_traces(flat("sum", 16, 1.0), flat("diff", 15, 1.0)), InvalidInput);
  auto shifted = flat("diff", 16, 1.0);
  for (auto& p : shifted.phi) p += 0.01;
  EXPECT_THROW(inseparability_from_traces(flat("sum", 16, 1.0), shifted), InvalidInput);
  auto narrow = flat("sum", 16, 1.0);
  for (auto& p : narrow.phi) p *= 0.5;
  EXPECT_THROW(inseparability_from_traces(narrow, narrow), InvalidInput);
  EXPECT_THROW(inseparability_from_traces(flat("sum", 2, 1.0), flat("diff", 2, 1.0)), InvalidInput);
}

TEST(FromTraces, analytic_grid_matches_optimizer) {
  const auto st = chain(4.0, kPi / 7);
  std::vector<double> phis;
  for (int k = 0; k < 512; ++k) phis.push_back(kPi * k / 512);
  const auto s = analytic_trace(st, TraceChannel::kSum, phis);
  const auto d = analytic_trace(st, TraceChannel::kDiff, phis);
  const auto r = inseparability_from_traces(s, d);
  EXPECT_NEAR(r.i_raw, 0.5027721471619313, 1e-5);
  EXPECT_NEAR(r.phi0, 1.00980, 5e-3);
}

TEST(FromTraces, monte_carlo_agrees_with_analytic) {
  const auto st = chain(4.0, 0.0);
  MeasurementConfig c;
  c.duration_s = 0.1;
  c.segment_s = 0.003125;
  c.scan = PhaseScan{};
  c.seed = 1;
  c.electronic_noise_fraction = 0.0;
  const TraceChannel chans[] = {TraceChannel::kSum, TraceChannel::kDiff};
  const auto res = scan_traces(st, {1.0, 1.0}, c, chans);
  const auto r = inseparability_from_traces(res[0].montecarlo, res[1].montecarlo);
  ASSERT_GT(r.uncertainty, 0.0);
  // Windows average over their phase excursion, so compare against the
  // expectation trace rather than the pointwise optimum.
  const auto e = inseparability_from_traces(res[0].analytic, res[1].analytic);
  EXPECT_LT(std::abs(r.i_raw - e.i_raw), 3.0 * r.uncertainty);
  EXPECT_LT(r.i_raw, 0.5);
}

TEST(Inseparability, stronger_squeezing_lowers_criterion) {
  double prev = 1.0;
  for (double db : {0.5, 1.0, 2.0, 4.0, 6.0}) {
    const double i = inseparability_analytic(chain(db, 0.0), "HG10", "HG01").i_raw;
    EXPECT_LT(i, prev) << db;
    EXPECT_NEAR(i, std::pow(10.0, -db / 10.0), 1e-12);
    prev = i;
  }
}

TEST(ElectronicNoise, correction_monotone_in_measurement) {
  double prev = 0.0;
  for (double v = 0.06; v < 3.0; v += 0.1) {
    const double c = correct_electronic_noise(v, 0.05);
    EXPECT_GT(c, prev);
    prev = c;
  }
}
