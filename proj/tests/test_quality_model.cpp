#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "sclink/errors.hpp"
#include "sclink/quality_model.hpp"
#include "sclink/units.hpp"
#include "oracles.hpp"

using namespace sclink;

namespace {

ChannelGrid scl_grid() { return build_grid(BandPlan::scl(), 150.0, 140.0, 2.0); }

RamanPumpSet four_pumps() {
  return RamanPumpSet{{{1365.0, 200.0}, {1395.0, 180.0}, {1425.0, 160.0}, {1450.0, 120.0}}};
}

}  // namespace

TEST(LumpedAse, HandEvaluatedExample) {
  const AmplifierSpec amp{Band::C, 5.0, 39.81, 23.0};
  const double expected_w = 6.62607015e-34 * 193.4e12 * std::pow(10.0, 0.5) * 38.81 * 1.4e11;
  const double mw = lumped_ase_power(amp, 193.4, 140.0);
  EXPECT_NEAR(mw * 1e-3 / expected_w, 1.0, 1e-12);
  EXPECT_NEAR(mw * 1e-3, 2.20e-6, 0.01e-6);
}

TEST(LumpedAse, TransparentAmplifierAndLinearity) {
  EXPECT_EQ(lumped_ase_power(AmplifierSpec{Band::C, 5.0, 1.0, 23.0}, 193.4, 140.0), 0.0);
  const AmplifierSpec amp{Band::L, 6.0, 25.0, 23.0};
  EXPECT_NEAR(lumped_ase_power(amp, 188.0, 280.0), 2.0 * lumped_ase_power(amp, 188.0, 140.0),
              1e-18);
  EXPECT_THROW(lumped_ase_power(AmplifierSpec{Band::C, 5.0, 0.5, 23.0}, 193.4, 140.0),
               ValidationError);
}

TEST(DraAse, ZeroWithoutPumps) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto profile = propagate(grid, fiber, {});
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(dra_ase_power(profile, fiber, i, 140.0), 0.0);
}

TEST(DraAse, IncreasesWithPumpPower) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const SpanPropagator prop(grid, fiber);
  std::vector<double> prev(grid.size(), 0.0);
  for (double mw : {50.0, 100.0, 150.0, 200.0, 250.0}) {
    const auto profile = prop(RamanPumpSet{{{1425.0, mw}}});
    for (std::size_t i : grid.indices(Band::S)) {
      const double ase = dra_ase_power(profile, fiber, i, 140.0);
      EXPECT_GT(ase, prev[i]) << "channel " << i << " at " << mw << " mW";
      prev[i] = ase;
    }
  }
}

TEST(DraAse, ColdFiberLimitIsPureSpontaneousTerm) {
  EXPECT_LT(phonon_occupancy(13.2, 1e-3), 1e-300);
  EXPECT_NEAR(phonon_occupancy(13.2, 298.0),
              1.0 / std::expm1(6.62607015e-34 * 13.2e12 / (1.380649e-23 * 298.0)), 1e-15);
  const auto grid = scl_grid();
  auto fiber = default_fiber();
  const auto profile = propagate(grid, fiber, four_pumps());
  const std::size_t ch = grid.indices(Band::S).front();
  const double warm = dra_ase_power(profile, fiber, ch, 140.0);
  fiber.temperature_k = 1e-3;
  const double cold = dra_ase_power(profile, fiber, ch, 140.0);
  fiber.temperature_k = 1e-6;
  const double colder = dra_ase_power(profile, fiber, ch, 140.0);
  EXPECT_GT(cold, 0.0);
  EXPECT_LT(cold, warm);
  EXPECT_NEAR(cold, colder, 1e-15 * cold);
}

TEST(FormatCorrection, SixtyFourQamKurtosisFromMoments) {
  const double oracle = sclink::testing::qam_excess_kurtosis(8);

  const auto points = qam_constellation(64);
  ASSERT_EQ(points.size(), 64u);
  const double phi = excess_kurtosis(points);
  EXPECT_NEAR(phi, oracle, 1e-12);
  EXPECT_NEAR(phi, -0.6190, 0.0005);
  EXPECT_NEAR(NliOptions{}.excess_kurtosis, phi, 1e-12);
  EXPECT_NEAR(excess_kurtosis(qam_constellation(4)), -1.0, 1e-12);
  EXPECT_THROW(qam_constellation(8), ValidationError);
}

TEST(Nli, ZeroNonlinearityGivesZero) {
  const auto grid = scl_grid();
  auto fiber = default_fiber();
  fiber.gamma_per_w_km = 0.0;
  const auto integrals = effective_integrals(propagate(grid, default_fiber(), {}));
  for (std::size_t i = 0; i < grid.size(); i += 13) {
    EXPECT_EQ(nli_power(grid, fiber, integrals, i), 0.0);
  }
}

TEST(Nli, CubicInLaunchPower) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto integrals = effective_integrals(propagate(grid, fiber, four_pumps()));
  const auto doubled = grid.with_launch_power_mw(2.0 * grid[0].launch_power_mw);
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const double ratio = nli_power(doubled, fiber, integrals, i) / nli_power(grid, fiber, integrals, i);
    EXPECT_NEAR(ratio, 8.0, 0.08);
  }
}

TEST(Nli, SingleChannelSpmMatchesBruteForceGnIntegral) {
  const double nm = 1555.0;
  const double p_mw = 1.5849;
  const double rs = 140e9;
  const ChannelGrid grid({Channel{wavelength_nm_to_thz(nm), 140.0, p_mw, Band::C}}, 150.0);
  const auto fiber = default_fiber();
  const auto integrals = effective_integrals(propagate(grid, fiber, {}));
  const double closed = nli_power(grid, fiber, integrals, 0) * 1e-3;

  const double reference = sclink::testing::brute_force_spm_w(
      p_mw * 1e-3, rs, 0.2 * std::log(10.0) / 10.0 * 1e-3, 80e3, 1.13e-3,
      sclink::testing::beta2_from_dispersion(16.5, nm));
  EXPECT_NEAR(closed / reference, 1.0, 0.15) << "closed " << closed << " W, GN " << reference << " W";
}

TEST(Nli, CrossChannelTermMatchesBruteForceGnIntegral) {
  const double nm = 1555.0;
  const double p_mw = 1.5849;
  const double f0 = wavelength_nm_to_thz(nm);
  const double alpha = 0.2 * std::log(10.0) / 10.0 * 1e-3;
  const double beta2 = sclink::testing::beta2_from_dispersion(16.5, nm);
  const auto fiber = default_fiber();
  NliOptions plain;
  plain.format_correction = false;

  const ChannelGrid alone({Channel{f0, 140.0, p_mw, Band::C}}, 150.0);
  const double self = nli_power(alone, fiber, effective_integrals(propagate(alone, fiber, {})), 0, plain);
  const sclink::testing::RectChannel probe{0.0, 140e9, p_mw * 1e-3};
  const double self_ref = sclink::testing::brute_force_gn_w({probe}, alpha, 80e3, 1.13e-3, beta2, 0.1e9);

  for (double spacing_ghz : {150.0, 450.0}) {
    const ChannelGrid pair({Channel{f0, 140.0, p_mw, Band::C},
                            Channel{f0 + spacing_ghz * 1e-3, 140.0, p_mw, Band::C}},
                           spacing_ghz);
    const auto integrals = effective_integrals(propagate(pair, fiber, {}));
    const double cross = nli_power(pair, fiber, integrals, 0, plain) - self;
    const double cross_ref =
        sclink::testing::brute_force_gn_w({probe, {spacing_ghz * 1e9, 140e9, p_mw * 1e-3}}, alpha,
                                          80e3, 1.13e-3, beta2, 0.1e9) -
        self_ref;
    EXPECT_NEAR(cross * 1e-3 / cross_ref, 1.0, 0.15)
        << spacing_ghz << " GHz: closed " << cross << " mW, GN " << cross_ref * 1e3 << " mW";
  }
}

TEST(Nli, KernelAgreesWithDirectEvaluation) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto integrals = effective_integrals(propagate(grid, fiber, four_pumps()));
  for (bool corrected : {true, false}) {
    NliOptions opts;
    opts.format_correction = corrected;
    const NliKernel kernel(grid, fiber, opts);
    const auto fast = kernel(integrals);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(fast[i], nli_power(grid, fiber, integrals, i, opts), 1e-12 * fast[i]);
    }
  }
}

TEST(Nli, FormatCorrectionLowersCrossChannelTerm) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto integrals = effective_integrals(propagate(grid, fiber, {}));
  NliOptions off;
  off.format_correction = false;
  EXPECT_LT(NliOptions{}.xpm_scale(), 1.0);
  EXPECT_DOUBLE_EQ(off.xpm_scale(), 1.0);
  const std::size_t mid = grid.size() / 2;
  const double with = nli_power(grid, fiber, integrals, mid);
  const double without = nli_power(grid, fiber, integrals, mid, off);
  EXPECT_LT(with, without);
  // Over a 127-channel comb the cross-channel sum outweighs the self term.
  const double spm = spm_coefficient(fiber, grid[mid].wavelength_nm(), 140.0, integrals[mid].length_km) *
                     std::pow(grid[mid].launch_power_mw * 1e-3, 3) * 1e3;
  EXPECT_GT(without, 2.0 * spm);
}

TEST(ChannelSnr, ReferenceExamples) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_NEAR(channel_snr(1.0, 0.0, 0.0, 100.0), 100.0, 1e-12);
  EXPECT_NEAR(channel_snr(1.0, 0.01, 0.0, 100.0), 50.0, 1e-12);
  EXPECT_NEAR(linear_to_db(channel_snr(1.0, 0.01, 0.0, 100.0)), 16.99, 0.01);
  EXPECT_NEAR(channel_snr(2.0, 0.01, 0.01, inf), 100.0, 1e-12);
}

TEST(ChannelSnr, MonotoneAndCappedByTransceiver) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  for (int k = 0; k < 1000; ++k) {
    const double ase = u(rng), nli = u(rng), extra = u(rng);
    const double base = channel_snr(1.5849, ase, nli, 100.0);
    EXPECT_LE(base, 100.0);
    EXPECT_LE(channel_snr(1.5849, ase + extra, nli, 100.0), base);
    EXPECT_LE(channel_snr(1.5849, ase, nli + extra, 100.0), base);
  }
}

TEST(Throughput, ShannonPerChannelAndBand) {
  const ChannelGrid one({Channel{193.0, 140.0, 1.0, Band::C}}, 150.0);
  const std::vector<double> snr{100.0};
  const auto t = band_throughput(one, snr);
  EXPECT_NEAR(t.total_tbps, 2.0 * 140e9 * std::log2(101.0) / 1e12, 1e-12);
  EXPECT_NEAR(t.total_tbps, 1.864, 1e-3);
  EXPECT_NEAR(t.per_band_tbps.at(Band::C), t.total_tbps, 0.0);

  const auto grid = scl_grid();
  const std::vector<double> zeros(grid.size(), 0.0);
  EXPECT_EQ(band_throughput(grid, zeros).total_tbps, 0.0);

  const std::vector<double> ceiling(grid.size(), 100.0);
  const auto full = band_throughput(grid, ceiling);
  EXPECT_NEAR(full.per_band_tbps.at(Band::S), 54.0 * t.total_tbps, 1e-9);
  double sum = 0.0;
  for (const auto& [band, tbps] : full.per_band_tbps) sum += tbps;
  EXPECT_NEAR(sum, full.total_tbps, 1e-9);
}
