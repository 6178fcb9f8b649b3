#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sclink/errors.hpp"
#include "sclink/link_model.hpp"
#include "sclink/units.hpp"
#include "test_support.hpp"

using namespace sclink;

TEST(BandPlan, ClGridHas73Channels) {
  const auto grid = build_grid(BandPlan::cl(), 150.0, 140.0, 2.0);
  EXPECT_EQ(grid.size(), 73u);
  EXPECT_EQ(grid.count(Band::S), 0u);
  EXPECT_EQ(grid.count(Band::C) + grid.count(Band::L), 73u);
  EXPECT_EQ(grid.bands(), (std::vector<Band>{Band::C, Band::L}));
}

TEST(BandPlan, SclGridHas127ChannelsWith54InS) {
  const auto grid = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  EXPECT_EQ(grid.size(), 127u);
  EXPECT_EQ(grid.count(Band::S), 54u);
  EXPECT_EQ(grid.count(Band::S) + grid.count(Band::C) + grid.count(Band::L), 127u);
}

TEST(BandPlan, LaunchPowerFromDbm) {
  const auto grid = build_grid(BandPlan::cl(), 150.0, 140.0, 2.0);
  for (const auto& ch : grid.channels()) EXPECT_NEAR(ch.launch_power_mw, 1.5849, 1e-4);
}

TEST(BandPlan, GridIsUniformAndIncreasing) {
  const auto grid = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_NEAR(grid[i].frequency_thz - grid[i - 1].frequency_thz, 0.150, 1e-9);
  }
  // Channels carry the label of the window they fall in.
  for (const auto& ch : grid.channels()) {
    const double nm = ch.wavelength_nm();
    if (ch.band == Band::L) EXPECT_GE(nm, 1565.0);
    if (ch.band == Band::C) EXPECT_TRUE(nm >= 1530.0 && nm <= 1565.0);
    if (ch.band == Band::S) EXPECT_TRUE(nm >= 1460.0 && nm <= 1530.0);
    EXPECT_LE(nm, 1620.0 + 1e-9);
  }
}

TEST(BandPlan, RebuildIsBitIdentical) {
  const auto a = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  const auto b = build_grid(BandPlan::scl(), 150.0, 140.0, 2.0);
  EXPECT_TRUE(a == b);
}

TEST(BandPlan, RejectsBadPlans) {
  EXPECT_THROW(build_grid(BandPlan{}, 150.0, 140.0, 2.0), ValidationError);
  // Spacing must exceed the symbol rate.
  EXPECT_THROW(build_grid(BandPlan::cl(), 100.0, 140.0, 2.0), ValidationError);
  BandPlan gap = BandPlan::cl();
  gap.bands[1].min_wavelength_nm = 1570.0;
  EXPECT_THROW(gap.validate(), ValidationError);
  // Pinned counts are only allowed on the shortest-wavelength band.
  BandPlan pinned = BandPlan::scl();
  pinned.bands[1].channel_count = 10;
  EXPECT_THROW(pinned.validate(), ValidationError);
}

TEST(BandPlan, ParsesBandLabels) {
  EXPECT_EQ(parse_band("S"), Band::S);
  EXPECT_EQ(parse_band("C"), Band::C);
  EXPECT_EQ(parse_band("L"), Band::L);
  EXPECT_FALSE(parse_band("X").has_value());
  EXPECT_EQ(band_name(Band::C), "C");
}

TEST(Attenuation, Is02At1550) {
  const auto fiber = default_fiber();
  EXPECT_NEAR(attenuation_at(fiber, 1550.0), 0.200, 1e-12);
}

TEST(Attenuation, FlatAtMinimumLossWavelength) {
  const auto fiber = default_fiber();
  const double h = 1.0;
  const double slope = (attenuation_at(fiber, kMinimumLossWavelengthNm + h) -
                        attenuation_at(fiber, kMinimumLossWavelengthNm - h)) /
                       (2.0 * h);
  EXPECT_NEAR(slope, 0.0, 1e-9);
  for (double nm = 1400.0; nm <= 1640.0; nm += 5.0) {
    EXPECT_GE(attenuation_at(fiber, nm), attenuation_at(fiber, kMinimumLossWavelengthNm) - 1e-15);
  }
}

TEST(Attenuation, ShippedTableMatchesBuiltInAndDirectLookup) {
  const auto rows = sclink::testing::read_two_columns(
      sclink::testing::data_path("fiber_attenuation.tsv"));
  ASSERT_GE(rows.size(), 2u);
  const auto fiber = default_fiber();
  for (const auto& [nm, db] : rows) EXPECT_DOUBLE_EQ(attenuation_at(fiber, nm), db);

  // 1460 nm by linear interpolation between the bracketing rows.
  const auto hi = std::find_if(rows.begin(), rows.end(), [](auto& r) { return r.first >= 1460.0; });
  ASSERT_NE(hi, rows.begin());
  const auto lo = hi - 1;
  const double t = (1460.0 - lo->first) / (hi->first - lo->first);
  const double expected = hi->first == 1460.0 ? hi->second : lo->second + t * (hi->second - lo->second);
  EXPECT_NEAR(attenuation_at(fiber, 1460.0), expected, 1e-12);
}

TEST(Attenuation, OutOfRangeThrows) {
  const auto fiber = default_fiber();
  EXPECT_THROW(attenuation_at(fiber, 1200.0), RangeError);
  EXPECT_THROW(attenuation_at(fiber, 1700.0), RangeError);
}

TEST(RamanGain, ZeroAtZeroShift) {
  const auto fiber = default_fiber();
  EXPECT_EQ(raman_gain(fiber, 200.0, 200.0), 0.0);
}

TEST(RamanGain, PeakAt13_2THzMatchesShippedPeakRow) {
  const auto rows = sclink::testing::read_two_columns(sclink::testing::data_path("raman_gain.tsv"));
  const auto peak = std::max_element(rows.begin(), rows.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; });
  EXPECT_NEAR(peak->first, 13.2, 1e-12);
  const auto fiber = default_fiber();
  EXPECT_NEAR(raman_peak_shift_thz(fiber), 13.2, 1e-12);
  EXPECT_NEAR(raman_gain(fiber, 200.0 + 13.2, 200.0), peak->second, 1e-12);
  // The built-in table is the shipped one.
  for (const auto& [shift, g] : rows) {
    EXPECT_DOUBLE_EQ(fiber.raman_gain_per_w_km(shift), g);
  }
}

TEST(RamanGain, SinglePeakedAndNonNegativeOnShippedTable) {
  const auto rows = sclink::testing::read_two_columns(sclink::testing::data_path("raman_gain.tsv"));
  bool descending = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].second, 0.0);
    if (rows[i].first > 15.0 || i == 0) continue;
    const double d = rows[i].second - rows[i - 1].second;
    if (d < 0.0) descending = true;
    if (descending) {
      EXPECT_LE(d, 0.0) << "second rise at " << rows[i].first << " THz";
    }
  }
}

TEST(RamanGain, LossSideIsScaledByFrequencyRatio) {
  const auto fiber = default_fiber();
  const double fp = 210.0, fs = 200.0;
  const double gain = raman_gain(fiber, fp, fs);
  const double loss = raman_gain(fiber, fs, fp);
  EXPECT_GT(gain, 0.0);
  EXPECT_NEAR(loss, -gain * fp / fs, 1e-15);
}

TEST(RamanGain, BeyondTableIsZero) {
  const auto fiber = default_fiber();
  EXPECT_EQ(raman_gain(fiber, 222.0, 182.0), 0.0);
  EXPECT_THROW(raman_gain(fiber, 240.0, 200.0), RangeError);
}
