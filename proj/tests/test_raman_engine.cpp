#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "sclink/errors.hpp"
#include "sclink/raman_engine.hpp"
#include "sclink/units.hpp"
#include "test_support.hpp"

using namespace sclink;

namespace {

ChannelGrid single_channel(double wavelength_nm, double power_mw = 1.0) {
  return ChannelGrid({Channel{wavelength_nm_to_thz(wavelength_nm), 140.0, power_mw, Band::C}}, 150.0);
}

ChannelGrid scl_grid() { return build_grid(BandPlan::scl(), 150.0, 140.0, 2.0); }
ChannelGrid cl_grid() { return build_grid(BandPlan::cl(), 150.0, 140.0, 2.0); }

RamanPumpSet four_pumps() {
  return RamanPumpSet{{{1365.0, 200.0}, {1395.0, 180.0}, {1425.0, 160.0}, {1450.0, 120.0}}};
}

RamanOptions tight(double step_km = 0.1) {
  RamanOptions o;
  o.step_km = step_km;
  o.tolerance = 1e-10;
  o.max_iterations = 1000;
  return o;
}

/// Linear interpolation over shipped (x, y) rows; zero beyond the last row.
double lookup(const std::vector<std::pair<double, double>>& rows, double x) {
  if (x <= rows.front().first) return rows.front().second;
  if (x >= rows.back().first) return x > rows.back().first ? 0.0 : rows.back().second;
  const auto hi = std::upper_bound(rows.begin(), rows.end(), x,
                                   [](double v, const auto& r) { return v < r.first; });
  const auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

/// Brute-force reference for a single backward pump: shoot on the pump power
/// at z = 0, integrating every wave forward together with RK4 at a 1 m step,
/// until the pump reaches its launch value at the span end. Returns signal
/// powers at z = L in mW.
class ShootingOracle {
 public:
  ShootingOracle(const ChannelGrid& grid, double pump_nm, double length_km)
      : ns_(static_cast<Eigen::Index>(grid.size())), length_km_(length_km) {
    const auto atten = sclink::testing::read_two_columns(
        sclink::testing::data_path("fiber_attenuation.tsv"));
    const auto gain = sclink::testing::read_two_columns(sclink::testing::data_path("raman_gain.tsv"));
    const Eigen::Index n = ns_ + 1;
    std::vector<double> f(static_cast<std::size_t>(n));
    alpha_.resize(n);
    launch_.resize(ns_);
    for (Eigen::Index i = 0; i < ns_; ++i) {
      f[static_cast<std::size_t>(i)] = grid[static_cast<std::size_t>(i)].frequency_thz;
      launch_[i] = grid[static_cast<std::size_t>(i)].launch_power_mw;
    }
    f.back() = constants::speed_of_light / (pump_nm * 1e-9) * 1e-12;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double nm = constants::speed_of_light / (f[static_cast<std::size_t>(i)] * 1e12) * 1e9;
      alpha_[i] = lookup(atten, nm) * std::log(10.0) / 10.0;
    }
    k_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double fi = f[static_cast<std::size_t>(i)], fj = f[static_cast<std::size_t>(j)];
        if (fj > fi) k_(i, j) = lookup(gain, fj - fi) * 1e-3;
        if (fj < fi) k_(i, j) = -(fi / fj) * lookup(gain, fi - fj) * 1e-3;
      }
    }
    sign_ = Eigen::VectorXd::Ones(n);
    sign_[ns_] = -1.0;
  }

  /// Signal powers at L and pump power at L for a pump power `p0` at z = 0.
  Eigen::VectorXd shoot(double p0) const {
    Eigen::VectorXd p(ns_ + 1);
    p.head(ns_) = launch_;
    p[ns_] = p0;
    const double h = 0.001;
    const int steps = static_cast<int>(std::lround(length_km_ / h));
    auto rhs = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return sign_.cwiseProduct(x.cwiseProduct(k_ * x - alpha_));
    };
    for (int s = 0; s < steps; ++s) {
      const Eigen::VectorXd k1 = rhs(p);
      const Eigen::VectorXd k2 = rhs(p + 0.5 * h * k1);
      const Eigen::VectorXd k3 = rhs(p + 0.5 * h * k2);
      const Eigen::VectorXd k4 = rhs(p + h * k3);
      p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
  }

  Eigen::VectorXd solve(double pump_mw_at_l) const {
    if (pump_mw_at_l == 0.0) return shoot(0.0).head(ns_);
    // Secant on the pump power at z = 0.
    double x0 = pump_mw_at_l * std::exp(-alpha_[ns_] * length_km_);
    double x1 = 1.2 * x0;
    double r0 = shoot(x0)[ns_] - pump_mw_at_l;
    Eigen::VectorXd last = shoot(x1);
    double r1 = last[ns_] - pump_mw_at_l;
    for (int it = 0; it < 50 && std::abs(r1) > 1e-11 * pump_mw_at_l; ++it) {
      const double x2 = x1 - r1 * (x1 - x0) / (r1 - r0);
      x0 = x1;
      r0 = r1;
      x1 = x2;
      last = shoot(x1);
      r1 = last[ns_] - pump_mw_at_l;
    }
    EXPECT_LT(std::abs(r1), 1e-9 * pump_mw_at_l);
    return last.head(ns_);
  }

 private:
  Eigen::Index ns_;
  double length_km_;
  Eigen::VectorXd alpha_, launch_, sign_;
  Eigen::MatrixXd k_;
};

}  // namespace

TEST(Propagate, ZeroPumpSingleChannelLoses16dBOver80km) {
  const auto fiber = default_fiber();
  const auto profile = propagate(single_channel(1555.0), fiber, {});
  const double loss_db = -linear_to_db(profile.signal_mw(0, Eigen::last) / profile.signal_mw(0, 0));
  EXPECT_NEAR(loss_db, 16.0, 1e-6);
  EXPECT_EQ(profile.positions(), 801u);
  EXPECT_DOUBLE_EQ(profile.length_km(), 80.0);
}

TEST(Propagate, TwoChannelIsrsMovesPowerToLongerWavelength) {
  const double f_lo = wavelength_nm_to_thz(1560.0);
  const double f_hi = f_lo + 1.2;
  const ChannelGrid grid({Channel{f_lo, 140.0, 50.0, Band::C}, Channel{f_hi, 140.0, 50.0, Band::C}},
                         1200.0);
  const auto profile = propagate(grid, default_fiber(), {});
  // Channel 0 is the lower frequency, i.e. the longer wavelength.
  EXPECT_GT(profile.signal_mw(0, Eigen::last), profile.signal_mw(1, Eigen::last));
}

TEST(Propagate, PumpedSBandAgreesWithFineStepShootingOracle) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const RamanPumpSet pump{{{1425.0, 250.0}}};
  const auto with = propagate(grid, fiber, pump, tight());
  const auto without = propagate(grid, fiber, {}, tight());
  const auto gain = on_off_gain(with, without);

  const ShootingOracle oracle(grid, 1425.0, fiber.length_km);
  const Eigen::VectorXd ref_with = oracle.solve(250.0);
  const Eigen::VectorXd ref_without = oracle.solve(0.0);
  for (std::size_t i : grid.indices(Band::S)) {
    const auto k = static_cast<Eigen::Index>(i);
    const double ref = linear_to_db(ref_with[k] / ref_without[k]);
    EXPECT_GT(gain[i], 0.0) << "channel " << i;
    EXPECT_NEAR(gain[i], ref, 1e-3) << "channel " << i;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(with.signal_mw(k, Eigen::last) / ref_with[k], 1.0, 1e-4);
  }
  EXPECT_NEAR(with.pump_mw(0, Eigen::last), 250.0, 1e-9);
}

TEST(Propagate, StepHalvingChangesOutputByLessThan1e4dB) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto coarse = propagate(grid, fiber, four_pumps(), tight(0.1));
  const auto fine = propagate(grid, fiber, four_pumps(), tight(0.05));
  for (Eigen::Index i = 0; i < coarse.signal_mw.rows(); ++i) {
    const double d = linear_to_db(coarse.signal_mw(i, Eigen::last) / fine.signal_mw(i, Eigen::last));
    EXPECT_LT(std::abs(d), 1e-4) << "channel " << i;
  }
}

TEST(Propagate, PhotonFluxBalanceIsNonPositive) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto profile = propagate(grid, fiber, four_pumps());
  const auto balance = photon_flux_balance(profile, fiber);
  ASSERT_EQ(balance.size(), profile.positions());
  for (double b : balance) EXPECT_LE(b, 1e-9);
}

TEST(Propagate, ZeroRamanGainGivesClosedFormAttenuation) {
  auto fiber = default_fiber();
  const auto xs = fiber.raman_gain_per_w_km.xs();
  fiber.raman_gain_per_w_km = PiecewiseLinear(std::vector<double>(xs.begin(), xs.end()),
                                              std::vector<double>(xs.size(), 0.0));
  const auto grid = scl_grid();
  const auto pumps = four_pumps();
  const auto profile = propagate(grid, fiber, pumps);
  const double l = fiber.length_km;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = db_per_km_to_neper(attenuation_at(fiber, grid[i].wavelength_nm()));
    for (std::size_t z = 0; z < profile.positions(); z += 50) {
      const double expected = grid[i].launch_power_mw * std::exp(-a * profile.z_km[z]);
      EXPECT_NEAR(profile.signal_mw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z)) /
                      expected, 1.0, 1e-9);
    }
  }
  for (std::size_t q = 0; q < pumps.size(); ++q) {
    const double a = db_per_km_to_neper(attenuation_at(fiber, pumps.pumps[q].wavelength_nm));
    const double expected = pumps.pumps[q].power_mw * std::exp(-a * l);
    EXPECT_NEAR(profile.pump_mw(static_cast<Eigen::Index>(q), 0) / expected, 1.0, 1e-9);
  }
}

TEST(Propagate, NonConvergenceReportsResidual) {
  RamanOptions o;
  o.max_iterations = 1;
  try {
    propagate(scl_grid(), default_fiber(), four_pumps(), o);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Propagate, RejectsInvalidPumps) {
  const auto grid = cl_grid();
  EXPECT_THROW(propagate(grid, default_fiber(), RamanPumpSet{{{1425.0, 300.0}}}), ValidationError);
  EXPECT_THROW(propagate(grid, default_fiber(), RamanPumpSet{{{1500.0, 100.0}}}), ValidationError);
  EXPECT_THROW(propagate(grid, default_fiber(), RamanPumpSet{{{1425.0, -1.0}}}), ValidationError);
}

TEST(Propagate, RejectsInvalidSolverOptions) {
  const auto grid = cl_grid();
  RamanOptions o;
  o.max_iterations = 0;
  EXPECT_THROW(propagate(grid, default_fiber(), four_pumps(), o), ValidationError);
  o = RamanOptions{};
  o.tolerance = 0.0;
  EXPECT_THROW(propagate(grid, default_fiber(), four_pumps(), o), ValidationError);
}

TEST(Propagate, DeterministicAcrossCalls) {
  const auto grid = cl_grid();
  const auto a = propagate(grid, default_fiber(), four_pumps());
  const auto b = propagate(grid, default_fiber(), four_pumps());
  EXPECT_TRUE(a.signal_mw == b.signal_mw);
  EXPECT_TRUE(a.pump_mw == b.pump_mw);
}

TEST(OnOffGain, IdentityAndPumpsOff) {
  const auto grid = cl_grid();
  const auto fiber = default_fiber();
  const auto base = propagate(grid, fiber, {});
  for (double g : on_off_gain(base, base)) EXPECT_EQ(g, 0.0);
  const auto off = propagate(grid, fiber, RamanPumpSet{{{1425.0, 0.0}, {1450.0, 0.0}}});
  for (double g : on_off_gain(off, base)) EXPECT_NEAR(g, 0.0, 1e-6);
}

TEST(OnOffGain, MismatchedGridsAreRejected) {
  const auto fiber = default_fiber();
  const auto a = propagate(cl_grid(), fiber, {});
  const auto b = propagate(scl_grid(), fiber, {});
  EXPECT_THROW(on_off_gain(a, b), ValidationError);
}

TEST(OnOffGain, MonotoneInSinglePumpPower) {
  const auto grid = cl_grid();
  const auto fiber = default_fiber();
  const SpanPropagator prop(grid, fiber, tight());
  const auto base = prop(RamanPumpSet{});
  std::vector<double> prev(grid.size(), 0.0);
  for (double mw = 50.0; mw <= 250.0; mw += 50.0) {
    const auto gain = on_off_gain(prop(RamanPumpSet{{{1400.0, 120.0}, {1440.0, mw}}}), base);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(gain[i], prev[i] - 1e-9) << "channel " << i << " at " << mw << " mW";
    }
    prev = gain;
  }
}

TEST(EffectiveIntegrals, FlatProfileGivesSpanLength) {
  PowerProfile p;
  for (int n = 0; n <= 800; ++n) p.z_km.push_back(0.1 * n);
  p.signal_frequency_thz = {193.0};
  p.signal_mw = Eigen::MatrixXd::Constant(1, 801, 2.0);
  p.pump_mw = Eigen::MatrixXd(0, 801);
  const auto r = effective_integrals(p);
  EXPECT_NEAR(r[0].length_km, 80.0, 1e-12);
  EXPECT_DOUBLE_EQ(r[0].output_mw, 2.0);
}

TEST(EffectiveIntegrals, PureAttenuationMatchesClassicEffectiveLength) {
  const auto fiber = default_fiber();
  const auto r = effective_integrals(propagate(single_channel(1555.0), fiber, {}));
  const double a = db_per_km_to_neper(0.2);
  EXPECT_NEAR(r[0].length_km / ((1.0 - std::exp(-a * 80.0)) / a), 1.0, 1e-5);
}

TEST(EffectiveIntegrals, PumpedSBandExceedsUnpumpedAndMatchesSimpsonRule) {
  const auto grid = scl_grid();
  const auto fiber = default_fiber();
  const auto with = propagate(grid, fiber, four_pumps());
  const auto without = propagate(grid, fiber, {});
  const auto rw = effective_integrals(with);
  const auto ro = effective_integrals(without);
  ASSERT_EQ((with.positions() - 1) % 2, 0u);
  for (std::size_t i : grid.indices(Band::S)) {
    const auto k = static_cast<Eigen::Index>(i);
    double simpson = 0.0;
    for (std::size_t z = 0; z < with.positions(); ++z) {
      const double w = (z == 0 || z + 1 == with.positions()) ? 1.0 : (z % 2 ? 4.0 : 2.0);
      simpson += w * with.signal_mw(k, static_cast<Eigen::Index>(z));
    }
    simpson *= (with.z_km[1] - with.z_km[0]) / 3.0 / with.signal_mw(k, 0);
    EXPECT_NEAR(rw[i].length_km, simpson, 1e-9 * simpson);
    EXPECT_GT(rw[i].length_km, ro[i].length_km);
  }
}
