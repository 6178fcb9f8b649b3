#pragma once

#include <map>
#include <string>
#include <vector>

#include "sclink/link_model.hpp"
#include "sclink/measurement_ingest.hpp"
#include "sclink/power_ledger.hpp"
#include "sclink/quality_model.hpp"
#include "sclink/raman_engine.hpp"

namespace sclink {

/// Output power at which a lumped amplifier's wallplug efficiency is read.
enum class EfficiencyOperatingPoint {
  saturation,   // amplifier run at its saturated output
  band_output,  // actual band output N_ch * P_ch
};

enum class RamanPowerModel {
  measured,  // measured draw curves
  constant,  // fixed wallplug efficiency
};

/// Everything needed to evaluate one band set, independent of pumps, span
/// count and management power.
struct LinkSetup {
  std::string band_set = "SCL";
  BandPlan plan = BandPlan::scl();
  double spacing_ghz = 150.0;
  double symbol_rate_gbd = 140.0;
  double launch_power_dbm = 2.0;
  FiberSpec fiber = default_fiber();
  std::map<Band, double> noise_figure_db{{Band::S, 6.0}, {Band::C, 5.0}, {Band::L, 6.0}};
  std::map<Band, EfficiencyCurve> efficiency;
  PumpDrawCatalog pump_draw;
  RamanPowerModel raman_power_model = RamanPowerModel::measured;
  double raman_efficiency = 0.2;  // used by RamanPowerModel::constant
  EfficiencyOperatingPoint operating_point = EfficiencyOperatingPoint::saturation;
  RamanOptions raman;
  NliOptions nli;
  double transceiver_snr_db = 20.0;

  /// Checks that every band of the plan has a noise figure and an efficiency
  /// curve, and that a pump power model is available.
  void validate() const;
};

/// Single-span noise and gain bookkeeping for one pump set.
struct SpanResult {
  PowerProfile profile;
  std::vector<double> on_off_gain_db;
  std::map<Band, LumpedOperatingPoint> lumped;
  std::vector<double> channel_gain;  // lumped gain restoring each channel, linear
  std::vector<double> ase_mw;        // lumped + distributed ASE, referred to launch
  std::vector<double> nli_mw;
  Warnings warnings;
};

struct LinkEvaluation {
  SpanResult span;
  QualityReport quality;
  std::map<Band, double> lumped_w;  // per span
  std::map<Band, double> dra_w;     // per span
  double raman_w = 0.0;             // per span
  LinkScenario scenario;
  PowerLedger ledger;
};

class LinkEvaluator {
 public:
  explicit LinkEvaluator(LinkSetup setup);

  const LinkSetup& setup() const { return setup_; }
  const ChannelGrid& grid() const { return grid_; }
  const PowerProfile& unpumped_profile() const { return unpumped_; }

  SpanResult span(const RamanPumpSet& pumps) const;
  QualityReport quality(const SpanResult& span, int n_span) const;
  /// Total throughput [Tb/s] after `n_span` identical spans.
  double throughput(const RamanPumpSet& pumps, int n_span) const;
  LinkEvaluation evaluate(const RamanPumpSet& pumps, int n_span, double p_mm_w) const;
  /// Same, reusing a span already solved for `pumps`.
  LinkEvaluation evaluate(const RamanPumpSet& pumps, const SpanResult& span, int n_span,
                          double p_mm_w) const;

 private:
  LinkSetup setup_;
  ChannelGrid grid_;
  SpanPropagator propagator_;
  NliKernel nli_;
  PowerProfile unpumped_;
};

}  // namespace sclink
