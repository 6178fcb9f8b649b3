#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sclink/link_model.hpp"
#include "sclink/measurement_ingest.hpp"
#include "sclink/quality_model.hpp"
#include "sclink/raman_engine.hpp"

namespace sclink {

/// Per-run diagnostics that do not abort evaluation (clamps, fallbacks).
using Warnings = std::vector<std::string>;

struct LinkScenario {
  int n_span = 1;
  std::string band_set;  // "CL" or "SCL"
  int pump_count = 0;
  double p_mm_per_amp_w = 8.0;
  ChannelGrid grid;
  std::map<Band, AmplifierSpec> amps;
  RamanPumpSet pumps;

  /// Throws ValidationError if n_span < 1, p_mm < 0 or pump_count != |pumps|.
  void validate() const;
};

struct LumpedOperatingPoint {
  double gain;       // linear, >= 1 after clamping
  double output_mw;  // total band output, <= saturation after clamping
};

/// Band gain restoring the uniform launch power: G = N_ch P_ch / sum(P_in).
/// Gains below 1 and outputs above saturation are clamped with a warning.
LumpedOperatingPoint lumped_optical_output(const ChannelGrid& grid, Band band,
                                           std::span<const double> post_dra_input_mw,
                                           double saturation_dbm, Warnings* warnings = nullptr);

/// (1/eta) N_ch P_ch (1 - 1/G) in W.
double band_lumped_power(double efficiency, std::size_t n_ch, double p_ch_mw, double gain);

/// Lumped-amplifier term for one band of `grid`, with eta read from `curve` at
/// `operating_output_mw`. Queries beyond the measured range are clamped to
/// the nearest end with a warning.
double lumped_electrical_power(double operating_output_mw, const EfficiencyCurve& curve,
                               double gain, const ChannelGrid& grid, Band band,
                               Warnings* warnings = nullptr);

/// Measured draw curves indexed by the pump diode wavelength. A pump uses the
/// curve of the nearest measured wavelength.
class PumpDrawCatalog {
 public:
  PumpDrawCatalog() = default;
  void add(double wavelength_nm, PumpDrawCurve curve);
  const PumpDrawCurve& nearest(double wavelength_nm) const;
  bool empty() const { return curves_.empty(); }
  const std::map<double, PumpDrawCurve>& curves() const { return curves_; }

 private:
  std::map<double, PumpDrawCurve> curves_;
};

/// Sum of measured wall draws [W] of all pumps in the set.
double raman_electrical_power(const RamanPumpSet& pumps, const PumpDrawCurve& curve);
double raman_electrical_power(const RamanPumpSet& pumps, const PumpDrawCatalog& catalog);
/// Constant wallplug efficiency alternative: sum(P_R) / eta_R.
double raman_electrical_power_constant(const RamanPumpSet& pumps, double eta_r);

/// Splits `total_w` across bands in proportion to their summed on-off gain in
/// dB. Negative sums count as zero; if every sum is zero the split is uniform
/// and a warning is recorded.
std::map<Band, double> allocate_dra_power(const std::map<Band, double>& gain_db_sums,
                                          double total_w, Warnings* warnings = nullptr);

/// W / (Tb/s) is numerically pJ/bit. Throws ValidationError for zero throughput.
double energy_per_bit(double power_w, double throughput_tbps);

struct BandLedger {
  double lumped_w = 0.0;  // per span
  double dra_w = 0.0;     // per span
  double mm_w = 0.0;      // per span
  double link_w = 0.0;    // all spans
  double throughput_tbps = 0.0;
  double energy_pj_per_bit = 0.0;
};

struct PowerLedger {
  int n_span = 1;
  std::map<Band, BandLedger> bands;
  double span_w = 0.0;
  double total_w = 0.0;
  double throughput_tbps = 0.0;
  double energy_pj_per_bit = 0.0;
};

/// Assembles the link total N_span * (sum lumped + P_mm per amplifier + DRA)
/// and per-band energy per bit. `throughput` may be empty, in which case
/// energy per bit is left at zero.
PowerLedger total_power(const LinkScenario& scenario, const std::map<Band, double>& lumped_w,
                        const std::map<Band, double>& dra_w,
                        const BandThroughput* throughput = nullptr);

void write_ledger_tsv(std::ostream& out, const std::string& scenario_id, const PowerLedger& ledger,
                      bool header = true);

}  // namespace sclink
