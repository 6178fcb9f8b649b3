#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sclink/interpolation.hpp"
#include "sclink/link_model.hpp"

namespace sclink {

/// Measured wallplug power-conversion efficiency of a lumped amplifier.
///
/// TSV layout: header `output_mw<TAB>efficiency_pct`, plus metadata comments
/// `# band = C` and `# saturation_dbm = 23`. The table keeps percent values as
/// read; lookups return fractions.
class EfficiencyCurve {
 public:
  EfficiencyCurve(Band band, double saturation_dbm, std::vector<double> output_mw,
                  std::vector<double> efficiency_pct);

  Band band() const { return band_; }
  double saturation_dbm() const { return saturation_dbm_; }
  double saturation_mw() const;
  std::span<const double> output_mw() const { return table_pct_.xs(); }
  std::span<const double> efficiency_pct() const { return table_pct_.ys(); }
  double min_output_mw() const { return table_pct_.front_x(); }
  double max_output_mw() const { return table_pct_.back_x(); }

  bool operator==(const EfficiencyCurve&) const = default;

 private:
  friend double efficiency_at(const EfficiencyCurve&, double);
  Band band_;
  double saturation_dbm_;
  PiecewiseLinear table_pct_;
};

/// Measured wall draw [W] of a Raman pump versus its optical output [mW].
/// TSV layout: header `output_mw<TAB>draw_w`.
class PumpDrawCurve {
 public:
  PumpDrawCurve(std::vector<double> output_mw, std::vector<double> draw_w);

  std::span<const double> output_mw() const { return table_.xs(); }
  std::span<const double> draw_w() const { return table_.ys(); }
  double max_output_mw() const { return table_.back_x(); }

  bool operator==(const PumpDrawCurve&) const = default;

 private:
  friend double pump_draw_at(const PumpDrawCurve&, double);
  PiecewiseLinear table_;
};

EfficiencyCurve load_efficiency_curve(std::istream& in, const std::string& source_name);
EfficiencyCurve load_efficiency_curve(const std::string& path);
PumpDrawCurve load_pump_draw_curve(std::istream& in, const std::string& source_name);
PumpDrawCurve load_pump_draw_curve(const std::string& path);

void write_efficiency_curve(std::ostream& out, const EfficiencyCurve& curve);
void write_pump_draw_curve(std::ostream& out, const PumpDrawCurve& curve);

/// Piecewise-linear efficiency (fraction). Throws RangeError outside the
/// measured output range.
double efficiency_at(const EfficiencyCurve& curve, double optical_output_mw);

/// Piecewise-linear wall draw [W]. Throws RangeError outside the measured range.
double pump_draw_at(const PumpDrawCurve& curve, double pump_output_mw);

}  // namespace sclink
