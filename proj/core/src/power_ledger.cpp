#include "sclink/power_ledger.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sclink/errors.hpp"
#include "sclink/units.hpp"

namespace sclink {

namespace {

void warn(Warnings* warnings, std::string text) {
  if (warnings) warnings->push_back(std::move(text));
}

}  // namespace

void LinkScenario::validate() const {
  if (n_span < 1) throw ValidationError("scenario: n_span must be >= 1");
  if (!(p_mm_per_amp_w >= 0.0)) throw ValidationError("scenario: p_mm must be >= 0");
  if (pump_count != static_cast<int>(pumps.size())) {
    throw ValidationError("scenario: pump_count does not match the pump set");
  }
  pumps.validate();
}

LumpedOperatingPoint lumped_optical_output(const ChannelGrid& grid, Band band,
                                           std::span<const double> post_dra_input_mw,
                                           double saturation_dbm, Warnings* warnings) {
  const auto idx = grid.indices(band);
  if (post_dra_input_mw.size() != grid.size()) {
    throw ValidationError("lumped_optical_output: one input power per channel is required");
  }
  double target = 0.0, input = 0.0;
  for (auto i : idx) {
    target += grid[i].launch_power_mw;
    input += post_dra_input_mw[i];
  }
  if (!(input > 0.0)) {
    throw ValidationError("lumped_optical_output: band " + std::string(band_name(band)) +
                          " has zero input power");
  }
  LumpedOperatingPoint op{target / input, target};
  if (op.gain < 1.0) {
    warn(warnings, "band " + std::string(band_name(band)) + ": required gain below 1, clamped");
    op.gain = 1.0;
  }
  const double sat = dbm_to_mw(saturation_dbm);
  if (op.output_mw > sat) {
    warn(warnings,
         "band " + std::string(band_name(band)) + ": output exceeds saturation, clamped");
    op.output_mw = sat;
  }
  return op;
}

double band_lumped_power(double efficiency, std::size_t n_ch, double p_ch_mw, double gain) {
  if (!(efficiency > 0.0)) throw ValidationError("band_lumped_power: efficiency must be positive");
  if (!(gain >= 1.0)) throw ValidationError("band_lumped_power: gain must be >= 1");
  return static_cast<double>(n_ch) * p_ch_mw * 1e-3 * (1.0 - 1.0 / gain) / efficiency;
}

double lumped_electrical_power(double operating_output_mw, const EfficiencyCurve& curve,
                               double gain, const ChannelGrid& grid, Band band,
                               Warnings* warnings) {
  double query = operating_output_mw;
  if (query < curve.min_output_mw() || query > curve.max_output_mw()) {
    query = std::clamp(query, curve.min_output_mw(), curve.max_output_mw());
    warn(warnings, "band " + std::string(band_name(band)) +
                       ": operating point outside the measured efficiency range, clamped");
  }
  const auto idx = grid.indices(band);
  if (idx.empty()) return 0.0;
  // Uniform launch is a grid invariant in practice; use the band mean for safety.
  double p_sum = 0.0;
  for (auto i : idx) p_sum += grid[i].launch_power_mw;
  const double p_ch = p_sum / static_cast<double>(idx.size());
  return band_lumped_power(efficiency_at(curve, query), idx.size(), p_ch, gain);
}

void PumpDrawCatalog::add(double wavelength_nm, PumpDrawCurve curve) {
  curves_.insert_or_assign(wavelength_nm, std::move(curve));
}

const PumpDrawCurve& PumpDrawCatalog::nearest(double wavelength_nm) const {
  if (curves_.empty()) throw ValidationError("pump draw catalog is empty");
  auto best = curves_.begin();
  for (auto it = curves_.begin(); it != curves_.end(); ++it) {
    if (std::abs(it->first - wavelength_nm) < std::abs(best->first - wavelength_nm)) best = it;
  }
  return best->second;
}

double raman_electrical_power(const RamanPumpSet& pumps, const PumpDrawCurve& curve) {
  double sum = 0.0;
  for (const auto& p : pumps.pumps) sum += pump_draw_at(curve, p.power_mw);
  return sum;
}

double raman_electrical_power(const RamanPumpSet& pumps, const PumpDrawCatalog& catalog) {
  double sum = 0.0;
  for (const auto& p : pumps.pumps) sum += pump_draw_at(catalog.nearest(p.wavelength_nm), p.power_mw);
  return sum;
}

double raman_electrical_power_constant(const RamanPumpSet& pumps, double eta_r) {
  if (!(eta_r > 0.0 && eta_r <= 1.0)) {
    throw ValidationError("raman_electrical_power_constant: efficiency must lie in (0, 1]");
  }
  return pumps.total_power_mw() * 1e-3 / eta_r;
}

std::map<Band, double> allocate_dra_power(const std::map<Band, double>& gain_db_sums,
                                          double total_w, Warnings* warnings) {
  std::map<Band, double> out;
  if (gain_db_sums.empty()) {
    if (total_w != 0.0) throw ValidationError("allocate_dra_power: no bands to allocate to");
    return out;
  }
  double denom = 0.0;
  for (const auto& [band, sum] : gain_db_sums) denom += std::max(sum, 0.0);
  if (!(denom > 0.0)) {
    if (total_w != 0.0) warn(warnings, "DRA power split uniformly: no band has positive gain");
    for (const auto& [band, sum] : gain_db_sums) {
      out[band] = total_w / static_cast<double>(gain_db_sums.size());
    }
    return out;
  }
  // The last positive band takes the remainder so the shares add up to the total.
  Band last = gain_db_sums.begin()->first;
  for (const auto& [band, sum] : gain_db_sums) {
    if (sum > 0.0) last = band;
  }
  double assigned = 0.0;
  for (const auto& [band, sum] : gain_db_sums) {
    if (band == last) continue;
    out[band] = total_w * std::max(sum, 0.0) / denom;
    assigned += out[band];
  }
  out[last] = total_w - assigned;
  return out;
}

double energy_per_bit(double power_w, double throughput_tbps) {
  if (!(throughput_tbps > 0.0)) throw ValidationError("energy_per_bit: throughput must be positive");
  return power_w / throughput_tbps;
}

PowerLedger total_power(const LinkScenario& scenario, const std::map<Band, double>& lumped_w,
                        const std::map<Band, double>& dra_w, const BandThroughput* throughput) {
  scenario.validate();
  PowerLedger ledger;
  ledger.n_span = scenario.n_span;
  const double n = static_cast<double>(scenario.n_span);
  for (Band b : scenario.grid.bands()) {
    BandLedger& row = ledger.bands[b];
    if (auto it = lumped_w.find(b); it != lumped_w.end()) row.lumped_w = it->second;
    if (auto it = dra_w.find(b); it != dra_w.end()) row.dra_w = it->second;
    row.mm_w = scenario.p_mm_per_amp_w;
    const double span = row.lumped_w + row.dra_w + row.mm_w;
    row.link_w = n * span;
    ledger.span_w += span;
  }
  ledger.total_w = n * ledger.span_w;
  if (throughput) {
    ledger.throughput_tbps = throughput->total_tbps;
    for (auto& [band, row] : ledger.bands) {
      const auto it = throughput->per_band_tbps.find(band);
      if (it != throughput->per_band_tbps.end() && it->second > 0.0) {
        row.throughput_tbps = it->second;
        row.energy_pj_per_bit = energy_per_bit(row.link_w, row.throughput_tbps);
      }
    }
    if (ledger.throughput_tbps > 0.0) {
      ledger.energy_pj_per_bit = energy_per_bit(ledger.total_w, ledger.throughput_tbps);
    }
  }
  return ledger;
}

void write_ledger_tsv(std::ostream& out, const std::string& scenario_id, const PowerLedger& ledger,
                      bool header) {
  if (header) {
    out << "scenario\tband\tn_span\tlumped_w\tdra_w\tmm_w\tlink_w\tthroughput_tbps\t"
           "energy_pj_per_bit\n";
  }
  out << std::setprecision(10);
  for (const auto& [band, row] : ledger.bands) {
    out << scenario_id << "\t" << band_name(band) << "\t" << ledger.n_span << "\t" << row.lumped_w
        << "\t" << row.dra_w << "\t" << row.mm_w << "\t" << row.link_w << "\t"
        << row.throughput_tbps << "\t" << row.energy_pj_per_bit << "\n";
  }
  double lumped = 0.0, dra = 0.0, mm = 0.0;
  for (const auto& [band, row] : ledger.bands) {
    lumped += row.lumped_w;
    dra += row.dra_w;
    mm += row.mm_w;
  }
  out << scenario_id << "\ttotal\t" << ledger.n_span << "\t" << lumped << "\t" << dra << "\t" << mm
      << "\t" << ledger.total_w << "\t" << ledger.throughput_tbps << "\t"
      << ledger.energy_pj_per_bit << "\n";
}

}  // namespace sclink
