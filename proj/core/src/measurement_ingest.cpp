#include "sclink/measurement_ingest.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sclink/errors.hpp"
#include "sclink/tsv.hpp"
#include "sclink/units.hpp"

namespace sclink {

namespace {

[[noreturn]] void reject(const std::string& source, int line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw ValidationError(msg.str());
}

struct Columns {
  std::vector<double> x;
  std::vector<double> y;
};

Columns two_columns(const TsvTable& t, const std::string& source, const std::string& x_name,
                    const std::string& y_name) {
  const int xc = t.column(x_name);
  const int yc = t.column(y_name);
  if (xc < 0 || yc < 0) {
    throw ValidationError(source + ": expected columns '" + x_name + "' and '" + y_name + "'");
  }
  if (t.rows.size() < 2) {
    throw ValidationError(source + ": need at least 2 rows to interpolate, found " +
                          std::to_string(t.rows.size()));
  }
  Columns c;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double x = t.rows[r][static_cast<std::size_t>(xc)];
    const double y = t.rows[r][static_cast<std::size_t>(yc)];
    const int line = t.line_numbers[r];
    if (x < 0.0 || y < 0.0) reject(source, line, "negative value in row " + std::to_string(r));
    if (!c.x.empty() && !(x > c.x.back())) {
      reject(source, line, "'" + x_name + "' not strictly increasing at row " + std::to_string(r));
    }
    c.x.push_back(x);
    c.y.push_back(y);
  }
  return c;
}

double meta_number(const TsvTable& t, const std::string& source, const std::string& key) {
  const auto it = t.meta.find(key);
  if (it == t.meta.end()) throw ValidationError(source + ": missing '# " + key + " = ...' header");
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    throw ValidationError(source + ": '" + key + "' is not a number");
  }
  return v;
}

}  // namespace

EfficiencyCurve::EfficiencyCurve(Band band, double saturation_dbm, std::vector<double> output_mw,
                                 std::vector<double> efficiency_pct)
    : band_(band), saturation_dbm_(saturation_dbm),
      table_pct_(std::move(output_mw), std::move(efficiency_pct)) {
  for (std::size_t i = 0; i < table_pct_.size(); ++i) {
    const double e = table_pct_.ys()[i] / 100.0;
    if (!(e > 0.0 && e < 0.5)) {
      throw ValidationError("efficiency curve row " + std::to_string(i) +
                            ": efficiency must lie in (0, 0.5)");
    }
  }
  if (!table_pct_.contains(saturation_mw())) {
    throw ValidationError("efficiency curve: saturation output " + std::to_string(saturation_dbm) +
                          " dBm lies outside the measured range");
  }
}

double EfficiencyCurve::saturation_mw() const { return dbm_to_mw(saturation_dbm_); }

PumpDrawCurve::PumpDrawCurve(std::vector<double> output_mw, std::vector<double> draw_w)
    : table_(std::move(output_mw), std::move(draw_w)) {
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (i > 0 && !(table_.ys()[i] > table_.ys()[i - 1])) {
      throw ValidationError("pump draw curve row " + std::to_string(i) +
                            ": draw must be strictly increasing");
    }
    if (!(table_.ys()[i] > table_.xs()[i] * 1e-3)) {
      throw ValidationError("pump draw curve row " + std::to_string(i) +
                            ": electrical draw must exceed optical output");
    }
  }
}

EfficiencyCurve load_efficiency_curve(std::istream& in, const std::string& source_name) {
  const TsvTable t = read_tsv(in, source_name);
  auto cols = two_columns(t, source_name, "output_mw", "efficiency_pct");
  const auto band_it = t.meta.find("band");
  if (band_it == t.meta.end()) throw ValidationError(source_name + ": missing '# band = ...' header");
  const auto band = parse_band(band_it->second);
  if (!band) throw ValidationError(source_name + ": unknown band '" + band_it->second + "'");
  return EfficiencyCurve(*band, meta_number(t, source_name, "saturation_dbm"), std::move(cols.x),
                         std::move(cols.y));
}

EfficiencyCurve load_efficiency_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return load_efficiency_curve(in, path);
}

PumpDrawCurve load_pump_draw_curve(std::istream& in, const std::string& source_name) {
  const TsvTable t = read_tsv(in, source_name);
  auto cols = two_columns(t, source_name, "output_mw", "draw_w");
  return PumpDrawCurve(std::move(cols.x), std::move(cols.y));
}

PumpDrawCurve load_pump_draw_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return load_pump_draw_curve(in, path);
}

void write_efficiency_curve(std::ostream& out, const EfficiencyCurve& curve) {
  out << "# band = " << band_name(curve.band()) << "\n";
  out << "# saturation_dbm = " << std::setprecision(17) << curve.saturation_dbm() << "\n";
  out << "output_mw\tefficiency_pct\n";
  for (std::size_t i = 0; i < curve.output_mw().size(); ++i) {
    out << std::setprecision(17) << curve.output_mw()[i] << "\t" << curve.efficiency_pct()[i]
        << "\n";
  }
}

void write_pump_draw_curve(std::ostream& out, const PumpDrawCurve& curve) {
  out << "output_mw\tdraw_w\n";
  for (std::size_t i = 0; i < curve.output_mw().size(); ++i) {
    out << std::setprecision(17) << curve.output_mw()[i] << "\t" << curve.draw_w()[i] << "\n";
  }
}

double efficiency_at(const EfficiencyCurve& curve, double optical_output_mw) {
  return curve.table_pct_(optical_output_mw) / 100.0;
}

double pump_draw_at(const PumpDrawCurve& curve, double pump_output_mw) {
  return curve.table_(pump_output_mw);
}

}  // namespace sclink
