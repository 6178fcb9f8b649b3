#include "sclink/link_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sclink/errors.hpp"
#include "sclink/units.hpp"

namespace sclink {

std::string_view band_name(Band band) {
  switch (band) {
    case Band::S: return "S";
    case Band::C: return "C";
    case Band::L: return "L";
  }
  return "?";
}

std::optional<Band> parse_band(std::string_view text) {
  if (text == "S") return Band::S;
  if (text == "C") return Band::C;
  if (text == "L") return Band::L;
  return std::nullopt;
}

double BandWindow::min_frequency_thz() const { return wavelength_nm_to_thz(max_wavelength_nm); }
double BandWindow::max_frequency_thz() const { return wavelength_nm_to_thz(min_wavelength_nm); }

void BandPlan::validate() const {
  if (bands.empty()) throw ValidationError("band plan is empty");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (!(b.min_wavelength_nm > 0.0) || !(b.max_wavelength_nm > b.min_wavelength_nm)) {
      throw ValidationError("band " + std::string(band_name(b.label)) +
                            ": wavelength range must be increasing and positive");
    }
    if (b.channel_count && i != 0) {
      throw ValidationError("band " + std::string(band_name(b.label)) +
                            ": channel_count is only allowed on the shortest-wavelength band");
    }
    if (b.channel_count && *b.channel_count < 1) {
      throw ValidationError("band " + std::string(band_name(b.label)) +
                            ": channel_count must be positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (bands[j].label == b.label) {
        throw ValidationError("band " + std::string(band_name(b.label)) + " listed twice");
      }
    }
    if (i > 0) {
      const auto& prev = bands[i - 1];
      if (prev.max_wavelength_nm > b.min_wavelength_nm + 1e-9) {
        throw ValidationError("bands " + std::string(band_name(prev.label)) + " and " +
                              std::string(band_name(b.label)) +
                              " overlap or are not ordered by wavelength");
      }
      if (b.min_wavelength_nm - prev.max_wavelength_nm > 1e-9) {
        throw ValidationError("bands " + std::string(band_name(prev.label)) + " and " +
                              std::string(band_name(b.label)) + " leave a spectral gap");
      }
    }
  }
}

BandPlan BandPlan::cl() {
  return BandPlan{{{Band::C, 1530.0, 1565.0, std::nullopt},
                   {Band::L, 1565.0, 1620.0, std::nullopt}}};
}

BandPlan BandPlan::scl() {
  return BandPlan{{{Band::S, 1460.0, 1530.0, 54},
                   {Band::C, 1530.0, 1565.0, std::nullopt},
                   {Band::L, 1565.0, 1620.0, std::nullopt}}};
}

double Channel::wavelength_nm() const { return frequency_thz_to_nm(frequency_thz); }

ChannelGrid::ChannelGrid(std::vector<Channel> channels, double spacing_ghz)
    : channels_(std::move(channels)), spacing_ghz_(spacing_ghz) {
  if (!(spacing_ghz_ > 0.0)) throw ValidationError("channel spacing must be positive");
  const double spacing_thz = spacing_ghz_ * 1e-3;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const auto& ch = channels_[i];
    if (!(ch.launch_power_mw > 0.0)) {
      throw ValidationError("channel " + std::to_string(i) + ": launch power must be positive");
    }
    if (!(ch.symbol_rate_gbd > 0.0)) {
      throw ValidationError("channel " + std::to_string(i) + ": symbol rate must be positive");
    }
    if (i > 0) {
      const double df = ch.frequency_thz - channels_[i - 1].frequency_thz;
      if (!(df > 0.0) || std::abs(df - spacing_thz) > 1e-6 * spacing_thz) {
        throw ValidationError("channel " + std::to_string(i) +
                              ": frequencies must be uniformly spaced and increasing");
      }
    }
  }
}

std::size_t ChannelGrid::count(Band band) const {
  return static_cast<std::size_t>(std::count_if(channels_.begin(), channels_.end(),
                                                [band](const Channel& c) { return c.band == band; }));
}

std::vector<std::size_t> ChannelGrid::indices(Band band) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].band == band) out.push_back(i);
  }
  return out;
}

std::vector<Band> ChannelGrid::bands() const {
  std::vector<Band> out;
  for (Band b : kAllBands) {
    if (count(b) > 0) out.push_back(b);
  }
  return out;
}

ChannelGrid ChannelGrid::with_launch_power_mw(double launch_power_mw) const {
  auto copy = channels_;
  for (auto& c : copy) c.launch_power_mw = launch_power_mw;
  return ChannelGrid(std::move(copy), spacing_ghz_);
}

ChannelGrid build_grid(const BandPlan& plan, double spacing_ghz, double symbol_rate_gbd,
                       double launch_power_dbm) {
  plan.validate();
  if (!(symbol_rate_gbd > 0.0)) throw ValidationError("symbol rate must be positive");
  if (!(spacing_ghz > symbol_rate_gbd)) {
    std::ostringstream msg;
    msg << "channel spacing " << spacing_ghz << " GHz must exceed the symbol rate "
        << symbol_rate_gbd << " GBd (channels would overlap)";
    throw ValidationError(msg.str());
  }
  const double launch_mw = dbm_to_mw(launch_power_dbm);
  const double spacing_thz = spacing_ghz * 1e-3;
  const double f0 = plan.bands.back().min_frequency_thz();
  const double f_top = plan.bands.front().max_frequency_thz();
  const BandWindow& top = plan.bands.front();
  constexpr double eps = 1e-9;

  std::vector<Channel> channels;
  std::size_t in_top = 0;
  for (std::size_t k = 0;; ++k) {
    const double f = f0 + static_cast<double>(k) * spacing_thz;
    if (f > f_top + eps) break;
    // plan.bands is ordered by wavelength, so scan from the low-frequency end.
    const BandWindow* owner = nullptr;
    for (auto it = plan.bands.rbegin(); it != plan.bands.rend(); ++it) {
      const bool is_top = (&*it == &top);
      if (f >= it->min_frequency_thz() - eps &&
          (f < it->max_frequency_thz() - eps || (is_top && f <= it->max_frequency_thz() + eps))) {
        owner = &*it;
        break;
      }
    }
    if (owner == nullptr) break;
    if (owner == &top && top.channel_count && in_top == static_cast<std::size_t>(*top.channel_count)) {
      break;
    }
    if (owner == &top) ++in_top;
    channels.push_back(Channel{f, symbol_rate_gbd, launch_mw, owner->label});
  }
  if (top.channel_count && in_top < static_cast<std::size_t>(*top.channel_count)) {
    std::ostringstream msg;
    msg << "band " << band_name(top.label) << ": only " << in_top << " channels fit, "
        << *top.channel_count << " requested";
    throw ValidationError(msg.str());
  }
  if (channels.empty()) throw ValidationError("band plan holds no channels at this spacing");
  return ChannelGrid(std::move(channels), spacing_ghz);
}

void FiberSpec::validate() const {
  if (!(length_km > 0.0)) throw ValidationError("fiber.length_km must be positive");
  if (!(gamma_per_w_km > 0.0)) throw ValidationError("fiber.gamma_per_w_km must be positive");
  if (!(temperature_k > 0.0)) throw ValidationError("fiber.temperature_k must be positive");
  if (attenuation_db_per_km.empty()) throw ValidationError("fiber attenuation table missing");
  for (double a : attenuation_db_per_km.ys()) {
    if (!(a > 0.0)) throw ValidationError("fiber attenuation must be positive everywhere");
  }
  if (raman_gain_per_w_km.empty()) throw ValidationError("fiber Raman gain table missing");
  if (raman_gain_per_w_km.front_x() != 0.0 || raman_gain_per_w_km.ys().front() != 0.0) {
    throw ValidationError("Raman gain table must start at zero shift with zero gain");
  }
  for (double g : raman_gain_per_w_km.ys()) {
    if (g < 0.0) throw ValidationError("Raman gain table must be nonnegative");
  }
}

PiecewiseLinear default_attenuation_table() {
  return PiecewiseLinear(
      {1350, 1375, 1400, 1425, 1450, 1475, 1500, 1525, 1540, 1550, 1560, 1575, 1600, 1625, 1650},
      {0.340, 0.318, 0.298, 0.272, 0.250, 0.232, 0.217, 0.206, 0.202, 0.200, 0.200, 0.201, 0.204,
       0.210, 0.222});
}

PiecewiseLinear default_raman_table() {
  // Relative silica Raman spectrum on a 0.6 THz grid, scaled to a 0.40 1/(W km) peak.
  static constexpr std::array<double, 41> kShape{
      0.00, 0.04, 0.08, 0.12, 0.16, 0.20, 0.24, 0.28, 0.32, 0.36, 0.40, 0.44, 0.48, 0.52,
      0.56, 0.60, 0.65, 0.70, 0.76, 0.83, 0.90, 0.96, 1.00, 0.97, 0.93, 0.85, 0.60, 0.35,
      0.22, 0.18, 0.17, 0.18, 0.17, 0.14, 0.11, 0.09, 0.08, 0.07, 0.05, 0.03, 0.00};
  constexpr double peak = 0.40;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < kShape.size(); ++i) {
    xs.push_back(0.6 * static_cast<double>(i));
    ys.push_back(peak * kShape[i]);
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

FiberSpec default_fiber() {
  FiberSpec f;
  f.attenuation_db_per_km = default_attenuation_table();
  f.raman_gain_per_w_km = default_raman_table();
  return f;
}

double attenuation_at(const FiberSpec& fiber, double wavelength_nm) {
  return fiber.attenuation_db_per_km(wavelength_nm);
}

double min_supported_frequency_thz(const FiberSpec& fiber) {
  return wavelength_nm_to_thz(fiber.attenuation_db_per_km.back_x());
}

double max_supported_frequency_thz(const FiberSpec& fiber) {
  return wavelength_nm_to_thz(fiber.attenuation_db_per_km.front_x());
}

double raman_peak_shift_thz(const FiberSpec& fiber) {
  const auto ys = fiber.raman_gain_per_w_km.ys();
  const auto it = std::max_element(ys.begin(), ys.end());
  return fiber.raman_gain_per_w_km.xs()[static_cast<std::size_t>(it - ys.begin())];
}

namespace {

double table_gain(const FiberSpec& fiber, double shift_thz) {
  const auto& t = fiber.raman_gain_per_w_km;
  if (shift_thz >= t.back_x()) return 0.0;
  return t(shift_thz);
}

double triangular_gain(const FiberSpec& fiber, double shift_thz) {
  const double peak_shift = raman_peak_shift_thz(fiber);
  return fiber.raman_gain_per_w_km(peak_shift) * shift_thz / peak_shift;
}

}  // namespace

double raman_gain(const FiberSpec& fiber, double pump_thz, double signal_thz, RamanProfileMode mode) {
  const double lo = min_supported_frequency_thz(fiber) - 1e-9;
  const double hi = max_supported_frequency_thz(fiber) + 1e-9;
  for (double f : {pump_thz, signal_thz}) {
    if (f < lo || f > hi) {
      std::ostringstream msg;
      msg << "frequency " << f << " THz outside supported range [" << lo << ", " << hi << "]";
      throw RangeError(msg.str());
    }
  }
  const double shift = pump_thz - signal_thz;
  if (shift == 0.0) return 0.0;
  if (mode == RamanProfileMode::triangular) {
    return shift > 0.0 ? triangular_gain(fiber, shift) : -triangular_gain(fiber, -shift);
  }
  if (shift > 0.0) return table_gain(fiber, shift);
  return -(signal_thz / pump_thz) * table_gain(fiber, -shift);
}

}  // namespace sclink
