#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sclink/interpolation.hpp"

namespace sclink {

enum class Band : std::uint8_t { S, C, L };

inline constexpr std::array<Band, 3> kAllBands{Band::S, Band::C, Band::L};

std::string_view band_name(Band band);
std::optional<Band> parse_band(std::string_view text);

/// One amplification window of a band plan.
///
/// `channel_count` pins the number of occupied channels. It may only be set on
/// the plan's highest-frequency (shortest-wavelength) band, where it truncates
/// the uniform grid; inner bands are always filled completely.
struct BandWindow {
  Band label;
  double min_wavelength_nm;
  double max_wavelength_nm;
  std::optional<int> channel_count;

  double min_frequency_thz() const;
  double max_frequency_thz() const;
};

struct BandPlan {
  std::vector<BandWindow> bands;

  /// Throws ValidationError if empty, overlapping, non-contiguous or unordered.
  void validate() const;

  /// 1530-1620 nm, C = 1530-1565 nm, L = 1565-1620 nm.
  static BandPlan cl();
  /// 1460-1620 nm with the S band truncated to 54 occupied channels.
  static BandPlan scl();
};

struct Channel {
  double frequency_thz;
  double symbol_rate_gbd;
  double launch_power_mw;
  Band band;

  double wavelength_nm() const;

  bool operator==(const Channel&) const = default;
};

/// WDM channel plan: strictly increasing frequencies on a uniform grid.
class ChannelGrid {
 public:
  ChannelGrid() = default;
  ChannelGrid(std::vector<Channel> channels, double spacing_ghz);

  std::span<const Channel> channels() const { return channels_; }
  const Channel& operator[](std::size_t i) const { return channels_[i]; }
  std::size_t size() const { return channels_.size(); }
  bool empty() const { return channels_.empty(); }
  double spacing_ghz() const { return spacing_ghz_; }

  std::size_t count(Band band) const;
  std::vector<std::size_t> indices(Band band) const;
  /// Bands carrying at least one channel, in S, C, L order.
  std::vector<Band> bands() const;

  ChannelGrid with_launch_power_mw(double launch_power_mw) const;

  bool operator==(const ChannelGrid&) const = default;

 private:
  std::vector<Channel> channels_;
  double spacing_ghz_ = 0.0;
};

/// Fills the plan on a uniform frequency grid anchored at its low-frequency
/// (long-wavelength) edge. Throws ValidationError for an invalid plan or when
/// the spacing does not exceed the symbol rate.
ChannelGrid build_grid(const BandPlan& plan, double spacing_ghz, double symbol_rate_gbd,
                       double launch_power_dbm);

struct FiberSpec {
  double length_km = 80.0;
  PiecewiseLinear attenuation_db_per_km;  // wavelength [nm] -> dB/km
  double dispersion_ps_nm_km = 16.5;
  double reference_wavelength_nm = 1550.0;
  double gamma_per_w_km = 1.13;
  PiecewiseLinear raman_gain_per_w_km;  // pump-signal shift [THz] -> 1/(W km)
  double temperature_k = 298.0;

  void validate() const;
};

/// Standard single-mode fiber with the built-in attenuation and Raman tables.
FiberSpec default_fiber();

/// Built-in attenuation table, 1350-1650 nm, flat minimum of 0.2 dB/km over 1550-1560 nm.
PiecewiseLinear default_attenuation_table();
/// Built-in 41-point silica Raman gain table, 0-24 THz, peak at 13.2 THz.
PiecewiseLinear default_raman_table();

inline constexpr double kMinimumLossWavelengthNm = 1555.0;

double attenuation_at(const FiberSpec& fiber, double wavelength_nm);

enum class RamanProfileMode {
  tabulated,
  /// Linear-in-shift approximation with unit frequency ratio on the loss side.
  triangular,
};

/// Raman coupling coefficient seen by the wave at `signal_thz` from the wave at
/// `pump_thz`, in 1/(W km). Positive when the pump is at the higher frequency;
/// negative (loss side, scaled by signal/pump frequency) otherwise. Shifts
/// beyond the table are zero.
double raman_gain(const FiberSpec& fiber, double pump_thz, double signal_thz,
                  RamanProfileMode mode = RamanProfileMode::tabulated);

/// Shift [THz] of the table's largest entry.
double raman_peak_shift_thz(const FiberSpec& fiber);

/// Frequency range [THz] covered by the attenuation table.
double min_supported_frequency_thz(const FiberSpec& fiber);
double max_supported_frequency_thz(const FiberSpec& fiber);

}  // namespace sclink
