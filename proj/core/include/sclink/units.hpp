#pragma once

#include <cmath>

namespace sclink {

namespace constants {
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;      // J/K
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double wavelength_nm_to_thz(double nm) {
  return constants::speed_of_light / (nm * 1e-9) * 1e-12;
}
inline double frequency_thz_to_nm(double thz) {
  return constants::speed_of_light / (thz * 1e12) * 1e9;
}

/// dB/km to the power attenuation coefficient in 1/km.
inline double db_per_km_to_neper(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0;
}

}  // namespace sclink
