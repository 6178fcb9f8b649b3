#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "sclink/link_model.hpp"
#include "sclink/raman_engine.hpp"

namespace sclink {

struct AmplifierSpec {
  Band band;
  double noise_figure_db;
  double gain;  // linear
  double saturation_dbm;
};

/// Dual-polarization ASE of a lumped amplifier, h f NF (G - 1) B, in mW.
/// NF is taken as 2 n_sp (large-gain convention).
double lumped_ase_power(const AmplifierSpec& amp, double channel_frequency_thz,
                        double bandwidth_ghz);

/// Bose-Einstein phonon occupancy at a Raman shift and fiber temperature.
double phonon_occupancy(double shift_thz, double temperature_k);

/// Spontaneous Raman ASE [mW] reaching the span end in one channel from the
/// backward pumps of a solved profile. Zero when the profile has no pumps.
double dra_ase_power(const PowerProfile& profile, const FiberSpec& fiber, std::size_t channel,
                     double bandwidth_ghz);

/// Square M-QAM constellation (M a power of 4), unnormalized odd-integer grid.
std::vector<std::complex<double>> qam_constellation(int order);

/// E|x|^4 / (E|x|^2)^2 - 2 over equiprobable points.
double excess_kurtosis(std::span<const std::complex<double>> constellation);

struct NliOptions {
  bool format_correction = true;
  /// Excess kurtosis of the transmitted format; 64-QAM by default.
  double excess_kurtosis = -0.619047619047619;
  /// Share of the Gaussian XPM variance carried by the fourth-moment term;
  /// the XPM scale is 1 + weight * excess_kurtosis.
  double format_correction_weight = 0.3;

  double xpm_scale() const;
};

/// |beta2| [s^2/m] from the fiber dispersion parameter at a wavelength.
double beta2_abs(const FiberSpec& fiber, double wavelength_nm);

/// Incoherent GN self-channel interference coefficient [1/W^2] for one span:
/// P_SPM = eta * P^3.
double spm_coefficient(const FiberSpec& fiber, double wavelength_nm, double symbol_rate_gbd,
                       double effective_length_km);

/// Incoherent GN cross-channel coefficient [1/W^2] for an interferer at
/// `spacing_ghz`: P_XPM = eta * P_i * P_j^2. Excludes format correction.
double xpm_coefficient(const FiberSpec& fiber, double wavelength_nm, double symbol_rate_gbd,
                       double interferer_symbol_rate_gbd, double spacing_ghz,
                       double interferer_effective_length_km);

/// Single-span NLI [mW] on one channel referred to the span input, using the
/// per-channel effective lengths of the solved profile.
double nli_power(const ChannelGrid& grid, const FiberSpec& fiber,
                 std::span<const EffectiveIntegral> integrals, std::size_t channel,
                 const NliOptions& options = {});

/// Pump-independent part of `nli_power` for a whole grid: the arcsinh kernels
/// and launch powers are computed once, effective lengths are supplied per
/// evaluation. Agrees with `nli_power` channel by channel.
class NliKernel {
 public:
  NliKernel(const ChannelGrid& grid, const FiberSpec& fiber, const NliOptions& options = {});

  /// NLI [mW] for every channel.
  std::vector<double> operator()(std::span<const EffectiveIntegral> integrals) const;

 private:
  // NLI in W per km^2 of effective length squared.
  Eigen::MatrixXd xpm_;  // format scale applied
  Eigen::VectorXd spm_;
};

/// 1/SNR = (p_ase + p_nli)/p_ch + 1/snr_trx. `snr_trx` may be +inf.
double channel_snr(double p_ch_mw, double p_ase_total_mw, double p_nli_mw, double snr_trx);

struct BandThroughput {
  std::map<Band, double> per_band_tbps;
  double total_tbps = 0.0;
};

/// Shannon throughput per band: sum of 2 R_s log2(1 + SNR) over its channels.
BandThroughput band_throughput(const ChannelGrid& grid, std::span<const double> snr);

struct ChannelQuality {
  double frequency_thz;
  Band band;
  double snr_ase;
  double snr_nli;
  double snr_total;
  double throughput_gbps;
};

struct QualityReport {
  std::vector<ChannelQuality> channels;
  BandThroughput throughput;
  double transceiver_snr;
};

void write_quality_tsv(std::ostream& out, const QualityReport& report);

}  // namespace sclink
