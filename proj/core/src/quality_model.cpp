#include "sclink/quality_model.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "sclink/errors.hpp"
#include "sclink/units.hpp"

namespace sclink {

using constants::pi;

double lumped_ase_power(const AmplifierSpec& amp, double channel_frequency_thz,
                        double bandwidth_ghz) {
  if (!(amp.gain >= 1.0)) throw ValidationError("lumped_ase_power: gain must be >= 1");
  const double nf = db_to_linear(amp.noise_figure_db);
  const double watts = constants::planck * channel_frequency_thz * 1e12 * nf * (amp.gain - 1.0) *
                       bandwidth_ghz * 1e9;
  return watts * 1e3;
}

double phonon_occupancy(double shift_thz, double temperature_k) {
  if (temperature_k <= 0.0) return 0.0;
  const double x = constants::planck * std::abs(shift_thz) * 1e12 /
                   (constants::boltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

double dra_ase_power(const PowerProfile& profile, const FiberSpec& fiber, std::size_t channel,
                     double bandwidth_ghz) {
  if (!profile.has_pumps()) return 0.0;
  const auto i = static_cast<Eigen::Index>(channel);
  const auto m = static_cast<Eigen::Index>(profile.positions()) - 1;
  const double h = profile.length_km() / static_cast<double>(m);
  const double f_i = profile.signal_frequency_thz[channel];
  const double p_end = profile.signal_mw(i, m);

  // Source density along z, already carried to the span end.
  Eigen::VectorXd source = Eigen::VectorXd::Zero(m + 1);
  for (std::size_t k = 0; k < profile.pump_frequency_thz.size(); ++k) {
    const double f_k = profile.pump_frequency_thz[k];
    if (!(f_k > f_i)) continue;
    const double g = raman_gain(fiber, f_k, f_i);
    if (g <= 0.0) continue;
    const double bose = 1.0 + phonon_occupancy(f_k - f_i, fiber.temperature_k);
    for (Eigen::Index n = 0; n <= m; ++n) {
      const double transmission = p_end / profile.signal_mw(i, n);
      source[n] += g * profile.pump_mw(static_cast<Eigen::Index>(k), n) * 1e-3 * bose * transmission;
    }
  }
  double integral = 0.0;
  if (m % 2 == 0) {
    for (Eigen::Index n = 0; n < m; n += 2) {
      integral += (source[n] + 4.0 * source[n + 1] + source[n + 2]) * h / 3.0;
    }
  } else {
    for (Eigen::Index n = 0; n < m; ++n) integral += 0.5 * (source[n] + source[n + 1]) * h;
  }
  const double watts = 2.0 * constants::planck * f_i * 1e12 * bandwidth_ghz * 1e9 * integral;
  return watts * 1e3;
}

std::vector<std::complex<double>> qam_constellation(int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (order < 4 || side * side != order) {
    throw ValidationError("qam_constellation: order must be a square number >= 4");
  }
  std::vector<std::complex<double>> points;
  points.reserve(static_cast<std::size_t>(order));
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      points.emplace_back(2.0 * a - (side - 1), 2.0 * b - (side - 1));
    }
  }
  return points;
}

double excess_kurtosis(std::span<const std::complex<double>> constellation) {
  if (constellation.empty()) throw ValidationError("excess_kurtosis: empty constellation");
  double m2 = 0.0, m4 = 0.0;
  for (const auto& x : constellation) {
    const double e = std::norm(x);
    m2 += e;
    m4 += e * e;
  }
  const auto n = static_cast<double>(constellation.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 2.0;
}

double NliOptions::xpm_scale() const {
  return format_correction ? 1.0 + format_correction_weight * excess_kurtosis : 1.0;
}

double beta2_abs(const FiberSpec& fiber, double wavelength_nm) {
  const double d_si = fiber.dispersion_ps_nm_km * 1e-6;  // s/m^2
  const double lambda = wavelength_nm * 1e-9;
  return d_si * lambda * lambda / (2.0 * pi * constants::speed_of_light);
}

namespace {

double asymptotic_length_m(const FiberSpec& fiber, double wavelength_nm) {
  return 1e3 / db_per_km_to_neper(attenuation_at(fiber, wavelength_nm));
}

}  // namespace

double spm_coefficient(const FiberSpec& fiber, double wavelength_nm, double symbol_rate_gbd,
                       double effective_length_km) {
  const double gamma = fiber.gamma_per_w_km * 1e-3;
  const double b2 = beta2_abs(fiber, wavelength_nm);
  const double la = asymptotic_length_m(fiber, wavelength_nm);
  const double rs = symbol_rate_gbd * 1e9;
  const double leff = effective_length_km * 1e3;
  const double denom = pi * b2 * la * rs * rs;
  return (8.0 / 27.0) * gamma * gamma * leff * leff * std::asinh(0.5 * pi * pi * b2 * la * rs * rs) /
         denom;
}

double xpm_coefficient(const FiberSpec& fiber, double wavelength_nm, double symbol_rate_gbd,
                       double interferer_symbol_rate_gbd, double spacing_ghz,
                       double interferer_effective_length_km) {
  const double gamma = fiber.gamma_per_w_km * 1e-3;
  const double b2 = beta2_abs(fiber, wavelength_nm);
  const double la = asymptotic_length_m(fiber, wavelength_nm);
  const double rs = symbol_rate_gbd * 1e9;
  const double rj = interferer_symbol_rate_gbd * 1e9;
  const double delta = std::abs(spacing_ghz) * 1e9;
  const double leff = interferer_effective_length_km * 1e3;
  const double c = pi * pi * b2 * la * rs;
  const double kernel = std::asinh(c * (delta + 0.5 * rj)) - std::asinh(c * (delta - 0.5 * rj));
  return (8.0 / 27.0) * gamma * gamma * leff * leff * kernel / (pi * b2 * la * rj * rj);
}

double nli_power(const ChannelGrid& grid, const FiberSpec& fiber,
                 std::span<const EffectiveIntegral> integrals, std::size_t channel,
                 const NliOptions& options) {
  if (integrals.size() != grid.size()) {
    throw ValidationError("nli_power: one effective integral per channel is required");
  }
  const Channel& ci = grid[channel];
  const double lambda = ci.wavelength_nm();
  const double p_i = ci.launch_power_mw * 1e-3;
  double spm = spm_coefficient(fiber, lambda, ci.symbol_rate_gbd, integrals[channel].length_km) *
               p_i * p_i * p_i;
  double xpm = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (j == channel) continue;
    const Channel& cj = grid[j];
    const double p_j = cj.launch_power_mw * 1e-3;
    xpm += xpm_coefficient(fiber, lambda, ci.symbol_rate_gbd, cj.symbol_rate_gbd,
                           (cj.frequency_thz - ci.frequency_thz) * 1e3, integrals[j].length_km) *
           p_i * p_j * p_j;
  }
  return (spm + options.xpm_scale() * xpm) * 1e3;
}

NliKernel::NliKernel(const ChannelGrid& grid, const FiberSpec& fiber, const NliOptions& options) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  xpm_ = Eigen::MatrixXd::Zero(n, n);
  spm_.resize(n);
  const double scale = options.xpm_scale();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Channel& ci = grid[static_cast<std::size_t>(i)];
    const double lambda = ci.wavelength_nm();
    const double p_i = ci.launch_power_mw * 1e-3;
    // Unit effective length (1 km) leaves the kernel per km^2.
    spm_[i] = spm_coefficient(fiber, lambda, ci.symbol_rate_gbd, 1.0) * p_i * p_i * p_i;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Channel& cj = grid[static_cast<std::size_t>(j)];
      const double p_j = cj.launch_power_mw * 1e-3;
      xpm_(i, j) = scale *
                   xpm_coefficient(fiber, lambda, ci.symbol_rate_gbd, cj.symbol_rate_gbd,
                                   (cj.frequency_thz - ci.frequency_thz) * 1e3, 1.0) *
                   p_i * p_j * p_j;
    }
  }
}

std::vector<double> NliKernel::operator()(std::span<const EffectiveIntegral> integrals) const {
  const auto n = spm_.size();
  if (static_cast<Eigen::Index>(integrals.size()) != n) {
    throw ValidationError("NliKernel: one effective integral per channel is required");
  }
  Eigen::VectorXd leff2(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double l = integrals[static_cast<std::size_t>(j)].length_km;
    leff2[j] = l * l;
  }
  const Eigen::VectorXd watts = spm_.cwiseProduct(leff2) + xpm_ * leff2;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = watts[i] * 1e3;
  return out;
}

double channel_snr(double p_ch_mw, double p_ase_total_mw, double p_nli_mw, double snr_trx) {
  if (!(p_ch_mw > 0.0)) throw ValidationError("channel_snr: channel power must be positive");
  if (p_ase_total_mw < 0.0 || p_nli_mw < 0.0 || snr_trx < 0.0) {
    throw ValidationError("channel_snr: noise terms must be non-negative");
  }
  const double inverse = (p_ase_total_mw + p_nli_mw) / p_ch_mw + 1.0 / snr_trx;
  return 1.0 / inverse;
}

BandThroughput band_throughput(const ChannelGrid& grid, std::span<const double> snr) {
  if (snr.size() != grid.size()) {
    throw ValidationError("band_throughput: one SNR per channel is required");
  }
  BandThroughput out;
  for (Band b : grid.bands()) out.per_band_tbps[b] = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double tbps = 2.0 * grid[i].symbol_rate_gbd * 1e-3 * std::log2(1.0 + snr[i]);
    out.per_band_tbps[grid[i].band] += tbps;
  }
  for (const auto& [band, tbps] : out.per_band_tbps) out.total_tbps += tbps;
  return out;
}

void write_quality_tsv(std::ostream& out, const QualityReport& report) {
  out << "frequency_thz\twavelength_nm\tband\tsnr_ase_db\tsnr_nli_db\tsnr_db\tthroughput_gbps\n";
  for (const auto& ch : report.channels) {
    out << std::fixed << std::setprecision(4) << ch.frequency_thz << "\t"
        << frequency_thz_to_nm(ch.frequency_thz) << "\t" << band_name(ch.band) << "\t"
        << std::setprecision(6) << linear_to_db(ch.snr_ase) << "\t" << linear_to_db(ch.snr_nli)
        << "\t" << linear_to_db(ch.snr_total) << "\t" << ch.throughput_gbps << "\n";
  }
}

}  // namespace sclink
