#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sclink/link_model.hpp"

namespace sclink {

inline constexpr double kMaxPumpPowerMw = 250.0;
inline constexpr double kPumpWindowMinNm = 1350.0;
inline constexpr double kPumpWindowMaxNm = 1460.0;

struct RamanPump {
  double wavelength_nm;
  double power_mw;

  double frequency_thz() const;
  bool operator==(const RamanPump&) const = default;
};

/// Backward (counter-propagating) pumps injected at the span end.
struct RamanPumpSet {
  std::vector<RamanPump> pumps;

  /// Throws ValidationError for powers outside [0, 250] mW or wavelengths
  /// outside the 1350-1460 nm window.
  void validate() const;
  std::size_t size() const { return pumps.size(); }
  bool empty() const { return pumps.empty(); }
  double total_power_mw() const;
  bool active() const { return total_power_mw() > 0.0; }

  bool operator==(const RamanPumpSet&) const = default;
};

struct RamanOptions {
  double step_km = 0.1;
  /// Weight kept from the previous pump profile in each relaxation step.
  double damping = 0.5;
  /// Anderson mixing depth applied on top of the relaxation; 0 gives plain
  /// damped iteration.
  int acceleration_depth = 3;
  /// Relative change between successive iterates at which the boundary
  /// iteration stops.
  double tolerance = 1e-6;
  int max_iterations = 200;
  /// Signals deplete the pumps.
  bool pump_depletion = true;
  /// SRS between pumps.
  bool pump_interactions = true;
  /// `triangular` replaces the tabulated profile for signal-signal ISRS.
  RamanProfileMode signal_profile = RamanProfileMode::tabulated;
};

/// Power evolution over one span. Matrices are [wave x position] in mW.
struct PowerProfile {
  std::vector<double> z_km;
  std::vector<double> signal_frequency_thz;
  std::vector<double> pump_frequency_thz;
  Eigen::MatrixXd signal_mw;
  Eigen::MatrixXd pump_mw;
  int iterations = 0;
  double residual = 0.0;

  std::size_t positions() const { return z_km.size(); }
  std::size_t channels() const { return signal_frequency_thz.size(); }
  double length_km() const { return z_km.back(); }
  bool has_pumps() const;
};

/// Precomputed signal-side coupling for one grid and fiber; evaluates spans
/// for many pump sets. Immutable after construction and safe to share between
/// threads.
class SpanPropagator {
 public:
  SpanPropagator(const ChannelGrid& grid, const FiberSpec& fiber, const RamanOptions& options = {});

  PowerProfile operator()(const RamanPumpSet& pumps) const;

  const RamanOptions& options() const { return options_; }

 private:
  FiberSpec fiber_;
  RamanOptions options_;
  std::vector<double> launch_mw_;
  Eigen::VectorXd freq_sig_;
  Eigen::VectorXd alpha_sig_;
  Eigen::MatrixXd k_ss_;
  double triangular_slope_ = 0.0;
};

/// Solves the coupled Raman power equations for forward signals and backward
/// pumps over one span with fixed-step RK4.
///
/// With active pumps the two-point problem (signals fixed at z = 0, pumps at
/// z = L) is solved by alternating a forward signal sweep and a backward pump
/// sweep, each against the other family's frozen profile, with
/// Anderson-accelerated relaxation on the pump profile. Throws SolverError
/// when the iteration cap is hit or a power turns negative.
PowerProfile propagate(const ChannelGrid& grid, const FiberSpec& fiber, const RamanPumpSet& pumps,
                       const RamanOptions& options = {});

/// 10 log10(P_with(L) / P_without(L)) per channel.
std::vector<double> on_off_gain(const PowerProfile& with_pumps, const PowerProfile& without_pumps);

struct EffectiveIntegral {
  double length_km;  // integral of P(z)/P(0) over the span
  double output_mw;  // P(L)
};

std::vector<EffectiveIntegral> effective_integrals(const PowerProfile& profile);

/// Photon-number balance of the SRS terms at each position:
/// sum_i (1/f_i) * srs_i, normalized by sum_i |(1/f_i) * srs_i|.
/// Zero for exact photon conservation.
std::vector<double> photon_flux_balance(const PowerProfile& profile, const FiberSpec& fiber,
                                        const RamanOptions& options = {});

/// `z_km` followed by one dBm column per channel and one mW column per pump.
void write_profile_tsv(std::ostream& out, const PowerProfile& profile);

}  // namespace sclink
