#include "sclink/raman_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/QR>

#include "sclink/errors.hpp"
#include "sclink/units.hpp"

namespace sclink {

double RamanPump::frequency_thz() const { return wavelength_nm_to_thz(wavelength_nm); }

void RamanPumpSet::validate() const {
  for (std::size_t k = 0; k < pumps.size(); ++k) {
    const auto& p = pumps[k];
    if (!(p.power_mw >= 0.0 && p.power_mw <= kMaxPumpPowerMw)) {
      std::ostringstream msg;
      msg << "pump " << k << ": power " << p.power_mw << " mW outside [0, " << kMaxPumpPowerMw
          << "]";
      throw ValidationError(msg.str());
    }
    if (!(p.wavelength_nm >= kPumpWindowMinNm && p.wavelength_nm <= kPumpWindowMaxNm)) {
      std::ostringstream msg;
      msg << "pump " << k << ": wavelength " << p.wavelength_nm << " nm outside ["
          << kPumpWindowMinNm << ", " << kPumpWindowMaxNm << "]";
      throw ValidationError(msg.str());
    }
  }
}

double RamanPumpSet::total_power_mw() const {
  double sum = 0.0;
  for (const auto& p : pumps) sum += p.power_mw;
  return sum;
}

bool PowerProfile::has_pumps() const {
  return pump_mw.rows() > 0 && pump_mw.maxCoeff() > 0.0;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Everything inside the solver is in W and km. Signal blocks are borrowed
// from the propagator; pump blocks are built per call.
struct Waves {
  const Eigen::VectorXd& freq_sig;
  const Eigen::VectorXd& alpha_sig;
  const MatrixXd& k_ss;
  double triangular_slope;  // nonzero selects the triangular signal profile
  VectorXd freq_pump, alpha_pump;
  MatrixXd k_sp, k_ps, k_pp;
};

void build_pump_blocks(Waves& w, const FiberSpec& fiber, const RamanPumpSet& pumps,
                       const RamanOptions& opt) {
  const auto ns = w.freq_sig.size();
  const auto np = static_cast<Eigen::Index>(pumps.size());
  w.freq_pump.resize(np);
  w.alpha_pump.resize(np);
  for (Eigen::Index k = 0; k < np; ++k) {
    const auto& pump = pumps.pumps[static_cast<std::size_t>(k)];
    w.freq_pump[k] = pump.frequency_thz();
    w.alpha_pump[k] = db_per_km_to_neper(attenuation_at(fiber, pump.wavelength_nm));
  }
  w.k_sp = MatrixXd::Zero(ns, np);
  w.k_ps = MatrixXd::Zero(np, ns);
  w.k_pp = MatrixXd::Zero(np, np);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index k = 0; k < np; ++k) {
      w.k_sp(i, k) = raman_gain(fiber, w.freq_pump[k], w.freq_sig[i]);
      if (opt.pump_depletion) w.k_ps(k, i) = raman_gain(fiber, w.freq_sig[i], w.freq_pump[k]);
    }
  }
  if (opt.pump_interactions) {
    for (Eigen::Index k = 0; k < np; ++k) {
      for (Eigen::Index m = 0; m < np; ++m) {
        if (k != m) w.k_pp(k, m) = raman_gain(fiber, w.freq_pump[m], w.freq_pump[k]);
      }
    }
  }
}

// Solution of one family of waves at the nodes, with z-derivatives for
// Hermite interpolation at step midpoints.
struct Sweep {
  MatrixXd value;  // [wave x node], W
  MatrixXd slope;  // d/dz, W/km
};

// Cubic Hermite midpoint; fourth-order accurate, so RK4 stays fourth order
// when the partner family is frozen.
MatrixXd midpoints(const Sweep& s, double h) {
  const Eigen::Index m = s.value.cols() - 1;
  MatrixXd mid(s.value.rows(), m);
  for (Eigen::Index n = 0; n < m; ++n) {
    mid.col(n) = 0.5 * (s.value.col(n) + s.value.col(n + 1)) +
                 (h / 8.0) * (s.slope.col(n) - s.slope.col(n + 1));
  }
  return mid;
}

void check_state(const VectorXd& p, double z_km, const char* family) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
      std::ostringstream msg;
      msg << family << " wave " << i << " reached power " << p[i] << " W at z = " << z_km
          << " km; reduce the integration step";
      throw SolverError(msg.str());
    }
  }
}

// Signal-signal SRS rate (K_ss P) for every signal.
VectorXd signal_self_rate(const Waves& w, const VectorXd& p) {
  if (w.triangular_slope == 0.0) return w.k_ss * p;
  const double total = p.sum();
  const double weighted = w.freq_sig.dot(p);
  return w.triangular_slope * (VectorXd::Constant(p.size(), weighted) - w.freq_sig * total);
}

// Forward sweep of the signals with the pump contribution frozen at nodes
// (ext_node) and midpoints (ext_mid), both in 1/km.
Sweep signal_sweep(const Waves& w, const VectorXd& launch_w, const MatrixXd& ext_node,
                   const MatrixXd& ext_mid, double h) {
  const Eigen::Index m = ext_node.cols() - 1;
  Sweep s{MatrixXd(launch_w.size(), m + 1), MatrixXd(launch_w.size(), m + 1)};
  auto rhs = [&](const VectorXd& p, const auto& ext) -> VectorXd {
    return p.cwiseProduct(-w.alpha_sig + signal_self_rate(w, p) + ext);
  };
  VectorXd p = launch_w;
  for (Eigen::Index n = 0; n < m; ++n) {
    const VectorXd k1 = rhs(p, ext_node.col(n));
    const VectorXd k2 = rhs(p + 0.5 * h * k1, ext_mid.col(n));
    const VectorXd k3 = rhs(p + 0.5 * h * k2, ext_mid.col(n));
    const VectorXd k4 = rhs(p + h * k3, ext_node.col(n + 1));
    s.value.col(n) = p;
    s.slope.col(n) = k1;
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_state(p, static_cast<double>(n + 1) * h, "signal");
  }
  s.value.col(m) = p;
  s.slope.col(m) = rhs(p, ext_node.col(m));
  return s;
}

// Backward sweep of the pumps from z = L with the signal contribution frozen.
// Integrates in u = L - z; stored slopes are d/dz.
Sweep pump_sweep(const Waves& w, const VectorXd& injected_w, const MatrixXd& ext_node,
                 const MatrixXd& ext_mid, double h) {
  const Eigen::Index m = ext_node.cols() - 1;
  Sweep s{MatrixXd(injected_w.size(), m + 1), MatrixXd(injected_w.size(), m + 1)};
  auto rhs_u = [&](const VectorXd& p, const auto& ext) -> VectorXd {
    return p.cwiseProduct(-w.alpha_pump + w.k_pp * p + ext);
  };
  VectorXd p = injected_w;
  for (Eigen::Index n = m; n > 0; --n) {
    const VectorXd k1 = rhs_u(p, ext_node.col(n));
    const VectorXd k2 = rhs_u(p + 0.5 * h * k1, ext_mid.col(n - 1));
    const VectorXd k3 = rhs_u(p + 0.5 * h * k2, ext_mid.col(n - 1));
    const VectorXd k4 = rhs_u(p + h * k3, ext_node.col(n - 1));
    s.value.col(n) = p;
    s.slope.col(n) = -k1;
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_state(p, static_cast<double>(n - 1) * h, "pump");
  }
  s.value.col(0) = p;
  s.slope.col(0) = -rhs_u(p, ext_node.col(0));
  return s;
}

double relative_change(const MatrixXd& next, const MatrixXd& prev) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < next.rows(); ++i) {
    const double scale = prev.row(i).cwiseAbs().maxCoeff();
    if (scale <= 0.0) continue;
    worst = std::max(worst, (next.row(i) - prev.row(i)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

// Anderson mixing of the pump-profile fixed point x = G(x). With depth 0 this
// is plain relaxation x <- x + beta (G(x) - x). Slopes ride along with the
// same coefficients; only values enter the least-squares fit.
class AndersonMixer {
 public:
  AndersonMixer(int depth, double beta) : depth_(std::max(depth, 0)), beta_(beta) {}

  Sweep next(const Sweep& x, const Sweep& gx) {
    const VectorXd xv = flatten(x.value), xs = flatten(x.slope);
    const VectorXd f = flatten(gx.value) - xv;
    const VectorXd fs = flatten(gx.slope) - xs;
    if (has_prev_) {
      push(xv - prev_x_, f - prev_f_, xs - prev_xs_, fs - prev_fs_);
    }
    prev_x_ = xv; prev_f_ = f; prev_xs_ = xs; prev_fs_ = fs; has_prev_ = true;

    VectorXd nv = xv + beta_ * f;
    VectorXd ns = xs + beta_ * fs;
    if (!dx_.empty()) {
      const auto m = static_cast<Eigen::Index>(dx_.size());
      MatrixXd df(f.size(), m);
      for (Eigen::Index c = 0; c < m; ++c) df.col(c) = df_[static_cast<std::size_t>(c)];
      const VectorXd gamma = df.colPivHouseholderQr().solve(f);
      VectorXd av = nv, as = ns;
      for (Eigen::Index c = 0; c < m; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        av -= gamma[c] * (dx_[cc] + beta_ * df_[cc]);
        as -= gamma[c] * (dxs_[cc] + beta_ * dfs_[cc]);
      }
      if (av.allFinite() && av.minCoeff() >= 0.0) {
        nv = std::move(av);
        ns = std::move(as);
      } else {
        clear();
      }
    }
    return Sweep{unflatten(nv, x.value), unflatten(ns, x.slope)};
  }

 private:
  static VectorXd flatten(const MatrixXd& m) {
    return Eigen::Map<const VectorXd>(m.data(), m.size());
  }
  static MatrixXd unflatten(const VectorXd& v, const MatrixXd& like) {
    return Eigen::Map<const MatrixXd>(v.data(), like.rows(), like.cols());
  }
  void push(VectorXd dx, VectorXd df, VectorXd dxs, VectorXd dfs) {
    if (depth_ == 0) return;
    if (static_cast<int>(dx_.size()) == depth_) {
      dx_.erase(dx_.begin()); df_.erase(df_.begin());
      dxs_.erase(dxs_.begin()); dfs_.erase(dfs_.begin());
    }
    dx_.push_back(std::move(dx)); df_.push_back(std::move(df));
    dxs_.push_back(std::move(dxs)); dfs_.push_back(std::move(dfs));
  }
  void clear() { dx_.clear(); df_.clear(); dxs_.clear(); dfs_.clear(); }

  int depth_;
  double beta_;
  bool has_prev_ = false;
  VectorXd prev_x_, prev_f_, prev_xs_, prev_fs_;
  std::vector<VectorXd> dx_, df_, dxs_, dfs_;
};

}  // namespace

SpanPropagator::SpanPropagator(const ChannelGrid& grid, const FiberSpec& fiber,
                               const RamanOptions& options)
    : fiber_(fiber), options_(options) {
  if (grid.empty()) throw ValidationError("propagate: channel grid is empty");
  if (!(options.step_km > 0.0)) throw ValidationError("propagate: step must be positive");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) {
    throw ValidationError("propagate: damping must lie in [0, 1)");
  }
  if (options.max_iterations < 1) throw ValidationError("propagate: max_iterations must be >= 1");
  if (!(options.tolerance > 0.0)) throw ValidationError("propagate: tolerance must be positive");
  const auto ns = static_cast<Eigen::Index>(grid.size());
  freq_sig_.resize(ns);
  alpha_sig_.resize(ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    const auto& ch = grid[static_cast<std::size_t>(i)];
    launch_mw_.push_back(ch.launch_power_mw);
    freq_sig_[i] = ch.frequency_thz;
    alpha_sig_[i] = db_per_km_to_neper(attenuation_at(fiber, ch.wavelength_nm()));
  }
  if (options.signal_profile == RamanProfileMode::triangular) {
    const double peak = raman_peak_shift_thz(fiber);
    triangular_slope_ = fiber.raman_gain_per_w_km(peak) / peak;
  } else {
    k_ss_ = MatrixXd::Zero(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
      for (Eigen::Index j = 0; j < ns; ++j) {
        if (i != j) k_ss_(i, j) = raman_gain(fiber, freq_sig_[j], freq_sig_[i]);
      }
    }
  }
}

PowerProfile SpanPropagator::operator()(const RamanPumpSet& pumps) const {
  pumps.validate();
  const RamanOptions& options = options_;
  Waves w{freq_sig_, alpha_sig_, k_ss_, triangular_slope_, {}, {}, {}, {}, {}};
  build_pump_blocks(w, fiber_, pumps, options);
  const auto steps = static_cast<Eigen::Index>(
      std::max<double>(1.0, std::round(fiber_.length_km / options.step_km)));
  const double h = fiber_.length_km / static_cast<double>(steps);
  const auto ns = freq_sig_.size();
  const auto np = static_cast<Eigen::Index>(pumps.size());

  VectorXd launch(ns);
  for (Eigen::Index i = 0; i < ns; ++i) launch[i] = launch_mw_[static_cast<std::size_t>(i)] * 1e-3;
  VectorXd injected(np);
  for (Eigen::Index k = 0; k < np; ++k) {
    injected[k] = pumps.pumps[static_cast<std::size_t>(k)].power_mw * 1e-3;
  }

  PowerProfile out;
  out.z_km.resize(static_cast<std::size_t>(steps + 1));
  for (Eigen::Index n = 0; n <= steps; ++n) out.z_km[static_cast<std::size_t>(n)] = n * h;
  out.signal_frequency_thz.assign(w.freq_sig.data(), w.freq_sig.data() + ns);
  out.pump_frequency_thz.assign(w.freq_pump.data(), w.freq_pump.data() + np);

  const MatrixXd no_ext_node = MatrixXd::Zero(ns, steps + 1);
  const MatrixXd no_ext_mid = MatrixXd::Zero(ns, steps);
  Sweep sig = signal_sweep(w, launch, no_ext_node, no_ext_mid, h);

  if (!pumps.active()) {
    out.signal_mw = sig.value * 1e3;
    out.pump_mw = MatrixXd::Zero(np, steps + 1);
    out.iterations = 1;
    out.residual = 0.0;
    return out;
  }

  Sweep pump = pump_sweep(w, injected, w.k_ps * sig.value, w.k_ps * midpoints(sig, h), h);
  AndersonMixer mixer(options.acceleration_depth, 1.0 - options.damping);
  double residual = std::numeric_limits<double>::infinity();
  int iteration = 0;
  while (iteration < options.max_iterations) {
    ++iteration;
    Sweep next_sig = signal_sweep(w, launch, w.k_sp * pump.value, w.k_sp * midpoints(pump, h), h);
    Sweep swept = pump_sweep(w, injected, w.k_ps * next_sig.value,
                             w.k_ps * midpoints(next_sig, h), h);
    residual = std::max(relative_change(swept.value, pump.value),
                        relative_change(next_sig.value, sig.value));
    sig = std::move(next_sig);
    if (residual < options.tolerance) {
      // The last signal sweep already agrees with `swept` to within tolerance.
      pump = std::move(swept);
      break;
    }
    pump = mixer.next(pump, swept);
  }
  if (!(residual < options.tolerance)) {
    std::ostringstream msg;
    msg << "backward-pump boundary iteration did not converge in " << options.max_iterations
        << " iterations (residual " << residual << ")";
    throw SolverError(msg.str(), residual);
  }
  out.signal_mw = sig.value * 1e3;
  out.pump_mw = pump.value * 1e3;
  out.iterations = iteration;
  out.residual = residual;
  return out;
}

PowerProfile propagate(const ChannelGrid& grid, const FiberSpec& fiber, const RamanPumpSet& pumps,
                       const RamanOptions& options) {
  return SpanPropagator(grid, fiber, options)(pumps);
}

std::vector<double> on_off_gain(const PowerProfile& with_pumps, const PowerProfile& without_pumps) {
  if (with_pumps.signal_frequency_thz != without_pumps.signal_frequency_thz ||
      with_pumps.z_km.size() != without_pumps.z_km.size() ||
      with_pumps.length_km() != without_pumps.length_km()) {
    throw ValidationError("on_off_gain: profiles do not share grid and fiber");
  }
  const Eigen::Index last = with_pumps.signal_mw.cols() - 1;
  std::vector<double> gain(with_pumps.channels());
  for (std::size_t i = 0; i < gain.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    gain[i] = linear_to_db(with_pumps.signal_mw(ii, last) / without_pumps.signal_mw(ii, last));
  }
  return gain;
}

std::vector<EffectiveIntegral> effective_integrals(const PowerProfile& profile) {
  const auto m = static_cast<Eigen::Index>(profile.positions()) - 1;
  const double h = profile.length_km() / static_cast<double>(m);
  std::vector<EffectiveIntegral> out(profile.channels());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = profile.signal_mw.row(static_cast<Eigen::Index>(i));
    const double p0 = row[0];
    double integral = 0.0;
    if (m % 2 == 0) {
      // Composite Simpson.
      for (Eigen::Index n = 0; n < m; n += 2) {
        integral += (row[n] + 4.0 * row[n + 1] + row[n + 2]) * h / 3.0;
      }
    } else {
      for (Eigen::Index n = 0; n < m; ++n) integral += 0.5 * (row[n] + row[n + 1]) * h;
    }
    out[i] = EffectiveIntegral{integral / p0, row[m]};
  }
  return out;
}

std::vector<double> photon_flux_balance(const PowerProfile& profile, const FiberSpec& fiber,
                                        const RamanOptions& options) {
  const std::size_t ns = profile.channels();
  const std::size_t np = profile.pump_frequency_thz.size();
  std::vector<double> freq(profile.signal_frequency_thz);
  freq.insert(freq.end(), profile.pump_frequency_thz.begin(), profile.pump_frequency_thz.end());
  const std::size_t n = ns + np;
  MatrixXd k = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool both_signals = i < ns && j < ns;
      const auto mode = both_signals ? options.signal_profile : RamanProfileMode::tabulated;
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          raman_gain(fiber, freq[j], freq[i], mode);
    }
  }
  std::vector<double> balance(profile.positions());
  for (std::size_t z = 0; z < profile.positions(); ++z) {
    VectorXd p(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < ns; ++i) {
      p[static_cast<Eigen::Index>(i)] =
          profile.signal_mw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(z)) * 1e-3;
    }
    for (std::size_t q = 0; q < np; ++q) {
      p[static_cast<Eigen::Index>(ns + q)] =
          profile.pump_mw(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(z)) * 1e-3;
    }
    const VectorXd srs = p.cwiseProduct(k * p);
    double net = 0.0, magnitude = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double term = srs[static_cast<Eigen::Index>(i)] / freq[i];
      net += term;
      magnitude += std::abs(term);
    }
    balance[z] = magnitude > 0.0 ? net / magnitude : 0.0;
  }
  return balance;
}

void write_profile_tsv(std::ostream& out, const PowerProfile& profile) {
  out << "z_km";
  for (std::size_t i = 0; i < profile.channels(); ++i) {
    out << "\tch" << i << "_" << std::fixed << std::setprecision(3)
        << profile.signal_frequency_thz[i] << "THz_dbm";
  }
  for (std::size_t k = 0; k < profile.pump_frequency_thz.size(); ++k) {
    out << "\tpump" << k << "_mw";
  }
  out << "\n";
  out << std::setprecision(6);
  for (std::size_t z = 0; z < profile.positions(); ++z) {
    const auto zz = static_cast<Eigen::Index>(z);
    out << std::fixed << std::setprecision(4) << profile.z_km[z];
    out << std::setprecision(6);
    for (std::size_t i = 0; i < profile.channels(); ++i) {
      out << "\t" << mw_to_dbm(profile.signal_mw(static_cast<Eigen::Index>(i), zz));
    }
    for (std::size_t k = 0; k < profile.pump_frequency_thz.size(); ++k) {
      out << "\t" << profile.pump_mw(static_cast<Eigen::Index>(k), zz);
    }
    out << "\n";
  }
}

}  // namespace sclink
