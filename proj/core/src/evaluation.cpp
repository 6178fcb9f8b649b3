#include "sclink/evaluation.hpp"

#include <cmath>

#include "sclink/errors.hpp"
#include "sclink/units.hpp"

namespace sclink {

void LinkSetup::validate() const {
  plan.validate();
  fiber.validate();
  for (const auto& window : plan.bands) {
    const std::string name(band_name(window.label));
    if (!noise_figure_db.count(window.label)) {
      throw ValidationError("band " + name + ": missing noise figure");
    }
    if (!efficiency.count(window.label)) {
      throw ValidationError("band " + name + ": missing efficiency curve");
    }
    if (efficiency.at(window.label).band() != window.label) {
      throw ValidationError("band " + name + ": efficiency curve is labelled for band " +
                            std::string(band_name(efficiency.at(window.label).band())));
    }
  }
  if (raman_power_model == RamanPowerModel::measured && pump_draw.empty()) {
    throw ValidationError("no pump draw curves loaded");
  }
  if (!(transceiver_snr_db > 0.0)) throw ValidationError("transceiver SNR must be positive");
}

namespace {

ChannelGrid grid_for(const LinkSetup& s) {
  s.validate();
  return build_grid(s.plan, s.spacing_ghz, s.symbol_rate_gbd, s.launch_power_dbm);
}

}  // namespace

LinkEvaluator::LinkEvaluator(LinkSetup setup)
    : setup_(std::move(setup)),
      grid_(grid_for(setup_)),
      propagator_(grid_, setup_.fiber, setup_.raman),
      nli_(grid_, setup_.fiber, setup_.nli),
      unpumped_(propagator_(RamanPumpSet{})) {}

SpanResult LinkEvaluator::span(const RamanPumpSet& pumps) const {
  SpanResult r;
  r.profile = pumps.active() ? propagator_(pumps) : unpumped_;
  if (!pumps.active()) {
    // Keep the pump rows so downstream code sees the right pump count.
    r.profile.pump_frequency_thz.clear();
    for (const auto& p : pumps.pumps) r.profile.pump_frequency_thz.push_back(p.frequency_thz());
    r.profile.pump_mw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pumps.size()),
                                              static_cast<Eigen::Index>(r.profile.positions()));
  }
  r.on_off_gain_db = on_off_gain(r.profile, unpumped_);
  const auto integrals = effective_integrals(r.profile);

  std::vector<double> end_mw(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) end_mw[i] = integrals[i].output_mw;
  for (Band b : grid_.bands()) {
    r.lumped[b] = lumped_optical_output(grid_, b, end_mw,
                                        setup_.efficiency.at(b).saturation_dbm(), &r.warnings);
  }

  const std::size_t n = grid_.size();
  r.channel_gain.resize(n);
  r.ase_mw.resize(n);
  r.nli_mw = nli_(integrals);
  for (std::size_t i = 0; i < n; ++i) {
    const Channel& ch = grid_[i];
    const double g = std::max(1.0, ch.launch_power_mw / end_mw[i]);
    r.channel_gain[i] = g;
    const AmplifierSpec amp{ch.band, setup_.noise_figure_db.at(ch.band), g,
                            setup_.efficiency.at(ch.band).saturation_dbm()};
    const double lumped = lumped_ase_power(amp, ch.frequency_thz, ch.symbol_rate_gbd);
    const double distributed =
        dra_ase_power(r.profile, setup_.fiber, i, ch.symbol_rate_gbd) * g;
    r.ase_mw[i] = lumped + distributed;
  }
  return r;
}

QualityReport LinkEvaluator::quality(const SpanResult& span, int n_span) const {
  if (n_span < 1) throw ValidationError("n_span must be >= 1");
  const double n = static_cast<double>(n_span);
  QualityReport q;
  q.transceiver_snr = db_to_linear(setup_.transceiver_snr_db);
  std::vector<double> snr(grid_.size());
  q.channels.reserve(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const Channel& ch = grid_[i];
    const double ase = n * span.ase_mw[i];
    const double nli = n * span.nli_mw[i];
    snr[i] = channel_snr(ch.launch_power_mw, ase, nli, q.transceiver_snr);
    q.channels.push_back(ChannelQuality{
        ch.frequency_thz, ch.band, ase > 0.0 ? ch.launch_power_mw / ase : HUGE_VAL,
        nli > 0.0 ? ch.launch_power_mw / nli : HUGE_VAL, snr[i],
        2.0 * ch.symbol_rate_gbd * std::log2(1.0 + snr[i])});
  }
  q.throughput = band_throughput(grid_, snr);
  return q;
}

double LinkEvaluator::throughput(const RamanPumpSet& pumps, int n_span) const {
  return quality(span(pumps), n_span).throughput.total_tbps;
}

LinkEvaluation LinkEvaluator::evaluate(const RamanPumpSet& pumps, int n_span,
                                       double p_mm_w) const {
  return evaluate(pumps, span(pumps), n_span, p_mm_w);
}

LinkEvaluation LinkEvaluator::evaluate(const RamanPumpSet& pumps, const SpanResult& span,
                                       int n_span, double p_mm_w) const {
  LinkEvaluation e;
  e.span = span;
  e.quality = quality(e.span, n_span);

  for (Band b : grid_.bands()) {
    const auto& op = e.span.lumped.at(b);
    const auto& curve = setup_.efficiency.at(b);
    const double query = setup_.operating_point == EfficiencyOperatingPoint::saturation
                             ? curve.saturation_mw()
                             : op.output_mw;
    e.lumped_w[b] = lumped_electrical_power(query, curve, op.gain, grid_, b, &e.span.warnings);
  }

  e.raman_w = setup_.raman_power_model == RamanPowerModel::measured
                  ? raman_electrical_power(pumps, setup_.pump_draw)
                  : raman_electrical_power_constant(pumps, setup_.raman_efficiency);
  std::map<Band, double> gain_sums;
  for (Band b : grid_.bands()) gain_sums[b] = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    gain_sums[grid_[i].band] += e.span.on_off_gain_db[i];
  }
  e.dra_w = allocate_dra_power(gain_sums, e.raman_w, &e.span.warnings);

  e.scenario.n_span = n_span;
  e.scenario.band_set = setup_.band_set;
  e.scenario.pump_count = static_cast<int>(pumps.size());
  e.scenario.p_mm_per_amp_w = p_mm_w;
  e.scenario.grid = grid_;
  for (Band b : grid_.bands()) {
    e.scenario.amps[b] = AmplifierSpec{b, setup_.noise_figure_db.at(b), e.span.lumped.at(b).gain,
                                       setup_.efficiency.at(b).saturation_dbm()};
  }
  e.scenario.pumps = pumps;
  e.ledger = total_power(e.scenario, e.lumped_w, e.dra_w, &e.quality.throughput);
  return e;
}

}  // namespace sclink
