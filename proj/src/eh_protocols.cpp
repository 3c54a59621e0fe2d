#include "iaswipt/eh_protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace iaswipt {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

double norm2(const CMatrix& m) { return m.squaredNorm(); }

}  // namespace

PowerConfig PowerConfig::from_snr_db(double snr_db, double noise_power) {
  const double p = noise_power * std::pow(10.0, snr_db / 10.0);
  return PowerConfig{p, p, p, noise_power};
}

double PowerConfig::snr_db() const { return 10.0 * std::log10(theta()); }

void PowerConfig::validate() const {
  if (!(p1 > 0.0 && p2 > 0.0 && ps > 0.0)) throw std::invalid_argument("transmit powers must be positive");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be positive");
}

const char* protocol_name(Protocol p) { return p == Protocol::Tsr ? "tsr" : "psr"; }

void ProtocolParams::validate() const {
  if (!open_unit(fraction))
    throw std::invalid_argument(kind == Protocol::Tsr ? "alpha must lie in (0, 1)" : "rho must lie in (0, 1)");
  if (!open_unit(eta)) throw std::invalid_argument("eta must lie in (0, 1)");
}

LinkGains link_gains(const ChannelSet& h, const MismatchedChannels& mm, const BeamformerSet& bf) {
  const auto& est = mm.estimated;
  const auto& res = mm.residual;
  const auto& t1 = bf.tp1;
  const auto& t2 = bf.tp2;

  LinkGains g;
  g.lambda = mm.error_variance;
  g.harvest_source = norm2(h[Link::RelayFromSource] * t1.vs);
  g.harvest_primary = {norm2(h[Link::RelayFromP1] * t1.v1), norm2(h[Link::RelayFromP2] * t1.v2)};

  const CMatrix urh = t1.ur.adjoint();
  g.relay_est = norm2(urh * est[Link::RelayFromSource] * t1.vs);
  g.relay_res = norm2(urh * res[Link::RelayFromSource] * t1.vs);
  g.relay_res_primary = {norm2(urh * res[Link::RelayFromP1] * t1.v1), norm2(urh * res[Link::RelayFromP2] * t1.v2)};

  g.dest_est = norm2(est[Link::DestFromRelay] * t2.vr);
  g.dest_res = norm2(res[Link::DestFromRelay] * t2.vr);

  for (int j = 1; j <= 2; ++j) {
    const int i = 3 - j;
    for (int k = 1; k <= 2; ++k) {
      const CMatrix uh = bf.combiner(j, k).adjoint();
      auto& p = g.primary[j - 1][k - 1];
      p.est = norm2(uh * est[primary_link(j, j, k)] * bf.precoder(j, k));
      p.res_direct = norm2(uh * res[primary_link(j, j, k)] * bf.precoder(j, k));
      p.res_cross = norm2(uh * res[primary_link(j, i, k)] * bf.precoder(i, k));
      p.res_secondary = k == 1 ? norm2(uh * res[primary_from_source(j)] * t1.vs)
                               : norm2(uh * res[primary_from_relay(j)] * t2.vr);
    }
  }
  return g;
}

double harvested_sum(const LinkGains& g, const PowerConfig& pw, const Topology& topo) {
  return pw.ps * topo.gain(Link::RelayFromSource) * g.harvest_source +
         pw.p1 * topo.gain(Link::RelayFromP1) * g.harvest_primary[0] +
         pw.p2 * topo.gain(Link::RelayFromP2) * g.harvest_primary[1];
}

double harvested_sum(const ChannelSet& h, const Tp1Beamformers& bf, const PowerConfig& pw, const Topology& topo) {
  return pw.ps * topo.gain(Link::RelayFromSource) * norm2(h[Link::RelayFromSource] * bf.vs) +
         pw.p1 * topo.gain(Link::RelayFromP1) * norm2(h[Link::RelayFromP1] * bf.v1) +
         pw.p2 * topo.gain(Link::RelayFromP2) * norm2(h[Link::RelayFromP2] * bf.v2);
}

double relay_power_tsr(double alpha, double eta, double harvested) {
  if (!open_unit(alpha)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!open_unit(eta)) throw std::invalid_argument("eta must lie in (0, 1)");
  return 2.0 * alpha * eta / (1.0 - alpha) * harvested;
}

double relay_power_psr(double rho, double eta, double harvested) {
  if (!open_unit(rho)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!open_unit(eta)) throw std::invalid_argument("eta must lie in (0, 1)");
  return eta * rho * harvested;
}

double relay_power(const ProtocolParams& p, double harvested) {
  return p.kind == Protocol::Tsr ? relay_power_tsr(p.fraction, p.eta, harvested)
                                 : relay_power_psr(p.fraction, p.eta, harvested);
}

double harvested_energy(const ProtocolParams& p, double harvested) {
  return p.kind == Protocol::Tsr ? p.eta * p.fraction * harvested : p.eta * p.fraction * harvested / 2.0;
}

double sinr_relay(const ProtocolParams& params, const LinkGains& g, const PowerConfig& pw, const Topology& topo) {
  // PSR scales only the channel terms by (1 - rho); antenna noise stays at sigma^2.
  const double scale = params.kind == Protocol::Psr ? 1.0 - params.fraction : 1.0;
  const double shrink = 1.0 / ((1.0 + g.lambda) * (1.0 + g.lambda));
  const double src = scale * pw.ps * topo.gain(Link::RelayFromSource);
  const double signal = src * shrink * g.relay_est;
  const double interference = src * g.relay_res +
                              scale * pw.p1 * topo.gain(Link::RelayFromP1) * g.relay_res_primary[0] +
                              scale * pw.p2 * topo.gain(Link::RelayFromP2) * g.relay_res_primary[1];
  return signal / (interference + pw.noise_power);
}

double sinr_destination(double relay_power, const LinkGains& g, const PowerConfig& pw, const Topology& topo) {
  if (!(relay_power >= 0.0)) throw std::invalid_argument("relay power must be non-negative");
  const double rx = relay_power * topo.gain(Link::DestFromRelay);
  const double shrink = 1.0 / ((1.0 + g.lambda) * (1.0 + g.lambda));
  return rx * shrink * g.dest_est / (rx * g.dest_res + pw.noise_power);
}

double sinr_primary(int rx, int tp, const LinkGains& g, const PowerConfig& pw, const Topology& topo,
                    std::optional<double> relay_power) {
  if (rx < 1 || rx > 2 || tp < 1 || tp > 2) throw std::invalid_argument("receiver and period must be 1 or 2");
  if (tp == 2 && !relay_power) throw std::invalid_argument("relay power is required for the second period");
  const int other = 3 - rx;
  const auto& p = g.primary[rx - 1][tp - 1];
  const double direct = pw.primary(rx) * topo.gain(primary_link(rx, rx, tp));
  const double shrink = 1.0 / ((1.0 + g.lambda) * (1.0 + g.lambda));

  const double intra = direct * p.res_direct + pw.primary(other) * topo.gain(primary_link(rx, other, tp)) * p.res_cross;
  const double inter = tp == 1 ? pw.ps * topo.gain(primary_from_source(rx)) * p.res_secondary
                               : *relay_power * topo.gain(primary_from_relay(rx)) * p.res_secondary;
  return direct * shrink * p.est / (intra + inter + pw.noise_power);
}

SinrReport evaluate_sinrs(const ProtocolParams& params, const LinkGains& g, const PowerConfig& pw,
                          const Topology& topo) {
  SinrReport r;
  r.relay_power = relay_power(params, harvested_sum(g, pw, topo));
  r.gamma_r = sinr_relay(params, g, pw, topo);
  r.gamma_d = sinr_destination(r.relay_power, g, pw, topo);
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k) r.gamma_primary[j - 1][k - 1] = sinr_primary(j, k, g, pw, topo, r.relay_power);
  return r;
}

}  // namespace iaswipt
