// Time-switching (TSR) and power-splitting (PSR) energy harvesting at the
// relay, and the closed-form SINRs at the relay, destination and primary
// receivers.
//
// The SINRs depend on a realization only through a handful of squared norms,
// collected once per realization in LinkGains. Everything in this header past
// link_gains() is scalar arithmetic.
#pragma once

#include <array>
#include <optional>

#include "iaswipt/beamforming.hpp"
#include "iaswipt/channel_model.hpp"

namespace iaswipt {

struct PowerConfig {
  double p1 = 1.0;
  double p2 = 1.0;
  double ps = 1.0;
  double noise_power = 1.0;

  /// Equal transmit powers at the given transmit SNR (ps / noise, in dB).
  static PowerConfig from_snr_db(double snr_db, double noise_power = 1.0);

  double primary(int tx) const { return tx == 1 ? p1 : p2; }
  /// Linear nominal SNR ps / noise.
  double theta() const { return ps / noise_power; }
  double snr_db() const;
  void validate() const;
};

enum class Protocol { Tsr, Psr };

const char* protocol_name(Protocol p);

struct ProtocolParams {
  Protocol kind = Protocol::Tsr;
  double fraction = 0.19;  // alpha for TSR, rho for PSR
  double eta = 0.8;

  static ProtocolParams tsr(double alpha, double eta = 0.8) { return {Protocol::Tsr, alpha, eta}; }
  static ProtocolParams psr(double rho, double eta = 0.8) { return {Protocol::Psr, rho, eta}; }

  /// Throws std::invalid_argument unless fraction and eta lie in (0, 1).
  void validate() const;
};

/// Squared Frobenius norms entering the harvesting and SINR expressions for one
/// realization. "est" terms use the estimated channel, "res" terms the residual
/// and "harvest" terms the true channel.
struct LinkGains {
  double lambda = 0.0;

  // Relay, TP1.
  double harvest_source = 0.0;          // ||H_RS V_S||^2
  std::array<double, 2> harvest_primary{};  // ||H_Ri V_i[1]||^2
  double relay_est = 0.0;               // ||U_R^H Hhat_RS V_S||^2
  double relay_res = 0.0;               // ||U_R^H Htilde_RS V_S||^2
  std::array<double, 2> relay_res_primary{};  // ||U_R^H Htilde_Ri V_i[1]||^2

  // Destination, TP2.
  double dest_est = 0.0;  // ||Hhat_DR V_R||^2
  double dest_res = 0.0;  // ||Htilde_DR V_R||^2

  // Primary receiver j in period k, indexed [j-1][k-1].
  struct Primary {
    double est = 0.0;          // ||U^H Hhat_jj V_j||^2
    double res_direct = 0.0;   // ||U^H Htilde_jj V_j||^2
    double res_cross = 0.0;    // ||U^H Htilde_ji V_i||^2
    double res_secondary = 0.0;  // ||U^H Htilde_jS V_S||^2 (k=1) or ||U^H Htilde_jR V_R||^2 (k=2)
  };
  std::array<std::array<Primary, 2>, 2> primary{};
};

/// Collects the norms for one realization. `bf` must have been designed on
/// `mismatched.estimated`.
LinkGains link_gains(const ChannelSet& true_channels, const MismatchedChannels& mismatched,
                     const BeamformerSet& bf);

/// Received interference-plus-signal power at the relay during TP1, ignoring
/// noise: P_S g_RS ||H_RS V_S||^2 + sum_i P_i g_Ri ||H_Ri V_i||^2.
double harvested_sum(const LinkGains& g, const PowerConfig& powers, const Topology& topo);

/// Matrix-level form of harvested_sum, evaluated on the true channels.
double harvested_sum(const ChannelSet& true_channels, const Tp1Beamformers& bf, const PowerConfig& powers,
                     const Topology& topo);

/// 2 alpha eta / (1 - alpha) * S.
double relay_power_tsr(double alpha, double eta, double harvested);
/// eta rho S.
double relay_power_psr(double rho, double eta, double harvested);
double relay_power(const ProtocolParams& params, double harvested);

/// Energy collected over a unit-length block: eta alpha S (TSR) or
/// eta rho S / 2 (PSR).
double harvested_energy(const ProtocolParams& params, double harvested);

double sinr_relay(const ProtocolParams& params, const LinkGains& g, const PowerConfig& powers,
                  const Topology& topo);

double sinr_destination(double relay_power, const LinkGains& g, const PowerConfig& powers, const Topology& topo);

/// SINR at primary receiver `rx` in period `tp`. `relay_power` is required for
/// tp = 2 and ignored for tp = 1.
double sinr_primary(int rx, int tp, const LinkGains& g, const PowerConfig& powers, const Topology& topo,
                    std::optional<double> relay_power = std::nullopt);

struct SinrReport {
  double gamma_r = 0.0;
  double gamma_d = 0.0;
  std::array<std::array<double, 2>, 2> gamma_primary{};  // [j-1][k-1]
  double relay_power = 0.0;
};

SinrReport evaluate_sinrs(const ProtocolParams& params, const LinkGains& g, const PowerConfig& powers,
                          const Topology& topo);

}  // namespace iaswipt
