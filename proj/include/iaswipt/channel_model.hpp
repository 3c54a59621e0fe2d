// Random channel realizations, path loss and the CSI-mismatch model for the
// two-pair primary network sharing spectrum with a source/relay/destination
// secondary link.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

namespace iaswipt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Directed link identifiers, named receiver-from-transmitter. Primary links
/// carry an independent draw per transmission period (TP).
enum class Link : std::size_t {
  P11Tp1, P12Tp1, P21Tp1, P22Tp1,  // H^{[1]}_{j,i}
  P11Tp2, P12Tp2, P21Tp2, P22Tp2,  // H^{[2]}_{j,i}
  RelayFromSource,                 // H_{R,S}
  DestFromRelay,                   // H_{D,R}
  P1FromSource, P2FromSource,      // H_{j,S}
  P1FromRelay, P2FromRelay,        // H_{j,R}
  RelayFromP1, RelayFromP2,        // H_{R,i}
};

inline constexpr std::size_t kLinkCount = 16;

constexpr std::size_t index(Link l) { return static_cast<std::size_t>(l); }

/// Primary link from transmitter `tx` to receiver `rx` in period `tp`
/// (all 1-based).
constexpr Link primary_link(int rx, int tx, int tp) {
  return static_cast<Link>((tp - 1) * 4 + (rx - 1) * 2 + (tx - 1));
}
constexpr Link primary_from_source(int rx) { return rx == 1 ? Link::P1FromSource : Link::P2FromSource; }
constexpr Link primary_from_relay(int rx) { return rx == 1 ? Link::P1FromRelay : Link::P2FromRelay; }
constexpr Link relay_from_primary(int tx) { return tx == 1 ? Link::RelayFromP1 : Link::RelayFromP2; }

std::string_view link_name(Link l);

struct LinkGeometry {
  double distance = 3.0;           // meters
  double pathloss_exponent = 2.7;
};

/// Received-power attenuation 1/d^tau.
double pathloss_gain(const LinkGeometry& g);

struct Topology {
  int antennas = 2;
  int streams = 1;
  std::array<LinkGeometry, kLinkCount> geometry{};
  // Realizations needing an inverse of a matrix conditioned worse than this
  // are redrawn.
  double max_condition_number = 1e8;

  /// Every link at the same distance and exponent.
  static Topology uniform(int antennas, int streams, double distance, double pathloss_exponent);

  const LinkGeometry& at(Link l) const { return geometry[index(l)]; }
  double gain(Link l) const { return pathloss_gain(at(l)); }

  /// Throws std::invalid_argument when N, f or any geometry is out of range.
  void validate() const;
};

struct ChannelSet {
  std::array<CMatrix, kLinkCount> h;

  const CMatrix& operator[](Link l) const { return h[index(l)]; }
  CMatrix& operator[](Link l) { return h[index(l)]; }
};

struct PerfectCsi {
  bool operator==(const PerfectCsi&) const = default;
};
struct CsiMismatch {
  double kappa = 0.0;
  double psi = 0.001;
  bool operator==(const CsiMismatch&) const = default;
};
using CsiScenario = std::variant<PerfectCsi, CsiMismatch>;

inline bool is_perfect(const CsiScenario& s) { return std::holds_alternative<PerfectCsi>(s); }
void validate(const CsiScenario& s);

/// lambda = psi * theta^-kappa, or 0 for perfect CSI. `theta` is the linear
/// nominal SNR and must be positive.
double error_variance(const CsiScenario& scenario, double theta);

/// Estimated and residual matrices per link; the true channel equals
/// estimated/(1+lambda) + residual.
struct MismatchedChannels {
  ChannelSet estimated;
  ChannelSet residual;
  double error_variance = 0.0;
};

/// Per-trial random substream. Derived from (master seed, trial index) only,
/// so trial outcomes do not depend on which worker runs them.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t trial);

  /// Uniform on (0, 1].
  double uniform();
  /// Circularly-symmetric complex normal with unit variance.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
};

CMatrix draw_complex_normal(int rows, int cols, RandomStream& rng);

/// Independent CN(0,1) entries for every link, in link order.
ChannelSet draw_channel_set(const Topology& topology, RandomStream& rng);

/// Draws E ~ CN(0, lambda) per link and forms H_hat = H + E,
/// H_tilde = H - H_hat/(1+lambda). A unit-variance draw is always consumed
/// and scaled, so the stream position is independent of lambda.
MismatchedChannels apply_mismatch(const ChannelSet& channels, double lambda, RandomStream& rng);

}  // namespace iaswipt
