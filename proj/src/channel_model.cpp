#include "iaswipt/channel_model.hpp"

#include <cmath>
#include <numbers>

namespace iaswipt {

std::string_view link_name(Link l) {
  static constexpr std::array<std::string_view, kLinkCount> names = {
      "H11[1]", "H12[1]", "H21[1]", "H22[1]", "H11[2]", "H12[2]", "H21[2]", "H22[2]",
      "HRS",    "HDR",    "H1S",    "H2S",    "H1R",    "H2R",    "HR1",    "HR2"};
  return names[index(l)];
}

double pathloss_gain(const LinkGeometry& g) { return std::pow(g.distance, -g.pathloss_exponent); }

Topology Topology::uniform(int antennas, int streams, double distance, double pathloss_exponent) {
  Topology t;
  t.antennas = antennas;
  t.streams = streams;
  t.geometry.fill(LinkGeometry{distance, pathloss_exponent});
  return t;
}

void Topology::validate() const {
  if (antennas < 1) throw std::invalid_argument("antennas must be positive");
  if (streams < 1 || 2 * streams > antennas)
    throw std::invalid_argument("streams must satisfy 1 <= f <= N/2");
  if (!(max_condition_number >= 1.0)) throw std::invalid_argument("condition-number limit must be >= 1");
  for (std::size_t i = 0; i < kLinkCount; ++i) {
    const auto& g = geometry[i];
    if (!(g.distance > 0.0) || !std::isfinite(g.distance))
      throw std::invalid_argument("link " + std::string(link_name(static_cast<Link>(i))) +
                                  ": distance must be positive");
    if (!(g.pathloss_exponent >= 0.0) || !std::isfinite(g.pathloss_exponent))
      throw std::invalid_argument("link " + std::string(link_name(static_cast<Link>(i))) +
                                  ": path-loss exponent must be non-negative");
  }
}

void validate(const CsiScenario& s) {
  if (const auto* m = std::get_if<CsiMismatch>(&s)) {
    if (!(m->kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
    if (!(m->psi > 0.0)) throw std::invalid_argument("psi must be > 0");
  }
}

double error_variance(const CsiScenario& scenario, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("nominal SNR must be positive");
  validate(scenario);
  if (const auto* m = std::get_if<CsiMismatch>(&scenario)) return m->psi * std::pow(theta, -m->kappa);
  return 0.0;
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  // 53 random mantissa bits; shifted by one ulp so log() never sees zero.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

Complex RandomStream::complex_normal() {
  // Box-Muller with radius sqrt(-ln u): each component has variance 1/2.
  const double r = std::sqrt(-std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

CMatrix draw_complex_normal(int rows, int cols, RandomStream& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
  return m;
}

ChannelSet draw_channel_set(const Topology& topology, RandomStream& rng) {
  ChannelSet set;
  for (auto& h : set.h) h = draw_complex_normal(topology.antennas, topology.antennas, rng);
  return set;
}

MismatchedChannels apply_mismatch(const ChannelSet& channels, double lambda, RandomStream& rng) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("error variance must be non-negative");
  MismatchedChannels out;
  out.error_variance = lambda;
  const double sd = std::sqrt(lambda);
  const double shrink = 1.0 / (1.0 + lambda);
  for (std::size_t i = 0; i < kLinkCount; ++i) {
    const CMatrix& h = channels.h[i];
    CMatrix e = draw_complex_normal(static_cast<int>(h.rows()), static_cast<int>(h.cols()), rng);
    e *= sd;
    out.estimated.h[i] = h + e;
    out.residual.h[i] = h - out.estimated.h[i] * shrink;
  }
  return out;
}

}  // namespace iaswipt
