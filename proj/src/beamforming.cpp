#include "iaswipt/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace iaswipt {

namespace {

constexpr double kPhaseThreshold = 1e-9;
constexpr double kRankTolerance = 1e-12;

CMatrix solve(const CMatrix& h, const CMatrix& rhs) { return h.partialPivLu().solve(rhs); }

// Picks `streams` columns from the null-space basis `q` that maximize the
// desired-signal energy; identity when the null space is exactly f-dimensional.
CMatrix select_combiner(const CMatrix& q, const CMatrix& desired, int streams) {
  if (q.cols() < streams) throw DegenerateSubspace("null space smaller than stream count");
  if (q.cols() == streams) return q;
  Eigen::JacobiSVD<CMatrix> svd(q.adjoint() * desired, Eigen::ComputeFullU);
  CMatrix u = q * svd.matrixU().leftCols(streams);
  fix_column_phases(u);
  return u;
}

double singular_ratio(const CMatrix& a, const CMatrix& b, int streams) {
  CMatrix cat(a.rows(), a.cols() + b.cols());
  cat << a, b;
  Eigen::JacobiSVD<CMatrix> svd(cat);
  const auto& s = svd.singularValues();
  if (s.size() <= streams || s(0) == 0.0) return 0.0;
  return s(streams) / s(0);
}

}  // namespace

const CMatrix& BeamformerSet::precoder(int tx, int tp) const {
  if (tp == 1) return tx == 1 ? tp1.v1 : tp1.v2;
  return tx == 1 ? tp2.v1 : tp2.v2;
}

const CMatrix& BeamformerSet::combiner(int rx, int tp) const {
  if (tp == 1) return rx == 1 ? tp1.u1 : tp1.u2;
  return rx == 1 ? tp2.u1 : tp2.u2;
}

void fix_column_phases(CMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double mag = std::abs(m(r, c));
      if (mag > kPhaseThreshold) {
        m.col(c) *= std::conj(m(r, c)) / mag;
        m(r, c) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

CMatrix null_space_basis(const CMatrix& m) {
  const Eigen::Index rank = m.rows();
  const Eigen::Index n = m.cols();
  if (rank >= n) throw DegenerateSubspace("null space requested for a matrix with no free dimensions");
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() < rank || s(0) == 0.0 || s(rank - 1) < kRankTolerance * s(0))
    throw DegenerateSubspace("rank-deficient input to null_space_basis");
  CMatrix basis = svd.matrixV().rightCols(n - rank);
  fix_column_phases(basis);
  return basis;
}

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

void require_invertible(const CMatrix& h, Link which, double max_condition) {
  const double c = condition_number(h);
  if (!(c <= max_condition))
    throw IllConditionedChannel(std::string(link_name(which)) + " condition number " + std::to_string(c));
}

CMatrix dominant_eigenvectors(const CMatrix& a, int streams, std::vector<Complex>* values) {
  Eigen::ComplexEigenSolver<CMatrix> es(a, true);
  if (es.info() != Eigen::Success) throw IllConditionedChannel("eigendecomposition failed");
  const auto& mu = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(mu.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const double ax = std::abs(mu(x)), ay = std::abs(mu(y));
    if (ax != ay) return ax > ay;
    if (mu(x).real() != mu(y).real()) return mu(x).real() > mu(y).real();
    return mu(x).imag() > mu(y).imag();
  });
  CMatrix v(a.rows(), streams);
  if (values) values->clear();
  for (int c = 0; c < streams; ++c) {
    v.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]).normalized();
    if (values) values->push_back(mu(order[static_cast<std::size_t>(c)]));
  }
  fix_column_phases(v);
  return v;
}

CMatrix unit_trace(const CMatrix& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw DegenerateSubspace("zero precoder");
  return v / norm;
}

CMatrix alignment_matrix(const ChannelSet& h, double max_condition) {
  for (Link l : {Link::RelayFromP1, Link::P12Tp1, Link::P2FromSource}) require_invertible(h[l], l, max_condition);
  // A = H_R1^-1 H_R2 H12^-1 H_1S H_2S^-1 H21, evaluated right to left.
  CMatrix a = solve(h[Link::P2FromSource], h[Link::P21Tp1]);
  a = solve(h[Link::P12Tp1], h[Link::P1FromSource] * a);
  a = solve(h[Link::RelayFromP1], h[Link::RelayFromP2] * a);
  return a;
}

Tp1Beamformers design_tp1(const ChannelSet& h, int streams, double max_condition) {
  require_invertible(h[Link::RelayFromP2], Link::RelayFromP2, max_condition);
  const CMatrix a = alignment_matrix(h, max_condition);

  Tp1Beamformers bf;
  bf.v1 = unit_trace(dominant_eigenvectors(a, streams));
  bf.v2 = unit_trace(solve(h[Link::RelayFromP2], h[Link::RelayFromP1] * bf.v1));
  bf.vs = unit_trace(solve(h[Link::P2FromSource], h[Link::P21Tp1] * bf.v1));

  // R_1 sees H12 V2 (aligned with H1S VS); R_2 sees H21 V1 (= H2S VS);
  // R sees H_R1 V1 (aligned with H_R2 V2).
  bf.u1 = select_combiner(null_space_basis((h[Link::P12Tp1] * bf.v2).adjoint()), h[Link::P11Tp1] * bf.v1,
                          streams);
  bf.u2 = select_combiner(null_space_basis((h[Link::P21Tp1] * bf.v1).adjoint()), h[Link::P22Tp1] * bf.v2,
                          streams);
  bf.ur = select_combiner(null_space_basis((h[Link::RelayFromP1] * bf.v1).adjoint()),
                          h[Link::RelayFromSource] * bf.vs, streams);
  return bf;
}

Tp2Beamformers design_tp2(const ChannelSet& h, int streams, double max_condition) {
  for (Link l : {Link::P12Tp2, Link::P21Tp2}) require_invertible(h[l], l, max_condition);

  Tp2Beamformers bf;
  Eigen::JacobiSVD<CMatrix> svd(h[Link::DestFromRelay], Eigen::ComputeFullV);
  CMatrix vr = svd.matrixV().leftCols(streams);
  fix_column_phases(vr);
  bf.vr = unit_trace(vr);
  bf.v2 = unit_trace(solve(h[Link::P12Tp2], h[Link::P1FromRelay] * bf.vr));
  bf.v1 = unit_trace(solve(h[Link::P21Tp2], h[Link::P2FromRelay] * bf.vr));

  bf.u1 = select_combiner(null_space_basis((h[Link::P1FromRelay] * bf.vr).adjoint()), h[Link::P11Tp2] * bf.v1,
                          streams);
  bf.u2 = select_combiner(null_space_basis((h[Link::P2FromRelay] * bf.vr).adjoint()), h[Link::P22Tp2] * bf.v2,
                          streams);
  return bf;
}

BeamformerSet design_beamformers(const ChannelSet& h, int streams, double max_condition) {
  return BeamformerSet{design_tp1(h, streams, max_condition), design_tp2(h, streams, max_condition)};
}

double LeakageReport::max_relative_power() const {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, t.relative_power);
  return m;
}

double LeakageReport::max_alignment_defect() const {
  double m = 0.0;
  for (const auto& a : alignment) m = std::max(m, a.singular_ratio);
  return m;
}

LeakageReport leakage(const BeamformerSet& bf, const ChannelSet& h) {
  LeakageReport rep;
  auto term = [&](const char* rx, const char* tx, int tp, const CMatrix& u, Link l, const CMatrix& v) {
    const double p = (u.adjoint() * h[l] * v).squaredNorm();
    const double hn = h[l].squaredNorm();
    rep.terms.push_back({rx, tx, tp, p, hn > 0.0 ? p / hn : 0.0});
  };
  const auto& t1 = bf.tp1;
  const auto& t2 = bf.tp2;
  term("R1", "T2", 1, t1.u1, Link::P12Tp1, t1.v2);
  term("R1", "S", 1, t1.u1, Link::P1FromSource, t1.vs);
  term("R2", "T1", 1, t1.u2, Link::P21Tp1, t1.v1);
  term("R2", "S", 1, t1.u2, Link::P2FromSource, t1.vs);
  term("R", "T1", 1, t1.ur, Link::RelayFromP1, t1.v1);
  term("R", "T2", 1, t1.ur, Link::RelayFromP2, t1.v2);
  term("R1", "T2", 2, t2.u1, Link::P12Tp2, t2.v2);
  term("R1", "R", 2, t2.u1, Link::P1FromRelay, t2.vr);
  term("R2", "T1", 2, t2.u2, Link::P21Tp2, t2.v1);
  term("R2", "R", 2, t2.u2, Link::P2FromRelay, t2.vr);

  const int f = static_cast<int>(t1.v1.cols());
  auto align = [&](const char* rx, int tp, Link la, const CMatrix& va, Link lb, const CMatrix& vb) {
    rep.alignment.push_back({rx, tp, singular_ratio(h[la] * va, h[lb] * vb, f)});
  };
  align("R1", 1, Link::P12Tp1, t1.v2, Link::P1FromSource, t1.vs);
  align("R2", 1, Link::P21Tp1, t1.v1, Link::P2FromSource, t1.vs);
  align("R", 1, Link::RelayFromP1, t1.v1, Link::RelayFromP2, t1.v2);
  align("R1", 2, Link::P12Tp2, t2.v2, Link::P1FromRelay, t2.vr);
  align("R2", 2, Link::P21Tp2, t2.v1, Link::P2FromRelay, t2.vr);
  return rep;
}

double DirectGains::min() const {
  double m = relay;
  for (const auto& rx : primary)
    for (double g : rx) m = std::min(m, g);
  return m;
}

DirectGains direct_gain(const BeamformerSet& bf, const ChannelSet& h) {
  DirectGains g;
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k)
      g.primary[j - 1][k - 1] =
          (bf.combiner(j, k).adjoint() * h[primary_link(j, j, k)] * bf.precoder(j, k)).squaredNorm();
  g.relay = (bf.tp1.ur.adjoint() * h[Link::RelayFromSource] * bf.tp1.vs).squaredNorm();
  return g;
}

}  // namespace iaswipt
