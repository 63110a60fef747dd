#include "htpoly/trefftz_basis.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <stdexcept>

namespace htpoly {

std::vector<ModeIndex> defaultOrdering(int m) {
  if (m < 1) throw std::invalid_argument("defaultOrdering: m must be >= 1");
  std::vector<ModeIndex> order;
  order.reserve(m);
  for (int k = 1; static_cast<int>(order.size()) < m; ++k)
    for (int J = 1; J <= 4 && static_cast<int>(order.size()) < m; ++J) {
      if (J == 1 && k == 1) continue;  // rigid rotation, zero stress
      order.push_back({J, k});
    }
  return order;
}

TrefftzModeSet::TrefftzModeSet(MaterialModel material, Point2 origin, double scale,
                               std::vector<ModeIndex> ordering, Variant variant)
    : material_(material),
      origin_(origin),
      scale_(scale),
      ordering_(std::move(ordering)),
      variant_(variant) {
  if (ordering_.empty()) throw std::invalid_argument("TrefftzModeSet: empty ordering");
  if (!(scale_ > 0.0)) throw std::invalid_argument("TrefftzModeSet: scale must be positive");
  std::set<std::pair<int, int>> seen;
  for (const auto& mode : ordering_) {
    if (mode.J < 1 || mode.J > 4 || mode.k < 1)
      throw std::invalid_argument("TrefftzModeSet: invalid mode index");
    if (mode.J == 1 && mode.k == 1)
      throw std::invalid_argument("TrefftzModeSet: mode (1,1) has zero stress");
    if (!seen.insert({mode.J, mode.k}).second)
      throw std::invalid_argument("TrefftzModeSet: duplicate mode index");
  }
}

TrefftzModeSet::TrefftzModeSet(MaterialModel material, Point2 origin, double scale,
                               int m, Variant variant)
    : TrefftzModeSet(material, origin, scale, defaultOrdering(m), variant) {}

int TrefftzModeSet::maxPower() const {
  int kmax = 1;
  for (const auto& mode : ordering_) kmax = std::max(kmax, mode.k);
  return kmax;
}

ModeEvaluation TrefftzModeSet::evaluate(const Point2& point,
                                        std::optional<Point2> normal) const {
  using cplx = std::complex<double>;
  const int m = modeCount();
  const double G = material_.shearModulus();
  const double kappa = material_.kolosov();
  const cplx z((point.x() - origin_.x()) / scale_, (point.y() - origin_.y()) / scale_);
  const cplx zb = std::conj(z);
  const cplx I(0.0, 1.0);

  // Powers up to the largest k in the set.
  const int kmax = maxPower();
  std::vector<cplx> zp(kmax + 1), zbp(kmax + 1);
  zp[0] = zbp[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    zp[k] = zp[k - 1] * z;
    zbp[k] = zbp[k - 1] * zb;
  }

  ModeEvaluation eval;
  eval.displacement.resize(2, m);
  eval.stress.resize(3, m);
  for (int j = 0; j < m; ++j) {
    const int J = ordering_[j].J;
    const int k = ordering_[j].k;
    const double kd = static_cast<double>(k);
    cplx Z, R = 0.0, S = 0.0;
    switch (J) {
      case 1:
        Z = I * (kappa * zp[k] + kd * z * zbp[k - 1]);
        R = 2.0 * I * kd * zp[k - 1];
        if (k >= 2) S = I * kd * (kd - 1.0) * zp[k - 2] * zb;
        break;
      case 2:
        Z = kappa * zp[k] - kd * z * zbp[k - 1];
        R = 2.0 * kd * zp[k - 1];
        if (k >= 2) S = kd * (kd - 1.0) * zp[k - 2] * zb;
        break;
      case 3:
        Z = I * zbp[k];
        S = I * kd * zp[k - 1];
        if (variant_ == Variant::s3_scaled_by_kappa) S *= kappa;
        break;
      case 4:
        Z = -zbp[k];
        S = kd * zp[k - 1];
        break;
    }
    eval.displacement(0, j) = Z.real() / (2.0 * G);
    eval.displacement(1, j) = Z.imag() / (2.0 * G);
    eval.stress(0, j) = (R - S).real() / scale_;
    eval.stress(1, j) = (R + S).real() / scale_;
    eval.stress(2, j) = S.imag() / scale_;
  }
  if (normal) {
    const double n1 = normal->x(), n2 = normal->y();
    eval.traction.resize(2, m);
    eval.traction.row(0) = n1 * eval.stress.row(0) + n2 * eval.stress.row(2);
    eval.traction.row(1) = n2 * eval.stress.row(1) + n1 * eval.stress.row(2);
  }
  return eval;
}

VerificationReport verifyModeSet(const TrefftzModeSet& set, int sample_points,
                                 double h_fd, double tolerance) {
  if (sample_points < 1) throw std::invalid_argument("verifyModeSet: need sample points");
  const int m = set.modeCount();
  const double scale = set.scale();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Point2> samples;
  while (static_cast<int>(samples.size()) < sample_points) {
    const Point2 zl(unit(rng), unit(rng));
    if (zl.norm() > 1.0 || zl.norm() * scale < 2.0 * h_fd) continue;
    samples.push_back(set.origin() + scale * zl);
  }

  const Eigen::Matrix3d D = set.material().constitutive();
  Eigen::VectorXd stress_scale = Eigen::VectorXd::Zero(m);
  for (const Point2& x : samples) {
    const auto ev = set.evaluate(x);
    for (int j = 0; j < m; ++j)
      stress_scale(j) = std::max(stress_scale(j), ev.stress.col(j).cwiseAbs().maxCoeff());
  }

  VerificationReport report;
  report.modes.resize(m);
  report.all_passed = true;
  for (int j = 0; j < m; ++j) report.modes[j].mode = set.ordering()[j];

  const Point2 ex(h_fd, 0.0), ey(0.0, h_fd);
  for (const Point2& x : samples) {
    const auto pxp = set.evaluate(x + ex), pxm = set.evaluate(x - ex);
    const auto pyp = set.evaluate(x + ey), pym = set.evaluate(x - ey);
    const Eigen::Matrix3Xd dsig_dx = (pxp.stress - pxm.stress) / (2.0 * h_fd);
    const Eigen::Matrix3Xd dsig_dy = (pyp.stress - pym.stress) / (2.0 * h_fd);
    const Eigen::Matrix2Xd du_dx = (pxp.displacement - pxm.displacement) / (2.0 * h_fd);
    const Eigen::Matrix2Xd du_dy = (pyp.displacement - pym.displacement) / (2.0 * h_fd);
    const auto here = set.evaluate(x);
    for (int j = 0; j < m; ++j) {
      const double ref = stress_scale(j) + 1e-300;
      const double eq1 = dsig_dx(0, j) + dsig_dy(2, j);
      const double eq2 = dsig_dx(2, j) + dsig_dy(1, j);
      // equilibrium residual carries a 1/length unit; normalize by the local
      // frame size so the bound is scale-free
      const double eq = std::max(std::abs(eq1), std::abs(eq2)) * scale / ref;
      Eigen::Vector3d strain(du_dx(0, j), du_dy(1, j), du_dx(1, j) + du_dy(0, j));
      const double cons = (D * strain - here.stress.col(j)).cwiseAbs().maxCoeff() / ref;
      auto& mr = report.modes[j];
      mr.equilibrium_residual = std::max(mr.equilibrium_residual, eq);
      mr.consistency_residual = std::max(mr.consistency_residual, cons);
    }
  }
  for (auto& mr : report.modes) {
    mr.passed = mr.equilibrium_residual < tolerance && mr.consistency_residual < tolerance;
    report.all_passed = report.all_passed && mr.passed;
  }
  return report;
}

}  // namespace htpoly
