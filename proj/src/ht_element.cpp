#include "htpoly/ht_element.hpp"

#include "htpoly/quadrature.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace htpoly {

HtElement::HtElement(std::vector<Point2> polygon, const MaterialModel& material,
                     const ModePolicy& policy)
    : polygon_(std::move(polygon)), material_(material) {
  if (polygon_.size() < 3)
    throw std::invalid_argument("HtElement: polygon needs at least 3 vertices");
  if (!polygonIsConvexCcw(polygon_))
    throw std::invalid_argument("HtElement: polygon must be convex and CCW");

  const auto [centroid, area] = polygonCentroidArea(polygon_);
  const double scale = 0.5 * polygonDiameter(polygon_);
  int m = dofCount() + policy.min_modes_offset;
  for (int attempt = 0;; ++attempt) {
    mode_set_ = std::make_shared<TrefftzModeSet>(material_, centroid, scale, m);
    assemble();
    if (sv_min_ >= policy.rank_tolerance * sv_max_) break;
    if (attempt >= policy.max_retries) {
      std::string verts;
      for (const Point2& p : polygon_)
        verts += " (" + std::to_string(p.x()) + "," + std::to_string(p.y()) + ")";
      throw std::runtime_error("HtElement: H rank-deficient after retries for polygon" + verts);
    }
    m += policy.retry_increment;
  }

  // K = G^T H^{-1} G through the symmetric factorization of H.
  h_factor_.compute(0.5 * (H_ + H_.transpose()));
  if (h_factor_.info() != Eigen::Success)
    throw std::runtime_error("HtElement: factorization of H failed");
  K_ = G_.transpose() * h_factor_.solve(G_);
}

void HtElement::assemble() {
  const int m = mode_set_->modeCount();
  const int n = nodeCount();
  H_ = Eigen::MatrixXd::Zero(m, m);
  G_ = Eigen::MatrixXd::Zero(m, 2 * n);
  const SegmentRule rule = gaussSegment(std::min(30, mode_set_->maxPower() + 2));
  for (int e = 0; e < n; ++e) {
    const Point2& a = polygon_[e];
    const Point2& b = polygon_[(e + 1) % n];
    const Point2 t = b - a;
    const double len = t.norm();
    const Point2 normal(t.y() / len, -t.x() / len);
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double xi = rule.points[g];
      const double w = rule.weights[g] * 0.5 * len;
      const Point2 x = 0.5 * (1.0 - xi) * a + 0.5 * (1.0 + xi) * b;
      const ModeEvaluation ev = mode_set_->evaluate(x, normal);
      H_.noalias() += w * ev.traction.transpose() * ev.displacement;
      const Eigen::MatrixXd qt = ev.traction.transpose();  // m x 2
      const double sa = 0.5 * (1.0 - xi), sb = 0.5 * (1.0 + xi);
      const int ia = 2 * e, ib = 2 * ((e + 1) % n);
      G_.col(ia) += w * sa * qt.col(0);
      G_.col(ia + 1) += w * sa * qt.col(1);
      G_.col(ib) += w * sb * qt.col(0);
      G_.col(ib + 1) += w * sb * qt.col(1);
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(0.5 * (H_ + H_.transpose()));
  sv_min_ = svd.singularValues().minCoeff();
  sv_max_ = svd.singularValues().maxCoeff();
}

HtElement::InteriorField HtElement::recoverInterior(const Eigen::VectorXd& q) const {
  if (q.size() != dofCount())
    throw std::invalid_argument("recoverInterior: wrong dof vector size");
  if (!q.allFinite())
    throw std::invalid_argument("recoverInterior: non-finite nodal displacements");
  InteriorField field;
  field.modes = mode_set_;
  field.coefficients = h_factor_.solve(G_ * q);

  // Least-squares rigid part from the nodal residuals.
  const Point2& x0 = mode_set_->origin();
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (int i = 0; i < nodeCount(); ++i) {
    const Point2 d = polygon_[i] - x0;
    const Eigen::Vector2d u_modes =
        mode_set_->evaluate(polygon_[i]).displacement * field.coefficients;
    const Eigen::Vector2d r(q(2 * i) - u_modes(0), q(2 * i + 1) - u_modes(1));
    Eigen::Matrix<double, 2, 3> a;
    a << 1, 0, -d.y(), 0, 1, d.x();
    ata += a.transpose() * a;
    atb += a.transpose() * r;
  }
  field.rigid = ata.ldlt().solve(atb);
  return field;
}

Eigen::Vector2d HtElement::InteriorField::displacement(const Point2& x) const {
  const Eigen::Vector2d u = modes->evaluate(x).displacement * coefficients;
  const Point2 d = x - modes->origin();
  return u + Eigen::Vector2d(rigid(0) - rigid(2) * d.y(), rigid(1) + rigid(2) * d.x());
}

Eigen::Vector3d HtElement::InteriorField::stress(const Point2& x) const {
  return modes->evaluate(x).stress * coefficients;
}

Eigen::VectorXd elementTractionLoad(const std::vector<Point2>& polygon,
                                    const std::vector<int>& edges,
                                    const TractionFn& traction) {
  const int n = static_cast<int>(polygon.size());
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * n);
  const SegmentRule rule = gaussSegment(8);
  for (int e : edges) {
    if (e < 0 || e >= n) throw std::invalid_argument("elementTractionLoad: bad edge index");
    const Point2& a = polygon[e];
    const Point2& b = polygon[(e + 1) % n];
    const double len = (b - a).norm();
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double xi = rule.points[g];
      const double w = rule.weights[g] * 0.5 * len;
      const Point2 x = 0.5 * (1.0 - xi) * a + 0.5 * (1.0 + xi) * b;
      const Eigen::Vector2d t = traction(x);
      const double sa = 0.5 * (1.0 - xi), sb = 0.5 * (1.0 + xi);
      const int ia = 2 * e, ib = 2 * ((e + 1) % n);
      load(ia) += w * sa * t(0);
      load(ia + 1) += w * sa * t(1);
      load(ib) += w * sb * t(0);
      load(ib + 1) += w * sb * t(1);
    }
  }
  return load;
}

}  // namespace htpoly
