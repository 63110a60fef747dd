#include "htpoly/pfem.hpp"

#include "htpoly/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace htpoly {

namespace {

double triArea(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

Eigen::Vector2d gradTriArea(const Point2& a, const Point2& b) {
  // gradient of A(a, b, x) with respect to x
  return 0.5 * Eigen::Vector2d(a.y() - b.y(), b.x() - a.x());
}

WachspressEval interiorEval(const std::vector<Point2>& p, const Point2& x) {
  const int n = static_cast<int>(p.size());
  Eigen::VectorXd w(n);
  Eigen::Matrix2Xd ratio(2, n);  // grad w_I / w_I
  for (int i = 0; i < n; ++i) {
    const Point2& prev = p[(i + n - 1) % n];
    const Point2& cur = p[i];
    const Point2& next = p[(i + 1) % n];
    const double c_i = triArea(prev, cur, next);
    const double a_prev = triArea(prev, cur, x);
    const double a_cur = triArea(cur, next, x);
    w(i) = c_i / (a_prev * a_cur);
    ratio.col(i) =
        -gradTriArea(prev, cur) / a_prev - gradTriArea(cur, next) / a_cur;
  }
  const double total = w.sum();
  WachspressEval eval;
  eval.values = w / total;
  const Eigen::Vector2d mean_ratio = ratio * eval.values;
  eval.gradients.resize(2, n);
  for (int i = 0; i < n; ++i)
    eval.gradients.col(i) = eval.values(i) * (ratio.col(i) - mean_ratio);
  return eval;
}

}  // namespace

WachspressEval wachspressEval(const std::vector<Point2>& polygon, const Point2& point) {
  const int n = static_cast<int>(polygon.size());
  if (n < 3) throw std::invalid_argument("wachspressEval: need a polygon");
  if (!pointInConvexPolygon(polygon, point))
    throw std::invalid_argument("wachspressEval: point outside polygon");
  const double diam = polygonDiameter(polygon);
  const double tol = 1e-12 * diam;

  auto nudgedGradients = [&](WachspressEval& eval) {
    // Limit of the rational gradient, taken a hair inside the polygon.
    const auto [centroid, area] = polygonCentroidArea(polygon);
    const Point2 inner = point + 1e-9 * diam * (centroid - point).normalized();
    eval.gradients = interiorEval(polygon, inner).gradients;
  };

  for (int i = 0; i < n; ++i) {
    if ((point - polygon[i]).norm() <= tol) {
      WachspressEval eval;
      eval.values = Eigen::VectorXd::Zero(n);
      eval.values(i) = 1.0;
      nudgedGradients(eval);
      return eval;
    }
  }
  for (int i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    const Point2 e = b - a;
    const double len = e.norm();
    const double off = std::abs((point - a).x() * e.y() - (point - a).y() * e.x()) / len;
    const double t = (point - a).dot(e) / (len * len);
    if (off <= tol && t >= 0.0 && t <= 1.0) {
      WachspressEval eval;
      eval.values = Eigen::VectorXd::Zero(n);
      eval.values(i) = 1.0 - t;
      eval.values((i + 1) % n) = t;
      nudgedGradients(eval);
      return eval;
    }
  }
  return interiorEval(polygon, point);
}

Eigen::MatrixXd pfemStiffness(const std::vector<Point2>& polygon,
                              const MaterialModel& material) {
  const int n = static_cast<int>(polygon.size());
  if (!polygonIsConvexCcw(polygon))
    throw std::invalid_argument("pfemStiffness: polygon must be convex and CCW");
  const Eigen::Matrix3d D = material.constitutive();
  const TriangleRule rule = dunavantTriangle(8);
  const auto [centroid, poly_area] = polygonCentroidArea(polygon);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::MatrixXd B(3, 2 * n);
  // The rational integrand is not captured exactly by any polynomial rule;
  // three uniform subdivision levels of every fan triangle push the
  // consistency error of the patch test below 1e-11.
  constexpr int kLevels = 3;
  const std::function<void(const Point2&, const Point2&, const Point2&, int)>
      accumulate = [&](const Point2& a, const Point2& b, const Point2& c,
                       int level) {
        if (level > 0) {
          const Point2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
          accumulate(a, ab, ca, level - 1);
          accumulate(ab, b, bc, level - 1);
          accumulate(ca, bc, c, level - 1);
          accumulate(ab, bc, ca, level - 1);
          return;
        }
        const double area = triArea(a, b, c);
        for (const auto& node : rule.nodes) {
          const Point2 x = node.l0 * a + node.l1 * b + node.l2 * c;
          const auto shape = interiorEval(polygon, x);
          B.setZero();
          for (int i = 0; i < n; ++i) {
            B(0, 2 * i) = shape.gradients(0, i);
            B(1, 2 * i + 1) = shape.gradients(1, i);
            B(2, 2 * i) = shape.gradients(1, i);
            B(2, 2 * i + 1) = shape.gradients(0, i);
          }
          K.noalias() += (area * node.weight) * B.transpose() * D * B;
        }
      };
  for (int e = 0; e < n; ++e) {
    const Point2& a = polygon[e];
    const Point2& b = polygon[(e + 1) % n];
    if (std::abs(triArea(a, b, centroid)) < 1e-14 * poly_area) continue;
    accumulate(a, b, centroid, kLevels);
  }
  return K;
}

Eigen::VectorXd pfemTractionLoad(const std::vector<Point2>& polygon,
                                 const std::vector<int>& edges,
                                 const TractionFn& traction) {
  return elementTractionLoad(polygon, edges, traction);
}

}  // namespace htpoly
