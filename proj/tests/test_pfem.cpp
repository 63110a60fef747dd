#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "htpoly/pfem.hpp"
#include "htpoly/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace htpoly;

namespace {

const MaterialModel kMat(210.0, 0.3, Regime::plane_stress);

std::vector<Point2> regularPolygon(int n, double radius = 1.0,
                                   const Point2& center = Point2::Zero()) {
  std::vector<Point2> verts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    verts.push_back(center + radius * Point2(std::cos(a), std::sin(a)));
  }
  return verts;
}

// reference Q4 stiffness on an axis-aligned rectangle via 2x2 Gauss; on a
// rectangle the Wachspress coordinates coincide with the bilinear map
Eigen::MatrixXd q4Stiffness(double x0, double y0, double lx, double ly,
                            const MaterialModel& mat) {
  const Eigen::Matrix3d D = mat.constitutive();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(8, 8);
  const SegmentRule g = gaussSegment(2);
  // vertex order (x0,y0), (x0+lx,y0), (x0+lx,y0+ly), (x0,y0+ly)
  const double sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
  for (size_t gi = 0; gi < g.points.size(); ++gi) {
    for (size_t gj = 0; gj < g.points.size(); ++gj) {
      const double xi = g.points[gi], eta = g.points[gj];
      const double w = g.weights[gi] * g.weights[gj] * 0.25 * lx * ly;
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        const double dNdx = sx[a] * 0.25 * (1 + sy[a] * eta) * 2.0 / lx;
        const double dNdy = sy[a] * 0.25 * (1 + sx[a] * xi) * 2.0 / ly;
        B(0, 2 * a) = dNdx;
        B(1, 2 * a + 1) = dNdy;
        B(2, 2 * a) = dNdy;
        B(2, 2 * a + 1) = dNdx;
      }
      K += w * B.transpose() * D * B;
    }
  }
  return K;
}

}  // namespace

TEST_CASE("wachspress: partition of unity and linear completeness inside") {
  const auto poly = regularPolygon(7, 1.4, {0.3, -0.2});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(0.0, 0.98);
  const auto [centroid, area] = polygonCentroidArea(poly);
  for (int trial = 0; trial < 50; ++trial) {
    const Point2 x = centroid + t(rng) * (poly[trial % 7] - centroid);
    const WachspressEval sh = wachspressEval(poly, x);
    CHECK(sh.values.sum() == doctest::Approx(1.0).epsilon(1e-13));
    Eigen::Vector2d recon = Eigen::Vector2d::Zero();
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 7; ++i) {
      recon += sh.values(i) * poly[i];
      grad += sh.gradients.col(i) * poly[i].transpose();
    }
    CHECK((recon - x).norm() < 1e-13);
    CHECK((grad - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK(sh.gradients.rowwise().sum().norm() < 1e-12);  // grad of constant
  }
}

TEST_CASE("wachspress: kronecker delta at vertices and edge linearity") {
  const auto poly = regularPolygon(5, 1.0);
  for (int v = 0; v < 5; ++v) {
    const WachspressEval sh = wachspressEval(poly, poly[v]);
    for (int i = 0; i < 5; ++i)
      CHECK(sh.values(i) == doctest::Approx(i == v ? 1.0 : 0.0));
  }
  // midpoint of edge 0-1 interpolates the two end nodes
  const WachspressEval mid = wachspressEval(poly, 0.5 * (poly[0] + poly[1]));
  CHECK(mid.values(0) == doctest::Approx(0.5));
  CHECK(mid.values(1) == doctest::Approx(0.5));
  for (int i = 2; i < 5; ++i) CHECK(mid.values(i) == doctest::Approx(0.0));
}

TEST_CASE("wachspress gradients match central differences") {
  const auto poly = regularPolygon(6, 1.2);
  const double h = 1e-6;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> t(0.1, 0.85);
  for (int trial = 0; trial < 20; ++trial) {
    const Point2 x = t(rng) * poly[trial % 6];
    const WachspressEval sh = wachspressEval(poly, x);
    const Eigen::VectorXd px = wachspressEval(poly, x + Point2(h, 0)).values;
    const Eigen::VectorXd mx = wachspressEval(poly, x - Point2(h, 0)).values;
    const Eigen::VectorXd py = wachspressEval(poly, x + Point2(0, h)).values;
    const Eigen::VectorXd my = wachspressEval(poly, x - Point2(0, h)).values;
    for (int i = 0; i < 6; ++i) {
      CHECK(sh.gradients(0, i) ==
            doctest::Approx((px(i) - mx(i)) / (2 * h)).epsilon(1e-6));
      CHECK(sh.gradients(1, i) ==
            doctest::Approx((py(i) - my(i)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("pfem stiffness on rectangles equals the bilinear Q4 element") {
  for (auto [x0, y0, lx, ly] :
       {std::array<double, 4>{0, 0, 1, 1}, {2, -1, 3, 0.5}, {-4, 7, 0.2, 0.2}}) {
    const std::vector<Point2> rect = {
        {x0, y0}, {x0 + lx, y0}, {x0 + lx, y0 + ly}, {x0, y0 + ly}};
    const Eigen::MatrixXd K = pfemStiffness(rect, kMat);
    const Eigen::MatrixXd ref = q4Stiffness(x0, y0, lx, ly, kMat);
    CHECK((K - ref).norm() < 1e-10 * ref.norm());
  }
}

TEST_CASE("pfem stiffness: symmetric, PSD, exactly three rigid modes") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {3, 4, 5, 6, 8}) {
    const auto poly = regularPolygon(n, 0.8, {u(rng), u(rng)});
    const Eigen::MatrixXd K = pfemStiffness(poly, kMat);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <
          1e-12 * K.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
    const Eigen::VectorXd ev = eig.eigenvalues();
    const double lmax = ev.maxCoeff();
    int near_null = 0;
    for (int i = 0; i < ev.size(); ++i) {
      CHECK(ev(i) > -1e-11 * lmax);
      if (std::abs(ev(i)) < 1e-10 * lmax) ++near_null;
    }
    CHECK(near_null == 3);
  }
}

TEST_CASE("pfem element passes the constant strain patch test") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {4, 5, 7}) {
    const auto poly = regularPolygon(n, 1.1, {0.2, 0.5});
    const Eigen::MatrixXd K = pfemStiffness(poly, kMat);
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    Eigen::VectorXd q(2 * n);
    for (int i = 0; i < n; ++i)
      q.segment<2>(2 * i) = Eigen::Vector2d(a * poly[i].x() + b * poly[i].y(),
                                            c * poly[i].x() + d * poly[i].y());
    const Eigen::Vector3d eps(a, d, b + c);
    const double exact =
        0.5 * polygonArea(poly) * eps.dot(kMat.constitutive() * eps);
    CHECK(0.5 * q.dot(K * q) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("pfem traction load matches the closed-form linear frame") {
  const std::vector<Point2> poly = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
  const Eigen::VectorXd load = pfemTractionLoad(
      poly, {0}, [](const Point2&) { return Eigen::Vector2d(0.0, -5.0); });
  CHECK(load(1) == doctest::Approx(-5.0));
  CHECK(load(3) == doctest::Approx(-5.0));
  CHECK(load(0) == doctest::Approx(0.0));
  CHECK(load.segment(4, 4).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}
