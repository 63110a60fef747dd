#include "htpoly/quadrature.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace htpoly {

SegmentRule gaussSegment(int n_points) {
  if (n_points < 1 || n_points > 30)
    throw std::invalid_argument("gaussSegment: n_points must be in [1, 30]");
  SegmentRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  const int n = n_points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.points[i] = -x;
    rule.weights[i] = w;
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    rule.points[n / 2] = 0.0;  // exact symmetry for the midpoint
  }
  return rule;
}

namespace {

void perm3(TriangleRule& r, double a, double b, double w) {
  r.nodes.push_back({a, b, b, w});
  r.nodes.push_back({b, a, b, w});
  r.nodes.push_back({b, b, a, w});
}

void perm6(TriangleRule& r, double a, double b, double c, double w) {
  r.nodes.push_back({a, b, c, w});
  r.nodes.push_back({a, c, b, w});
  r.nodes.push_back({b, a, c, w});
  r.nodes.push_back({b, c, a, w});
  r.nodes.push_back({c, a, b, w});
  r.nodes.push_back({c, b, a, w});
}

}  // namespace

// Tabulated symmetric triangle rules (Dunavant 1985), weights normalized to
// the unit reference area. Verified against monomial integrals in the tests.
TriangleRule dunavantTriangle(int order) {
  TriangleRule r;
  r.order = order;
  const double third = 1.0 / 3.0;
  switch (order) {
    case 1:
      r.nodes.push_back({third, third, third, 1.0});
      break;
    case 2:
      perm3(r, 2.0 / 3.0, 1.0 / 6.0, third);
      break;
    case 3:
      r.nodes.push_back({third, third, third, -0.5625});
      perm3(r, 0.6, 0.2, 25.0 / 48.0);
      break;
    case 4:
      perm3(r, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      perm3(r, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      r.nodes.push_back({third, third, third, 0.225});
      perm3(r, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      perm3(r, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      perm3(r, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      perm3(r, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      perm6(r, 0.053145049844816, 0.310352451033785, 0.636502499121399,
            0.082851075618374);
      break;
    case 7:
      r.nodes.push_back({third, third, third, -0.149570044467670});
      perm3(r, 0.479308067841923, 0.260345966079038, 0.175615257433204);
      perm3(r, 0.869739794195568, 0.065130102902216, 0.053347235608839);
      perm6(r, 0.048690315425316, 0.312865496004875, 0.638444188569809,
            0.077113760890257);
      break;
    case 8:
      r.nodes.push_back({third, third, third, 0.144315607677787168});
      perm3(r, 0.081414823414553688, 0.459292588292723156, 0.095091634267284625);
      perm3(r, 0.658861384496479587, 0.170569307751760207, 0.103217370534718250);
      perm3(r, 0.898905543365938049, 0.050547228317030975, 0.032458497623198080);
      perm6(r, 0.008394777409957605, 0.263112829634638113, 0.728492392955404281,
            0.027230314174434994);
      break;
    default:
      throw std::invalid_argument("dunavantTriangle: order must be in [1, 8]");
  }
  return r;
}

double integratePolygon(const std::vector<Point2>& vertices,
                        const std::function<double(const Point2&)>& f,
                        const TriangleRule& rule) {
  const auto [centroid, poly_area] = polygonCentroidArea(vertices);
  const int n = static_cast<int>(vertices.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % n];
    const Point2& c = centroid;
    const double area =
        0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    if (std::abs(area) < 1e-14 * std::abs(poly_area)) {
      std::cerr << "integratePolygon: skipping degenerate triangle\n";
      continue;
    }
    for (const auto& node : rule.nodes) {
      const Point2 x = node.l0 * a + node.l1 * b + node.l2 * c;
      total += area * node.weight * f(x);
    }
  }
  return total;
}

}  // namespace htpoly
