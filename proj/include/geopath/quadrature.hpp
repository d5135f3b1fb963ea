#pragma once

#include <functional>
#include <vector>

namespace geopath {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, nodes by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int order = 10;
  int max_depth = 30;
};

/// Adaptive Gauss-Legendre: a panel is accepted when the rule on the panel and
/// the sum over its two halves agree within the tolerance share of the panel.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// Sum of `integrate` over consecutive points (endpoints included), so kinks
/// of the integrand can sit on panel edges.
double integrate_piecewise(const std::function<double(double)>& f,
                           const std::vector<double>& points,
                           const QuadratureOptions& opts = {});

}  // namespace geopath
