#include "geopath/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "geopath/error.hpp"
#include "geopath/qcore.hpp"

namespace geopath {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i - 1] = -z;
    rule.nodes[n - i] = z;
    rule.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - i] = rule.weights[i - 1];
  }
  return rule;
}

namespace {

const GaussLegendreRule& cached_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

double panel(const std::function<double(double)>& f, const GaussLegendreRule& rule,
             double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
  }
  return half * sum;
}

double adapt(const std::function<double(double)>& f, const GaussLegendreRule& rule,
             double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, rule, a, mid);
  const double right = panel(f, rule, mid, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol || depth <= 0) return refined;
  return adapt(f, rule, a, mid, left, 0.5 * tol, depth - 1) +
         adapt(f, rule, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  const GaussLegendreRule& rule = cached_rule(opts.order);
  return adapt(f, rule, a, b, panel(f, rule, a, b), opts.abs_tol, opts.max_depth);
}

double integrate_piecewise(const std::function<double(double)>& f,
                           const std::vector<double>& points,
                           const QuadratureOptions& opts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += integrate(f, points[i], points[i + 1], opts);
  }
  return total;
}

}  // namespace geopath
