#include "nwig/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "nwig/errors.hpp"

namespace nwig {

namespace {

// pi^(-1/4), the recurrence seed: the degree-0 orthonormal Hermite
// polynomial for the weight exp(-t^2).
constexpr double kPiToMinusQuarter = 0.7511255444649425;

// Evaluates the orthonormal Hermite polynomial of degree n at z via the
// recurrence  p_j(z) = z*sqrt(2/j)*p_{j-1}(z) - sqrt((j-1)/j)*p_{j-2}(z),
// returning p_n and p_{n-1} (the latter gives the derivative through
// p_n'(z) = sqrt(2n) * p_{n-1}(z)).
struct HermitePair {
  double pn;
  double pn_minus_1;
};

HermitePair orthonormal_hermite(int n, double z) {
  double p1 = kPiToMinusQuarter;
  double p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
  }
  return {p1, p2};
}

// Eigenvalues of a symmetric tridiagonal matrix (diagonal d, off-diagonal e)
// by the implicit-shift QL algorithm (EISPACK tql1 lineage).  Returns the
// eigenvalues in ascending order.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);  // e[n-1] used as scratch
  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    while (true) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iterations == 64) {
        throw NumericsError("tridiagonal QL iteration failed to converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 256) {
    throw DomainError("Gauss-Hermite order must be in [1, 256]");
  }

  const int n = order;

  // Nodes are the eigenvalues of the Jacobi matrix of the orthonormal
  // recurrence (zero diagonal, off-diagonal sqrt(j/2)) -- the Golub-Welsch
  // construction, which locates every root reliably at any order.  Each
  // eigenvalue is then polished with a few Newton steps on the orthonormal
  // recurrence to full double precision.
  std::vector<double> diagonal(n, 0.0);
  std::vector<double> off_diagonal;
  off_diagonal.reserve(n);
  for (int j = 1; j < n; ++j) off_diagonal.push_back(std::sqrt(0.5 * j));
  std::vector<double> nodes = tridiagonal_eigenvalues(std::move(diagonal), off_diagonal);

  for (double& z : nodes) {
    for (int iteration = 0; iteration < 8; ++iteration) {
      const HermitePair p = orthonormal_hermite(n, z);
      const double derivative = std::sqrt(2.0 * n) * p.pn_minus_1;
      const double step = p.pn / derivative;
      z -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
  }

  // Roots come in exact +/- pairs; enforce the symmetry bit-for-bit by
  // averaging each pair, and pin the middle root of odd orders to zero.
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  for (int i = 0; i < n / 2; ++i) {
    const double z = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    // Christoffel weight w = 2 / p_n'(z)^2 = 1 / (n * p_{n-1}(z)^2), equal at
    // +/-z by parity.
    const HermitePair p = orthonormal_hermite(n, z);
    const double w = 1.0 / (n * p.pn_minus_1 * p.pn_minus_1);
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) {
    const int middle = n / 2;
    rule.nodes[middle] = 0.0;
    const HermitePair p = orthonormal_hermite(n, 0.0);
    rule.weights[middle] = 1.0 / (n * p.pn_minus_1 * p.pn_minus_1);
  }

  return rule;
}

double trapezoid(const std::vector<double>& values, double h) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * values.front();
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  sum += 0.5 * values.back();
  return sum * h;
}

}  // namespace nwig
