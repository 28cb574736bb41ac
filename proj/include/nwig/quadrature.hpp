#pragma once

#include <vector>

namespace nwig {

// Gauss–Hermite rule for the weight exp(-t^2):
//
//   Integral f(t) exp(-t^2) dt  ~=  sum_i weights[i] * f(nodes[i]),
//
// exact for polynomials of degree 2*order - 1.  Nodes are ascending and
// symmetric about zero; weights are positive and sum to sqrt(pi).
//
// To average a function over a Gaussian random variable d ~ N(mean, std^2),
// substitute d = mean + sqrt(2)*std*t:
//
//   E[f(d)] = (1/sqrt(pi)) sum_i weights[i] * f(mean + sqrt(2)*std*nodes[i]).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Builds the rule by Newton iteration on the orthonormal Hermite recurrence
// (numerically stable to order 256, unlike the monomial form which overflows).
// Throws DomainError for order outside [1, 256].
GaussHermiteRule gauss_hermite(int order);

// Trapezoid integral of uniformly spaced samples with spacing h, accumulated
// in ascending index order (part of the determinism contract: a fixed
// summation order makes repeated reductions bit-identical).
double trapezoid(const std::vector<double>& values, double h);

}  // namespace nwig
