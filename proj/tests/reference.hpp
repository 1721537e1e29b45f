#pragma once

// Test-only oracles computed by routes that share no code with the library
// formulas: sequential seating probabilities and numerical quadrature.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <vector>

#include "partlab/core.hpp"

namespace ref {

using partlab::ExtParams;
using partlab::Family;
using partlab::Rational;

/// Probability that the seating process produces this growth string,
/// multiplying one conditional probability per customer.
inline Rational seating_probability(const ExtParams<Rational>& p, const partlab::Rgs& rgs) {
  Rational prob = 1;
  std::vector<unsigned> sizes;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    const auto k = static_cast<long>(sizes.size());
    const auto b = rgs[i];
    if (i > 0) {
      if (p.family() == Family::Coupon) {
        const long m = p.types();
        prob *= b == sizes.size() ? Rational(m - k, m) : Rational(1, m);
      } else {
        const Rational denom = p.theta() + static_cast<long>(i);
        prob *= b == sizes.size() ? Rational((p.theta() + k * p.alpha()) / denom)
                                  : Rational((sizes[b] - p.alpha()) / denom);
      }
    }
    if (b == sizes.size()) {
      sizes.push_back(1);
    } else {
      ++sizes[b];
    }
  }
  return prob;
}

/// E[W^r (1-W)^s] for W ~ beta(a, b) by adaptive quadrature.
inline double beta_moment_quadrature(double a, double b, int r, int s) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto weight = [&](double w, int i, int j) { return std::pow(w, a - 1 + i) * std::pow(1 - w, b - 1 + j); };
  const double num = integrator.integrate([&](double w) { return weight(w, r, s); }, 0.0, 1.0);
  const double den = integrator.integrate([&](double w) { return weight(w, 0, 0); }, 0.0, 1.0);
  return num / den;
}

/// Phi(a) = a * int_0^1 (1-u)^(a-1) u^-alpha (1-u)^theta du: the Laplace
/// exponent written through the tail of the (alpha, theta) measure.
inline double phi_by_tail(double alpha, double theta, double a) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  // Split at 1/2 so each endpoint singularity sits at 0 in its own variable.
  const auto left = [&](double u) { return std::pow(1 - u, a - 1 + theta) * std::pow(u, -alpha); };
  const auto right = [&](double v) { return std::pow(v, a - 1 + theta) * std::pow(1 - v, -alpha); };
  return a * (integrator.integrate(left, 0.0, 0.5) + integrator.integrate(right, 0.0, 0.5));
}

}  // namespace ref
