#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace opanel {

// Spline configuration for the baseline mean function. `order` follows the
// Ramsay (1988) convention: an order-l I-spline is the running integral of an
// order-l M-spline (a piecewise polynomial of degree l-1), and a basis with
// m_n interior knots has L = m_n + l functions. So (m_n = 2, l = 3) gives a
// 5-dimensional basis and (m_n = 3, l = 2) also gives 5.
struct SplineSpec {
  int order = 3;            // l >= 1
  int interior_count = 2;   // m_n >= 0
  double domain_end = 10.0; // tau > 0

  int basis_dim() const { return order + interior_count; }
  void validate() const;
};

enum class KnotPlacement { quantile, equal };

// Knot sequence on [0, tau] with order-fold boundary repeats and strictly
// increasing interior knots. Immutable after construction; evaluation is
// const and safe for concurrent use from many threads.
class KnotVector {
 public:
  // Interior knots at the empirical quantiles j/(m_n+1), j = 1..m_n, of the
  // pooled visit times (linear-interpolation quantiles on the sorted sample).
  // Quantiles that tie or touch the boundary are nudged apart by the smallest
  // spacing that keeps the sequence strictly increasing inside (0, tau).
  static KnotVector build(std::span<const double> visit_times,
                          const SplineSpec& spec);

  // Equally spaced interior knots at j*tau/(m_n+1).
  static KnotVector equal_spaced(const SplineSpec& spec);

  // Explicit interior knots; must be strictly increasing inside (0, tau).
  static KnotVector from_interior(std::vector<double> interior,
                                  const SplineSpec& spec);

  const SplineSpec& spec() const { return spec_; }
  const std::vector<double>& interior() const { return interior_; }
  double tau() const { return spec_.domain_end; }
  int order() const { return spec_.order; }
  int basis_dim() const { return spec_.basis_dim(); }

  // Full knot sequence in the Ramsay layout: order-fold repeats at 0 and tau
  // around the interior knots.
  std::vector<double> full_knots() const;

  // I-spline basis values (I_1(t), ..., I_L(t)). Each value lies in [0, 1],
  // is 0 at t = 0, 1 at t = tau, and nondecreasing in t. Computed in closed
  // form as suffix sums of the order-(l+1) B-spline basis, which is the
  // Ramsay (1988) expression for the integrated M-spline.
  Eigen::VectorXd ispline_values(double t) const;

  // Order-l M-spline basis values; each basis function integrates to 1 over
  // its support. Mostly used by tests to cross-check ispline_values by
  // quadrature.
  Eigen::VectorXd mspline_values(double t) const;

  // Baseline mean Lambda_0(t) = sum_i alpha_i I_i(t). Requires alpha_i >= 0,
  // which makes the result nonnegative and nondecreasing in t.
  double baseline_mean(const Eigen::VectorXd& alpha, double t) const;

 private:
  KnotVector(std::vector<double> interior, const SplineSpec& spec);

  void check_domain(double t) const;

  SplineSpec spec_;
  std::vector<double> interior_;
  // (order+1)-fold boundary repeats; supports the order-(l+1) B-spline
  // evaluation used for I-splines and the order-l one used for M-splines.
  std::vector<double> padded_;
};

}  // namespace opanel
