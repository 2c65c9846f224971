#pragma once

#include <vector>

namespace opanel {

// Floor applied to interval probabilities before they are logged, so the
// likelihood stays finite when an observed level has vanishing model
// probability early in optimization.
inline constexpr double kProbFloor = 1e-12;

// Convention for the continuous extension of the Poisson CDF.
//
// `shifted` evaluates Q(x + 1, lambda), the regularized upper incomplete
// gamma, which agrees with the Poisson CDF exactly at nonnegative integer x.
// `literal` evaluates Q(x, lambda), which equals the CDF shifted by one unit
// (Q(k, lambda) is the CDF at k - 1); it is kept for comparison runs.
enum class ContinuousShift { shifted, literal };

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, continued fraction otherwise, iterated to
// 1e-15 relative convergence. `lgamma_a` may pass a precomputed lgamma(a).
double gamma_q(double a, double x);
double gamma_q(double a, double x, double lgamma_a);

// Poisson CDF F_lambda(k) = sum_{j=0}^{k} e^{-lambda} lambda^j / j!,
// evaluated as Q(k + 1, lambda); 0 for k = -1 (the gamma_0 sentinel).
double poisson_cdf(long long k, double lambda);

// Continuous extension of the Poisson CDF: Q(x + 1, lambda) for x > -1 and 0
// for x <= -1 (shifted convention; see ContinuousShift for the literal one).
// Nondecreasing and continuous in x, strictly decreasing in lambda at fixed
// x > -1, and equal to poisson_cdf at nonnegative integers.
double continuous_cdf(double x, double lambda,
                      ContinuousShift shift = ContinuousShift::shifted);

// d/dlambda of continuous_cdf = -e^{-lambda} lambda^x / Gamma(x+1) under the
// shifted convention; always <= 0. Requires x > -1 and lambda > 0.
double dcontinuous_cdf_dlambda(double x, double lambda,
                               ContinuousShift shift = ContinuousShift::shifted);

// Probability of a count falling in (gamma_lo, gamma_hi]: the CDF difference
// in exact (integer cut point) or continuous mode, floored at `floor`.
double interval_prob(double gamma_lo, double gamma_hi, double lambda,
                     bool continuous,
                     ContinuousShift shift = ContinuousShift::shifted,
                     double floor = kProbFloor);

// Ordinal cut points gamma_1 < ... < gamma_{K-1} with implied sentinels
// gamma_0 = -1 and gamma_K = +infinity.
struct CutPoints {
  std::vector<double> thresholds;
  bool integer_valued = true;

  int levels() const { return static_cast<int>(thresholds.size()) + 1; }
  // gamma_{level-1} and gamma_level for a 1-based level in 1..K.
  double lower(int level) const;
  double upper(int level) const;
  void validate() const;

  static CutPoints integers(const std::vector<long long>& gamma);
  static CutPoints reals(std::vector<double> gamma);
};

// P(Y = level) for a count with mean lambda under the given cut points.
double level_prob(const CutPoints& cuts, int level, double lambda,
                  bool continuous,
                  ContinuousShift shift = ContinuousShift::shifted,
                  double floor = kProbFloor);

namespace detail {

// Lenient d/dlambda of the CDF term at a cut point: sentinel cuts
// (cut <= -1 in the shifted convention, or +infinity) contribute zero, and
// lambda <= 0 is clamped to a tiny positive value so the limit is finite.
// Used inside likelihood gradients; the public dcontinuous_cdf_dlambda
// enforces the documented preconditions instead.
double cdf_cut_dlambda(double cut, double lambda, ContinuousShift shift,
                       double lgamma_a);
double cut_lgamma(double cut, ContinuousShift shift);

}  // namespace detail

}  // namespace opanel
