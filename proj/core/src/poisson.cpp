#include "opanel/poisson.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opanel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-15;
constexpr int kMaxIter = 600;

// Regularized lower incomplete gamma P(a, x) by series; requires x < a + 1.
double gamma_p_series(double a, double x, double lgamma_a) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lgamma_a);
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; requires x >= a + 1.
double gamma_q_cf(double a, double x, double lgamma_a) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - lgamma_a);
}

double shifted_a(double x, ContinuousShift shift) {
  return shift == ContinuousShift::shifted ? x + 1.0 : x;
}

}  // namespace

double gamma_q(double a, double x, double lgamma_a) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw std::invalid_argument("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x, lgamma_a);
  return gamma_q_cf(a, x, lgamma_a);
}

double gamma_q(double a, double x) { return gamma_q(a, x, std::lgamma(a)); }

double poisson_cdf(long long k, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_cdf: lambda < 0");
  if (k < 0) return 0.0;
  const double a = static_cast<double>(k) + 1.0;
  return gamma_q(a, lambda);
}

double continuous_cdf(double x, double lambda, ContinuousShift shift) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("continuous_cdf: lambda < 0");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double a = shifted_a(x, shift);
  if (a <= 0.0) return 0.0;
  return gamma_q(a, lambda);
}

double dcontinuous_cdf_dlambda(double x, double lambda, ContinuousShift shift) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("dcontinuous_cdf_dlambda: lambda must be > 0");
  const double a = shifted_a(x, shift);
  if (!(a > 0.0))
    throw std::invalid_argument("dcontinuous_cdf_dlambda: x out of range");
  if (a == 1.0) return -std::exp(-lambda);
  return -std::exp(-lambda + (a - 1.0) * std::log(lambda) - std::lgamma(a));
}

double interval_prob(double gamma_lo, double gamma_hi, double lambda,
                     bool continuous, ContinuousShift shift, double floor) {
  if (!(gamma_lo < gamma_hi))
    throw std::invalid_argument("interval_prob: gamma_lo must be < gamma_hi");
  if (!(lambda >= 0.0)) throw std::invalid_argument("interval_prob: lambda < 0");
  double hi, lo;
  if (continuous) {
    hi = continuous_cdf(gamma_hi, lambda, shift);
    lo = continuous_cdf(gamma_lo, lambda, shift);
  } else {
    hi = std::isinf(gamma_hi) ? 1.0
                              : poisson_cdf(std::llround(gamma_hi), lambda);
    lo = poisson_cdf(std::llround(gamma_lo), lambda);
  }
  return std::max(hi - lo, floor);
}

double CutPoints::lower(int level) const {
  if (level < 1 || level > levels())
    throw std::invalid_argument("CutPoints: level out of range");
  return level == 1 ? -1.0 : thresholds[level - 2];
}

double CutPoints::upper(int level) const {
  if (level < 1 || level > levels())
    throw std::invalid_argument("CutPoints: level out of range");
  return level == levels() ? kInf : thresholds[level - 1];
}

void CutPoints::validate() const {
  if (thresholds.empty())
    throw std::invalid_argument("CutPoints: need at least one cut point (K >= 2)");
  double prev = -1.0;
  for (double g : thresholds) {
    if (!(g > prev))
      throw std::invalid_argument("CutPoints: thresholds must be strictly increasing above -1");
    if (integer_valued && g != std::floor(g))
      throw std::invalid_argument("CutPoints: integer-valued cut point is not an integer");
    prev = g;
  }
}

CutPoints CutPoints::integers(const std::vector<long long>& gamma) {
  CutPoints out;
  out.integer_valued = true;
  out.thresholds.assign(gamma.begin(), gamma.end());
  out.validate();
  return out;
}

CutPoints CutPoints::reals(std::vector<double> gamma) {
  CutPoints out;
  out.integer_valued = false;
  out.thresholds = std::move(gamma);
  out.validate();
  return out;
}

double level_prob(const CutPoints& cuts, int level, double lambda,
                  bool continuous, ContinuousShift shift, double floor) {
  return interval_prob(cuts.lower(level), cuts.upper(level), lambda,
                       continuous, shift, floor);
}

namespace detail {

double cut_lgamma(double cut, ContinuousShift shift) {
  const double a = shifted_a(cut, shift);
  return a > 0.0 && !std::isinf(a) ? std::lgamma(a) : 0.0;
}

double cdf_cut_dlambda(double cut, double lambda, ContinuousShift shift,
                       double lgamma_a) {
  if (std::isinf(cut)) return 0.0;
  const double a = shifted_a(cut, shift);
  if (a <= 0.0) return 0.0;
  const double lam = std::max(lambda, 1e-12);
  if (a == 1.0) return -std::exp(-lam);
  return -std::exp(-lam + (a - 1.0) * std::log(lam) - lgamma_a);
}

}  // namespace detail

}  // namespace opanel
