#include "opanel/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opanel {

namespace {

// All B-spline basis values of the given order at x, on the knot sequence
// `knots` (dense Cox-de Boor triangle; 0/0 conventions handled as zero).
// Returns knots.size() - order values. At x equal to the last knot the final
// half-open interval is treated as closed.
std::vector<double> bspline_all(const std::vector<double>& knots, int order,
                                double x) {
  const int n_knots = static_cast<int>(knots.size());
  std::vector<double> b(n_knots - 1, 0.0);
  if (x >= knots.back()) {
    for (int i = n_knots - 2; i >= 0; --i) {
      if (knots[i] < knots[i + 1]) {
        b[i] = 1.0;
        break;
      }
    }
  } else {
    for (int i = 0; i < n_knots - 1; ++i) {
      if (knots[i] <= x && x < knots[i + 1]) {
        b[i] = 1.0;
        break;
      }
    }
  }
  for (int k = 2; k <= order; ++k) {
    const int count = n_knots - k;
    for (int i = 0; i < count; ++i) {
      double v = 0.0;
      const double d1 = knots[i + k - 1] - knots[i];
      if (d1 > 0.0) v += (x - knots[i]) / d1 * b[i];
      const double d2 = knots[i + k] - knots[i + 1];
      if (d2 > 0.0) v += (knots[i + k] - x) / d2 * b[i + 1];
      b[i] = v;
    }
    b.resize(count);
  }
  return b;
}

// Linear-interpolation quantile of a sorted sample (the common "type 7"
// definition: index h = (N-1) q).
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

void SplineSpec::validate() const {
  if (order < 1) throw std::invalid_argument("spline order must be >= 1");
  if (interior_count < 0)
    throw std::invalid_argument("interior knot count must be >= 0");
  if (!(domain_end > 0.0))
    throw std::invalid_argument("spline domain end must be > 0");
}

KnotVector::KnotVector(std::vector<double> interior, const SplineSpec& spec)
    : spec_(spec), interior_(std::move(interior)) {
  spec_.validate();
  if (static_cast<int>(interior_.size()) != spec_.interior_count)
    throw std::invalid_argument("interior knot count does not match spec");
  double prev = 0.0;
  for (double k : interior_) {
    if (!(k > prev) || !(k < spec_.domain_end))
      throw std::invalid_argument(
          "interior knots must be strictly increasing inside (0, tau)");
    prev = k;
  }
  const int pad = spec_.order + 1;
  padded_.assign(pad, 0.0);
  padded_.insert(padded_.end(), interior_.begin(), interior_.end());
  padded_.insert(padded_.end(), pad, spec_.domain_end);
}

KnotVector KnotVector::build(std::span<const double> visit_times,
                             const SplineSpec& spec) {
  spec.validate();
  if (visit_times.empty())
    throw std::invalid_argument("build_knots: no visit times");
  std::vector<double> sorted(visit_times.begin(), visit_times.end());
  for (double t : sorted) {
    if (!(t > 0.0) || t > spec.domain_end)
      throw std::invalid_argument("build_knots: visit time outside (0, tau]");
  }
  std::sort(sorted.begin(), sorted.end());

  const int m = spec.interior_count;
  std::vector<double> interior(m);
  for (int j = 1; j <= m; ++j)
    interior[j - 1] =
        sorted_quantile(sorted, static_cast<double>(j) / (m + 1));

  // Nudge ties (and boundary-touching values) apart while keeping the
  // sequence strictly increasing inside (0, tau).
  const double eps = spec.domain_end * 1e-9;
  double prev = 0.0;
  for (int j = 0; j < m; ++j) {
    if (interior[j] <= prev) interior[j] = prev + eps;
    prev = interior[j];
  }
  double next = spec.domain_end;
  for (int j = m - 1; j >= 0; --j) {
    if (interior[j] >= next) interior[j] = next - eps;
    next = interior[j];
  }
  if (m > 0 && !(interior.front() > 0.0))
    throw std::invalid_argument(
        "build_knots: too many interior knots for the data spread");
  return KnotVector(std::move(interior), spec);
}

KnotVector KnotVector::equal_spaced(const SplineSpec& spec) {
  spec.validate();
  const int m = spec.interior_count;
  std::vector<double> interior(m);
  for (int j = 1; j <= m; ++j)
    interior[j - 1] = spec.domain_end * static_cast<double>(j) / (m + 1);
  return KnotVector(std::move(interior), spec);
}

KnotVector KnotVector::from_interior(std::vector<double> interior,
                                     const SplineSpec& spec) {
  return KnotVector(std::move(interior), spec);
}

std::vector<double> KnotVector::full_knots() const {
  std::vector<double> out(spec_.order, 0.0);
  out.insert(out.end(), interior_.begin(), interior_.end());
  out.insert(out.end(), spec_.order, spec_.domain_end);
  return out;
}

void KnotVector::check_domain(double t) const {
  if (!(t >= 0.0) || t > spec_.domain_end)
    throw std::domain_error("spline evaluation outside [0, tau]");
}

Eigen::VectorXd KnotVector::ispline_values(double t) const {
  check_domain(t);
  const int L = basis_dim();
  // Order-(l+1) B-splines on the padded sequence; count L + 1, and
  // I_k(t) = sum_{j >= k} B_j(t), k = 1..L.
  const std::vector<double> b = bspline_all(padded_, spec_.order + 1, t);
  Eigen::VectorXd out(L);
  double suffix = 0.0;
  for (int k = L; k >= 1; --k) {
    suffix += b[k];
    out[k - 1] = std::min(1.0, suffix);
  }
  return out;
}

Eigen::VectorXd KnotVector::mspline_values(double t) const {
  check_domain(t);
  const int L = basis_dim();
  const int l = spec_.order;
  // Order-l B-splines on the padded sequence; indices 1..L are the basis
  // (index 0 and L+1 have zero-width support). M_i = l * B_i / knot span.
  const std::vector<double> b = bspline_all(padded_, l, t);
  Eigen::VectorXd out(L);
  for (int i = 1; i <= L; ++i) {
    const double span = padded_[i + l] - padded_[i];
    out[i - 1] = span > 0.0 ? l * b[i] / span : 0.0;
  }
  return out;
}

double KnotVector::baseline_mean(const Eigen::VectorXd& alpha, double t) const {
  if (alpha.size() != basis_dim())
    throw std::invalid_argument("baseline_mean: coefficient length != basis dimension");
  if ((alpha.array() < 0.0).any())
    throw std::invalid_argument("baseline_mean: negative spline coefficient");
  return alpha.dot(ispline_values(t));
}

}  // namespace opanel
