#include "opanel/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opanel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaCap = 700.0;  // exp overflow guard

double cdf_value(double a, double lg, double mu) {
  if (std::isinf(a)) return 1.0;
  if (a <= 0.0) return 0.0;
  if (std::isinf(mu)) return 0.0;
  return gamma_q(a, mu, lg);
}

// d/dmu of the CDF term; zero for sentinel cuts, finite limit at mu = 0.
double cdf_slope(double a, double lg, double mu) {
  if (std::isinf(a) || a <= 0.0 || std::isinf(mu)) return 0.0;
  const double m = std::max(mu, 1e-12);
  if (a == 1.0) return -std::exp(-m);
  return -std::exp(-m + (a - 1.0) * std::log(m) - lg);
}

}  // namespace

OrdinalPanelModel::OrdinalPanelModel(const PanelDataset& data,
                                     const KnotVector& knots,
                                     CutpointMode mode,
                                     std::optional<CutPoints> known_cutpoints,
                                     ModelOptions options)
    : knots_(knots), mode_(mode), fixed_cuts_(std::move(known_cutpoints)),
      options_(options), levels_(data.levels) {
  data.validate();
  if (mode_ == CutpointMode::known) {
    if (!fixed_cuts_)
      throw std::invalid_argument("known-cutpoint mode requires cut points");
    fixed_cuts_->validate();
    if (!fixed_cuts_->integer_valued)
      throw std::invalid_argument("known-cutpoint mode requires integer cut points");
    if (fixed_cuts_->levels() != levels_)
      throw std::invalid_argument("cut points do not match the number of levels");
  }

  const int n = data.subject_count();
  const int total = data.total_visits();
  layout_.p = data.covariate_dim;
  layout_.L = knots_.basis_dim();
  layout_.n_delta = mode_ == CutpointMode::estimated ? levels_ - 1 : 0;

  covariates_.resize(layout_.p, n);
  subject_offset_.resize(n);
  subject_visits_.resize(n);
  basis_increment_.resize(layout_.L, total);
  y_.resize(total);

  int v = 0;
  for (int i = 0; i < n; ++i) {
    const Subject& s = data.subjects[i];
    covariates_.col(i) = s.covariates;
    subject_offset_[i] = v;
    subject_visits_[i] = s.visit_count();
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(layout_.L);
    for (int j = 0; j < s.visit_count(); ++j, ++v) {
      Eigen::VectorXd cur = knots_.ispline_values(s.visit_times[j]);
      basis_increment_.col(v) = (cur - prev).cwiseMax(0.0);
      prev = std::move(cur);
      y_[v] = s.responses[j];
    }
  }
}

std::vector<OrdinalPanelModel::LevelCdf> OrdinalPanelModel::level_table(
    const std::vector<double>& gamma) const {
  // Exact mode and the shifted continuous extension both evaluate Q(g + 1, .);
  // the literal Eq-form uses Q(g, .) and applies only when estimating.
  const double shift =
      (mode_ == CutpointMode::known || options_.shift == ContinuousShift::shifted)
          ? 1.0
          : 0.0;
  std::vector<LevelCdf> table(levels_);
  for (int k = 1; k <= levels_; ++k) {
    LevelCdf& e = table[k - 1];
    const double lo = k == 1 ? -1.0 : gamma[k - 2];
    const double hi = k == levels_ ? kInf : gamma[k - 1];
    e.a_lo = lo + shift;
    e.a_hi = std::isinf(hi) ? kInf : hi + shift;
    e.lg_lo = e.a_lo > 0.0 && !std::isinf(e.a_lo) ? std::lgamma(e.a_lo) : 0.0;
    e.lg_hi = e.a_hi > 0.0 && !std::isinf(e.a_hi) ? std::lgamma(e.a_hi) : 0.0;
  }
  return table;
}

Eigen::VectorXd OrdinalPanelModel::interval_means(
    const Eigen::VectorXd& packed) const {
  ParamVector theta(layout_, packed);
  const Eigen::VectorXd alpha = theta.alpha();
  const Eigen::VectorXd beta = theta.beta();
  Eigen::VectorXd mus(visit_count());
  for (int i = 0; i < subject_count(); ++i) {
    const double eta = std::min(beta.dot(covariates_.col(i)), kEtaCap);
    const double scale = std::exp(eta);
    const int off = subject_offset_[i];
    for (int j = 0; j < subject_visits_[i]; ++j) {
      const double inc = alpha.dot(basis_increment_.col(off + j));
      mus[off + j] = inc <= 0.0 ? 0.0 : inc * scale;
    }
  }
  return mus;
}

double OrdinalPanelModel::loglik_from_means(
    const Eigen::VectorXd& mus, const std::vector<LevelCdf>& table) const {
  double ll = 0.0;
  for (int v = 0; v < visit_count(); ++v) {
    const LevelCdf& e = table[y_[v] - 1];
    const double p = cdf_value(e.a_hi, e.lg_hi, mus[v]) -
                     cdf_value(e.a_lo, e.lg_lo, mus[v]);
    ll += std::log(std::max(p, options_.prob_floor));
  }
  return ll;
}

double OrdinalPanelModel::loglik(const Eigen::VectorXd& packed) const {
  ParamVector theta(layout_, packed);
  const std::vector<double> gamma =
      mode_ == CutpointMode::known ? fixed_cuts_->thresholds : theta.gamma();
  return loglik_from_means(interval_means(packed), level_table(gamma));
}

Eigen::VectorXd OrdinalPanelModel::subject_logliks(
    const Eigen::VectorXd& packed) const {
  ParamVector theta(layout_, packed);
  const std::vector<double> gamma =
      mode_ == CutpointMode::known ? fixed_cuts_->thresholds : theta.gamma();
  const std::vector<LevelCdf> table = level_table(gamma);
  const Eigen::VectorXd mus = interval_means(packed);
  Eigen::VectorXd out(subject_count());
  for (int i = 0; i < subject_count(); ++i) {
    double ll = 0.0;
    const int off = subject_offset_[i];
    for (int j = 0; j < subject_visits_[i]; ++j) {
      const LevelCdf& e = table[y_[off + j] - 1];
      const double p = cdf_value(e.a_hi, e.lg_hi, mus[off + j]) -
                       cdf_value(e.a_lo, e.lg_lo, mus[off + j]);
      ll += std::log(std::max(p, options_.prob_floor));
    }
    out[i] = ll;
  }
  return out;
}

double OrdinalPanelModel::loglik_and_gradient(const Eigen::VectorXd& packed,
                                              Eigen::VectorXd& grad) const {
  ParamVector theta(layout_, packed);
  const Eigen::VectorXd beta = theta.beta();
  const Eigen::VectorXd alpha_tilde = theta.alpha_tilde();
  const Eigen::VectorXd alpha = alpha_tilde.array().square();
  const std::vector<double> gamma =
      mode_ == CutpointMode::known ? fixed_cuts_->thresholds : theta.gamma();
  const std::vector<LevelCdf> table = level_table(gamma);

  grad = Eigen::VectorXd::Zero(layout_.dim());
  auto g_beta = grad.segment(layout_.beta_offset(), layout_.p);
  auto g_alpha = grad.segment(layout_.alpha_offset(), layout_.L);

  double ll = 0.0;
  Eigen::VectorXd mus(visit_count());
  for (int i = 0; i < subject_count(); ++i) {
    const auto x = covariates_.col(i);
    const double eta = std::min(beta.dot(x), kEtaCap);
    const double scale = std::exp(eta);
    const int off = subject_offset_[i];
    for (int j = 0; j < subject_visits_[i]; ++j) {
      const int v = off + j;
      const auto inc_vec = basis_increment_.col(v);
      const double inc = alpha.dot(inc_vec);
      const double mu = inc <= 0.0 ? 0.0 : inc * scale;
      mus[v] = mu;
      const LevelCdf& e = table[y_[v] - 1];
      const double p = cdf_value(e.a_hi, e.lg_hi, mu) -
                       cdf_value(e.a_lo, e.lg_lo, mu);
      if (p <= options_.prob_floor) {
        ll += std::log(options_.prob_floor);
        continue;  // floored: the term is flat in every parameter
      }
      ll += std::log(p);
      const double dll_dmu = (cdf_slope(e.a_hi, e.lg_hi, mu) -
                              cdf_slope(e.a_lo, e.lg_lo, mu)) / p;
      if (dll_dmu == 0.0) continue;
      g_beta += (dll_dmu * mu) * x;
      g_alpha += (2.0 * dll_dmu * scale) *
                 inc_vec.cwiseProduct(alpha_tilde);
    }
  }

  // Central finite differences for the cut-point increments; the interval
  // means do not depend on delta, so only the level table is rebuilt.
  if (layout_.n_delta > 0) {
    Eigen::VectorXd delta = theta.delta();
    for (int k = 0; k < layout_.n_delta; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(delta[k]));
      Eigen::VectorXd d_hi = delta, d_lo = delta;
      d_hi[k] += h;
      d_lo[k] -= h;
      const double f_hi = loglik_from_means(
          mus, level_table(ParamVector::gamma_from_delta(d_hi)));
      const double f_lo = loglik_from_means(
          mus, level_table(ParamVector::gamma_from_delta(d_lo)));
      grad[layout_.delta_offset() + k] = (f_hi - f_lo) / (2.0 * h);
    }
  }
  return ll;
}

double OrdinalPanelModel::interval_mean(const ParamVector& theta, int subject,
                                        int visit) const {
  if (subject < 0 || subject >= subject_count())
    throw std::out_of_range("interval_mean: subject index");
  if (visit < 0 || visit >= subject_visits_[subject])
    throw std::out_of_range("interval_mean: visit index");
  const double eta =
      std::min(theta.beta().dot(covariates_.col(subject)), kEtaCap);
  const double inc =
      theta.alpha().dot(basis_increment_.col(subject_offset_[subject] + visit));
  return inc <= 0.0 ? 0.0 : inc * std::exp(eta);
}

CutPoints OrdinalPanelModel::cutpoints_at(const ParamVector& theta) const {
  if (mode_ == CutpointMode::known) return *fixed_cuts_;
  return CutPoints::reals(theta.gamma());
}

}  // namespace opanel
