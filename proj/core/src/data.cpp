#include "opanel/data.hpp"

#include <cmath>
#include <stdexcept>

namespace opanel {

int PanelDataset::total_visits() const {
  int n = 0;
  for (const auto& s : subjects) n += s.visit_count();
  return n;
}

std::vector<double> PanelDataset::pooled_visit_times() const {
  std::vector<double> out;
  out.reserve(total_visits());
  for (const auto& s : subjects)
    out.insert(out.end(), s.visit_times.begin(), s.visit_times.end());
  return out;
}

void PanelDataset::validate() const {
  if (subjects.empty()) throw std::invalid_argument("dataset: no subjects");
  if (levels < 2) throw std::invalid_argument("dataset: need K >= 2 levels");
  if (!(tau > 0.0)) throw std::invalid_argument("dataset: tau must be > 0");
  for (const auto& s : subjects) {
    if (s.covariates.size() != covariate_dim)
      throw std::invalid_argument("dataset: covariate dimension mismatch for subject " + s.id);
    if (s.visit_times.empty())
      throw std::invalid_argument("dataset: subject " + s.id + " has no visits");
    if (s.visit_times.size() != s.responses.size())
      throw std::invalid_argument("dataset: visit/response length mismatch for subject " + s.id);
    double prev = 0.0;
    for (double t : s.visit_times) {
      if (!(t > prev))
        throw std::invalid_argument("dataset: visit times not strictly increasing for subject " + s.id);
      if (t > tau)
        throw std::invalid_argument("dataset: visit time beyond tau for subject " + s.id);
      prev = t;
    }
    for (int y : s.responses) {
      if (y < 1 || y > levels)
        throw std::invalid_argument("dataset: response outside 1..K for subject " + s.id);
    }
  }
}

ParamVector::ParamVector(ParamLayout layout, Eigen::VectorXd packed)
    : layout_(layout), packed_(std::move(packed)) {
  if (packed_.size() != layout_.dim())
    throw std::invalid_argument("ParamVector: packed length does not match layout");
}

ParamVector ParamVector::from_parts(const ParamLayout& layout,
                                    const Eigen::VectorXd& beta,
                                    const Eigen::VectorXd& alpha_tilde,
                                    std::span<const double> gamma) {
  if (beta.size() != layout.p || alpha_tilde.size() != layout.L)
    throw std::invalid_argument("ParamVector: part lengths do not match layout");
  if (static_cast<int>(gamma.size()) != layout.n_delta)
    throw std::invalid_argument("ParamVector: gamma length does not match layout");
  Eigen::VectorXd packed(layout.dim());
  packed.segment(layout.beta_offset(), layout.p) = beta;
  packed.segment(layout.alpha_offset(), layout.L) = alpha_tilde;
  if (layout.n_delta > 0)
    packed.segment(layout.delta_offset(), layout.n_delta) = delta_from_gamma(gamma);
  return ParamVector(layout, std::move(packed));
}

Eigen::VectorXd ParamVector::beta() const {
  return packed_.segment(layout_.beta_offset(), layout_.p);
}

Eigen::VectorXd ParamVector::alpha_tilde() const {
  return packed_.segment(layout_.alpha_offset(), layout_.L);
}

Eigen::VectorXd ParamVector::alpha() const {
  return alpha_tilde().array().square();
}

Eigen::VectorXd ParamVector::delta() const {
  return packed_.segment(layout_.delta_offset(), layout_.n_delta);
}

std::vector<double> ParamVector::gamma() const {
  return gamma_from_delta(delta());
}

std::vector<double> ParamVector::gamma_from_delta(const Eigen::VectorXd& delta) {
  std::vector<double> gamma(delta.size());
  double prev = 0.0;
  for (int k = 0; k < delta.size(); ++k) {
    prev = (k == 0 ? std::exp(delta[0]) : prev + std::exp(delta[k]));
    gamma[k] = prev;
  }
  return gamma;
}

Eigen::VectorXd ParamVector::delta_from_gamma(std::span<const double> gamma) {
  Eigen::VectorXd delta(gamma.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const double inc = gamma[k] - prev;
    if (!(inc > 0.0))
      throw std::invalid_argument("delta_from_gamma: gamma must be strictly increasing with gamma_1 > 0");
    delta[k] = std::log(inc);
    prev = gamma[k];
  }
  return delta;
}

}  // namespace opanel
