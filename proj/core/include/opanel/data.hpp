#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace opanel {

// One subject: time-independent covariates, strictly increasing visit times
// in (0, tau], and an ordinal response in 1..K at every visit.
struct Subject {
  std::string id;
  Eigen::VectorXd covariates;
  std::vector<double> visit_times;
  std::vector<int> responses;

  int visit_count() const { return static_cast<int>(visit_times.size()); }
};

struct PanelDataset {
  std::vector<Subject> subjects;
  std::vector<std::string> covariate_names;
  int covariate_dim = 0;  // p
  int levels = 0;         // K
  double tau = 0.0;

  int subject_count() const { return static_cast<int>(subjects.size()); }
  int total_visits() const;
  std::vector<double> pooled_visit_times() const;

  // Checks the invariants: consistent dimensions, m_i >= 1, visits strictly
  // increasing inside (0, tau], responses within 1..K.
  void validate() const;
};

// Packed unconstrained parameters: [beta (p), alpha_tilde (L), delta (K-1)].
// The delta block is present only when cut points are estimated. Unpacking
// maps alpha_i = alpha_tilde_i^2 and gamma_1 = exp(delta_1),
// gamma_k = gamma_{k-1} + exp(delta_k), so alpha >= 0 and gamma is strictly
// increasing with gamma_1 > 0 by construction.
struct ParamLayout {
  int p = 0;
  int L = 0;
  int n_delta = 0;

  int dim() const { return p + L + n_delta; }
  int beta_offset() const { return 0; }
  int alpha_offset() const { return p; }
  int delta_offset() const { return p + L; }
};

class ParamVector {
 public:
  ParamVector(ParamLayout layout, Eigen::VectorXd packed);

  static ParamVector from_parts(const ParamLayout& layout,
                                const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& alpha_tilde,
                                std::span<const double> gamma = {});

  const ParamLayout& layout() const { return layout_; }
  const Eigen::VectorXd& packed() const { return packed_; }

  Eigen::VectorXd beta() const;
  Eigen::VectorXd alpha_tilde() const;
  Eigen::VectorXd alpha() const;  // elementwise square of alpha_tilde
  Eigen::VectorXd delta() const;
  std::vector<double> gamma() const;

  static std::vector<double> gamma_from_delta(const Eigen::VectorXd& delta);
  static Eigen::VectorXd delta_from_gamma(std::span<const double> gamma);

 private:
  ParamLayout layout_;
  Eigen::VectorXd packed_;
};

}  // namespace opanel
