#pragma once

#include <optional>

#include <Eigen/Core>

#include "opanel/data.hpp"
#include "opanel/poisson.hpp"
#include "opanel/spline.hpp"

namespace opanel {

enum class CutpointMode { known, estimated };

struct ModelOptions {
  ContinuousShift shift = ContinuousShift::shifted;
  double prob_floor = kProbFloor;
};

// Log-likelihood of the proportional-intensity NHPP for ordinal panel counts.
//
// Interval means are mu_ij = [Lambda_0(T_ij) - Lambda_0(T_i,j-1)] exp(beta'x)
// with Lambda_0 an I-spline expansion; level probabilities are CDF
// differences between consecutive cut points. In `known` mode the cut points
// are fixed integers and the exact Poisson CDF applies; in `estimated` mode
// the cut points come from the packed delta block and the continuous CDF
// extension makes the objective smooth in them (the pseudo-log-likelihood).
//
// Basis increments are precomputed at construction; evaluation is read-only
// and may run concurrently. The per-subject sum runs in a fixed order.
class OrdinalPanelModel {
 public:
  OrdinalPanelModel(const PanelDataset& data, const KnotVector& knots,
                    CutpointMode mode,
                    std::optional<CutPoints> known_cutpoints,
                    ModelOptions options = {});

  CutpointMode mode() const { return mode_; }
  const ParamLayout& layout() const { return layout_; }
  const ModelOptions& options() const { return options_; }
  const KnotVector& knots() const { return knots_; }
  int subject_count() const { return static_cast<int>(subject_offset_.size()); }
  int visit_count() const { return static_cast<int>(y_.size()); }

  double loglik(const Eigen::VectorXd& packed) const;
  double loglik(const ParamVector& theta) const { return loglik(theta.packed()); }

  // Analytic partials for beta and alpha_tilde (chain rule through the CDF
  // derivative in lambda); central finite differences for the delta block.
  // Returns the log-likelihood value.
  double loglik_and_gradient(const Eigen::VectorXd& packed,
                             Eigen::VectorXd& grad) const;

  // Per-subject log-likelihood contributions; sums to loglik. Used by the
  // sandwich covariance scores.
  Eigen::VectorXd subject_logliks(const Eigen::VectorXd& packed) const;

  // mu_ij for a 0-based subject and visit index.
  double interval_mean(const ParamVector& theta, int subject, int visit) const;

  // Cut points in effect at theta: the fixed ones in known mode, the
  // delta-mapped ones otherwise.
  CutPoints cutpoints_at(const ParamVector& theta) const;

 private:
  struct LevelCdf {
    double a_lo = 0.0;  // gamma-q shape for the lower cut (<= 0 means CDF 0)
    double a_hi = 0.0;  // +inf means CDF 1
    double lg_lo = 0.0;
    double lg_hi = 0.0;
  };

  std::vector<LevelCdf> level_table(const std::vector<double>& gamma) const;
  Eigen::VectorXd interval_means(const Eigen::VectorXd& packed) const;
  double loglik_from_means(const Eigen::VectorXd& mus,
                           const std::vector<LevelCdf>& table) const;

  ParamLayout layout_;
  KnotVector knots_;
  CutpointMode mode_;
  std::optional<CutPoints> fixed_cuts_;
  ModelOptions options_;
  int levels_ = 0;

  Eigen::MatrixXd covariates_;          // p x n
  std::vector<int> subject_offset_;     // first visit index per subject
  std::vector<int> subject_visits_;     // visit count per subject
  Eigen::MatrixXd basis_increment_;     // L x total visits
  std::vector<int> y_;                  // response per visit
};

}  // namespace opanel
