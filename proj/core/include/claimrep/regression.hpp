#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// Canonical predictor ids used in design matrices, models.json and surface
// exports: l_supt, s_ind, m_ind, k_ind, c, j, v. Product columns are named
// "a:b".

struct DesignMatrix {
  std::vector<std::string> columns;        // "intercept" first
  std::vector<std::vector<double>> rows;   // row-major, len == columns.size()
  std::vector<int> response;               // 0/1, one per row
  // Original (pre-rescale) min/max per non-intercept column.
  std::map<std::string, std::pair<double, double>> scaling;
  std::size_t dropped_rows = 0;            // rows lost to missing predictors

  std::size_t n() const { return rows.size(); }
  std::size_t p() const { return columns.size(); }
  std::size_t column_index(const std::string& name) const;  // throws if absent
};

// (x - min) / (max - min). Throws NumericalError naming the predictor when
// the column is constant.
std::vector<double> rescale_minmax(const std::vector<double>& values,
                                   const std::string& name);

struct Coefficient {
  std::string name;
  double b = 0.0;
  double se = 0.0;
  double odds_ratio = 1.0;  // exp(b)
  double ci_low = 0.0;      // exp(b -/+ 1.96 se)
  double ci_high = 0.0;
  double p = 1.0;           // two-sided Wald
};

struct FitResult {
  std::vector<Coefficient> coefficients;
  double log_likelihood = 0.0;
  bool converged = false;
  std::size_t n = 0;
  std::size_t iterations = 0;
  bool separation = false;
  std::string diagnostic;
  std::vector<std::vector<double>> covariance;   // inverse observed information
  std::vector<double> log_likelihood_trace;      // per accepted IRLS step
};

// Maximum likelihood by iteratively reweighted least squares (Newton-Raphson
// with step halving, so the log-likelihood never decreases). Convergence when
// the max coefficient update drops below tol. Separation is flagged when the
// iteration stalls with a coefficient beyond +-15. Throws NumericalError on a
// constant response, rank-deficient design or n <= p.
FitResult fit_logistic(const DesignMatrix& design, double tol = 1e-8,
                       std::size_t max_iter = 50);

// Log-likelihood and score at an arbitrary beta (exposed for verification).
double logistic_log_likelihood(const DesignMatrix& design,
                               const std::vector<double>& beta);
std::vector<double> logistic_score(const DesignMatrix& design,
                                   const std::vector<double>& beta);

struct Prediction {
  double p = 0.5;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

// logistic(beta . (1, x)); 95% bounds from the delta method on the linear
// scale. `x` excludes the intercept.
Prediction predicted_probability(const FitResult& fit,
                                 const std::vector<double>& x);

struct ModelSuite {
  std::vector<FitResult> single;             // one per predictor, design order
  FitResult simultaneous;
  FitResult interaction_support_centralization;  // l_supt * c, controlling v
  FitResult interaction_support_social;          // l_supt * s_ind, controlling v
};

// Requires the seven canonical predictors. Individual fit failures are
// recorded in the corresponding FitResult (converged=false, diagnostic) and
// the suite continues.
ModelSuite fit_model_suite(const DesignMatrix& design);

// VIF per non-intercept predictor: OLS of the column on the others,
// 1/(1-R^2); +inf on perfect collinearity.
std::map<std::string, double> variance_inflation(const DesignMatrix& design);

// One assembled claim-level observation, the unit of the regression stage.
struct ClaimRow {
  ClaimId claim;
  bool replicated = false;
  double l_supt = 0.0;
  double s_ind = 1.0;
  double m_ind = 1.0;
  double k_ind = 1.0;
  double centralization = 0.0;
  std::optional<double> journal;
  std::optional<double> variability;
  std::size_t supporting_findings = 0;
  std::size_t total_findings = 0;
  std::size_t reporting_papers = 0;
};

// Builds the rescaled design over rows with complete predictors; incomplete
// rows are dropped and counted. Throws NumericalError when no row survives.
DesignMatrix build_design(const std::vector<ClaimRow>& rows);

struct RobustnessDesigns {
  DesignMatrix drop_many_findings;  // claims with >= 10 supporting findings removed
  DesignMatrix drop_paper_pairs;    // claims reported by exactly 2 papers removed
  std::size_t removed_many_findings = 0;
  std::size_t removed_paper_pairs = 0;
};

// The two outlier-robustness reruns. Throws NumericalError when a filter
// empties the table.
RobustnessDesigns robustness_filters(const std::vector<ClaimRow>& rows);

}  // namespace claimrep
