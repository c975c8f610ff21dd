#include "claimrep/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "claimrep/stats.hpp"

namespace claimrep {

namespace {

constexpr double kSeparationBound = 15.0;

Eigen::MatrixXd to_matrix(const DesignMatrix& d) {
  Eigen::MatrixXd X(d.n(), d.p());
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t j = 0; j < d.p(); ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.rows[i][j];
    }
  }
  return X;
}

// sum y*eta - log(1 + exp(eta)), with the softplus evaluated stably.
double log_likelihood_eta(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta(i);
    const double softplus = e > 0.0 ? e + std::log1p(std::exp(-e))
                                    : std::log1p(std::exp(e));
    ll += y(i) * e - softplus;
  }
  return ll;
}

}  // namespace

std::size_t DesignMatrix::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw NumericalError("design matrix has no column '" + name + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> rescale_minmax(const std::vector<double>& values,
                                   const std::string& name) {
  if (values.empty()) throw NumericalError("empty predictor column '" + name + "'");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!(*mx > *mn)) {
    throw NumericalError("constant predictor '" + name + "' cannot be rescaled");
  }
  std::vector<double> out(values.size());
  const double range = *mx - *mn;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - *mn) / range;
  }
  return out;
}

double logistic_log_likelihood(const DesignMatrix& design,
                               const std::vector<double>& beta) {
  const Eigen::MatrixXd X = to_matrix(design);
  Eigen::VectorXd b(static_cast<Eigen::Index>(beta.size()));
  for (std::size_t j = 0; j < beta.size(); ++j) b(static_cast<Eigen::Index>(j)) = beta[j];
  Eigen::VectorXd y(static_cast<Eigen::Index>(design.n()));
  for (std::size_t i = 0; i < design.n(); ++i) {
    y(static_cast<Eigen::Index>(i)) = design.response[i];
  }
  return log_likelihood_eta(X * b, y);
}

std::vector<double> logistic_score(const DesignMatrix& design,
                                   const std::vector<double>& beta) {
  const Eigen::MatrixXd X = to_matrix(design);
  Eigen::VectorXd b(static_cast<Eigen::Index>(beta.size()));
  for (std::size_t j = 0; j < beta.size(); ++j) b(static_cast<Eigen::Index>(j)) = beta[j];
  const Eigen::VectorXd eta = X * b;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double mu = 1.0 / (1.0 + std::exp(-eta(i)));
    resid(i) = design.response[static_cast<std::size_t>(i)] - mu;
  }
  const Eigen::VectorXd g = X.transpose() * resid;
  return std::vector<double>(g.data(), g.data() + g.size());
}

FitResult fit_logistic(const DesignMatrix& design, double tol,
                       std::size_t max_iter) {
  const std::size_t n = design.n();
  const std::size_t p = design.p();
  if (n == 0 || p == 0) throw NumericalError("empty design matrix");
  if (n <= p) throw NumericalError("need more rows than columns");
  const int first = design.response.front();
  if (std::all_of(design.response.begin(), design.response.end(),
                  [&](int y) { return y == first; })) {
    throw NumericalError("constant response");
  }

  const Eigen::MatrixXd X = to_matrix(design);
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < p) {
      throw NumericalError("rank-deficient design matrix");
    }
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = design.response[i];

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  Eigen::VectorXd eta = X * beta;
  double ll = log_likelihood_eta(eta, y);

  FitResult fit;
  fit.n = n;
  fit.log_likelihood_trace.push_back(ll);

  bool converged = false;
  std::size_t iter = 0;
  Eigen::MatrixXd info(p, p);
  for (; iter < max_iter; ++iter) {
    Eigen::VectorXd mu(eta.size()), w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double m = 1.0 / (1.0 + std::exp(-eta(i)));
      mu(i) = m;
      w(i) = std::max(m * (1.0 - m), 1e-12);
    }
    const Eigen::VectorXd score = X.transpose() * (y - mu);
    info = X.transpose() * w.asDiagonal() * X;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("information matrix is not positive definite");
    }
    const Eigen::VectorXd delta = ldlt.solve(score);

    // Newton step with halving: never accept a likelihood decrease.
    double step = 1.0;
    double new_ll = ll;
    Eigen::VectorXd candidate = beta;
    bool improved = false;
    for (int h = 0; h < 30; ++h) {
      candidate = beta + step * delta;
      const Eigen::VectorXd cand_eta = X * candidate;
      new_ll = log_likelihood_eta(cand_eta, y);
      if (new_ll >= ll - 1e-12) {
        improved = true;
        eta = cand_eta;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // stalled

    const double max_update = (step * delta).cwiseAbs().maxCoeff();
    beta = candidate;
    ll = new_ll;
    fit.log_likelihood_trace.push_back(ll);
    if (max_update < tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  fit.converged = converged;
  fit.iterations = iter;
  fit.log_likelihood = ll;
  if (!converged && beta.cwiseAbs().maxCoeff() > kSeparationBound) {
    fit.separation = true;
    fit.diagnostic = "possible separation: |coefficient| exceeds 15 without convergence";
  } else if (!converged) {
    fit.diagnostic = "IRLS did not converge within max_iter";
  }

  // Covariance from the observed information at the final beta.
  {
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double m = 1.0 / (1.0 + std::exp(-eta(i)));
      w(i) = std::max(m * (1.0 - m), 1e-12);
    }
    info = X.transpose() * w.asDiagonal() * X;
    const Eigen::MatrixXd cov = info.ldlt().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                  static_cast<Eigen::Index>(p)));
    fit.covariance.assign(p, std::vector<double>(p));
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        fit.covariance[i][j] =
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }

  fit.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    Coefficient& c = fit.coefficients[j];
    c.name = design.columns[j];
    c.b = beta(static_cast<Eigen::Index>(j));
    c.se = std::sqrt(std::max(fit.covariance[j][j], 0.0));
    c.odds_ratio = std::exp(c.b);
    c.ci_low = std::exp(c.b - 1.96 * c.se);
    c.ci_high = std::exp(c.b + 1.96 * c.se);
    c.p = c.se > 0.0 ? wald_p_value(c.b / c.se) : 1.0;
  }
  return fit;
}

Prediction predicted_probability(const FitResult& fit,
                                 const std::vector<double>& x) {
  const std::size_t p = fit.coefficients.size();
  if (x.size() + 1 != p) {
    throw NumericalError("predictor vector does not match fitted coefficients");
  }
  double eta = fit.coefficients[0].b;
  for (std::size_t j = 0; j < x.size(); ++j) {
    eta += fit.coefficients[j + 1].b * x[j];
  }
  // Delta method on the linear scale: var(eta) = x' Cov x with x0 = 1.
  double var_eta = 0.0;
  if (fit.covariance.size() == p) {
    std::vector<double> xv(p, 1.0);
    for (std::size_t j = 0; j < x.size(); ++j) xv[j + 1] = x[j];
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        var_eta += xv[i] * fit.covariance[i][j] * xv[j];
      }
    }
    var_eta = std::max(var_eta, 0.0);
  }
  const double se_eta = std::sqrt(var_eta);
  auto logistic = [](double e) { return 1.0 / (1.0 + std::exp(-e)); };
  Prediction pred;
  pred.p = logistic(eta);
  pred.ci_low = logistic(eta - 1.96 * se_eta);
  pred.ci_high = logistic(eta + 1.96 * se_eta);
  return pred;
}

namespace {

DesignMatrix subset_design(const DesignMatrix& full,
                           const std::vector<std::string>& predictors,
                           const std::vector<std::pair<std::string, std::string>>&
                               products = {}) {
  DesignMatrix d;
  d.columns.push_back("intercept");
  for (const auto& name : predictors) d.columns.push_back(name);
  for (const auto& [a, b] : products) d.columns.push_back(a + ":" + b);
  d.response = full.response;
  d.scaling = full.scaling;
  d.rows.reserve(full.n());
  std::vector<std::size_t> idx;
  for (const auto& name : predictors) idx.push_back(full.column_index(name));
  std::vector<std::pair<std::size_t, std::size_t>> prod_idx;
  for (const auto& [a, b] : products) {
    prod_idx.emplace_back(full.column_index(a), full.column_index(b));
  }
  for (const auto& row : full.rows) {
    std::vector<double> r;
    r.reserve(d.columns.size());
    r.push_back(1.0);
    for (std::size_t j : idx) r.push_back(row[j]);
    for (const auto& [ia, ib] : prod_idx) r.push_back(row[ia] * row[ib]);
    d.rows.push_back(std::move(r));
  }
  return d;
}

FitResult fit_or_diagnose(const DesignMatrix& d) {
  try {
    return fit_logistic(d);
  } catch (const NumericalError& e) {
    FitResult failed;
    failed.converged = false;
    failed.n = d.n();
    failed.diagnostic = e.what();
    for (const auto& name : d.columns) {
      Coefficient c;
      c.name = name;
      failed.coefficients.push_back(std::move(c));
    }
    return failed;
  }
}

}  // namespace

ModelSuite fit_model_suite(const DesignMatrix& design) {
  static const std::vector<std::string> kPredictors = {
      "l_supt", "s_ind", "m_ind", "k_ind", "c", "j", "v"};
  for (const auto& name : kPredictors) design.column_index(name);  // must exist

  ModelSuite suite;
  for (const auto& name : kPredictors) {
    suite.single.push_back(fit_or_diagnose(subset_design(design, {name})));
  }
  suite.simultaneous = fit_or_diagnose(subset_design(design, kPredictors));
  suite.interaction_support_centralization = fit_or_diagnose(
      subset_design(design, {"l_supt", "c", "v"}, {{"l_supt", "c"}}));
  suite.interaction_support_social = fit_or_diagnose(
      subset_design(design, {"l_supt", "s_ind", "v"}, {{"l_supt", "s_ind"}}));
  return suite;
}

std::map<std::string, double> variance_inflation(const DesignMatrix& design) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < design.p(); ++j) {
    if (design.columns[j] != "intercept") cols.push_back(j);
  }
  if (cols.size() < 2) {
    throw NumericalError("VIF needs at least two non-intercept predictors");
  }
  if (design.n() <= design.p()) throw NumericalError("need more rows than columns");

  const Eigen::MatrixXd X = to_matrix(design);
  std::map<std::string, double> vif;
  for (std::size_t target : cols) {
    Eigen::MatrixXd Z(X.rows(), static_cast<Eigen::Index>(cols.size()));  // others + 1
    Eigen::Index zj = 0;
    Z.col(zj++).setOnes();
    for (std::size_t other : cols) {
      if (other == target) continue;
      Z.col(zj++) = X.col(static_cast<Eigen::Index>(other));
    }
    const Eigen::VectorXd t = X.col(static_cast<Eigen::Index>(target));
    const Eigen::VectorXd coef = Z.colPivHouseholderQr().solve(t);
    const double ss_res = (t - Z * coef).squaredNorm();
    const double meant = t.mean();
    const double ss_tot = (t.array() - meant).matrix().squaredNorm();
    double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    r2 = std::clamp(r2, 0.0, 1.0);
    vif[design.columns[target]] =
        r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity()
                          : 1.0 / (1.0 - r2);
  }
  return vif;
}

DesignMatrix build_design(const std::vector<ClaimRow>& rows) {
  static const std::vector<std::string> kPredictors = {
      "l_supt", "s_ind", "m_ind", "k_ind", "c", "j", "v"};
  std::vector<const ClaimRow*> complete;
  std::size_t dropped = 0;
  for (const auto& row : rows) {
    if (row.journal && row.variability) {
      complete.push_back(&row);
    } else {
      ++dropped;
    }
  }
  if (complete.empty()) {
    throw NumericalError("no rows with complete predictors");
  }

  std::map<std::string, std::vector<double>> raw;
  for (const auto* r : complete) {
    raw["l_supt"].push_back(r->l_supt);
    raw["s_ind"].push_back(r->s_ind);
    raw["m_ind"].push_back(r->m_ind);
    raw["k_ind"].push_back(r->k_ind);
    raw["c"].push_back(r->centralization);
    raw["j"].push_back(*r->journal);
    raw["v"].push_back(*r->variability);
  }

  DesignMatrix d;
  d.columns.push_back("intercept");
  d.dropped_rows = dropped;
  std::map<std::string, std::vector<double>> scaled;
  for (const auto& name : kPredictors) {
    d.columns.push_back(name);
    const auto& col = raw.at(name);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    d.scaling[name] = {*mn, *mx};
    scaled[name] = rescale_minmax(col, name);
  }
  d.rows.resize(complete.size());
  d.response.resize(complete.size());
  for (std::size_t i = 0; i < complete.size(); ++i) {
    d.rows[i].push_back(1.0);
    for (const auto& name : kPredictors) d.rows[i].push_back(scaled.at(name)[i]);
    d.response[i] = complete[i]->replicated ? 1 : 0;
  }
  return d;
}

RobustnessDesigns robustness_filters(const std::vector<ClaimRow>& rows) {
  RobustnessDesigns out;
  std::vector<ClaimRow> few_findings, not_pair;
  for (const auto& row : rows) {
    if (row.supporting_findings >= 10) {
      ++out.removed_many_findings;
    } else {
      few_findings.push_back(row);
    }
    if (row.reporting_papers == 2) {
      ++out.removed_paper_pairs;
    } else {
      not_pair.push_back(row);
    }
  }
  if (few_findings.empty()) {
    throw NumericalError("outlier filter (>= 10 findings) removed every claim");
  }
  if (not_pair.empty()) {
    throw NumericalError("paper-pair filter removed every claim");
  }
  out.drop_many_findings = build_design(few_findings);
  out.drop_paper_pairs = build_design(not_pair);
  return out;
}

}  // namespace claimrep
