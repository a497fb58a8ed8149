#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlearn/trajectory.hpp"

namespace vlearn {

/// Behavior-policy probabilities mu(a; s): either a known randomization table
/// or a multinomial logistic fit. Evaluated probabilities are floored at c0
/// so importance weights stay bounded.
class PropensityModel {
 public:
  enum class Kind { known, logistic };

  static PropensityModel known(Eigen::VectorXd probs, double floor = 0.01) {
    PropensityModel m;
    m.kind_ = Kind::known;
    m.table_ = std::move(probs);
    m.floor_ = floor;
    return m;
  }

  static PropensityModel logistic(Eigen::MatrixXd coef, int action_count, double floor = 0.01) {
    PropensityModel m;
    m.kind_ = Kind::logistic;
    m.coef_ = std::move(coef);
    m.K_ = action_count;
    m.floor_ = floor;
    return m;
  }

  Kind kind() const { return kind_; }
  double floor() const { return floor_; }
  const Eigen::MatrixXd& coefficients() const { return coef_; }
  int action_count() const {
    return kind_ == Kind::known ? static_cast<int>(table_.size()) : K_;
  }

  /// Unfloored probabilities; always a simplex vector.
  Eigen::VectorXd probabilities(const Eigen::VectorXd& state) const {
    if (kind_ == Kind::known) return table_;
    Eigen::VectorXd z(K_);
    z.head(K_ - 1) = coef_.leftCols(state.size()) * state + coef_.col(state.size());
    z(K_ - 1) = 0.0;
    const double m = z.maxCoeff();
    Eigen::VectorXd p = (z.array() - m).exp();
    p /= p.sum();
    return p;
  }

  /// mu(a; s) floored at c0.
  double operator()(int action, const Eigen::VectorXd& state) const {
    const double p = kind_ == Kind::known ? table_(action) : probabilities(state)(action);
    return p < floor_ ? floor_ : p;
  }

  std::vector<std::string> warnings;

 private:
  Kind kind_ = Kind::known;
  Eigen::VectorXd table_;
  Eigen::MatrixXd coef_;  // (K-1) x (p+1), intercept last, reference = K-1
  int K_ = 0;
  double floor_ = 0.01;
};

namespace detail {

struct LogisticFit {
  Eigen::MatrixXd coef;
  double loglik = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// Newton-Raphson with step halving; `ridge` > 0 adds an L2 penalty on the
/// coefficients, which keeps separated data well-posed.
inline LogisticFit fit_multinomial_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                            int K, double ridge, int max_iters = 100,
                                            double tol = 1e-8) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const int m = (K - 1) * d;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(K - 1, d);
  auto loglik = [&](const Eigen::MatrixXd& beta) {
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(K);
      z.head(K - 1) = beta * X.row(i).transpose();
      const double zmax = z.maxCoeff();
      const double lse = zmax + std::log((z.array() - zmax).exp().sum());
      ll += z(y(i)) - lse;
    }
    return ll - 0.5 * ridge * beta.squaredNorm();
  };

  LogisticFit fit;
  double ll = loglik(B);
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(K);
      z.head(K - 1) = B * X.row(i).transpose();
      const double zmax = z.maxCoeff();
      Eigen::VectorXd p = (z.array() - zmax).exp();
      p /= p.sum();
      for (int j = 0; j < K - 1; ++j) {
        const double rj = (y(i) == j ? 1.0 : 0.0) - p(j);
        g.segment(j * d, d) += rj * X.row(i).transpose();
        for (int k = 0; k < K - 1; ++k) {
          const double w = p(j) * ((j == k ? 1.0 : 0.0) - p(k));
          H.block(j * d, k * d, d, d) -= w * X.row(i).transpose() * X.row(i);
        }
      }
    }
    for (int j = 0; j < K - 1; ++j) g.segment(j * d, d) -= ridge * B.row(j).transpose();
    H.diagonal().array() -= ridge;

    fit.grad_norm = g.norm() / n;
    if (fit.grad_norm <= tol) {
      fit.converged = true;
      break;
    }
    Eigen::VectorXd step = (-H).ldlt().solve(g);
    if (!step.allFinite()) break;

    // backtrack until the (penalized) log-likelihood does not decrease
    double scale = 1.0;
    Eigen::MatrixXd Bnew;
    double ll_new = 0.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      Bnew = B;
      for (int j = 0; j < K - 1; ++j) Bnew.row(j) += scale * step.segment(j * d, d).transpose();
      ll_new = loglik(Bnew);
      if (std::isfinite(ll_new) && ll_new >= ll - 1e-12) {
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
    B = Bnew;
    ll = ll_new;
  }
  fit.coef = B;
  fit.loglik = ll;
  return fit;
}

}  // namespace detail

/// Maximum-likelihood multinomial logistic regression of action on state
/// (intercept appended). Complete separation falls back to a ridge-stabilized
/// fit (penalty 1e-4) with a warning on the returned model.
inline PropensityModel fit_logistic_propensity(const Dataset& ds, double floor = 0.01) {
  const int K = ds.action_count;
  if (K < 2) throw std::invalid_argument("fit_logistic_propensity: need at least 2 actions");
  const int N = ds.total_transitions();
  const int d = ds.state_dim + 1;
  Eigen::MatrixXd X(N, d);
  Eigen::VectorXi y(N);
  int r = 0;
  std::vector<bool> seen(K, false);
  for (const auto& tr : ds.trajectories)
    for (int t = 0; t < tr.transitions(); ++t) {
      X.row(r).head(ds.state_dim) = tr.states[t].transpose();
      X(r, d - 1) = 1.0;
      y(r) = tr.actions[t];
      seen[tr.actions[t]] = true;
      ++r;
    }
  int distinct = 0;
  for (bool s : seen) distinct += s;
  if (distinct < 2)
    throw std::invalid_argument("fit_logistic_propensity: need at least 2 distinct observed actions");

  auto fit = detail::fit_multinomial_logistic(X, y, K, /*ridge=*/0.0);
  const bool separated = !fit.converged || fit.coef.cwiseAbs().maxCoeff() > 30.0;
  auto model = PropensityModel::logistic(fit.coef, K, floor);
  if (separated) {
    fit = detail::fit_multinomial_logistic(X, y, K, /*ridge=*/1e-4);
    model = PropensityModel::logistic(fit.coef, K, floor);
    model.warnings.push_back("logistic propensity: apparent separation; used ridge 1e-4");
  }
  return model;
}

}  // namespace vlearn
