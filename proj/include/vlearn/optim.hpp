#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vlearn/rng.hpp"

namespace vlearn {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct AnnealOptions {
  int evals = 1000;
  double init_temp = 1.0;
  double final_temp = 1e-3;
  Eigen::VectorXd step;   // per-coordinate proposal sd (empty: all 1)
  Eigen::VectorXd lower;  // box constraints (empty: unbounded)
  Eigen::VectorXd upper;
  std::uint64_t seed = 1;
};

/// Simulated annealing for minimization: Gaussian proposals with geometric
/// cooling of the Metropolis temperature. Returns the best point visited.
inline Eigen::VectorXd simulated_annealing(const Objective& f, const Eigen::VectorXd& x0,
                                           const AnnealOptions& opt) {
  const int d = static_cast<int>(x0.size());
  Rng rng(opt.seed);
  Eigen::VectorXd step = opt.step.size() == d ? opt.step : Eigen::VectorXd::Ones(d);
  auto clamp = [&](Eigen::VectorXd x) {
    if (opt.lower.size() == d) x = x.cwiseMax(opt.lower);
    if (opt.upper.size() == d) x = x.cwiseMin(opt.upper);
    return x;
  };

  Eigen::VectorXd cur = clamp(x0), best = cur;
  double f_cur = f(cur), f_best = f_cur;
  if (!std::isfinite(f_cur)) f_cur = std::numeric_limits<double>::infinity();
  const double decay =
      opt.evals > 1 ? std::pow(opt.final_temp / opt.init_temp, 1.0 / (opt.evals - 1)) : 1.0;
  double temp = opt.init_temp;
  for (int k = 1; k < opt.evals; ++k, temp *= decay) {
    Eigen::VectorXd prop = cur;
    for (int i = 0; i < d; ++i) prop(i) += step(i) * rng.gauss();
    prop = clamp(prop);
    const double f_prop = f(prop);
    if (std::isfinite(f_prop)) {
      if (f_prop < f_best) {
        best = prop;
        f_best = f_prop;
      }
      if (f_prop <= f_cur || rng.uniform() < std::exp((f_cur - f_prop) / temp)) {
        cur = prop;
        f_cur = f_prop;
      }
    }
  }
  if (!std::isfinite(f_best)) throw std::runtime_error("simulated annealing: objective never finite");
  return best;
}

struct BfgsOptions {
  int max_iters = 200;
  double grad_tol = 1e-6;
  double fd_step = 1e-5;  // central-difference step
};

inline Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    xp(i) = xi + h;
    const double fp = f(xp);
    xp(i) = xi - h;
    const double fm = f(xp);
    xp(i) = xi;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// BFGS minimization with central finite-difference gradients and Armijo
/// backtracking. Non-finite trial points are treated as +inf.
inline Eigen::VectorXd bfgs_minimize(const Objective& f_raw, const Eigen::VectorXd& x0,
                                     const BfgsOptions& opt = {}) {
  auto f = [&](const Eigen::VectorXd& x) {
    const double v = f_raw(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  const int d = static_cast<int>(x0.size());
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd x = x0;
  double fx = f(x);
  Eigen::VectorXd g = fd_gradient(f, x, opt.fd_step);

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    if (g.norm() <= opt.grad_tol) break;
    Eigen::VectorXd dir = -Hinv * g;
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // bad curvature estimate; restart from steepest descent
      Hinv.setIdentity();
      dir = -g;
      slope = g.dot(dir);
    }
    double alpha = 1.0;
    double f_new = fx;
    Eigen::VectorXd x_new = x;
    bool ok = false;
    for (int bt = 0; bt < 40; ++bt) {
      x_new = x + alpha * dir;
      f_new = f(x_new);
      if (f_new <= fx + 1e-4 * alpha * slope) {
        ok = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!ok) break;

    Eigen::VectorXd g_new = fd_gradient(f, x_new, opt.fd_step);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    if (s.norm() <= 1e-12 * (1.0 + x.norm())) {
      x = x_new;
      break;
    }
    x = x_new;
    fx = f_new;
    g = g_new;
  }
  return x;
}

struct NelderMeadOptions {
  int max_evals = 2000;
  double ftol = 1e-12;
  Eigen::VectorXd init_step;  // per-coordinate simplex offsets (empty: 0.5)
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

/// Standard Nelder-Mead simplex search (reflect 1, expand 2, contract 0.5,
/// shrink 0.5).
inline NelderMeadResult nelder_mead(const Objective& f_raw, const Eigen::VectorXd& x0,
                                    const NelderMeadOptions& opt = {}) {
  int evals = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f_raw(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  const int d = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (int i = 0; i < d; ++i)
    xs[i + 1](i) += opt.init_step.size() == d ? opt.init_step(i) : 0.5;
  for (int i = 0; i <= d; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(d + 1);
  while (evals < opt.max_evals) {
    for (int i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int lo = order[0], hi = order[d], next_hi = order[d - 1];
    if (fs[hi] - fs[lo] <= opt.ftol * (1.0 + std::abs(fs[lo]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i)
      if (i != hi) centroid += xs[i];
    centroid /= d;

    Eigen::VectorXd xr = centroid + (centroid - xs[hi]);
    const double fr = f(xr);
    if (fr < fs[lo]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[hi]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[hi] = xe;
        fs[hi] = fe;
      } else {
        xs[hi] = xr;
        fs[hi] = fr;
      }
    } else if (fr < fs[next_hi]) {
      xs[hi] = xr;
      fs[hi] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (xs[hi] - centroid);
      const double fc = f(xc);
      if (fc < fs[hi]) {
        xs[hi] = xc;
        fs[hi] = fc;
      } else {
        for (int i = 0; i <= d; ++i) {
          if (i == lo) continue;
          xs[i] = xs[lo] + 0.5 * (xs[i] - xs[lo]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= d; ++i)
    if (fs[i] < fs[best]) best = i;
  return {xs[best], fs[best], evals};
}

}  // namespace vlearn
