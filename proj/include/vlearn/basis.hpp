#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlearn/trajectory.hpp"

namespace vlearn {

enum class BasisKind { linear, polynomial2, gaussian_rbf, tabular };

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::linear: return "linear";
    case BasisKind::polynomial2: return "poly";
    case BasisKind::gaussian_rbf: return "gaussian";
    case BasisKind::tabular: return "tabular";
  }
  return "?";
}

/// State -> feature vector for the working value model. Every kind emits an
/// intercept as feature 0. Inputs are min-max scaled with the ranges seen at
/// fit time and clamped to [0, 1], so features stay bounded on states a
/// rollout visits outside the training range.
class FeatureMap {
 public:
  static constexpr double kRbfWidth = 0.25;
  static constexpr int kRbfCenters = 5;  // 0, 0.25, 0.5, 0.75, 1

  BasisKind kind = BasisKind::linear;
  int state_dim = 0;
  bool identity_scaling = false;  // skip scaling/clamping (known-range inputs)
  Eigen::VectorXd min, max;
  std::vector<Eigen::VectorXd> table;  // tabular: the enumerated states
  std::vector<std::string> warnings;

  int dim() const {
    switch (kind) {
      case BasisKind::linear: return 1 + state_dim;
      case BasisKind::polynomial2:
        return 1 + 2 * state_dim + state_dim * (state_dim - 1) / 2;
      case BasisKind::gaussian_rbf: return 1 + kRbfCenters * state_dim;
      case BasisKind::tabular: return 1 + static_cast<int>(table.size());
    }
    return 0;
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& state) const {
    if (state.size() != state_dim)
      throw std::invalid_argument("feature map: state dimension mismatch");
    Eigen::VectorXd f = Eigen::VectorXd::Zero(dim());
    f(0) = 1.0;
    if (kind == BasisKind::tabular) {
      for (size_t i = 0; i < table.size(); ++i)
        if (table[i] == state) {
          f(1 + static_cast<int>(i)) = 1.0;
          break;
        }
      return f;
    }
    const Eigen::VectorXd x = scaled(state);
    switch (kind) {
      case BasisKind::linear:
        f.tail(state_dim) = x;
        break;
      case BasisKind::polynomial2: {
        int k = 1;
        for (int i = 0; i < state_dim; ++i) f(k++) = x(i);
        for (int i = 0; i < state_dim; ++i) f(k++) = x(i) * x(i);
        for (int i = 0; i < state_dim; ++i)
          for (int j = i + 1; j < state_dim; ++j) f(k++) = x(i) * x(j);
        break;
      }
      case BasisKind::gaussian_rbf: {
        int k = 1;
        for (int i = 0; i < state_dim; ++i)
          for (int c = 0; c < kRbfCenters; ++c) {
            const double d = x(i) - 0.25 * c;
            f(k++) = std::exp(-d * d / (2.0 * kRbfWidth * kRbfWidth));
          }
        break;
      }
      default:
        break;
    }
    return f;
  }

 private:
  Eigen::VectorXd scaled(const Eigen::VectorXd& state) const {
    if (identity_scaling) return state;
    Eigen::VectorXd x(state_dim);
    for (int i = 0; i < state_dim; ++i) {
      if (max(i) == min(i)) {
        x(i) = 0.5;
      } else {
        const double v = (state(i) - min(i)) / (max(i) - min(i));
        x(i) = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
      }
    }
    return x;
  }
};

/// Fits per-component min-max scaling over every observed state; the tabular
/// kind instead enumerates the distinct states (small discrete spaces only).
inline FeatureMap fit_feature_map(BasisKind kind, const Dataset& ds) {
  if (ds.trajectories.empty()) throw std::invalid_argument("fit_feature_map: empty dataset");
  FeatureMap fm;
  fm.kind = kind;
  fm.state_dim = ds.state_dim;

  if (kind == BasisKind::tabular) {
    constexpr int kMaxTabularStates = 256;
    std::map<std::vector<double>, int> seen;
    for (const auto& tr : ds.trajectories)
      for (const auto& s : tr.states) {
        std::vector<double> key(s.data(), s.data() + s.size());
        if (seen.emplace(std::move(key), 0).second) {
          fm.table.push_back(s);
          if (static_cast<int>(fm.table.size()) > kMaxTabularStates)
            throw std::invalid_argument(
                "tabular basis: too many distinct states; use it only on small discrete spaces");
        }
      }
    return fm;
  }

  fm.min = Eigen::VectorXd::Constant(ds.state_dim, std::numeric_limits<double>::infinity());
  fm.max = Eigen::VectorXd::Constant(ds.state_dim, -std::numeric_limits<double>::infinity());
  for (const auto& tr : ds.trajectories)
    for (const auto& s : tr.states) {
      fm.min = fm.min.cwiseMin(s);
      fm.max = fm.max.cwiseMax(s);
    }
  for (int i = 0; i < ds.state_dim; ++i)
    if (fm.min(i) == fm.max(i))
      fm.warnings.push_back("state component " + std::to_string(i + 1) +
                            " is constant; it maps to 0.5");
  return fm;
}

/// Map with scaling disabled, for inputs already on a sensible range.
inline FeatureMap identity_feature_map(BasisKind kind, int state_dim) {
  FeatureMap fm;
  fm.kind = kind;
  fm.state_dim = state_dim;
  fm.identity_scaling = true;
  return fm;
}

}  // namespace vlearn
