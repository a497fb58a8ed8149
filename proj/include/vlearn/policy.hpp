#pragma once

#include <cmath>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "vlearn/rng.hpp"

namespace vlearn {

/// Randomized decision rule over a finite action set.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int action_count() const = 0;
  virtual Eigen::VectorXd action_probabilities(const Eigen::VectorXd& state) const = 0;
};

inline int sample_action(const Policy& policy, const Eigen::VectorXd& state, Rng& rng) {
  return rng.categorical(policy.action_probabilities(state));
}

/// Multinomial-logit policy with coefficient rows for actions 0..K-2 and
/// action K-1 as the reference. Logits are beta_j . (state, 1): the raw state
/// with an intercept appended.
class SoftmaxPolicy final : public Policy {
 public:
  SoftmaxPolicy(Eigen::MatrixXd beta, int action_count)
      : beta_(std::move(beta)), K_(action_count) {
    if (K_ < 2) throw std::invalid_argument("softmax policy: need at least 2 actions");
    if (beta_.rows() != K_ - 1) throw std::invalid_argument("softmax policy: beta needs K-1 rows");
    if (!beta_.allFinite()) throw std::invalid_argument("softmax policy: non-finite beta");
  }

  /// Uniform policy (beta = 0) over K actions, on states of dimension p.
  static SoftmaxPolicy uniform(int action_count, int state_dim) {
    return SoftmaxPolicy(Eigen::MatrixXd::Zero(action_count - 1, state_dim + 1), action_count);
  }

  int action_count() const override { return K_; }
  int feature_dim() const { return static_cast<int>(beta_.cols()); }
  const Eigen::MatrixXd& beta() const { return beta_; }

  Eigen::VectorXd action_probabilities(const Eigen::VectorXd& state) const override {
    if (state.size() + 1 != beta_.cols())
      throw std::invalid_argument("softmax policy: state dimension mismatch");
    Eigen::VectorXd z(K_);
    z.head(K_ - 1) = beta_.leftCols(state.size()) * state + beta_.col(state.size());
    z(K_ - 1) = 0.0;  // reference action
    const double m = z.maxCoeff();
    Eigen::VectorXd p = (z.array() - m).exp();
    p /= p.sum();
    return p;
  }

  void save(std::ostream& out) const {
    out << "K," << K_ << "\n"
        << "d," << beta_.cols() << "\n";
    for (int j = 0; j < beta_.rows(); ++j) {
      out << "beta";
      for (int c = 0; c < beta_.cols(); ++c) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",%.17g", beta_(j, c));
        out << buf;
      }
      out << "\n";
    }
  }

 private:
  Eigen::MatrixXd beta_;  // (K-1) x d, intercept weight last
  int K_;
};

/// Epsilon-greedy randomization of a deterministic rule: the greedy action
/// keeps probability 1 - eps, the others share eps equally.
inline Eigen::VectorXd epsilon_greedy_probs(int greedy_action, int action_count, double epsilon) {
  if (action_count < 2) throw std::invalid_argument("epsilon_greedy: need at least 2 actions");
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon_greedy: epsilon not in [0,1]");
  Eigen::VectorXd p =
      Eigen::VectorXd::Constant(action_count, epsilon / (action_count - 1));
  p(greedy_action) = 1.0 - epsilon;
  return p;
}

class EpsilonGreedyPolicy final : public Policy {
 public:
  EpsilonGreedyPolicy(std::function<int(const Eigen::VectorXd&)> greedy, int action_count,
                      double epsilon)
      : greedy_(std::move(greedy)), K_(action_count), eps_(epsilon) {}

  int action_count() const override { return K_; }
  double epsilon() const { return eps_; }

  Eigen::VectorXd action_probabilities(const Eigen::VectorXd& state) const override {
    return epsilon_greedy_probs(greedy_(state), K_, eps_);
  }

 private:
  std::function<int(const Eigen::VectorXd&)> greedy_;
  int K_;
  double eps_;
};

/// (1 - eps) * main + eps * fallback, still a probability vector.
class MixturePolicy final : public Policy {
 public:
  MixturePolicy(std::shared_ptr<const Policy> main, std::shared_ptr<const Policy> fallback,
                double epsilon)
      : main_(std::move(main)), fallback_(std::move(fallback)), eps_(epsilon) {
    if (eps_ < 0.0 || eps_ > 1.0) throw std::invalid_argument("mixture policy: epsilon not in [0,1]");
    if (main_->action_count() != fallback_->action_count())
      throw std::invalid_argument("mixture policy: action counts differ");
  }

  int action_count() const override { return main_->action_count(); }

  Eigen::VectorXd action_probabilities(const Eigen::VectorXd& state) const override {
    return (1.0 - eps_) * main_->action_probabilities(state) +
           eps_ * fallback_->action_probabilities(state);
  }

 private:
  std::shared_ptr<const Policy> main_, fallback_;
  double eps_;
};

/// State-independent probability table (behavior policies of randomized
/// trials, test stubs).
class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(Eigen::VectorXd probs) : probs_(std::move(probs)) {}
  int action_count() const override { return static_cast<int>(probs_.size()); }
  Eigen::VectorXd action_probabilities(const Eigen::VectorXd&) const override { return probs_; }

 private:
  Eigen::VectorXd probs_;
};

}  // namespace vlearn
