#pragma once

#include <stdexcept>

#include "vlearn/trajectory.hpp"

namespace vlearn {

/// Clinical penalty for the average glucose of one 60-minute interval
/// (mg/dL): -3 hypoglycemic, -2 hyperglycemic, -1 borderline, 0 normal.
inline int glycemic_weight(double glucose) {
  if (glucose <= 70.0) return -3;
  if (glucose <= 80.0) return -1;
  if (glucose <= 120.0) return 0;
  if (glucose <= 150.0) return -1;
  return -2;
}

/// Toy-model utility: reward both state components, charge for treating.
inline double toy_utility(const Eigen::VectorXd& next_state, int action) {
  return 2.0 * next_state(0) + next_state(1) - 0.25 * (2.0 * action - 1.0);
}

struct UtilitySpec {
  enum class Kind { simple_toy, glycemic, custom_column };
  Kind kind = Kind::custom_column;
  /// State component carrying the interval glucose (glycemic kind only).
  int glucose_index = 0;
};

/// Recomputes utilities[t] = u(states[t+1], actions[t], states[t]) for every
/// transition. Transitions after loss to follow-up get utility 0. The
/// custom_column kind keeps whatever the file provided.
inline Dataset compute_utilities(Dataset ds, const UtilitySpec& spec) {
  if (spec.kind == UtilitySpec::Kind::custom_column) return ds;
  if (spec.kind == UtilitySpec::Kind::glycemic && spec.glucose_index >= ds.state_dim)
    throw std::invalid_argument("utility spec: glucose component index out of range");
  for (auto& tr : ds.trajectories) {
    for (int t = 0; t < tr.transitions(); ++t) {
      if (!tr.active(t)) {
        tr.utilities[t] = 0.0;
        continue;
      }
      switch (spec.kind) {
        case UtilitySpec::Kind::simple_toy:
          tr.utilities[t] = toy_utility(tr.states[t + 1], tr.actions[t]);
          break;
        case UtilitySpec::Kind::glycemic:
          tr.utilities[t] = glycemic_weight(tr.states[t](spec.glucose_index)) +
                            glycemic_weight(tr.states[t + 1](spec.glucose_index));
          break;
        default:
          break;
      }
    }
  }
  return ds;
}

}  // namespace vlearn
