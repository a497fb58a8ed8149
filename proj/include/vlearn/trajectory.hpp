#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vlearn {

/// One patient's logged sequence: T transitions need T+1 states. The
/// follow-up flags run parallel to the states; once a flag is false every
/// later one must be false as well.
struct Trajectory {
  std::string patient_id;
  std::vector<Eigen::VectorXd> states;
  std::vector<int> actions;
  std::vector<double> utilities;
  std::vector<bool> followup;

  int transitions() const { return static_cast<int>(actions.size()); }

  /// Transition t is usable only while the patient is observed on both ends.
  bool active(int t) const { return followup[t] && followup[t + 1]; }
};

struct Dataset {
  std::vector<Trajectory> trajectories;
  int action_count = 0;
  int state_dim = 0;

  int total_transitions() const {
    int n = 0;
    for (const auto& tr : trajectories) n += tr.transitions();
    return n;
  }

  /// Throws std::invalid_argument on any broken structural invariant.
  void validate() const {
    if (action_count < 1) throw std::invalid_argument("dataset: action_count must be positive");
    if (total_transitions() < 1) throw std::invalid_argument("dataset: no transitions");
    for (const auto& tr : trajectories) {
      const auto T = tr.actions.size();
      if (tr.states.size() != T + 1 || tr.utilities.size() != T || tr.followup.size() != T + 1)
        throw std::invalid_argument("trajectory " + tr.patient_id + ": inconsistent lengths");
      bool lost = false;
      for (bool f : tr.followup) {
        if (lost && f)
          throw std::invalid_argument("trajectory " + tr.patient_id + ": follow-up resumes after dropout");
        lost = !f;
      }
      for (const auto& s : tr.states)
        if (s.size() != state_dim)
          throw std::invalid_argument("trajectory " + tr.patient_id + ": ragged state dimension");
      for (int a : tr.actions)
        if (a < 0 || a >= action_count)
          throw std::invalid_argument("trajectory " + tr.patient_id + ": action out of range");
    }
  }
};

}  // namespace vlearn
