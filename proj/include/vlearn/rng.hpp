#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace vlearn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed for a child stream (one per patient, replication, restart, ...)
/// so parallel workers never share generator state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x51ed2701ULL));
}

/// mt19937_64 with explicit sampling algorithms. The std distributions are
/// implementation-defined, which would make generated datasets differ across
/// standard libraries; these do not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (no cached spare).
  double gauss() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * gauss(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n) via Lemire's multiply-shift.
  int uniform_int(int n) {
    const std::uint64_t x = gen_();
    return static_cast<int>((static_cast<unsigned __int128>(x) * n) >> 64);
  }

  /// Sample an index from a probability vector (assumed to sum to ~1).
  int categorical(const Eigen::VectorXd& probs) {
    double u = uniform();
    for (int i = 0; i + 1 < probs.size(); ++i) {
      u -= probs(i);
      if (u < 0.0) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vlearn
