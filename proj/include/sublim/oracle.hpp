#pragma once

// Brute-force reference implementations. Deliberately slow and independent of
// the closed-form kernels in linalg.hpp so the two can check each other.

#include <cstddef>

#include "sublim/linalg.hpp"

namespace sublim::oracle {

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Deterministic sphere sampling for gap_bruteforce.
///
/// Pass 1 covers S^{k-1} globally: k = 1 uses {+1, -1}, k = 2 uses n_samples
/// equally spaced angles, k = 3 uses an n_samples-point Fibonacci sphere. Each
/// further pass resamples a neighbourhood of the incumbent whose radius is a
/// tenth of the previous one.
struct SamplingPlan {
  std::size_t n_samples = 10000;
  std::size_t levels = 3;

  void validate() const;
};

/// Lower bound on sup_{u in U, |u| = 1} |u - P_V(u)|; k = dim U = dim V <= 3.
/// Non-decreasing in plan.levels.
double gap_bruteforce(const Subspace& u, const Subspace& v, const SamplingPlan& plan = {});

/// Signed permutation expansion, k <= 6.
double det_bruteforce(const Matrix& m);

}  // namespace sublim::oracle
