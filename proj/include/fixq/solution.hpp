#pragma once

#include "fixq/certifier.hpp"

#include <string>
#include <vector>

namespace fixq {

enum class Regime {
  kAllGroups,
  kGroup1Only,
  kGroup2Only,
  kLargeQ,
  kSingleState,
  kGuessedSubset,  // generic qubit solver output
};

const char* regime_name(Regime r);

/// Optimal measurement with its dual certificate, expressed in the input basis.
struct Solution {
  Povm povm;
  DualCertificate certificate;
  double q = 0.0;
  double pc = 0.0;
  Regime regime = Regime::kGuessedSubset;
  std::vector<int> active;  // states with a nonzero guessing operator
  Matrix basis_map;         // solver basis -> input basis
};

/// Fills `active` from the POVM and returns the solution.
Solution finalize(Solution s);

}  // namespace fixq
