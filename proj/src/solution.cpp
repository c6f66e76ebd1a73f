#include "fixq/solution.hpp"

namespace fixq {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kAllGroups: return "ALL_GROUPS";
    case Regime::kGroup1Only: return "GROUP1_ONLY";
    case Regime::kGroup2Only: return "GROUP2_ONLY";
    case Regime::kLargeQ: return "LARGE_Q";
    case Regime::kSingleState: return "SINGLE_STATE";
    case Regime::kGuessedSubset: return "GUESSED_SUBSET";
  }
  return "UNKNOWN";
}

Solution finalize(Solution s) {
  s.active = s.povm.active();
  if (s.basis_map.size() == 0) s.basis_map = Matrix::Identity(s.povm.dim(), s.povm.dim());
  return s;
}

}  // namespace fixq
