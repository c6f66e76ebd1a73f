#pragma once

// Maximum-confidence figures and the large-Q regime where Z = a rho.

#include "fixq/solution.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fixq {

struct ConfidenceReport {
  std::vector<double> c;  // per-state maximum confidence
  double a_large_q = 0.0;  // max_j c_j
  std::vector<int> maximizers;
};

/// Largest root of det(eta_j rho_j - lambda rho) = 0 per state. Throws
/// kSingular when rho is rank deficient.
ConfidenceReport max_confidence(const Ensemble& e);

/// max_j C_j * (1 - Q). Only the optimum once Q >= Q_u.
double large_Q_value(const Ensemble& e, double q);

/// Measurement reaching max_j C_j * (1 - Q) with the smallest inconclusive
/// rate q_min, built from rank-one detectors along the maximum-confidence
/// directions. Qubits only.
struct LargeQWitness {
  double q_min = 1.0;
  double confidence = 0.0;
  std::vector<Matrix> pis;  // at Q = q_min
};
LargeQWitness large_Q_witness(const Ensemble& e);

/// Witness mixed with the identity to hit `q` (requires q >= q_min), with
/// certificate Z = C rho, a = C.
Solution large_Q_solution(const Ensemble& e, const LargeQWitness& w, double q);

struct QuRegime {
  double q_u = 1.0;
  std::string attained_by;
};

/// Smallest Q where `curve` meets the large-Q line (within 1e-12), by
/// bisection to 1e-10. A tangential join limits the accuracy to roughly
/// 1e-6. Throws kInternal when the curve exceeds the line by more than 1e-9
/// or fails to vanish at Q = 1.
QuRegime find_Qu(const Ensemble& e, const std::function<double(double)>& curve);

}  // namespace fixq
