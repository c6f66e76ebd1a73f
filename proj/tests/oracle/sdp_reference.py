"""Reference optima from a generic SDP solver, used to freeze test values.

Solves  max sum_j eta_j Tr(rho_j P_j)  s.t.  P_0 + sum_j P_j = I,  P >= 0,
Tr(rho P_0) = Q  with cvxpy/Clarabel. Independent of the C++ code: states
are rebuilt here from their parameters. Print precision reflects the
interior-point accuracy (about 1e-8).
"""

import cmath
import math

import cvxpy as cp
import numpy as np


def qubit(purity, theta, phi):
    psi = np.array([math.cos(theta / 2), cmath.exp(1j * phi) * math.sin(theta / 2)])
    return purity * np.outer(psi, psi.conj()) + (1 - purity) / 2 * np.eye(2)


def pop_state(pop0, phase, purity=1.0):
    psi = np.array([math.sqrt(pop0), cmath.exp(1j * phase) * math.sqrt(1 - pop0)])
    return purity * np.outer(psi, psi.conj()) + (1 - purity) / 2 * np.eye(2)


def two_groups(n1, n2, b, c, p, pp, eta, etap, delta=0.0):
    st = [(eta, pop_state(b, 2 * math.pi * j / n1, p)) for j in range(n1)]
    st += [(etap, pop_state(c, delta + 2 * math.pi * j / n2, pp)) for j in range(n2)]
    return st


def mirror(b, eta):
    return two_groups(2, 1, b, 1.0, 1, 1, eta, 1 - 2 * eta)


def umix(d, eta2):
    pure = np.zeros((d, d))
    pure[0, 0] = 1
    return [(1 - eta2, np.eye(d) / d), (eta2, pure)]


def optimum(states, q):
    d = states[0][1].shape[0]
    rho = sum(w * r for w, r in states)
    pis = [cp.Variable((d, d), hermitian=True) for _ in range(len(states) + 1)]
    cons = [p >> 0 for p in pis]
    cons.append(sum(pis) == np.eye(d))
    cons.append(cp.real(cp.trace(rho @ pis[0])) == q)
    obj = cp.Maximize(sum(cp.real(cp.trace(w * r @ pis[j + 1])) for j, (w, r) in enumerate(states)))
    prob = cp.Problem(obj, cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return prob.value


def confidences(states):
    rho = sum(w * r for w, r in states)
    vals, vecs = np.linalg.eigh(rho)
    inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.conj().T
    return [max(np.linalg.eigvalsh(inv_sqrt @ (w * r) @ inv_sqrt)) for w, r in states]


HELSTROM = [(0.5, qubit(1, 0, 0)), (0.5, qubit(1, math.pi / 2, 0))]

MIXED3 = [
    (0.5, qubit(0.9, 0.3, 0.1)),
    (0.3, qubit(0.6, 2.0, 1.2)),
    (0.2, np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])),
]

CASES = {
    "helstrom Q=0": (HELSTROM, 0.0),
    "helstrom Q=0.2": (HELSTROM, 0.2),
    "trine Q=0": (two_groups(3, 0, 0.5, 1, 1, 1, 1 / 3, 0), 0.0),
    "trine Q=0.3": (two_groups(3, 0, 0.5, 1, 1, 1, 1 / 3, 0), 0.3),
    "mirror b=0.4 eta=0.2 Q=0": (mirror(0.4, 0.2), 0.0),
    "mirror b=0.4 eta=0.2 Q=0.3": (mirror(0.4, 0.2), 0.3),
    "mirror b=0.4 eta=0.34 Q=0": (mirror(0.4, 0.34), 0.0),
    "mirror b=0.4 eta=0.34 Q=0.1": (mirror(0.4, 0.34), 0.1),
    "mirror b=0.4 eta=0.45 Q=0": (mirror(0.4, 0.45), 0.0),
    "mirror b=0.4 eta=0.45 Q=0.2": (mirror(0.4, 0.45), 0.2),
    "two groups (4,6) Q=0.3": (two_groups(4, 6, 0.4, 0.8, 1, 1, 0.1, 0.1), 0.3),
    "two groups (8,2) Q=0.1": (two_groups(8, 2, 0.4, 0.8, 1, 1, 0.1, 0.1), 0.1),
    "umix d=3 eta2=0.5 Q=0.1": (umix(3, 0.5), 0.1),
    "umix d=2 eta2=0.5 Q=0": (umix(2, 0.5), 0.0),
    "mixed3 Q=0": (MIXED3, 0.0),
    "mixed3 Q=0.2": (MIXED3, 0.2),
    "mixed3 Q=0.5": (MIXED3, 0.5),
}

if __name__ == "__main__":
    for name, (states, q) in CASES.items():
        print(f"{name:32s} Pc = {optimum(states, q):.10f}")
    print("confidence mirror b=0.4 eta=0.2:", [f"{c:.12f}" for c in confidences(mirror(0.4, 0.2))])
    print("confidence mixed3:", [f"{c:.12f}" for c in confidences(MIXED3)])
    print("confidence umix d=3 eta2=0.5:", [f"{c:.12f}" for c in confidences(umix(3, 0.5))])
