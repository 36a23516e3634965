"""Scalar worked examples for all four equation families.

Every family has a 1x1 instance with a closed-form answer, so each
doubling step can be followed by hand.  This script walks the classical
recursions and checks them against the quadratic formula / eigenvalue.
"""

import math

import numpy as np

from dsda import (
    BsepProblem,
    CareProblem,
    DareProblem,
    MareProblem,
    bsep_init,
    bsep_sda_step,
    care_init,
    dare_init,
    mare_init,
    mare_sda_step,
    sym_sda_step,
)

# Continuous-time: a = -1, b = c = 1 solves 2 a x - x^2 + 1 = 0,
# stabilizing root sqrt(2) - 1.
print("=== continuous-time Riccati, a=-1, b=c=1, gamma=1 ===")
state = care_init(CareProblem([[-1.0]], [[1.0]], [[1.0]], gamma=1.0))
print(f"k=0  A={state.a_k[0,0]:+.6f}  G={state.g_k[0,0]:.6f}  H={state.h_k[0,0]:.6f}")
for _ in range(5):
    state = sym_sda_step(state)
    print(f"k={state.k}  A={state.a_k[0,0]:+.6e}  H={state.h_k[0,0]:.12f}")
print(f"closed form sqrt(2)-1 = {math.sqrt(2)-1:.12f}\n")

# Discrete-time: a = 0.5, g = h = 1 solves x^2 - 0.25 x - 1 = 0.
print("=== discrete-time Riccati, a=0.5, g=h=1 ===")
state = dare_init(DareProblem([[0.5]], [[1.0]], [[1.0]]))
for _ in range(5):
    state = sym_sda_step(state)
    print(f"k={state.k}  H={state.h_k[0,0]:.12f}")
print(f"closed form (0.25+sqrt(4.0625))/2 = {(0.25+math.sqrt(4.0625))/2:.12f}\n")

# Nonsymmetric: x c x - x d - a x + b = 0 with a=2, b=c=1, d=3 gives
# x^2 - 5x + 1 = 0; the doubling converges to the minimal root.
print("=== nonsymmetric Riccati, a=2, b=c=1, d=3, gamma=3 ===")
state = mare_init(MareProblem([[2.0]], [[3.0]], [[1.0]], [[1.0]],
                              [[1.0]], [[1.0]], gamma=3.0))
print(f"k=0  H={state.h_k[0,0]:.12f}  (= 6/29 = {6/29:.12f})")
for _ in range(5):
    state = mare_sda_step(state)
    print(f"k={state.k}  H={state.h_k[0,0]:.12f}  E={state.e_k[0,0]:+.2e}")
print(f"minimal root (5-sqrt(21))/2 = {(5-math.sqrt(21))/2:.12f}\n")

# Bethe-Salpeter: the 2x2 Hamiltonian [[2, 1], [-1, -2]] has spectrum
# +-sqrt(3); F converges to -x2/x1 of the stable eigenvector.
print("=== Bethe-Salpeter, a=2, b=1, alpha=4 ===")
p = BsepProblem([[2.0]], [[1.0]], alpha=4.0)
state = bsep_init(p)
for _ in range(6):
    state = bsep_sda_step(state)
    print(f"k={state.k}  F={state.f_k[0,0].real:+.12f}  |E|={abs(state.e_k[0,0]):.2e}")
w, v = np.linalg.eig(p.hamiltonian())
stable = v[:, np.argmin(w.real)]
print(f"eigen oracle -x2/x1 = {(-stable[1]/stable[0]).real:+.12f}")
print(f"stable eigenvalue   = {min(w.real):+.12f} (= -sqrt(3))")
