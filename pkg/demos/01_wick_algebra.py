"""Tour of the truncated chaos algebra.

Builds small chaos expansions by hand, multiplies them with the Wick
product, and shows the two facts everything else in this package leans on:
the Hermite transform turns Wick products into ordinary products, and the
Wick exponential of a first-order field reproduces the classical Hermite
generating function when evaluated pathwise.
"""

import math

import numpy as np

from wickpde import (
    ChaosField,
    IndexSet,
    hermite_transform_eval,
    hk_norm,
    mean_variance,
    sample_eval,
    unit_index,
    wick_exp,
    wick_mul,
)

s = IndexSet(4, 2)
print(f"index set K=4, N=2 has {len(s)} members, ordered graded-lex:")
print(" ", [m.to_text() for m in s][:8], "...")

# (2 + 3 H_{e1}) <> (1 + H_{e2}): every coefficient products out explicitly
F = ChaosField(s, {(): 2.0, unit_index(1): 3.0})
G = ChaosField(s, {(): 1.0, unit_index(2): 1.0})
P = wick_mul(F, G)
print("\nWick product coefficients:")
for alpha, v in sorted(P.items(), key=lambda kv: kv[0].grlex_key()):
    print(f"  {alpha.to_text():8s} -> {v}")

z = np.array([0.3, -0.7])
lhs = hermite_transform_eval(P, z)
rhs = hermite_transform_eval(F, z) * hermite_transform_eval(G, z)
print(f"\ntransform multiplicativity at z={z}: H(F<>G)={lhs:.6f}, HF*HG={rhs:.6f}")

mean, var = mean_variance(P)
print(f"moments of F<>G: mean={mean}, variance={var}")
print(f"weighted norms:  rho=0,q=0 {hk_norm(P, 0.0, 0):.4f}   rho=0.5,q=2 {hk_norm(P, 0.5, 2):.4f}")

# Wick exponential vs the generating function sum h_n(x)/n! = e^{x - 1/2}
s16 = IndexSet(16, 1)
E = wick_exp(ChaosField(s16, {unit_index(1): 1.0}))
print("\nWick exponential of H_(1), sampled against e^(xi - 1/2):")
for xi in (-1.0, 0.0, 1.0, 2.0):
    approx = sample_eval(E, [xi])
    exact = math.exp(xi - 0.5)
    print(f"  xi={xi:+.1f}: chaos sum {approx:.8f}  exact {exact:.8f}  |err| {abs(approx-exact):.1e}")
