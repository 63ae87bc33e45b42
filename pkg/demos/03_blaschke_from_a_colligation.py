"""The scalar golden case: a single-zero inner factor from the Cholesky step.

For the constant weight and the scalar pair A = a, C = sqrt(1 - a^2), the
base gramian is 1 and the step-0 Cholesky factorization problem has the
rank-one solution B = sqrt(1 - a^2), D = -a.  The resulting transfer
function is the classical inner factor (z - a)/(1 - a z).
"""

import numpy as np

import hardybeta as hb

w = hb.make_weight_hardy(256)
a = 0.5
pair = hb.OutputPair(A=[[a]], C=[[np.sqrt(1 - a * a)]])
family = hb.build_family(w, pair, k_max=6)

step = family.step(0)
print("B, D:          ", step.B.ravel().real, step.D.ravel().real)
print("input dims u_k:", [s.u for s in family.steps])
print("metric residuals:", max(family.isometry_residuals),
      max(family.coisometry_residuals))

for z in (0.5, 0.25 + 0.5j, -0.8j):
    got = hb.transfer_eval(family, 0, z)[0, 0]
    ref = (z - a) / (1 - a * z)
    print(f"Theta({z:+.2f}) = {got:+.6f}   closed form {ref:+.6f}")

# On the boundary the closed rational form of the realization has modulus
# one, the defining property of an inner function.
vals = []
for m in range(8):
    zb = np.exp(2j * np.pi * m / 8)
    vals.append(abs(step.D[0, 0] + zb * pair.C[0, 0] * step.B[0, 0]
                    / (1 - zb * a)))
print("boundary moduli:", np.round(vals, 12))

# The same factor is the characteristic function of the operator T = 0.5:
char = hb.characteristic_family(w, [[a]], k_max=6)
print("characteristic Theta(0.3):",
      hb.transfer_eval(char.family, 0, 0.3)[0, 0])
