"""Walk through the four-state chain machinery on classic strategy pairs.

A pair of memory-one strategies induces a Markov chain on the joint states
CC, CD, DC, DD.  Deterministic strategies make that chain reducible or
periodic, which is exactly why this package distinguishes the one-shot
stationary solve from the start-dependent Cesaro (time-average) limit.
"""

import numpy as np

import zdlab as z

np.set_printoptions(precision=6, suppress=True)

print("=== Tit-for-Tat against unconditional cooperation ===")
M = z.transition_matrix(z.TFT, z.ALL_C)
print("transition matrix (columns = previous state):")
print(M)

structure = z.classify(M)
print("communicating classes:", structure.classes)
print("recurrent flags:      ", structure.recurrent)
print("ergodic:              ", structure.ergodic)

exact = z.stationary_exact(M)
print("stationary solve ->", exact.distribution, f"(unique={exact.unique})")
# mutual cooperation absorbs everything, whatever the start
for start in (z.JointState.DD, z.JointState.CD):
    limit = z.cesaro_limit(M, z.point_mass(start))
    print(f"cesaro limit from {start.name}:", limit.distribution)

print()
print("=== Tit-for-Tat against itself: a periodic, reducible chain ===")
M = z.transition_matrix(z.TFT, z.TFT)
structure = z.classify(M)
print("classes:", structure.classes, "periods:", structure.periods)

exact = z.stationary_exact(M)
print("stationary solve: unique =", exact.unique, "->", exact.distribution)
print("(three recurrent classes each carry an invariant measure, so the")
print(" start matters; the Cesaro limit resolves that honestly:)")
for start in (z.JointState.CC, z.JointState.CD, z.JointState.DD):
    limit = z.cesaro_limit(M, z.point_mass(start))
    print(f"  from {start.name}: {limit.distribution}   method={limit.method}")

print()
print("=== Trembling hands regularise everything ===")
for eps in (0.1, 0.01, 0.001):
    result = z.perturbed_stationary(z.TFT, z.TFT, eps)
    print(f"  eps={eps:<6} stationary ->", result.distribution)
print("(the eps -> 0 limit is a different object from the Cesaro limit of")
print(" a fixed start; the library computes both and never conflates them)")
