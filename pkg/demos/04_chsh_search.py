"""Searching for the largest CHSH value, with and without relabeling."""

from plasticity import KS_LABELS, bell_singlet, clebsch_gordan_singlet, optimize_chsh
from plasticity.inequalities import TSIRELSON, local_deterministic_chsh, pair_correlator
from plasticity.states import four_qubit_singlet

pm = (-1.0, 1.0)
r = optimize_chsh(bell_singlet(), pm, pm)
print(f"Bell singlet, labels +-1:  S = {r.best:.10f}  (2 sqrt 2 = {TSIRELSON:.10f})")
print(f"  {r.evaluations} correlator calls, angles:",
      {k: round(v[0], 6) for k, v in r.argmax.items()})

spin1 = clebsch_gordan_singlet(1)
r = optimize_chsh(spin1)
print(f"\nSpin-1 singlet, spin labels (-1, 0, 1): S = {r.best:.6f}")
r = optimize_chsh(spin1, KS_LABELS, KS_LABELS)
print(f"Spin-1 singlet, labels (1, 0, 1):       S = {r.best:.6f}")
r = optimize_chsh(spin1, (-1, 1, -1), (-1, 1, -1))
print(f"Spin-1 singlet, labels (-1, 1, -1):     S = {r.best:.6f}")

corr = pair_correlator(four_qubit_singlet(2), pair=(0, 1))
print(f"\nProduct of two Bell pairs, first pair steered: S = {optimize_chsh(correlator=corr).best:.10f}")

s = local_deterministic_chsh(1000)
print(f"\n1000 random local deterministic models: max |S| = {abs(s).max():g}")
