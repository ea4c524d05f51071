"""Same measurement, different labels: how the spin-1 singlet correlation changes shape.

Both particles are measured along directions in the x-z plane.  We keep the
projective measurement fixed and only rename its three outcomes.
"""

import math

from plasticity import KS_LABELS, Direction, clebsch_gordan_singlet, correlation_of, density
from plasticity.closedforms import enhanced_from_parts, e321_enhanced

rho = density(clebsch_gordan_singlet(1))

print("Spin-1 singlet, particle 1 along z, particle 2 tilted by d\n")
print(f"{'d (deg)':>8} {'spin labels':>12} {'(1,0,1)':>10} {'(0,1,0)':>10} {'(2,-1,5)':>10}")
for deg in range(0, 181, 30):
    a, b = Direction(0.0), Direction(math.radians(deg))
    row = [correlation_of(rho, [a, b], labels) for labels in
           (None, KS_LABELS, (0.0, 1.0, 0.0), (2.0, -1.0, 5.0))]
    print(f"{deg:>8} " + " ".join(f"{v:>10.6f}" for v in row))

print("\nThe spin-value column is -(2/3) cos d; the (1,0,1) column depends on cos 2d.")
print("Mixing the two gives a correlation that lies below -cos d for pi/3 < d < pi:\n")
for deg in (30, 60, 90, 120):
    d = math.radians(deg)
    combo = enhanced_from_parts(d, 0.0)
    literal = enhanced_from_parts(d, 0.0, unit_spin_correlation=False)
    print(f"  d = {deg:3d}  (cos 2d - cos d)/2 = {e321_enhanced(d, 0.0):+.6f}"
          f"   with the spin-1 amplitude 2/3 instead: {literal:+.6f}   -cos d = {-math.cos(d):+.6f}")
print("\nThe identity only holds with a unit-amplitude spin term; see the shipped errata.")
