"""Four spin-1/2 particles in a total-spin-zero state: parity correlations.

E is the probability of an even number of "-" outcomes minus that of an odd
number.  For the product of two Bell pairs it factorizes.
"""

import math

from plasticity import Direction, four_qubit_singlet, parity_correlation
from plasticity.closedforms import e241_theta, e242_theta

for which, closed in ((1, e241_theta), (2, e242_theta)):
    psi = four_qubit_singlet(which)
    print(f"\nsinglet {which}")
    for t in (0.0, math.pi / 6, math.pi / 3, math.pi / 2):
        angles = (t, -t, 2 * t, 0.0)
        r = parity_correlation(psi, [Direction(a) for a in angles])
        print(f"  angles {tuple(round(a, 3) for a in angles)}: P_even={r.p_even:.6f} "
              f"P_odd={r.p_odd:.6f} E={r.E:+.6f} closed form {closed(*angles):+.6f}")
