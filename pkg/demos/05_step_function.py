"""Partial sums of odd harmonics approaching a step from -1 to +1 at pi/2."""

import math

from plasticity.inequalities import sign_fourier_partial, sign_fourier_partial_printed

print(f"{'terms':>6} {'pi/4':>10} {'pi/2':>10} {'3pi/4':>10}   phase theta+pi/2 at 3pi/4")
for n in (1, 2, 5, 10, 100, 1000, 10_000):
    vals = [sign_fourier_partial(t, n) for t in (math.pi / 4, math.pi / 2, 3 * math.pi / 4)]
    print(f"{n:>6} " + " ".join(f"{v:>10.6f}" for v in vals)
          + f"   {sign_fourier_partial_printed(3 * math.pi / 4, n):+.6f}")
print("\nWith phase theta - pi/2 in the sine form the sums converge to the step;")
print("the cosine form with phase theta + pi/2 converges to -1 everywhere on (0, pi).")
