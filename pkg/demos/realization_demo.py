"""Realization arithmetic compared with the same operations on Taylor series."""

import numpy as np

from scaledquat.certify import random_realization
from scaledquat.rational import rinverse, rmul, rsum, to_series
from scaledquat.series import series_distance, star_inverse, star_mul

rng = np.random.default_rng(3)
t = -0.5
r1, r2 = random_realization(rng, t, p=2, m=2), random_realization(rng, t, p=2, m=2)
s1, s2 = to_series(r1, 16), to_series(r2, 16)
print(f"sum      {series_distance(to_series(rsum(r1, r2), 16), s1 + s2):.2e}")
print(f"product  {series_distance(to_series(rmul(r1, r2), 16), star_mul(s1, s2)):.2e}")
print(f"inverse  {series_distance(to_series(rinverse(r1), 16), star_inverse(s1)):.2e}")
