"""Interpolate through three points and print the certificates."""

from scaledquat import hardy as hd
from scaledquat.hypercomplex import HElem

t = 1.0
points = [HElem(t, 0.5 + 0.1j, 0.2), HElem(t, -0.3 + 0.4j, 0.3j), HElem(t, 0.1 - 0.5j, -0.2 + 0.1j)]
realization, theta = hd.theta_interpolate(points, 64)
c = hd.theta_certificates(points, realization)
print(f"Gram condition {c.gram_condition:.3e}")
for name in ("point_residual", "stein_gram", "stein_cross", "stein_unit", "stein_inverse", "orthonormality"):
    print(f"  {name:<15} {getattr(c, name):.2e}")
