"""Build circled and bracket Blaschke factors at one point and check them."""

from scaledquat import hardy as hd
from scaledquat.hypercomplex import AdjointKind, HElem

for t in (-1.0, 2.0):
    alpha = HElem(t, 0.2 + 0.1j, 0.1 - 0.1j)
    b = hd.blaschke_circled(alpha, 256)
    print(f"t={t:g}  alpha={alpha!r}")
    print(f"  circled: B(alpha) = {b(alpha).norm():.2e}, "
          f"isometry gap {hd.isometry_gram(b, AdjointKind.CIRCLED, 8):.2e}")
    s, data, _ = hd.bracket_blaschke(alpha, 256)
    worst = max(hd.bracket_certificates(data).values())
    print(f"  bracket: B(alpha) = {s(alpha).norm():.2e}, worst certificate {worst:.2e}")
