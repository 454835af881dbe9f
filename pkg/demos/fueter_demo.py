"""Residuals of the Fueter operators on the regular power zeta^(2,1,1)."""

import numpy as np

from scaledquat import fueter as fu

rng = np.random.default_rng(0)
for t in (-1.0, 1.5):
    pts = fu.sample_admissible(rng, t, 50)
    batch = tuple(pts.T)
    for op in (fu.FueterOp.NABLA, fu.FueterOp.RIGHT_NABLA, fu.FueterOp.LAPLACE):
        res = fu.apply_operator(lambda x: fu.zeta_pow((2, 1, 1), x, t), op, batch, t)
        print(f"t={t:g}  {op.name:<12} max residual {float(np.max(res.op_norm())):.2e}")
    print(f"t={t:g}  V_t mu^(2,1,1)  max residual {fu.kernel_check_mu((2, 1, 1), pts, t):.2e}")
