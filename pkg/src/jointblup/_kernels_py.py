"""NumPy implementation of the product-moment accumulation kernel.

This is the default backend: the accumulation reduces to one matrix
product, which BLAS executes faster than the hand-written compiled loop
in ``_kernels``.  Must stay drop-in compatible with ``_kernels``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def pair_power_table(psi_w, base, cobase, p_count, q_count):
    """Accumulate T[k, p, q] = sum_l psi_w[k, l] * base[l]**p * cobase[l]**q.

    psi_w has shape (K_out, K_in); base and cobase have length K_in.
    This is the inner-integral table of the nested product-moment
    quadrature, the single hot spot of the moment engine.
    """
    psi_w = np.ascontiguousarray(psi_w, dtype=float)
    base = np.asarray(base, dtype=float)
    cobase = np.asarray(cobase, dtype=float)
    p_pow = np.power.outer(base, np.arange(p_count))      # (K_in, p_count)
    q_pow = np.power.outer(cobase, np.arange(q_count))    # (K_in, q_count)
    pq = (p_pow[:, :, None] * q_pow[:, None, :]).reshape(len(base), p_count * q_count)
    return (psi_w @ pq).reshape(psi_w.shape[0], p_count, q_count)
