# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled product-moment accumulation kernel.

Same contract as ``_kernels_py.pair_power_table``; the loops run the
powers incrementally instead of materializing the power tables, which
keeps the working set small.  On stock NumPy builds the BLAS-backed
kernel in ``_kernels_py`` is faster, so this backend is opt-in via
JOINTBLUP_COMPILED=1; the benchmark compares the two.
"""

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def pair_power_table(object psi_w, object base, object cobase,
                     Py_ssize_t p_count, Py_ssize_t q_count):
    """Accumulate T[k, p, q] = sum_l psi_w[k, l] * base[l]**p * cobase[l]**q."""
    cdef const double[:, ::1] m = np.ascontiguousarray(psi_w, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(base, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(cobase, dtype=np.float64)
    cdef Py_ssize_t k_out = m.shape[0]
    cdef Py_ssize_t k_in = m.shape[1]
    if b.shape[0] != k_in or c.shape[0] != k_in:
        raise ValueError("base/cobase length must match psi_w columns")

    out_arr = np.zeros((k_out, p_count, q_count), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t k, l, p, q
    cdef double w, tp, v, bl, cl

    with nogil:
        for k in range(k_out):
            for l in range(k_in):
                w = m[k, l]
                bl = b[l]
                cl = c[l]
                tp = w
                for p in range(p_count):
                    v = tp
                    for q in range(q_count):
                        out[k, p, q] += v
                        v *= cl
                    tp *= bl
    return out_arr
