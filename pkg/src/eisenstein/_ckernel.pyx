# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled residue kernel; see eisenstein/_core/kernel.c."""

from libc.stdint cimport int64_t

import numpy as np


cdef extern from "_core/kernel.h":
    ctypedef struct ek_result:
        int t
        int method
        int64_t baby_steps
        int64_t giant_steps
        int64_t store_size
        double regulator
        int64_t valuation_faults
        int64_t arith_faults
        int64_t bloom_false_positives

    int ek_eisenstein(int64_t d, int backend, double fpr, const int *table, ek_result *out) nogil
    int ek_full_walk(int64_t d, const int *table, ek_result *out) nogil


cdef void _load_table(object table, int *tab):
    tab[0] = 0
    tab[1] = table[(1, 0)]
    tab[2] = table[(0, 1)]
    tab[3] = table[(1, 1)]


cdef dict _as_dict(ek_result *r):
    return {
        "residue": r.t,
        "method": r.method,
        "baby_steps": r.baby_steps,
        "giant_steps": r.giant_steps,
        "store_size": r.store_size,
        "regulator": r.regulator,
        "valuation_faults": r.valuation_faults,
        "arith_faults": r.arith_faults,
        "bloom_false_positives": r.bloom_false_positives,
    }


def _raise(int rc, int64_t d):
    if rc == 1:
        raise ValueError(f"d={d} is not a valid non-square d = 5 (mod 8)")
    if rc == 3:
        raise MemoryError
    raise ArithmeticError(f"kernel invariant failure for d={d}")


def eisenstein_residue(int64_t d, int backend, double fpr, table):
    cdef int tab[4]
    cdef ek_result r
    _load_table(table, tab)
    rc = ek_eisenstein(d, backend, fpr, tab, &r)
    if rc:
        _raise(rc, d)
    return _as_dict(&r)


def full_walk(int64_t d, table):
    cdef int tab[4]
    cdef ek_result r
    _load_table(table, tab)
    rc = ek_full_walk(d, tab, &r)
    if rc:
        _raise(rc, d)
    return _as_dict(&r)


def batch(int64_t[:] ds, int backend, double fpr, table):
    """Run the kernel over an array of d; returns a dict of numpy columns.

    A nonzero ``status`` marks a d the kernel could not finish.
    """
    cdef Py_ssize_t n = ds.shape[0], i
    cdef int tab[4]
    cdef ek_result r
    _load_table(table, tab)
    residue = np.zeros(n, dtype=np.int8)
    method = np.zeros(n, dtype=np.int8)
    status = np.zeros(n, dtype=np.int8)
    baby = np.zeros(n, dtype=np.int64)
    giant = np.zeros(n, dtype=np.int64)
    vfaults = np.zeros(n, dtype=np.int64)
    afaults = np.zeros(n, dtype=np.int64)
    bfp = np.zeros(n, dtype=np.int64)
    regulator = np.zeros(n, dtype=np.float64)
    cdef signed char[:] res_v = residue, meth_v = method, st_v = status
    cdef int64_t[:] baby_v = baby, giant_v = giant, vf_v = vfaults, af_v = afaults, bfp_v = bfp
    cdef double[:] reg_v = regulator
    cdef int rc
    with nogil:
        for i in range(n):
            rc = ek_eisenstein(ds[i], backend, fpr, tab, &r)
            st_v[i] = rc
            if rc:
                continue
            res_v[i] = r.t
            meth_v[i] = r.method
            baby_v[i] = r.baby_steps
            giant_v[i] = r.giant_steps
            vf_v[i] = r.valuation_faults
            af_v[i] = r.arith_faults
            bfp_v[i] = r.bloom_false_positives
            reg_v[i] = r.regulator
    return {
        "residue": residue, "method": method, "status": status,
        "baby_steps": baby, "giant_steps": giant, "valuation_faults": vfaults,
        "arith_faults": afaults, "bloom_false_positives": bfp, "regulator": regulator,
    }
