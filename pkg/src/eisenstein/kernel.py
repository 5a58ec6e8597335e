"""Backend selection for the per-d residue computation.

The compiled core is used when it imports and ``EISENSTEIN_PURE_PYTHON`` is
unset; otherwise everything runs through :mod:`eisenstein.infrastructure`.
Both produce identical :class:`EisensteinResult` values.
"""

from __future__ import annotations

import os

import numpy as np

from . import infrastructure as _py
from .infrastructure import METHODS, EisensteinResult
from .residue import CANONICAL_LOG_TABLE, permuted_log_table

try:
    if os.environ.get("EISENSTEIN_PURE_PYTHON"):
        raise ImportError("pure Python forced by environment")
    from . import _ckernel
except ImportError:
    _ckernel = None

STORE_BACKENDS = {"exact": 0, "bloom": 1}

PERMUTED_LOG_TABLE = {(1, 0): 0, (0, 1): 2, (1, 1): 1}


def available_impls() -> list[str]:
    return ["c", "python"] if _ckernel is not None else ["python"]


def default_impl() -> str:
    return available_impls()[0]


def _resolve(impl: str | None) -> str:
    impl = impl or default_impl()
    if impl not in available_impls():
        raise ValueError(f"implementation {impl!r} unavailable; have {available_impls()}")
    return impl


def _from_c(d: int, r: dict) -> EisensteinResult:
    return EisensteinResult(
        d,
        r["residue"],
        METHODS[r["method"]],
        r["baby_steps"],
        r["giant_steps"],
        r["store_size"],
        r["regulator"],
        r["valuation_faults"],
    )


def eisenstein_residue(
    d: int,
    backend: str = "exact",
    fpr: float = 1e-3,
    impl: str | None = None,
    fault: bool = False,
) -> EisensteinResult:
    """Residue of epsilon_d mod 2O_K; ``fault`` permutes the F_4 log table."""
    if d % 8 != 5:
        raise ValueError(f"d={d} is not 5 mod 8")
    if _resolve(impl) == "c":
        table = PERMUTED_LOG_TABLE if fault else CANONICAL_LOG_TABLE
        return _from_c(d, _ckernel.eisenstein_residue(d, STORE_BACKENDS[backend], fpr, table))
    if fault:
        with permuted_log_table():
            return _py.eisenstein_residue(d, backend, fpr)
    return _py.eisenstein_residue(d, backend, fpr)


def full_walk_residue(d: int, impl: str | None = None) -> EisensteinResult:
    if _resolve(impl) == "c":
        r = _ckernel.full_walk(d, CANONICAL_LOG_TABLE)
        return _from_c(d, r)
    return _py.full_walk_residue(d)


def batch_residues(
    ds: np.ndarray,
    backend: str = "exact",
    fpr: float = 1e-3,
    impl: str | None = None,
    fault: bool = False,
) -> dict[str, np.ndarray]:
    """Columns ``residue``, ``method``, ``status``, ``baby_steps``, ``giant_steps``,
    ``valuation_faults`` and ``regulator`` for every d in ``ds``.

    Entries with nonzero ``status`` could not be finished by the compiled
    kernel and are recomputed by the exact Python full walk.
    """
    ds = np.ascontiguousarray(ds, dtype=np.int64)
    impl = _resolve(impl)
    if impl == "c":
        table = PERMUTED_LOG_TABLE if fault else CANONICAL_LOG_TABLE
        out = _ckernel.batch(ds, STORE_BACKENDS[backend], fpr, table)
        for i in np.flatnonzero(out["status"]):
            r = _py.full_walk_residue(int(ds[i]), "fault_fallback")
            out["residue"][i] = r.residue
            out["method"][i] = METHODS.index(r.method)
            out["regulator"][i] = r.regulator
        return out
    n = len(ds)
    out = {
        "residue": np.zeros(n, np.int8),
        "method": np.zeros(n, np.int8),
        "status": np.zeros(n, np.int8),
        "baby_steps": np.zeros(n, np.int64),
        "giant_steps": np.zeros(n, np.int64),
        "valuation_faults": np.zeros(n, np.int64),
        "regulator": np.zeros(n, np.float64),
    }
    for i, d in enumerate(ds.tolist()):
        try:
            r = eisenstein_residue(d, backend, fpr, "python", fault)
        except ArithmeticError:
            out["status"][i] = 2
            r = _py.full_walk_residue(d, "fault_fallback")
        out["residue"][i] = r.residue
        out["method"][i] = METHODS.index(r.method)
        out["baby_steps"][i] = r.baby_steps
        out["giant_steps"][i] = r.giant_steps
        out["valuation_faults"][i] = r.valuation_faults
        out["regulator"][i] = r.regulator
    return out
