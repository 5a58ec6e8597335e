"""Baby-step giant-step walk of the principal cycle, tracking residues mod 2.

Baby steps apply rho from the unit ideal and record every reduced ideal's
canonical key with the residue and log of its generator.  Giant steps
compose the last baby-window ideal with the running giant ideal, reduce, and
look the result up.  A hit on a stored key at positive log distance closes
one period, so the residue of epsilon_d is the difference of the two
residues in Z/3.

This is the reference implementation; :mod:`eisenstein.kernel` dispatches to
the compiled core when it is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ideal import Ideal, InvariantError, Walker, canonical_key, reduce_walker, rho
from .nucomp import nucomp_choose
from .store import make_store

METHODS = ("bsgs", "full_walk", "symmetry_fallback", "cap_fallback", "fault_fallback")

# log distances below this are the same reduced ideal seen twice, not a period
MIN_PERIOD_LOG = 0.1


@dataclass(frozen=True, slots=True)
class EisensteinResult:
    d: int
    residue: int
    method: str
    baby_steps: int
    giant_steps: int
    store_size: int
    regulator: float
    valuation_faults: int = 0

    @property
    def eisenstein(self) -> bool:
        return self.residue == 0


def giant_step_cap(d: int) -> int:
    return int(20 * (d**0.25 + 10))


def full_walk_residue(d: int, method: str = "full_walk") -> EisensteinResult:
    """Iterate rho from the unit ideal until it recurs; always exact."""
    w = rho(Walker(Ideal.unit(d)))
    steps = 1
    while w.ideal.Q != 2:
        w = rho(w)
        steps += 1
    if w.res.v != 0:
        raise InvariantError(f"full walk: unit of d={d} reduced into 2O_K")
    return EisensteinResult(d, w.res.t, method, steps, 0, 0, w.logv)


def eisenstein_residue(d: int, backend: str = "exact", fpr: float = 1e-3) -> EisensteinResult:
    """Residue of epsilon_d in (O_K/2O_K)* ~ Z/3 for squarefree d = 5 (mod 8)."""
    if d % 8 != 5:
        raise ValueError(f"d={d} is not 5 mod 8")
    bound = d**0.25
    store = make_store(backend, int(bound / 1.1) + 16, fpr)

    w = Walker(Ideal.unit(d))
    store.insert(canonical_key(w.ideal), (0, 0.0))
    prev = w.ideal
    baby = 0
    extra = -1
    while extra < 2:
        w = rho(w)
        baby += 1
        I = w.ideal
        if w.res.v != 0:
            r = full_walk_residue(d, "fault_fallback")
            return EisensteinResult(
                d, r.residue, r.method, baby + r.baby_steps, 0, len(store), r.regulator, 1
            )
        if I.Q == 2:
            # period closed inside the baby window
            return EisensteinResult(d, w.res.t, "full_walk", baby, 0, len(store), w.logv)
        store.insert(canonical_key(I), (w.res.t, w.logv))
        if I.Q == prev.Q or I.P == prev.P:
            r = full_walk_residue(d, "symmetry_fallback")
            return EisensteinResult(d, r.residue, r.method, baby + r.baby_steps, 0, len(store), r.regulator)
        prev = I
        if extra >= 0:
            extra += 1
        elif w.logv >= bound:
            anchor = w
            extra = 0

    mu = anchor
    cap = giant_step_cap(d)
    faults = 0
    for giant in range(1, cap + 1):
        I3, g, lg, _ = nucomp_choose(anchor.ideal, mu.ideal)
        mu = Walker(I3, anchor.res * mu.res / g, anchor.logv + mu.logv - lg)
        mu, _ = reduce_walker(mu)
        if mu.res.v != 0:
            faults += 1
            break
        hit = store.lookup(canonical_key(mu.ideal))
        if hit is not None:
            t, logv = hit
            dist = mu.logv - logv
            if dist > MIN_PERIOD_LOG:
                return EisensteinResult(d, (mu.res.t - t) % 3, "bsgs", baby, giant, len(store), dist, faults)

    r = full_walk_residue(d, "fault_fallback" if faults else "cap_fallback")
    return EisensteinResult(
        d, r.residue, r.method, baby + r.baby_steps, giant, len(store), r.regulator, faults
    )
