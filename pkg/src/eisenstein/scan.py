"""Range scans: count pi_D, pi_E and pi_{E and prime} with checkpointing.

Work is cut into aligned segments that are processed in any order by a
worker pool and merged strictly in order, so the output files depend only on
the fingerprinted part of the configuration, never on the worker count.

Outputs
-------
checkpoint CSV
    ``x,pi_D,pi_E,pi_E_prime,elapsed_s``; row x counts d in [lo, x).
    ``elapsed_s`` is last so determinism checks can drop it; with
    ``timing=False`` it is always ``0``.
hit list
    ``d,residue_method,baby_steps,giant_steps``, one line per Eisenstein d.
state file
    ``<csv>.state.json``, rewritten atomically after every merged segment.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .infrastructure import METHODS
from .kernel import batch_residues
from .sieve import sieve_segment

log = logging.getLogger(__name__)

CSV_HEADER = "x,pi_D,pi_E,pi_E_prime,elapsed_s\n"
HITS_HEADER = "d,residue_method,baby_steps,giant_steps\n"


class ResumeError(ValueError):
    """The state file does not belong to this configuration."""


@dataclass(frozen=True)
class ScanConfig:
    lo: int
    hi: int
    segment_size: int = 1 << 20
    stride: int = 10**6
    workers: int = 1
    backend: str = "exact"
    fpr: float = 1e-3
    list_hits: bool = False
    timing: bool = True
    impl: str | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.lo < self.hi:
            raise ValueError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi})")
        for name in ("segment_size", "stride", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.backend not in ("exact", "bloom"):
            raise ValueError(f"unknown store backend {self.backend!r}")
        if not 0 < self.fpr <= 0.1:
            raise ValueError("fpr must lie in (0, 0.1]")

    def fingerprint(self) -> str:
        keep = {k: getattr(self, k) for k in ("lo", "hi", "segment_size", "stride", "backend", "fpr", "list_hits")}
        return hashlib.sha256(json.dumps(keep, sort_keys=True).encode()).hexdigest()[:16]

    def segments(self, start: int | None = None) -> list[tuple[int, int]]:
        lo = self.lo if start is None else start
        out = []
        while lo < self.hi:
            hi = min(lo + self.segment_size, self.hi)
            out.append((lo, hi))
            lo = hi
        return out

    def stride_points(self) -> list[int]:
        pts = list(range(self.lo + self.stride, self.hi, self.stride))
        return pts + [self.hi]


@dataclass
class ScanState:
    fingerprint: str
    next_lo: int
    pi_D: int = 0
    pi_E: int = 0
    pi_EP: int = 0
    csv_bytes: int = 0
    hits_bytes: int = 0
    elapsed: float = 0.0
    valuation_faults: int = 0
    kernel_failures: int = 0
    methods: dict[str, int] = field(default_factory=dict)
    complete: bool = False

    def save(self, path: Path) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(asdict(self), indent=1, sort_keys=True))
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Path) -> ScanState:
        return cls(**json.loads(path.read_text()))


def state_path(csv_path: Path) -> Path:
    return Path(str(csv_path) + ".state.json")


def process_segment(args: tuple[int, int, str, float, str | None]) -> dict:
    """Worker: residues for every d in D within one segment."""
    lo, hi, backend, fpr, impl = args
    seg = sieve_segment(lo, hi)
    ds = seg.D
    res = batch_residues(ds, backend, fpr, impl)
    return {
        "d": ds,
        "eis": res["residue"] == 0,
        "prime": seg.prime[seg.squarefree],
        "method": res["method"],
        "baby": res["baby_steps"],
        "giant": res["giant_steps"],
        "vfaults": int(res["valuation_faults"].sum()),
        "failures": int(np.count_nonzero(res["status"])),
    }


class _Sink:
    def __init__(self, cfg: ScanConfig, csv_path: Path, hits_path: Path | None, state: ScanState):
        self.cfg = cfg
        self.csv_path = csv_path
        self.hits_path = hits_path
        self.state = state
        self.points = [x for x in cfg.stride_points() if x > state.next_lo]
        self.t0 = time.monotonic() - state.elapsed

    def open(self, fresh: bool) -> None:
        if fresh:
            self.csv = open(self.csv_path, "w", newline="\n")
            self.csv.write(CSV_HEADER)
            self.hits = None
            if self.hits_path is not None:
                self.hits = open(self.hits_path, "w", newline="\n")
                self.hits.write(HITS_HEADER)
            self.flush()
        else:
            # drop anything written after the last recorded segment
            self.csv = open(self.csv_path, "r+", newline="\n")
            self.csv.truncate(self.state.csv_bytes)
            self.csv.seek(self.state.csv_bytes)
            self.hits = None
            if self.hits_path is not None:
                self.hits = open(self.hits_path, "r+", newline="\n")
                self.hits.truncate(self.state.hits_bytes)
                self.hits.seek(self.state.hits_bytes)

    def flush(self) -> None:
        self.csv.flush()
        self.state.csv_bytes = self.csv.tell()
        if self.hits is not None:
            self.hits.flush()
            self.state.hits_bytes = self.hits.tell()

    def close(self) -> None:
        self.csv.close()
        if self.hits is not None:
            self.hits.close()

    def elapsed(self) -> float:
        return time.monotonic() - self.t0

    def merge(self, seg_hi: int, r: dict) -> None:
        st = self.state
        ds, eis, prime = r["d"], r["eis"], r["prime"]
        while self.points and self.points[0] <= seg_hi:
            x = self.points.pop(0)
            k = int(np.searchsorted(ds, x))
            row = (
                st.pi_D + k,
                st.pi_E + int(eis[:k].sum()),
                st.pi_EP + int((eis[:k] & prime[:k]).sum()),
            )
            el = f"{self.elapsed():.3f}" if self.cfg.timing else "0"
            self.csv.write(f"{x},{row[0]},{row[1]},{row[2]},{el}\n")
        st.pi_D += len(ds)
        st.pi_E += int(eis.sum())
        st.pi_EP += int((eis & prime).sum())
        st.valuation_faults += r["vfaults"]
        st.kernel_failures += r["failures"]
        for m, c in Counter(r["method"].tolist()).items():
            st.methods[METHODS[m]] = st.methods.get(METHODS[m], 0) + c
        if self.hits is not None:
            idx = np.flatnonzero(eis)
            self.hits.writelines(
                f"{ds[i]},{METHODS[r['method'][i]]},{r['baby'][i]},{r['giant'][i]}\n" for i in idx
            )
        st.next_lo = seg_hi
        st.elapsed = self.elapsed()
        self.flush()


def _run(cfg: ScanConfig, sink: _Sink, max_segments: int | None) -> ScanState:
    state = sink.state
    segs = cfg.segments(state.next_lo)
    if max_segments is not None:
        segs = segs[:max_segments]
    jobs = [(lo, hi, cfg.backend, cfg.fpr, cfg.impl) for lo, hi in segs]
    spath = state_path(sink.csv_path)
    workers = int(os.environ.get("EISENSTEIN_WORKERS", cfg.workers))
    if workers > 1 and len(jobs) > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(process_segment, jobs)
    else:
        pool = None
        results = map(process_segment, jobs)
    try:
        for (lo, hi), r in zip(segs, results):
            sink.merge(hi, r)
            state.complete = state.next_lo >= cfg.hi
            state.save(spath)
            log.info("segment [%d, %d): pi_E=%d", lo, hi, state.pi_E)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        sink.close()
    return state


def scan(
    cfg: ScanConfig,
    csv_path: str | Path,
    hits_path: str | Path | None = None,
    max_segments: int | None = None,
) -> ScanState:
    """Fresh scan of [cfg.lo, cfg.hi); ``max_segments`` stops early (resumable)."""
    csv_path = Path(csv_path)
    if cfg.list_hits and hits_path is None:
        hits_path = csv_path.with_suffix(".hits.csv")
    hits = Path(hits_path) if cfg.list_hits else None
    state = ScanState(cfg.fingerprint(), cfg.lo)
    sink = _Sink(cfg, csv_path, hits, state)
    sink.open(fresh=True)
    state.save(state_path(csv_path))
    return _run(cfg, sink, max_segments)


def resume(
    cfg: ScanConfig,
    csv_path: str | Path,
    hits_path: str | Path | None = None,
    max_segments: int | None = None,
) -> ScanState:
    """Continue an interrupted scan from its last merged segment."""
    csv_path = Path(csv_path)
    spath = state_path(csv_path)
    state = ScanState.load(spath)
    if state.fingerprint != cfg.fingerprint():
        raise ResumeError(
            f"{spath} was written by a different configuration "
            f"({state.fingerprint} != {cfg.fingerprint()})"
        )
    if state.complete:
        return state
    if cfg.list_hits and hits_path is None:
        hits_path = csv_path.with_suffix(".hits.csv")
    hits = Path(hits_path) if cfg.list_hits else None
    sink = _Sink(cfg, csv_path, hits, state)
    sink.open(fresh=False)
    return _run(cfg, sink, max_segments)


def _num(s: str) -> int | float:
    try:
        return int(s)
    except ValueError:
        return float(s)


def read_checkpoints(path: str | Path) -> list[tuple[int, int, int, int]]:
    """(x, pi_D, pi_E, pi_E_prime) rows of a checkpoint CSV.

    Counts written by a scan are integers; decimal values (model data) are
    accepted as floats.
    """
    rows = []
    with open(path) as fh:
        header = fh.readline()
        if header.strip().split(",")[:4] != ["x", "pi_D", "pi_E", "pi_E_prime"]:
            raise ValueError(f"{path}: not a checkpoint file")
        for line in fh:
            if line.strip():
                x, a, b, c, *_ = line.split(",")
                rows.append((_num(x), _num(a), _num(b), _num(c)))
    return rows
