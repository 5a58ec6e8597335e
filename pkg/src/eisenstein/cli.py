"""Command-line interface: ``eisenstein {scan,check,validate,constants,fit}``.

Exit codes: 0 success, 1 validation mismatch, 2 invalid input or config,
3 I/O failure, 4 internal invariant failure, 130 interrupted.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, kernel, oracle, scan
from .sieve import enumerate_D, small_primes

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3, 4
TRIAL_DIVISION_BOUND = 10**7

# config-file keys and how to parse them; flags use the same names
CONFIG_KEYS = {
    "lo": int,
    "hi": int,
    "workers": int,
    "segment_size": int,
    "stride": int,
    "backend": str,
    "fpr": float,
    "out": str,
    "hits": str,
    "list": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "timing": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "impl": str,
    "oracle_limit": int,
}
DEFAULTS = {
    "lo": 0,
    "hi": None,
    "workers": 1,
    "segment_size": 1 << 20,
    "stride": 10**6,
    "backend": "exact",
    "fpr": 1e-3,
    "out": "checkpoints.csv",
    "hits": None,
    "list": False,
    "timing": True,
    "impl": None,
    "oracle_limit": oracle.ORACLE_LIMIT,
}


class UsageError(Exception):
    pass


def _int(s: str) -> int:
    """Integer that also accepts 1e8 and 10**8 style input."""
    s = s.strip().replace("_", "")
    try:
        return int(s)
    except ValueError:
        pass
    if "**" in s:
        b, e = s.split("**", 1)
        return int(b) ** int(e)
    f = float(s)
    if not f.is_integer():
        raise ValueError(f"not an integer: {s}")
    return int(f)


CONFIG_KEYS.update({k: _int for k in ("lo", "hi", "workers", "segment_size", "stride", "oracle_limit")})


def read_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise OSError(f"cannot read config {path}: {e}") from e
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (t.strip() for t in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {k!r}")
        try:
            out[k] = CONFIG_KEYS[k](v)
        except ValueError as e:
            raise UsageError(f"{path}:{n}: bad value for {k}: {e}") from e
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    """defaults < config file < flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config_file(args.config))
    for k in CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    return cfg


# --- subcommands ----------------------------------------------------------

def cmd_scan(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if cfg["hi"] is None:
        raise UsageError("scan needs --hi (flag or config file)")
    if cfg["hits"] is not None:
        cfg["list"] = True
    if cfg["impl"] is not None and cfg["impl"] not in kernel.available_impls():
        raise UsageError(f"implementation {cfg['impl']!r} unavailable")
    try:
        sc = scan.ScanConfig(
            lo=cfg["lo"],
            hi=cfg["hi"],
            segment_size=cfg["segment_size"],
            stride=cfg["stride"],
            workers=cfg["workers"],
            backend=cfg["backend"],
            fpr=cfg["fpr"],
            list_hits=cfg["list"],
            timing=cfg["timing"],
            impl=cfg["impl"],
        )
    except ValueError as e:
        raise UsageError(str(e)) from e
    run = scan.resume if args.resume else scan.scan
    try:
        st = run(sc, cfg["out"], cfg["hits"], max_segments=args.max_segments)
    except scan.ResumeError as e:
        raise UsageError(str(e)) from e
    except FileNotFoundError as e:
        raise OSError(str(e)) from e
    print(f"range=[{sc.lo},{st.next_lo}) examined={st.pi_D} pi_E={st.pi_E} pi_E_prime={st.pi_EP}")
    print(f"complete={str(st.complete).lower()} valuation_faults={st.valuation_faults} "
          f"kernel_failures={st.kernel_failures}")
    print("methods " + " ".join(f"{k}={v}" for k, v in sorted(st.methods.items())))
    return EXIT_OK


def squarefree_status(d: int, bound: int = TRIAL_DIVISION_BOUND) -> tuple[bool, bool]:
    """(squarefree, proven) by trial division with primes up to ``bound``.

    After stripping all primes <= B the cofactor m has only prime factors
    > B, so m < B^3 is squarefree unless it is a perfect square.
    """
    B = min(bound, math.isqrt(d))
    m = d
    if B >= 2:
        ps = small_primes(B)
        if d < 2**63:
            ps = ps[np.asarray(d, dtype=np.int64) % ps == 0]
        for p in ps.tolist():
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return False, True
    if m == 1:
        return True, True
    r = math.isqrt(m)
    if r * r == m:
        return False, True
    if m < (B + 1) ** 3 or B == math.isqrt(d):
        return True, True
    return True, False


def cmd_check(args: argparse.Namespace) -> int:
    try:
        d = _int(args.d)
    except ValueError as e:
        raise UsageError(f"bad d: {args.d}") from e
    if d <= 0 or d % 8 != 5:
        raise UsageError(f"d={d} is not a positive integer = 5 (mod 8)")
    sqf, proven = squarefree_status(d)
    if not sqf:
        raise UsageError(f"d={d} is not squarefree")
    if not proven:
        logging.warning("d=%d: no square factor below %d; squarefreeness assumed", d, TRIAL_DIVISION_BOUND)
    r = kernel.eisenstein_residue(d, args.backend, args.fpr, args.impl)
    print(f"d={d}")
    print(f"t={r.residue}")
    print(f"eisenstein={str(r.eisenstein).lower()}")
    print(f"method={r.method}")
    print(f"baby_steps={r.baby_steps}")
    print(f"giant_steps={r.giant_steps}")
    print(f"regulator={r.regulator:.6f}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    limit = args.limit
    if not 0 <= limit <= oracle.ORACLE_LIMIT:
        raise UsageError(f"--limit must lie in [0, {oracle.ORACLE_LIMIT}]")
    ds = np.array(enumerate_D(0, limit + 1), dtype=np.int64) if limit >= 5 else np.zeros(0, np.int64)
    res = kernel.batch_residues(ds, args.backend, args.fpr, args.impl, fault=args.inject_fault)
    bad = []
    for d, t, vf in zip(ds.tolist(), res["residue"].tolist(), res["valuation_faults"].tolist()):
        want = oracle.oracle_residue(d)
        odd = oracle.odd_pell_solution_exists(d)
        if t != want:
            bad.append(f"d={d} residue bsgs={t} oracle={want}")
        if (t == 0) == odd:
            bad.append(f"d={d} residue={t} odd_solution={str(odd).lower()}")
        if vf:
            bad.append(f"d={d} valuation_faults={vf}")
    print(f"validated {len(ds)} d <= {limit}: {len(bad)} mismatches")
    for line in bad[:50]:
        print(line)
    if len(bad) > 50:
        print(f"... {len(bad) - 50} more")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_constants(args: argparse.Namespace) -> int:
    try:
        rep = analysis.compute_C56(args.prime_cutoff)
    except ValueError as e:
        raise UsageError(str(e)) from e
    print(rep.text())
    if args.bounds is not None:
        print(analysis.bounds_report(args.bounds, rep.C56, args.measured))
    if args.json:
        print(rep.json())
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    try:
        rows = scan.read_checkpoints(args.path)
    except OSError:
        raise
    except (ValueError, IndexError) as e:
        raise UsageError(f"{args.path}: {e}") from e
    rows = [r for r in rows if (args.xmin is None or r[0] >= args.xmin) and (args.xmax is None or r[0] <= args.xmax)]
    try:
        rep = analysis.fit_all(rows, primes=not args.no_primes)
    except analysis.FitError as e:
        raise UsageError(f"{args.path}: {e}") from e
    print(rep.text())
    if args.json:
        print(rep.json())
    return EXIT_OK


# --- parser ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _impl_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--impl", choices=["c", "python"], default=None,
                   help="residue kernel (default: compiled if available)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eisenstein", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="count pi_D, pi_E, pi_E_prime over [lo, hi)")
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--lo", type=_int)
    p.add_argument("--hi", type=_int)
    p.add_argument("--workers", type=_int)
    p.add_argument("--segment-size", dest="segment_size", type=_int)
    p.add_argument("--stride", type=_int)
    p.add_argument("--backend", choices=["exact", "bloom"])
    p.add_argument("--fpr", type=float)
    p.add_argument("--out")
    p.add_argument("--hits", help="hit list path (implies --list)")
    p.add_argument("--list", action="store_const", const=True, default=None)
    p.add_argument("--no-timing", dest="timing", action="store_const", const=False, default=None,
                   help="write 0 in the elapsed column")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--max-segments", type=_int, default=None, help=argparse.SUPPRESS)
    _impl_arg(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("check", help="residue of the fundamental unit for one d")
    p.add_argument("d")
    p.add_argument("--backend", choices=["exact", "bloom"], default="exact")
    p.add_argument("--fpr", type=float, default=1e-3)
    _impl_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("validate", help="compare against the exact oracle for d <= limit")
    p.add_argument("--limit", type=_int, default=10**5)
    p.add_argument("--backend", choices=["exact", "bloom"], default="exact")
    p.add_argument("--fpr", type=float, default=1e-3)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    _impl_arg(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("constants", help="C1, C_5/6 and their ingredients")
    p.add_argument("--prime-cutoff", type=_int, default=10**6)
    p.add_argument("--bounds", type=float, default=None, metavar="X", help="also print bounds at X")
    p.add_argument("--measured", type=_int, default=None, help="measured pi_E(X) for the bounds")
    p.add_argument("--json", action="store_true", help="append a JSON summary line")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("fit", help="fit secondary-term coefficients to a checkpoint CSV")
    p.add_argument("path")
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--no-primes", action="store_true", help="skip the prime-subsequence fit")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fit)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        # state files are rewritten after each merged segment, so --resume picks up here
        print("interrupted; rerun with --resume to continue", file=sys.stderr)
        return 130
    except ArithmeticError as e:
        print(f"internal invariant failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
