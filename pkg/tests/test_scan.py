import json

import pytest

from eisenstein.oracle import oracle_residue
from eisenstein.scan import (
    CSV_HEADER,
    HITS_HEADER,
    ResumeError,
    ScanConfig,
    read_checkpoints,
    resume,
    scan,
    state_path,
)
from eisenstein.sieve import enumerate_D


def cfg(**kw):
    base = dict(lo=0, hi=200_000, segment_size=1 << 15, stride=25_000, list_hits=True, timing=False)
    base.update(kw)
    return ScanConfig(**base)


def test_tiny_scan_matches_oracle(tmp_path):
    st = scan(cfg(hi=100, stride=50), tmp_path / "cp.csv")
    assert st.pi_D == 11
    assert st.pi_E == sum(oracle_residue(d) == 0 for d in enumerate_D(0, 100))
    lines = (tmp_path / "cp.csv").read_text().splitlines()
    assert lines[0] + "\n" == CSV_HEADER
    assert [l.split(",")[0] for l in lines[1:]] == ["50", "100"]


def test_counters_and_hits(tmp_path):
    c = cfg()
    st = scan(c, tmp_path / "cp.csv")
    rows = read_checkpoints(tmp_path / "cp.csv")
    assert [r[0] for r in rows] == list(range(25_000, 200_001, 25_000))
    for x, pd, pe, pep in rows:
        assert pep <= pe <= pd
        assert pd == len(enumerate_D(0, x))
    hits = (tmp_path / "cp.hits.csv").read_text().splitlines()
    assert hits[0] + "\n" == HITS_HEADER
    hit_ds = [int(h.split(",")[0]) for h in hits[1:]]
    assert len(hit_ds) == st.pi_E == rows[-1][2]
    sample = hit_ds[::50]
    assert all(oracle_residue(d) == 0 for d in sample)
    assert 1901 in hit_ds and 7053 in hit_ds


def test_crlf_free_and_elapsed_zero_without_timing(tmp_path):
    scan(cfg(hi=50_000), tmp_path / "cp.csv")
    raw = (tmp_path / "cp.csv").read_bytes()
    assert b"\r" not in raw
    assert all(l.endswith(b",0") for l in raw.splitlines()[1:])


def test_segment_size_independence(tmp_path):
    scan(cfg(segment_size=1 << 14), tmp_path / "a.csv")
    scan(cfg(segment_size=30_001), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.hits.csv").read_bytes() == (tmp_path / "b.hits.csv").read_bytes()


def test_workers_do_not_change_output(tmp_path):
    scan(cfg(workers=1), tmp_path / "a.csv")
    scan(cfg(workers=3), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.hits.csv").read_bytes() == (tmp_path / "b.hits.csv").read_bytes()


def test_interrupt_and_resume(tmp_path):
    c = cfg()
    scan(c, tmp_path / "full.csv")
    st = scan(c, tmp_path / "part.csv", max_segments=2)
    assert not st.complete
    # junk past the recorded offsets is discarded on resume
    with open(tmp_path / "part.csv", "a") as fh:
        fh.write("999,1,1,1,0\n")
    st = resume(c, tmp_path / "part.csv", max_segments=1)
    assert not st.complete
    st = resume(c, tmp_path / "part.csv")
    assert st.complete
    for name in ("csv", "hits.csv"):
        assert (tmp_path / f"full.{name}").read_bytes() == (tmp_path / f"part.{name}").read_bytes()
    before = (tmp_path / "part.csv").read_bytes()
    assert resume(c, tmp_path / "part.csv").complete
    assert (tmp_path / "part.csv").read_bytes() == before


def test_resume_rejects_changed_config(tmp_path):
    scan(cfg(), tmp_path / "cp.csv", max_segments=1)
    with pytest.raises(ResumeError):
        resume(cfg(segment_size=1 << 16), tmp_path / "cp.csv")


def test_state_file(tmp_path):
    c = cfg(hi=60_000)
    scan(c, tmp_path / "cp.csv")
    st = json.loads(state_path(tmp_path / "cp.csv").read_text())
    assert st["fingerprint"] == c.fingerprint()
    assert st["complete"] and st["next_lo"] == 60_000
    assert st["valuation_faults"] == 0 and st["kernel_failures"] == 0
    assert sum(st["methods"].values()) == st["pi_D"]


def test_fingerprint_ignores_workers():
    assert cfg(workers=1).fingerprint() == cfg(workers=8).fingerprint()
    assert cfg().fingerprint() != cfg(stride=10).fingerprint()


@pytest.mark.parametrize("bad", [dict(lo=5, hi=5), dict(stride=0), dict(backend="btree"), dict(fpr=0.5)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        cfg(**bad)


def test_read_checkpoints_rejects_other_files(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_checkpoints(p)
