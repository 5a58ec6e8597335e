import math
import subprocess
import sys

import pytest

from eisenstein.cli import main, squarefree_status


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "1901")
    assert code == 0 and "eisenstein=true" in out
    code, out, _ = run(capsys, "check", "5")
    assert code == 0 and "eisenstein=false" in out and "t=1" in out


@pytest.mark.parametrize("d", ["45", "7", "abc", "-3"])
def test_check_rejects(capsys, d):
    assert run(capsys, "check", d)[0] == 2


def test_squarefree_status():
    assert squarefree_status(45) == (False, True)
    assert squarefree_status(1901) == (True, True)
    big = 1000000007 * 998244353
    assert squarefree_status(big) == (True, True)
    assert squarefree_status(1000000007**2 * 5) == (False, True)
    # three primes above the trial bound: squarefree but unproven
    q = 10000019, 10000079, 10000103
    assert squarefree_status(math.prod(q)) == (True, False)


def test_scan_tiny(capsys, tmp_path):
    out_csv = tmp_path / "cp.csv"
    code, out, _ = run(capsys, "scan", "--lo", "0", "--hi", "100", "--list", "--out", str(out_csv))
    assert code == 0 and "examined=11" in out
    assert (tmp_path / "cp.hits.csv").exists()


def test_scan_missing_hi(capsys, tmp_path):
    assert run(capsys, "scan", "--lo", "0", "--out", str(tmp_path / "x.csv"))[0] == 2


def test_scan_bad_config_values(capsys, tmp_path):
    assert run(capsys, "scan", "--hi", "100", "--fpr", "0.5", "--out", str(tmp_path / "x.csv"))[0] == 2
    assert run(capsys, "scan", "--hi", "100", "--backend", "btree")[0] == 2


def test_scan_io_error(capsys, tmp_path):
    assert run(capsys, "scan", "--hi", "100", "--out", str(tmp_path / "no" / "dir" / "x.csv"))[0] == 3


def test_config_file_precedence(capsys, tmp_path):
    conf = tmp_path / "scan.conf"
    conf.write_text(f"# comment\nhi = 5000\nstride=1000\nout={tmp_path / 'c.csv'}\ntiming=false\n")
    code, out, _ = run(capsys, "scan", "--config", str(conf), "--stride", "2500")
    assert code == 0
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["2500", "5000"]
    conf.write_text("hi = 5000\nbogus = 1\n")
    assert run(capsys, "scan", "--config", str(conf))[0] == 2
    assert run(capsys, "scan", "--config", str(tmp_path / "missing.conf"))[0] == 3


def test_scan_resume_via_cli(capsys, tmp_path):
    args = ["scan", "--hi", "100000", "--segment-size", "16384", "--stride", "20000", "--no-timing"]
    full, part = str(tmp_path / "full.csv"), str(tmp_path / "part.csv")
    assert run(capsys, *args, "--out", full)[0] == 0
    assert run(capsys, *args, "--out", part, "--max-segments", "2")[0] == 0
    assert run(capsys, *args, "--out", part, "--resume")[0] == 0
    assert open(full, "rb").read() == open(part, "rb").read()
    assert run(capsys, *args, "--out", part, "--resume")[0] == 0
    code = run(capsys, "scan", "--hi", "100000", "--segment-size", "8192", "--stride", "20000",
               "--no-timing", "--out", part, "--resume")[0]
    assert code == 2


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--limit", "100000")
    assert code == 0 and "0 mismatches" in out
    assert run(capsys, "validate", "--limit", "0")[0] == 0
    assert run(capsys, "validate", "--limit", "20000000")[0] == 2


def test_validate_injected_fault(capsys):
    code, out, _ = run(capsys, "validate", "--limit", "3000", "--inject-fault")
    assert code == 1 and "d=5 " in out


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--prime-cutoff", "100000", "--json")
    assert code == 0 and "C_5/6         = -0.0376" in out
    assert run(capsys, "constants", "--prime-cutoff", "1000")[0] == 2


def test_fit(capsys, tmp_path):
    C1 = 1 / (3 * math.pi**2)
    p = tmp_path / "cp.csv"
    lines = ["x,pi_D,pi_E,pi_E_prime,elapsed_s"]
    for k in range(12, 33):
        x = round(10 ** (k / 4))
        lines.append(f"{x},0,{x * C1 - 0.024 * x ** (5 / 6)!r},0,0")
    p.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "fit", str(p), "--no-primes")
    assert code == 0 and "c             = -0.024000" in out
    two = tmp_path / "two.csv"
    two.write_text("\n".join(lines[:3]) + "\n")
    assert run(capsys, "fit", str(two))[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("hello\n")
    assert run(capsys, "fit", str(bad))[0] == 2
    assert run(capsys, "fit", str(tmp_path / "nope.csv"))[0] == 3


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "eisenstein.cli", "check", "7053"], capture_output=True, text=True)
    assert r.returncode == 0 and "eisenstein=true" in r.stdout
