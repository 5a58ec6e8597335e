import pytest

from eisenstein.infrastructure import (
    METHODS,
    EisensteinResult,
    eisenstein_residue,
    full_walk_residue,
    giant_step_cap,
)
from eisenstein.oracle import oracle_residue, pell_fundamental_unit
from eisenstein.residue import permuted_log_table
from eisenstein.sieve import enumerate_D


@pytest.mark.parametrize("d, t", [(5, 1), (13, 2), (21, 1), (29, 1), (1901, 0), (7053, 0)])
def test_spec_examples(d, t):
    r = eisenstein_residue(d)
    assert r.residue == t
    assert r.eisenstein == (t == 0)
    assert r.method in METHODS


def test_rejects_wrong_class():
    with pytest.raises(ValueError):
        eisenstein_residue(17)


def test_full_walk_regulator():
    for d in (5, 1901, 99989):
        r = full_walk_residue(d)
        assert r.regulator == pytest.approx(pell_fundamental_unit(d).log(), rel=1e-10)


@pytest.mark.parametrize("backend", ["exact", "bloom"])
def test_matches_oracle_below_20000(backend):
    for d in enumerate_D(0, 20000):
        r = eisenstein_residue(d, backend)
        assert r.residue == oracle_residue(d), d
        assert r.valuation_faults == 0


def test_giant_steps_are_exercised():
    seen = {eisenstein_residue(d).method for d in enumerate_D(10**6, 10**6 + 3000)}
    assert "bsgs" in seen


def test_regulator_from_bsgs():
    for d in enumerate_D(10**6, 10**6 + 400):
        r = eisenstein_residue(d)
        if r.method == "bsgs":
            assert r.regulator == pytest.approx(pell_fundamental_unit(d).log(), rel=1e-8)


def test_fault_injection_changes_nonzero_residues():
    with permuted_log_table():
        assert eisenstein_residue(13).residue == 1
        assert eisenstein_residue(1901).residue == 0


def test_cap_is_positive_and_grows():
    assert 0 < giant_step_cap(5) < giant_step_cap(10**9)


def test_result_type():
    r = EisensteinResult(5, 1, "full_walk", 1, 0, 0, 0.48)
    assert not r.eisenstein and r.valuation_faults == 0
