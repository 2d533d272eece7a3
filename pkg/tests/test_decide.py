"""Decision procedure tests: verdict discipline, witness soundness, the
reduction plumbing, and the serialization roundtrip.

The expensive complete-mode runs (the 60-second corpus) live in the
acceptance suite; here we stick to equations that decide in well under a
second so the whole file stays quick.
"""

import json

import pytest

from lpregroup import decide, fnz, lexfn, term
from lpregroup.decide import (FAILS, UNKNOWN, VALID, Verdict, Witness,
                              verify_witness, witness_from_json)


# ------------------------------------------------------------ valid corpus

@pytest.mark.parametrize("proc", [decide.decide_fnz, decide.decide_lpn])
@pytest.mark.parametrize("eq,n", [
    ("1 <= x^(-1) x", 1),
    ("1 <= x x^l", 2),
    ("x^l^r = x", 3),
    ("x = x", 2),
])
def test_valid_complete(proc, eq, n):
    v = proc(eq, n, complete=True)
    assert v.status == VALID
    assert v.witness is None
    assert v.exit_code == 0


def test_valid_with_refutations():
    # over 1-periodic functions (translations) the left inverse is exact,
    # so this holds at n=1 even though failing diagram candidates exist
    v = decide.decide_fnz("1 <= x^l x", 1, complete=True)
    assert v.status == VALID
    assert v.stats["failing_candidates"] > 0
    assert v.stats["embeddings_refuted"] == v.stats["failing_candidates"]


def test_trivial_conjunction_valid_even_capped():
    # every conjunct drops as trivially true, so capped mode may say valid
    v = decide.decide_fnz("1 <= 1 | x", 3)
    assert v.status == VALID
    assert v.mode == "capped"


# ---------------------------------------------------------- failing corpus

@pytest.mark.parametrize("n", [1, 2, 3])
def test_one_below_x_fails_fnz(n):
    v = decide.decide_fnz("1 <= x", n)
    assert v.status == FAILS
    assert v.exit_code == 1
    w = v.witness
    assert w.space == "FnZ"
    assert verify_witness("1 <= x", w)
    # the found witness is the canonical one: x one step below the point
    assert fnz.eval(w.assignment["x"], w.point) == w.point - 1


@pytest.mark.parametrize("n", [1, 2])
def test_one_below_x_fails_lpn(n):
    v = decide.decide_lpn("1 <= x", n)
    assert v.status == FAILS
    assert v.witness.space == "FnQxZ"
    assert verify_witness("1 <= x", v.witness)


def test_left_inverse_strict_at_period_two():
    v = decide.decide_fnz("1 <= x^l x", 2)
    assert v.status == FAILS
    assert verify_witness("1 <= x^l x", v.witness)


def test_inverses_agree_only_for_period_one():
    assert decide.decide_lpn("x^l = x^r", 2).status == FAILS
    v = decide.decide_fnz("x^l = x^r", 2)
    assert v.status == FAILS
    assert verify_witness("x^l = x^r", v.witness)
    assert v.witness.conjunct in (0, 1)


def test_commutativity_separation_at_period_one():
    # fails in the variety, but the integer-chain functions at n=1 are
    # translations and commute; the complete-mode valid side is exercised
    # in the acceptance suite
    v = decide.decide_lpn("x y = y x", 1)
    assert v.status == FAILS
    assert verify_witness("x y = y x", v.witness)
    assert set(v.witness.assignment) == {"x", "y"}
    u = decide.decide_fnz("x y = y x", 1)
    assert u.status != FAILS


# ------------------------------------------------------- witness soundness

def test_verify_rejects_wrong_point():
    # h(0) = -1 < 0 but h(1) = 1, so only the even points exhibit the failure
    h = fnz.PeriodicFn(2, (-1, 1))
    good = Witness("FnZ", 2, {"x": h}, 0)
    assert verify_witness("1 <= x", good)
    assert not verify_witness("1 <= x", Witness("FnZ", 2, {"x": h}, 1))


def test_verify_rejects_identity_assignment():
    w = Witness("FnZ", 2, {"x": fnz.id_fn(2)}, 0)
    assert not verify_witness("1 <= x", w)
    wl = Witness("FnQxZ", 1, {"x": lexfn.identity(1)}, (0, 0))
    assert not verify_witness("1 <= x", wl)


def test_verify_requires_all_variables():
    w = Witness("FnZ", 1, {}, 0)
    with pytest.raises(KeyError):
        verify_witness("1 <= x", w)


def test_verify_rejects_out_of_range_conjunct():
    v = decide.decide_fnz("1 <= x", 1)
    w = v.witness
    assert not verify_witness("1 <= x", Witness(w.space, w.n, w.assignment,
                                                w.point, conjunct=5))


def test_witness_covers_all_equation_variables():
    # y does not occur in the failing conjunct's realization, but the
    # witness must still assign it (identity) to instantiate the equation
    v = decide.decide_fnz("x & y x <= x", 1)
    if v.status == FAILS:
        assert set(v.witness.assignment) == {"x", "y"}


# --------------------------------------------------------------- reduction

def test_dlp_reduced_period_exact():
    assert term.equation_size(term.parse("x <= x^l")) == 3
    v = decide.decide_dlp("x <= x^l")
    assert v.n == 2 ** 3 * 3 ** 4 == 648


def test_dlp_override_reproduces_failure():
    v = decide.decide_dlp("1 <= x", n_override=1)
    assert v.status == FAILS and v.n == 1
    assert verify_witness("1 <= x", v.witness)


def test_dlp_refuses_impractical_complete_run():
    with pytest.raises(ValueError):
        decide.decide_dlp("x y = y x", complete=True)
    # same equation is fine with an override
    v = decide.decide_dlp("x y = y x", complete=True, n_override=1)
    assert v.status == FAILS


# ----------------------------------------------------------------- budgets

def test_budget_exhaustion_reports_unknown():
    v = decide.decide_fnz("x^l = x^r", 1, complete=True, budget=500)
    assert v.status == UNKNOWN
    assert v.exit_code == 2
    assert v.stats["nodes"] <= 501


def test_capped_never_claims_valid_with_candidates_pending():
    # capped mode refutes these candidates only up to a practical height,
    # which is not a proof
    v = decide.decide_fnz("1 <= x^l x", 1)
    assert v.status == UNKNOWN


def test_monotone_valid_in_variety_implies_valid_on_integers():
    for eq, n in [("1 <= x x^l", 2), ("x^l^r = x", 1)]:
        if decide.decide_lpn(eq, n, complete=True).status == VALID:
            assert decide.decide_fnz(eq, n, complete=True).status == VALID


# ---------------------------------------------------------- serialization

@pytest.mark.parametrize("proc,eq,n", [
    (decide.decide_fnz, "1 <= x", 2),
    (decide.decide_lpn, "x^l = x^r", 2),
    (decide.decide_lpn, "x y = y x", 1),
])
def test_witness_json_roundtrip(proc, eq, n):
    v = proc(eq, n)
    blob = json.dumps(v.to_json())
    data = json.loads(blob)
    assert data["status"] == FAILS
    w = witness_from_json(data["witness"])
    assert verify_witness(eq, w)
    assert w.point == v.witness.point


def test_verdict_json_shape():
    v = decide.decide_fnz("1 <= x x^l", 1, complete=True)
    data = v.to_json()
    assert data["status"] == VALID
    assert data["mode"] == "complete"
    assert data["witness"] is None
    assert data["stats"]["failing_candidates"] == 0


def test_parallel_run_matches_single_threaded():
    a = decide.decide_lpn("x^l = x^r", 2)
    b = decide.decide_lpn("x^l = x^r", 2, jobs=2)
    assert a.status == b.status == FAILS
    assert a.witness.point == b.witness.point
    assert a.witness.to_json() == b.witness.to_json()


def test_rejects_nonpositive_period():
    with pytest.raises(ValueError):
        decide.decide_fnz("1 <= x", 0)
