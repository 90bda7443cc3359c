import pytest
from hypothesis import given, settings, strategies as st

from gpaley.counting import (
    PowerSystem,
    count_solutions,
    inclusion_exclusion_check,
    mixed_sweep,
    sweep_record,
    residue_bounds,
    residue_sweep,
    verify_mixed_bound,
    verify_residue_bound,
)
from gpaley.ffield import field_of_order, make_field

FIELDS = [(13, 1), (3, 2), (2, 4), (5, 2), (11, 2)]


def naive_count(F, k, eq, ineq):
    e = (F.q - 1) // k
    good = 0
    for x in range(F.q):
        vals = [F.add(a, x) for a in eq + ineq]
        hits = [v != 0 and F.pow(v, e) == 1 for v in vals]
        if all(hits[: len(eq)]) and not any(hits[len(eq):]):
            good += 1
    return good


def test_cube_residue_examples():
    F = make_field(13)
    assert count_solutions(PowerSystem(F, 3, (0,))) == 4
    assert count_solutions(PowerSystem(F, 3, (0,), (1,))) == 4
    assert count_solutions(PowerSystem(F, 3, ())) == 13


def test_inclusion_exclusion_example():
    rep = inclusion_exclusion_check(make_field(13), 3, [0, 1, 2], [0])
    assert rep.passed
    assert rep.details["N0"] == 4 and sum(rep.details["terms"]) == 4


def test_system_validation():
    F = make_field(13)
    with pytest.raises(ValueError):
        PowerSystem(F, 5, (0,))
    with pytest.raises(ValueError):
        PowerSystem(F, 3, (0, 0))
    with pytest.raises(ValueError):
        PowerSystem(F, 3, (0,), (0,))
    with pytest.raises(ValueError):
        verify_residue_bound(F, 3, [0])
    with pytest.raises(ValueError):
        inclusion_exclusion_check(F, 3, [0, 1], [5])


def test_residue_bound_report_fields():
    rep = verify_residue_bound(field_of_order(169), 2, [0, 1])
    lo, hi = residue_bounds(169, 2, 2)
    assert rep.details["lower"] == lo and rep.details["upper"] == hi
    assert rep.passed and rep.hard
    assert rep.margin == min(rep.details["N"] - lo, hi - rep.details["N"])
    rec = sweep_record(rep)
    assert list(rec) == ["q", "k", "t", "n", "alphas", "N", "lower", "upper", "margin", "pass"]


def test_mixed_bound_reduces_to_equalities_only_bound():
    F = field_of_order(121)
    rep = verify_mixed_bound(PowerSystem(F, 2, (3, 7, 9)))
    assert rep.details["error_bound"] == pytest.approx(3 * 121**0.5)
    assert rep.details["equalities_only_error_bound"] == rep.details["error_bound"]


def test_sweeps_are_deterministic():
    F = field_of_order(121)
    a = [r.to_dict() for r in residue_sweep(F, 3, 2, 20, seed=4)]
    b = [r.to_dict() for r in residue_sweep(F, 3, 2, 20, seed=4)]
    assert a == b
    pairs = mixed_sweep(F, 2, 2, 4, 10, seed=1)
    assert all(m.passed and ie.passed for m, ie in pairs)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_vectorized_count_matches_naive(pd, data):
    F = make_field(*pd)
    k = data.draw(st.sampled_from([k for k in range(1, 7) if (F.q - 1) % k == 0]))
    alphas = data.draw(st.lists(st.integers(0, F.q - 1), min_size=0, max_size=4, unique=True))
    t = data.draw(st.integers(0, len(alphas)))
    eq, ineq = tuple(alphas[:t]), tuple(alphas[t:])
    assert count_solutions(PowerSystem(F, k, eq, ineq)) == naive_count(F, k, eq, ineq)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_inclusion_exclusion_property(pd, data):
    F = make_field(*pd)
    k = data.draw(st.sampled_from([k for k in range(2, 7) if (F.q - 1) % k == 0]))
    alphas = data.draw(st.lists(st.integers(0, F.q - 1), min_size=1, max_size=5, unique=True))
    t = data.draw(st.integers(1, len(alphas)))
    assert inclusion_exclusion_check(F, k, alphas, alphas[:t]).passed


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_counts_invariant_under_translation_and_subgroup_scaling(pd, data):
    F = make_field(*pd)
    k = data.draw(st.sampled_from([k for k in range(2, 7) if (F.q - 1) % k == 0]))
    alphas = data.draw(st.lists(st.integers(0, F.q - 1), min_size=2, max_size=4, unique=True))
    c = data.draw(st.integers(0, F.q - 1))
    h = F.pow(F.generator, k * data.draw(st.integers(0, F.q)))
    base = count_solutions(PowerSystem(F, k, tuple(alphas)))
    shifted = tuple(F.add(a, c) for a in alphas)
    scaled = tuple(F.mul(h, a) for a in alphas)
    assert count_solutions(PowerSystem(F, k, shifted)) == base
    assert count_solutions(PowerSystem(F, k, scaled)) == base
