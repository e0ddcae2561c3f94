import numpy as np
import pytest
from hypothesis import given, strategies as st

from braidforge.convolutions import HaraokaReadings, haraoka_convolution
from braidforge.correspond import (
    adjudicate_readings,
    all_readings,
    certify_pairs,
    induction_step_residuals,
    tagged_word_pairs,
    verify_antirep_words,
    verify_main_theorem,
    word_pair_corpus,
)
from braidforge.errors import PreconditionError
from braidforge.reps import SemidirectRep, restrict_to_pure, scalar_seed
from braidforge.suites import Case, reference_rep, scalar_suite, tower_suite

T = np.exp(1j * np.pi / 3)


def test_scalar_example_under_default_readings():
    rep = verify_main_theorem(scalar_seed(3, T, 1.0), np.exp(1j * np.pi / 5))
    assert rep.passed and rep.max_residual <= 1e-10
    # i = 0 rows come from the same assembly code: exactly equal
    assert all(rep.residuals[(0, j)] == 0.0 for j in (1, 2, 3))


def test_depth_one_tower_n3():
    case = tower_suite(3, ns=(3,))[0]
    assert case.rep.N == 3
    assert verify_main_theorem(case.rep, case.lam).max_residual <= 1e-9


def test_middle_block_as_printed_fails_on_noncommuting_input():
    case = tower_suite(3, ns=(3,))[0]
    literal = HaraokaReadings(middle="0j")
    rep = verify_main_theorem(case.rep, case.lam, readings=literal)
    assert not rep.passed
    assert rep.worst_pair() == (1, 3)


def test_middle_block_reading_is_invisible_on_scalars():
    case = scalar_suite(3, ns=(3,))[0]
    assert verify_main_theorem(case.rep, case.lam, readings=HaraokaReadings(middle="0j")).passed


def test_convention_a_fails_already_on_scalars():
    case = scalar_suite(3, ns=(3,))[0]
    assert not verify_main_theorem(case.rep, case.lam, convention="A").passed


def test_identity_suite_passes_every_reading_with_pivot_j():
    n = 3
    rep = SemidirectRep(n, 1, (np.eye(1),) * n, {i: np.eye(1) for i in range(1, n)})
    result = adjudicate_readings([Case("identity", rep, 1.0)], readings=all_readings())
    assert result.verdict == "multiple"
    assert sorted(result.passing, key=str) == sorted(
        [(c, rd) for c in "AB" for rd in all_readings() if rd.pivot == "j"], key=str)
    # with the shifted pivot, row 1 of N_01 is zero even for identity input
    failure = result.first_failure[("B", HaraokaReadings("j-1", "0i", "0i"))]
    assert "singular" in failure["error"]


def test_adjudication_isolates_one_combination():
    cases = scalar_suite(6, ns=(2, 3, 4)) + tower_suite(3)
    result = adjudicate_readings(cases)
    assert result.verdict == "unique"
    assert result.unique == ("B", HaraokaReadings("j", "0i", "0i"))
    scalar_only = adjudicate_readings(scalar_suite(6, ns=(2, 3, 4)))
    assert {rd.pivot for conv, rd in scalar_only.passing} == {"j"}
    assert {rd.x_inverse for conv, rd in scalar_only.passing} == {"0i"}


def test_as_printed_readings_all_fail_on_towers():
    result = adjudicate_readings(tower_suite(3), readings=all_readings(include_middle=False))
    assert result.verdict == "none"
    smallest = result.first_failure[("B", HaraokaReadings("j", "0i", "0j"))]
    assert (smallest["n"], smallest["N"], smallest["pair"]) == (3, 3, [1, 3])


@pytest.mark.parametrize("case", scalar_suite(4, ns=(2, 3, 4)) + tower_suite(3), ids=lambda c: c.label)
def test_induction_step(case):
    assert max(induction_step_residuals(case.rep, case.lam).values()) <= 1e-9


def test_word_pairs_trivial_and_far_commutation():
    case = tower_suite(1, ns=(4,))[0]
    N = haraoka_convolution(restrict_to_pure(case.rep), case.lam)
    w = [((1, 2), 1), ((0, 3), -1)]
    assert verify_antirep_words(N, [(w, w)]).max_residual == 0.0
    # sigma_12 and sigma_34 on disjoint strands commute
    pair = ([((1, 2), 1), ((3, 4), 1)], [((3, 4), 1), ((1, 2), 1)])
    assert verify_antirep_words(N, [pair], reference=reference_rep(4)).max_residual <= 1e-9


def test_uncertified_pair_is_rejected():
    case = scalar_suite(2, ns=(3,))[0]
    N = haraoka_convolution(restrict_to_pure(case.rep), case.lam)
    bogus = ([((0, 1), 1)], [((0, 2), 1)])
    with pytest.raises(PreconditionError):
        verify_antirep_words(N, [bogus], reference=reference_rep(3))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_structural_pairs_all_certify(n):
    tagged = tagged_word_pairs(n)
    ok = certify_pairs([(a, b) for _, a, b in tagged], reference_rep(n))
    by_relation = {}
    for (family, _, _), good in zip(tagged, ok):
        if family.startswith("conjugation"):
            by_relation.setdefault(family, []).append(good)
        else:
            assert good, family
    # each conjugation relation holds in at least one orientation
    assert by_relation and all(any(v) for v in by_relation.values())


@given(st.integers(0, 2**16), st.sampled_from([2, 3, 4]))
def test_convolution_satisfies_certified_word_pairs(seed, n):
    case = scalar_suite(1, ns=(n,), seed=seed)[0]
    N = haraoka_convolution(restrict_to_pure(case.rep), case.lam)
    pairs = word_pair_corpus(n, seed=seed, random_words=2)
    ok = certify_pairs(pairs, reference_rep(n))
    good = [p for p, keep in zip(pairs, ok) if keep]
    assert verify_antirep_words(N, good).max_residual <= 1e-8


@pytest.mark.parametrize("case", tower_suite(9, depth=2), ids=lambda c: c.label)
def test_depth_two_towers(case):
    assert verify_main_theorem(case.rep, case.lam).max_residual <= 1e-9
