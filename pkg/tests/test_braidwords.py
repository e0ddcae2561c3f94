import pytest
from hypothesis import given, strategies as st

from braidforge.braidwords import (
    BraidWord,
    FreeWord,
    MixedWord,
    act_by_braid,
    artin_act,
    free_reduce,
    invert,
    parse_mixed,
    permutation_of,
    pure_braid_generator,
    tilde_pure_braid_generator,
    wada_act,
)
from braidforge.errors import InvalidInputError, ParseError

RANK = 6


def letters(rank=RANK, max_size=8):
    return st.lists(st.tuples(st.integers(1, rank), st.integers(-3, 3)), max_size=max_size)


def x(j, e=1, rank=3):
    return FreeWord(rank, ((j, e),))


def test_artin_action_on_generators():
    assert artin_act(1, 1, x(1)) == x(2)
    assert artin_act(1, 1, x(2)) == FreeWord(3, ((2, -1), (1, 1), (2, 1)))
    assert artin_act(1, 1, x(3)) == x(3)


def test_wada_action_on_generators():
    assert wada_act(2, 1, 1, x(2)) == FreeWord(3, ((2, -2), (1, 1), (2, 2)))
    assert wada_act(2, 1, -1, x(1)) == FreeWord(3, ((1, 2), (2, 1), (1, -2)))


def test_wada_zero_exponent_rejected():
    with pytest.raises(InvalidInputError):
        wada_act(0, 1, 1, x(1))


def test_free_word_is_reduced_on_construction():
    assert FreeWord(3, ((1, 1), (2, 1), (2, -1), (1, -1))).letters == ()
    assert FreeWord(3, ((1, 2), (1, 1))).letters == ((1, 3),)


def test_pure_generators_shape():
    assert pure_braid_generator(1, 3, 3).letters == ((1, 1), (2, 2), (1, -1))
    assert tilde_pure_braid_generator(1, 3, 3).letters == ((1, -1), (2, -2), (1, 1))
    assert pure_braid_generator(2, 3, 4).letters == ((2, 2),)
    with pytest.raises(InvalidInputError):
        pure_braid_generator(2, 2, 3)


def test_permutation_of_transposition_and_pure():
    assert permutation_of(BraidWord(3, ((1, 1),))) == (2, 1, 3)
    assert permutation_of(BraidWord(3, ((1, 1), (2, 1)))) != (1, 2, 3)
    for i in range(1, 4):
        for j in range(i + 1, 5):
            assert permutation_of(pure_braid_generator(i, j, 4)) == (1, 2, 3, 4)
            assert permutation_of(tilde_pure_braid_generator(i, j, 4)) == (1, 2, 3, 4)


def test_text_form_round_trip():
    w = parse_mixed("s1 s2^-1 x3", 3)
    assert w.tokens == (("s", 1, 1), ("s", 2, -1), ("x", 3, 1))
    assert str(w) == "s1 s2^-1 x3"
    assert parse_mixed("", 3).tokens == ()


@pytest.mark.parametrize("bad", ["s0", "y1", "s1^", "x4", "s3"])
def test_text_form_rejects(bad):
    with pytest.raises(ParseError):
        parse_mixed(bad, 3)


def test_braid_word_rejects_zero_exponent():
    with pytest.raises(InvalidInputError):
        BraidWord(3, ((1, 0),))


@given(letters(), letters())
def test_free_reduction_is_confluent(a, b):
    # reducing in any grouping gives the same normal form
    assert free_reduce(free_reduce(a) + tuple(b)) == free_reduce(tuple(a) + free_reduce(b))
    assert free_reduce(free_reduce(a)) == free_reduce(a)


@given(letters())
def test_word_times_inverse_is_empty(a):
    w = FreeWord(RANK, tuple(a))
    assert (w * w.inverse()).letters == ()
    assert invert(invert(w)) == w


nonzero_k = st.sampled_from([-3, -2, -1, 1, 2, 3])


@given(nonzero_k, st.integers(3, 6), st.data())
def test_actions_satisfy_braid_relations(k, n, data):
    w = FreeWord(n, tuple(data.draw(letters(rank=n, max_size=5))))
    i = data.draw(st.integers(1, n - 2))
    word_a = BraidWord(n, ((i, 1), (i + 1, 1), (i, 1)))
    word_b = BraidWord(n, ((i + 1, 1), (i, 1), (i + 1, 1)))
    assert act_by_braid(word_a, w, k) == act_by_braid(word_b, w, k)
    if n >= 4:
        j = data.draw(st.integers(1, n - 1).filter(lambda j: abs(j - i) >= 2))
        far_a = BraidWord(n, ((i, 1), (j, 1)))
        far_b = BraidWord(n, ((j, 1), (i, 1)))
        assert act_by_braid(far_a, w, k) == act_by_braid(far_b, w, k)


@given(nonzero_k, st.integers(2, 6), st.data())
def test_action_of_inverse_undoes_action(k, n, data):
    w = FreeWord(n, tuple(data.draw(letters(rank=n, max_size=6))))
    i = data.draw(st.integers(1, n - 1))
    assert wada_act(k, i, -1, wada_act(k, i, 1, w)) == w
    assert wada_act(k, i, 1, wada_act(k, i, -1, w)) == w


@given(nonzero_k, st.integers(2, 5), st.data())
def test_action_is_a_homomorphism_of_free_groups(k, n, data):
    a = FreeWord(n, tuple(data.draw(letters(rank=n, max_size=4))))
    b = FreeWord(n, tuple(data.draw(letters(rank=n, max_size=4))))
    i = data.draw(st.integers(1, n - 1))
    assert wada_act(k, i, 1, a * b) == wada_act(k, i, 1, a) * wada_act(k, i, 1, b)


@given(st.integers(2, 6), st.data())
def test_artin_action_fixes_the_product_of_generators(n, data):
    i = data.draw(st.integers(1, n - 1))
    prod = FreeWord(n, tuple((j, 1) for j in range(1, n + 1)))
    assert artin_act(i, 1, prod) == prod


def test_mixed_word_inverse():
    w = MixedWord(3, (("s", 1, 1), ("x", 2, -1)))
    assert w.inverse().tokens == (("x", 2, 1), ("s", 1, -1))
