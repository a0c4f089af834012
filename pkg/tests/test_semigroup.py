import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralset import GroundSemigroup, InvalidInput
from centralset.semigroup import aggregate, apply, product
from centralset.sets import (
    ExplicitSet,
    PeriodicSet,
    WordSet,
    complement,
    intersection,
    left_quotient,
    same_set,
    set_from_json,
    set_to_json,
    union,
)

from conftest import fixture_pack, left_zero

PACK = fixture_pack()
words = st.text(alphabet="ab", min_size=1, max_size=6)
bits = st.text(alphabet="01", max_size=6)
periods = st.text(alphabet="01", min_size=1, max_size=5)


def test_apply_examples(nat, free2):
    assert apply(nat, 2, 3) == 5
    assert apply(free2, "ab", "ba") == "abba"
    assert apply(GroundSemigroup.finite(left_zero(2)), 1, 0) == 1


def test_backend_mismatch_rejected(nat, free2):
    with pytest.raises(InvalidInput):
        apply(nat, 0, 3)
    with pytest.raises(InvalidInput):
        apply(free2, "ac", "a")
    with pytest.raises(InvalidInput):
        apply(nat, "a", 1)


def test_non_associative_table_rejected():
    with pytest.raises(InvalidInput, match="associative"):
        GroundSemigroup.finite([[1, 0], [0, 0]])


def test_commutativity_is_computed():
    assert GroundSemigroup.nat().commutative
    assert GroundSemigroup.free(1).commutative
    assert not GroundSemigroup.free(2).commutative
    assert not GroundSemigroup.finite(left_zero(2)).commutative
    assert PACK["Z4"].commutative


def test_empty_product_rejected(nat):
    with pytest.raises(InvalidInput):
        product(nat, [])
    with pytest.raises(InvalidInput):
        aggregate(nat, lambda t: t, [])


def test_aggregate_examples(nat, free2):
    assert aggregate(nat, lambda t: t, {2, 3}) == 5
    assert aggregate(free2, lambda t: "a", {1, 4}) == "aa"
    assert aggregate(nat, lambda t: 2 * t + 1, {1, 2, 3}) == 15


def test_aggregate_is_ordered(free2):
    assert aggregate(free2, ["a", "b", "b"], [3, 1]) == "ab"


@pytest.mark.parametrize("name", sorted(PACK))
def test_pack_tables_associative(name):
    sg = PACK[name]
    els = list(sg.elements())
    for a in els:
        for b in els:
            for c in els:
                assert apply(sg, apply(sg, a, b), c) == apply(sg, a, apply(sg, b, c))


@given(seq=st.lists(words, min_size=8, max_size=8), cut=st.integers(1, 7), H=st.sets(st.integers(1, 8), min_size=2))
def test_aggregate_splits_free(seq, cut, H):
    sg = GroundSemigroup.free(2)
    H1 = {h for h in H if h <= cut}
    H2 = H - H1
    if H1 and H2:
        assert aggregate(sg, seq, H) == apply(sg, aggregate(sg, seq, H1), aggregate(sg, seq, H2))


@given(seq=st.lists(st.integers(0, 3), min_size=6, max_size=6), cut=st.integers(1, 5),
       H=st.sets(st.integers(1, 6), min_size=2), name=st.sampled_from(sorted(PACK)))
def test_aggregate_splits_finite(seq, cut, H, name):
    sg = PACK[name]
    seq = [x % sg.size for x in seq]
    H1 = {h for h in H if h <= cut}
    H2 = H - H1
    if H1 and H2:
        assert aggregate(sg, seq, H) == apply(sg, aggregate(sg, seq, H1), aggregate(sg, seq, H2))


@given(pre=bits, period=periods, t=st.integers(1, 12))
def test_periodic_quotient_pointwise(pre, period, t):
    sg = GroundSemigroup.nat()
    A = PeriodicSet(pre, period)
    Q = left_quotient(sg, t, A)
    assert len(Q.period) == len(period)
    for s in range(1, 40):
        assert Q.contains(s) == A.contains(t + s)


@given(word=st.text(alphabet="ab", min_size=1, max_size=3), negate=st.booleans(), t=words)
@settings(max_examples=60)
def test_word_quotient_pointwise(word, negate, t):
    sg = GroundSemigroup.free(2)
    A = WordSet.factor(2, word, negate)
    Q = left_quotient(sg, t, A)
    for s in sg.sample(4):
        assert Q.contains(s) == A.contains(t + s)


@pytest.mark.parametrize("name", sorted(PACK))
def test_finite_quotient_pointwise(name):
    sg = PACK[name]
    n = sg.size
    for mask in range(1 << n):
        A = ExplicitSet({i for i in range(n) if mask >> i & 1}, n)
        for t in range(n):
            Q = left_quotient(sg, t, A)
            assert all((s in Q.members) == (apply(sg, t, s) in A.members) for s in range(n))


def test_quotient_examples(nat):
    evens = PeriodicSet("", "01")
    odds = left_quotient(nat, 1, evens)
    assert [s for s in range(1, 21) if odds.contains(s)] == list(range(1, 21, 2))
    assert same_set(nat, left_quotient(nat, 2, evens), evens)
    lz = GroundSemigroup.finite(left_zero(3))
    A = ExplicitSet({1}, 3)
    assert left_quotient(lz, 1, A).members == {0, 1, 2}
    assert left_quotient(lz, 0, A).members == frozenset()


@given(p1=bits, q1=periods, p2=bits, q2=periods)
@settings(max_examples=60)
def test_periodic_boolean_ops(p1, q1, p2, q2):
    sg = GroundSemigroup.nat()
    A, B = PeriodicSet(p1, q1), PeriodicSet(p2, q2)
    U, I, C = union(sg, A, B), intersection(sg, A, B), complement(sg, A)
    for s in range(1, 60):
        assert U.contains(s) == (A.contains(s) or B.contains(s))
        assert I.contains(s) == (A.contains(s) and B.contains(s))
        assert C.contains(s) != A.contains(s)


@given(pre=bits, period=periods)
def test_periodic_normalization_preserves_set(pre, period):
    A = PeriodicSet(pre, period)
    for B in (A.normalized(), A.extended()):
        assert all(A.contains(s) == B.contains(s) for s in range(1, 50))


def test_word_set_json_round_trip(free2):
    A = WordSet.factor(2, "ab")
    B = left_quotient(free2, "a", complement(free2, A))
    for X in (A, B):
        Y = set_from_json(free2, set_to_json(X))
        assert same_set(free2, X, Y)


def test_set_json_errors(nat, free2):
    with pytest.raises(InvalidInput):
        set_from_json(nat, {"kind": "factor", "word": "ab"})
    with pytest.raises(InvalidInput):
        set_from_json(nat, {"kind": "ev-periodic", "pre": "", "period": ""})
    with pytest.raises(InvalidInput):
        set_from_json(free2, {"kind": "nope"})
    with pytest.raises(InvalidInput):
        set_from_json(GroundSemigroup.finite(left_zero(2)), {"kind": "explicit", "members": [2]})
