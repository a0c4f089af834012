import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralset import GroundSemigroup, InvalidInput, PreconditionError
from centralset.classify import (
    EXACT,
    INCONCLUSIVE,
    NO,
    WINDOW,
    Certificate,
    collectionwise_pws_bounded,
    decompose_pws,
    is_piecewise_syndetic,
    is_syndetic,
    is_thick,
    replay,
)
from centralset.sets import (
    ExplicitSet,
    PeriodicSet,
    WindowSet,
    WordSet,
    complement,
    full_set,
    intersection,
    left_quotient,
    same_set,
)

from conftest import fixture_pack

PACK = fixture_pack()


# brute-force oracles on a finite carrier: with F = S (or E = S) the
# existential over finite translate sets collapses to a single check.

def oracle_syndetic(sg, A):
    return all(any(sg.table[t][s] in A for t in sg.elements()) for s in sg.elements())


def oracle_thick(sg, A):
    return any(all(sg.table[s][x] in A for s in sg.elements()) for x in sg.elements())


def oracle_pws(sg, A):
    S = list(sg.elements())
    return any(all(any(sg.table[t][sg.table[s][x]] in A for t in S) for s in S) for x in S)


def subsets(sg):
    n = sg.size
    for mask in range(1 << n):
        yield ExplicitSet({i for i in range(n) if mask >> i & 1}, n)


@pytest.mark.parametrize("name", sorted(PACK))
def test_finite_verdicts_match_oracle(name):
    sg = PACK[name]
    for A in subsets(sg):
        s, t, p = is_syndetic(sg, A), is_thick(sg, A), is_piecewise_syndetic(sg, A)
        assert s.holds == oracle_syndetic(sg, A.members)
        assert t.holds == oracle_thick(sg, A.members)
        assert p.holds == oracle_pws(sg, A.members)
        for c in (s, t, p):
            assert c.qualifier == EXACT and c.verdict != INCONCLUSIVE
            assert replay(sg, A, c)


@pytest.mark.parametrize("name", sorted(PACK))
def test_finite_decomposition_matches_oracle(name):
    sg = PACK[name]
    for A in subsets(sg):
        cert = is_piecewise_syndetic(sg, A)
        if not cert.holds:
            with pytest.raises(PreconditionError):
                decompose_pws(sg, A, cert)
            continue
        T, Y = decompose_pws(sg, A, cert)
        assert intersection(sg, T, Y).members == A.members
        assert oracle_thick(sg, T.members) and oracle_syndetic(sg, Y.members)


def test_pws_but_not_syndetic_four_elements():
    sg = PACK["right-zero-4"]
    found = [A for A in subsets(sg) if oracle_pws(sg, A.members) and not oracle_syndetic(sg, A.members)]
    assert found
    for A in found:
        T, Y = decompose_pws(sg, A)
        assert is_thick(sg, T).holds and replay(sg, T, is_thick(sg, T))
        assert is_syndetic(sg, Y).holds and replay(sg, Y, is_syndetic(sg, Y))


def test_finite_empty_set_not_pws(pack):
    for sg in pack.values():
        assert is_piecewise_syndetic(sg, ExplicitSet(set(), sg.size)).verdict == NO


def test_full_set_everything_yes(pack, nat, free2):
    for sg in [*pack.values(), nat, free2]:
        S = full_set(sg)
        for fn in (is_syndetic, is_thick, is_piecewise_syndetic):
            c = fn(sg, S)
            assert c.holds and replay(sg, S, c)


# -- (N,+) -------------------------------------------------------------------


def test_evens(nat):
    evens = PeriodicSet("", "01")
    s = is_syndetic(nat, evens)
    assert s.holds and tuple(s.translates) == (1, 2)
    assert is_thick(nat, evens).verdict == NO
    p = is_piecewise_syndetic(nat, evens)
    assert p.holds and tuple(p.translates) == (1, 2)
    T, Y = decompose_pws(nat, evens, p)
    assert same_set(nat, T, full_set(nat)) and same_set(nat, Y, evens)


def test_multiples_of_five(nat):
    A = PeriodicSet("", "00001")
    p = is_piecewise_syndetic(nat, A)
    assert p.holds and tuple(p.translates) == (1, 2, 3, 4, 5)


@given(pre=st.text("01", max_size=6), period=st.text("01", min_size=1, max_size=6))
@settings(max_examples=80)
def test_periodic_oracle_and_extension_invariance(pre, period):
    sg = GroundSemigroup.nat()
    A = PeriodicSet(pre, period)
    expect_s = "1" in period
    expect_t = set(period) == {"1"}
    for B in (A, A.extended(), A.normalized()):
        s, t, p = is_syndetic(sg, B), is_thick(sg, B), is_piecewise_syndetic(sg, B)
        assert (s.holds, t.holds, p.holds) == (expect_s, expect_t, expect_s)
        assert all(c.qualifier == EXACT and replay(sg, B, c) for c in (s, t, p))


def _powers_of_two(W):
    return "".join("1" if (j & (j - 1)) == 0 else "0" for j in range(1, W + 1))


def test_window_powers_of_two(nat):
    A = WindowSet(_powers_of_two(64), 64)
    s = is_syndetic(nat, A)
    assert s.verdict == NO and s.qualifier == WINDOW
    assert is_thick(nat, A).verdict == NO


def test_window_evens_and_runs(nat):
    evens = WindowSet("01" * 32, 64)
    s = is_syndetic(nat, evens)
    assert s.holds and s.qualifier == WINDOW and replay(nat, evens, s)
    run = WindowSet("0" * 20 + "1" * 24 + "0" * 20, 64)
    t = is_thick(nat, run)
    assert t.holds and t.qualifier == WINDOW and replay(nat, run, t)
    assert not is_syndetic(nat, run).holds
    p = is_piecewise_syndetic(nat, run)
    assert p.holds
    T, Y = decompose_pws(nat, run, p)
    assert [j for j in range(1, 65) if T.contains(j) and Y.contains(j)] == [j for j in range(1, 65) if run.contains(j)]


def test_window_verdicts_are_qualified(nat):
    A = WindowSet("1011" * 4, 16)
    for fn in (is_syndetic, is_thick, is_piecewise_syndetic):
        assert fn(nat, A).qualifier == WINDOW


# -- free semigroup ---------------------------------------------------------


def test_contains_ab(free2):
    A = WordSet.factor(2, "ab")
    s = is_syndetic(free2, A)
    assert s.holds and tuple(s.translates) == ("ab",)
    t = is_thick(free2, A)
    assert t.holds and t.evidence["multiplier"] == "ab"
    p = is_piecewise_syndetic(free2, A)
    assert p.holds and len(p.translates) == 1
    for c in (s, t, p):
        assert c.qualifier == EXACT and replay(free2, A, c)


def test_avoiding_ab(free2):
    A = WordSet.factor(2, "ab", negate=True)
    for fn in (is_syndetic, is_thick, is_piecewise_syndetic):
        c = fn(free2, A)
        assert c.verdict == NO and replay(free2, A, c)


def test_contains_a_versus_only_a(free2):
    # words containing "a" absorb right multiples by "a"; a^+ is hit by b on the left
    assert is_thick(free2, WordSet.factor(2, "a")).holds
    only_a = WordSet.factor(2, "b", negate=True)
    assert not is_thick(free2, only_a).holds
    assert not is_piecewise_syndetic(free2, only_a).holds


@given(word=st.text("ab", min_size=1, max_size=3), negate=st.booleans(), t=st.text("ab", max_size=3))
@settings(max_examples=40, deadline=None)
def test_word_implications_and_replay(word, negate, t):
    sg = GroundSemigroup.free(2)
    A = WordSet.factor(2, word, negate)
    if t:
        A = left_quotient(sg, t, A)
    s, th, p = is_syndetic(sg, A), is_thick(sg, A), is_piecewise_syndetic(sg, A)
    assert all(c.verdict != INCONCLUSIVE and replay(sg, A, c) for c in (s, th, p))
    if s.holds or th.holds:
        assert p.holds
    if p.holds:
        T, Y = decompose_pws(sg, A, p)
        assert same_set(sg, intersection(sg, T, Y), A)
        assert is_thick(sg, T).holds and is_syndetic(sg, Y).holds


# -- certificates -------------------------------------------------------------


def test_tampered_certificate_fails_replay(nat):
    evens = PeriodicSet("", "01")
    c = is_syndetic(nat, evens)
    bad = Certificate.from_json(dict(c.to_json(), translates=[2]))
    assert not replay(nat, evens, bad)


def test_certificate_json_round_trip(free2):
    A = WordSet.factor(2, "ab")
    c = is_piecewise_syndetic(free2, A)
    assert Certificate.from_json(c.to_json()) == c


def test_collectionwise_surrogate(nat):
    evens = PeriodicSet("", "01")
    c = collectionwise_pws_bounded(nat, [evens] * 3, 3)
    assert c.holds and tuple(c.translates) == (1, 2) and "surrogate" in c.qualifier
    S = full_set(nat)
    assert collectionwise_pws_bounded(nat, [S, S], 2).holds
    empty = complement(nat, S)
    assert collectionwise_pws_bounded(nat, [S, empty], 2).verdict == NO
    with pytest.raises(InvalidInput):
        collectionwise_pws_bounded(nat, [evens, S], 2)


def test_every_subset_implications_sweep(pack):
    violations = 0
    for sg in pack.values():
        for A in subsets(sg):
            s, t, p = (fn(sg, A) for fn in (is_syndetic, is_thick, is_piecewise_syndetic))
            violations += (s.holds and not p.holds) + (t.holds and not p.holds)
    assert violations == 0
