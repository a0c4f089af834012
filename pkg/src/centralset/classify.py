"""Syndetic / thick / piecewise syndetic classification with certificates.

Exact on finite tables, eventually periodic subsets of N and DFA word sets;
window bitmasks get verdicts tagged ``qualifier="window"`` (they hold only
under the promise that the window is representative).

Every certificate can be re-checked with :func:`replay`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import InvalidInput, PreconditionError, WindowTooSmall
from .semigroup import FINITE, FREE, NAT, Element, GroundSemigroup
from .sets import (
    ExplicitSet,
    PeriodicSet,
    SetSpec,
    WindowSet,
    WordSet,
    _kmp_automaton,
    check_backend,
    complement,
    full_set,
    is_subset,
    left_quotient,
    subset_bfs,
    union,
    union_of_quotients,
)

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"
EXACT, WINDOW, SURROGATE = "exact", "window", "bounded-surrogate"


@dataclass
class ClassifierConfig:
    max_translates: int = 8  # size bound on translate sets F
    search_budget: int = 200_000  # candidate translate sets tried before falling back
    qualify_ratio: int = 4  # window verdicts need gaps/runs of size W/ratio
    min_window: int = 8
    sample_length: int = 5  # free-semigroup replay samples words up to this length


DEFAULT = ClassifierConfig()


@dataclass
class Certificate:
    kind: str
    verdict: str
    qualifier: str = EXACT
    translates: tuple = ()
    evidence: dict = field(default_factory=dict)
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == YES

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "qualifier": self.qualifier,
            "translates": list(self.translates),
            "evidence": self.evidence,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            return cls(
                data["kind"],
                data["verdict"],
                data.get("qualifier", EXACT),
                tuple(data.get("translates", ())),
                dict(data.get("evidence", {})),
                data.get("note", ""),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed certificate: {exc}") from None


def _by_size_then_lex(candidates: Sequence, max_size: int, budget: int):
    """Yield candidate subsets ordered by size, then lexicographically.

    Stops silently once ``budget`` subsets have been produced.
    """
    count = 0
    for k in range(1, min(max_size, len(candidates)) + 1):
        for combo in itertools.combinations(candidates, k):
            yield combo
            count += 1
            if count >= budget:
                return


# ---------------------------------------------------------------------------
# finite tables
# ---------------------------------------------------------------------------


def _finite_quotients(sg: GroundSemigroup, A: ExplicitSet) -> list[frozenset]:
    n = sg.size
    return [frozenset(s for s in range(n) if sg.table[t][s] in A.members) for t in range(n)]


def _finite_thick_x(sg: GroundSemigroup, members: frozenset):
    """Least x with S*x inside members, else a map x -> escaping s."""
    n = sg.size
    escapes = {}
    for x in range(n):
        bad = next((s for s in range(n) if sg.table[s][x] not in members), None)
        if bad is None:
            return x, None
        escapes[x] = bad
    return None, escapes


def _finite_syndetic(sg, A, cfg):
    n = sg.size
    quots = _finite_quotients(sg, A)
    full = frozenset(range(n))
    everything = frozenset().union(*quots)
    if everything != full:
        s = min(full - everything)
        return Certificate("syndetic", NO, evidence={"uncovered": s})
    for F in _by_size_then_lex(range(n), n, math.inf):
        if frozenset().union(*(quots[t] for t in F)) == full:
            return Certificate("syndetic", YES, translates=F)
    raise AssertionError("unreachable: full translate set covers")


def _finite_thick(sg, A, cfg):
    x, escapes = _finite_thick_x(sg, A.members)
    if x is None:
        return Certificate("thick", NO, evidence={"escapes": {str(k): v for k, v in escapes.items()}})
    return Certificate("thick", YES, evidence={"multiplier": x})


def _finite_pws(sg, A, cfg):
    n = sg.size
    quots = _finite_quotients(sg, A)
    x, escapes = _finite_thick_x(sg, frozenset().union(*quots))
    if x is None:
        return Certificate("pws", NO, evidence={"escapes": {str(k): v for k, v in escapes.items()}})
    for F in _by_size_then_lex(range(n), n, math.inf):
        x, _ = _finite_thick_x(sg, frozenset().union(*(quots[t] for t in F)))
        if x is not None:
            return Certificate("pws", YES, translates=F, evidence={"multiplier": x})
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# eventually periodic subsets of N
# ---------------------------------------------------------------------------


def _periodic_cover_search(A: PeriodicSet, s_from: int, cfg: ClassifierConfig):
    """(size, lex)-least F with every s >= s_from reaching A via some s+t, t in F.

    Coverage of s depends on bits s+t-1, periodic in s once s > len(pre), so
    checking s in [s_from, len(pre)+period] decides it; translates beyond
    len(pre)+period duplicate smaller ones.
    """
    L, p = len(A.pre), len(A.period)
    s_range = range(s_from, L + p + 1)
    cands = range(1, L + p + 1)
    hits = {t: frozenset(s for s in s_range if A.bit(s + t - 1)) for t in cands}
    need = frozenset(s_range)
    for F in _by_size_then_lex(cands, cfg.max_translates, cfg.search_budget):
        if frozenset().union(*(hits[t] for t in F)) == need:
            return F
    # fallback: the set of realized distances to the next member always covers
    dist = set()
    for s in s_range:
        d = 1
        while not A.bit(s + d - 1):
            d += 1
        dist.add(d)
    return tuple(sorted(dist))


def _periodic_threshold(U: PeriodicSet) -> int:
    """Least n0 with [n0, inf) inside U, assuming the period is all ones."""
    V = U.normalized()
    return len(V.pre) + 1


def _periodic_syndetic(sg, A, cfg):
    A = A.normalized()
    if "1" not in A.period:
        return Certificate("syndetic", NO, evidence={"period": A.period})
    return Certificate("syndetic", YES, translates=_periodic_cover_search(A, 1, cfg))


def _periodic_thick(sg, A, cfg):
    A = A.normalized()
    if "0" in A.period:
        return Certificate("thick", NO, evidence={"missing_from": len(A.pre) + A.period.index("0") + 1, "period": len(A.period)})
    return Certificate("thick", YES, evidence={"threshold": _periodic_threshold(A)})


def _periodic_pws(sg, A, cfg):
    # a finite translate union of an eventually periodic set is thick iff its
    # period is all ones, i.e. iff A has a member in every period block
    A = A.normalized()
    if "1" not in A.period:
        return Certificate("pws", NO, evidence={"period": A.period})
    F = _periodic_cover_search(A, len(A.pre) + 1, cfg)
    U = union_of_quotients(sg, A, F)
    return Certificate("pws", YES, translates=F, evidence={"threshold": _periodic_threshold(U)})


# ---------------------------------------------------------------------------
# window bitmasks over N
# ---------------------------------------------------------------------------


def _runs(bits: str):
    best_start, best_len, start = 0, 0, None
    for j, b in enumerate(bits + "0"):
        if b == "1" and start is None:
            start = j
        elif b != "1" and start is not None:
            if j - start > best_len:
                best_start, best_len = start, j - start
            start = None
    return best_start + 1, best_len


def _window_small(kind, A, cfg):
    if A.window < cfg.min_window:
        return Certificate(kind, INCONCLUSIVE, WINDOW, note=f"window {A.window} below minimum {cfg.min_window}")
    return None


def _window_syndetic(sg, A: WindowSet, cfg):
    small = _window_small("syndetic", A, cfg)
    if small:
        return small
    W = A.window
    members = A.members()
    if not members:
        return Certificate("syndetic", NO, WINDOW, evidence={"gaps": []}, note="no members in window")
    # gap (m_prev, m] is charged to the member m that closes it; m_0 = 0
    ends = list(zip(members, [b - a for a, b in zip([0] + members, members)]))
    g = max(d for _, d in ends)
    tail = W - members[-1]
    if g * cfg.qualify_ratio <= W and tail < g:
        return Certificate("syndetic", YES, WINDOW, translates=tuple(range(1, g + 1)))
    half = W // 2
    first = max((d for m, d in ends if m <= half), default=0)
    second = max([d for m, d in ends if m > half] + [tail + 1])
    if second > first:
        return Certificate("syndetic", NO, WINDOW, evidence={"first_half_max_gap": first, "second_half_max_gap": second},
                           note="gap growth across the window")
    return Certificate("syndetic", INCONCLUSIVE, WINDOW, note=f"max gap {g} exceeds W/{cfg.qualify_ratio} without growth")


def _window_thick_cert(kind, U: WindowSet, cfg, translates=()):
    need = max(2, U.window // cfg.qualify_ratio)
    start, length = _runs(U.bits)
    if length >= need:
        return Certificate(kind, YES, WINDOW, translates=translates, evidence={"run_start": start, "run_length": length})
    return Certificate(kind, NO, WINDOW, evidence={"longest_run": length, "required": need})


def _window_thick(sg, A, cfg):
    return _window_small("thick", A, cfg) or _window_thick_cert("thick", A, cfg)


def _window_pws(sg, A, cfg):
    small = _window_small("pws", A, cfg)
    if small:
        return small
    B = max(1, A.window // cfg.qualify_ratio**2)
    for F in _by_size_then_lex(range(1, B + 1), cfg.max_translates, cfg.search_budget):
        U = union_of_quotients(sg, A, F)
        if U.window < cfg.min_window:
            continue
        cert = _window_thick_cert("pws", U, cfg, F)
        if cert.holds:
            return cert
    return Certificate("pws", NO, WINDOW, note=f"no translate set within {{1..{B}}} of size <= {cfg.max_translates}")


# ---------------------------------------------------------------------------
# free semigroup (DFA word sets)
# ---------------------------------------------------------------------------


def _word_thick_x(A: WordSet):
    R = frozenset(A.reachable_nonempty())
    return subset_bfs(A, R, lambda qs: qs <= A.accept)


def _word_covers(A: WordSet, states) -> str | None:
    """Word s with every t (from the given states) giving t*s outside A, or None."""
    escape, _ = subset_bfs(A, frozenset(states), lambda qs: not (qs & A.accept))
    return escape


def _word_syndetic(sg, A: WordSet, cfg):
    reps = A.reachable_nonempty()
    escape = _word_covers(A, reps)
    if escape is not None:
        return Certificate("syndetic", NO, evidence={"escape": escape})
    order = sorted(reps, key=lambda q: (len(reps[q]), reps[q]))
    for combo in _by_size_then_lex(order, len(order), math.inf):
        if _word_covers(A, combo) is None:
            return Certificate("syndetic", YES, translates=tuple(reps[q] for q in combo))
    raise AssertionError("unreachable")


def _word_thick(sg, A: WordSet, cfg):
    x, explored = _word_thick_x(A)
    if x is None:
        return Certificate("thick", NO, evidence={"subsets_explored": explored})
    return Certificate("thick", YES, evidence={"multiplier": x})


def _word_pws(sg, A: WordSet, cfg):
    reps = A.reachable_nonempty()
    order = sorted(reps, key=lambda q: (len(reps[q]), reps[q]))
    words = [reps[q] for q in order]
    x, explored = _word_thick_x(union_of_quotients(sg, A, words))
    if x is None:
        return Certificate("pws", NO, evidence={"subsets_explored": explored}, note="union over all translates is not thick")
    for F in _by_size_then_lex(words, min(cfg.max_translates, len(words)), math.inf):
        x, _ = _word_thick_x(union_of_quotients(sg, A, F))
        if x is not None:
            return Certificate("pws", YES, translates=F, evidence={"multiplier": x})
    return Certificate("pws", INCONCLUSIVE, note=f"translate sets beyond size {cfg.max_translates} not searched")


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def _dispatch(table, sg, A, cfg):
    check_backend(sg, A)
    for typ, fn in table:
        if isinstance(A, typ):
            return fn(sg, A, cfg or DEFAULT)
    raise InvalidInput(f"unsupported set representation {type(A).__name__}")


def is_syndetic(sg: GroundSemigroup, A: SetSpec, cfg: ClassifierConfig | None = None) -> Certificate:
    return _dispatch(
        [(ExplicitSet, _finite_syndetic), (PeriodicSet, _periodic_syndetic), (WindowSet, _window_syndetic), (WordSet, _word_syndetic)],
        sg, A, cfg,
    )


def is_thick(sg: GroundSemigroup, A: SetSpec, cfg: ClassifierConfig | None = None) -> Certificate:
    return _dispatch(
        [(ExplicitSet, _finite_thick), (PeriodicSet, _periodic_thick), (WindowSet, _window_thick), (WordSet, _word_thick)],
        sg, A, cfg,
    )


def is_piecewise_syndetic(sg: GroundSemigroup, A: SetSpec, cfg: ClassifierConfig | None = None) -> Certificate:
    return _dispatch(
        [(ExplicitSet, _finite_pws), (PeriodicSet, _periodic_pws), (WindowSet, _window_pws), (WordSet, _word_pws)],
        sg, A, cfg,
    )


def find_multiplier(sg: GroundSemigroup, U: SetSpec, E: Iterable[Element], hint: Element | None = None) -> Element:
    """Some x with e*x in U for every e in E (U thick, E finite).

    Finite: least such carrier element. N: least such integer. Free: the
    thickness multiplier (works for every E at once) unless ``hint`` already
    does the job.
    """
    E = list(E)
    if isinstance(U, ExplicitSet):
        for x in range(sg.size):
            if all(sg.table[e][x] in U.members for e in E):
                return x
        raise PreconditionError("no right multiplier: set is not thick")
    if isinstance(U, PeriodicSet):
        V = U.normalized()
        bound = max(len(V.pre), 0) + len(V.period) + 1
        for b in range(1, bound + 1):
            if all(V.contains(e + b) for e in E):
                return b
        raise PreconditionError("no shift lands E inside the set: set is not thick")
    if isinstance(U, WindowSet):
        top = max(E)
        for b in range(1, U.window - top + 1):
            if all(U.contains(e + b) for e in E):
                return b
        raise WindowTooSmall(f"no shift b with E+b inside window {U.window}", bound=f"W={U.window}")
    if isinstance(U, WordSet):
        candidates = ([hint] if hint else []) + [_word_thick_x(U)[0]]
        for x in candidates:
            if x and all(U.contains(e + x) for e in E):
                return x
        raise PreconditionError("word set is not thick")
    raise InvalidInput(f"unsupported set representation {type(U).__name__}")


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def suffix_language(k: int, x: str) -> WordSet:
    """Words of the form e*x with e non-empty, i.e. S*x."""
    letters = [ord(c) - ord("a") for c in x]
    m = len(letters)
    kmp = _kmp_automaton(letters, k)
    # non-absorbing variant: after a full match keep following the failure link
    fail_m = 0
    for a in letters[1:]:
        fail_m = kmp[fail_m][a]
    step = lambda q, a: kmp[fail_m][a] if q == m else kmp[q][a]  # noqa: E731
    cap = m + 1
    idx = {(0, 0): 0}
    states = [(0, 0)]
    delta = []
    i = 0
    while i < len(states):
        q, n = states[i]
        i += 1
        row = []
        for a in range(k):
            nxt = (step(q, a), min(n + 1, cap))
            if nxt not in idx:
                idx[nxt] = len(states)
                states.append(nxt)
            row.append(idx[nxt])
        delta.append(row)
    accept = {j for j, (q, n) in enumerate(states) if q == m and n == cap}
    return WordSet.build(k, delta, 0, accept)


def decompose_pws(sg: GroundSemigroup, A: SetSpec, cert: Certificate | None = None,
                  cfg: ClassifierConfig | None = None) -> tuple[SetSpec, SetSpec]:
    """Return (T, Y) with A = T & Y, T thick and Y syndetic.

    General case: U = union of the certificate's quotients contains S*x for
    the multiplier x. T = A | S*x is thick; Y = A | (S - S*x) is syndetic
    because points of S*x reach A through the translates and points outside
    it can be pushed out of S*x (or into it and then into A).
    """
    cfg = cfg or DEFAULT
    if cert is None:
        cert = is_piecewise_syndetic(sg, A, cfg)
    if not cert.holds:
        raise PreconditionError("decompose_pws needs a piecewise syndetic set")
    S = full_set(sg)
    if is_syndetic(sg, A, cfg).holds:
        return S, A
    if is_thick(sg, A, cfg).holds:
        return A, S
    U = union_of_quotients(sg, A, cert.translates)
    if isinstance(A, ExplicitSet):
        x = cert.evidence["multiplier"]
        R = ExplicitSet(frozenset(sg.table[s][x] for s in range(sg.size)), sg.size)
    elif isinstance(A, WindowSet):
        start, length = cert.evidence["run_start"], cert.evidence["run_length"]
        bits = "".join("1" if start <= j < start + length else "0" for j in range(1, A.window + 1))
        R = WindowSet(bits, A.window)
    elif isinstance(A, WordSet):
        x = cert.evidence.get("multiplier") or _word_thick_x(U)[0]
        R = suffix_language(A.k, x)
    else:
        # eventually periodic: pws already implies syndetic
        raise AssertionError("unreachable for eventually periodic sets")
    T = union(sg, A, R)
    Y = union(sg, A, complement(sg, R))
    return T, Y


# ---------------------------------------------------------------------------
# collectionwise surrogate
# ---------------------------------------------------------------------------


def check_decreasing(sg: GroundSemigroup, chain: Sequence[SetSpec], depth: int | None = None) -> None:
    d = len(chain) if depth is None else depth
    if not 1 <= d <= len(chain):
        raise InvalidInput(f"depth {d} outside chain of length {len(chain)}")
    for n in range(d - 1):
        if not is_subset(sg, chain[n + 1], chain[n]):
            raise InvalidInput(f"chain is not decreasing: C_{n + 2} is not inside C_{n + 1}")


def collectionwise_pws_bounded(sg: GroundSemigroup, chain: Sequence[SetSpec], depth: int,
                               cfg: ClassifierConfig | None = None) -> Certificate:
    """One translate set F making the union of quotients of C_depth thick.

    Since C_depth is the smallest set checked, the same F works for every
    earlier member of the chain. This is a bounded stand-in, not the full
    uniform-family notion.
    """
    check_decreasing(sg, chain, depth)
    cert = is_piecewise_syndetic(sg, chain[depth - 1], cfg)
    qualifier = SURROGATE if cert.qualifier == EXACT else f"{SURROGATE}+{cert.qualifier}"
    return Certificate("collectionwise-pws", cert.verdict, qualifier, cert.translates, dict(cert.evidence),
                       note=f"bounded surrogate at depth {depth}")


# ---------------------------------------------------------------------------
# replay
# ---------------------------------------------------------------------------


def _replay_thick(sg, U: SetSpec, ev: dict, cfg) -> bool:
    if isinstance(U, ExplicitSet):
        x = ev.get("multiplier")
        return isinstance(x, int) and sg.is_element(x) and all(sg.table[s][x] in U.members for s in range(sg.size))
    if isinstance(U, PeriodicSet):
        n0 = ev.get("threshold")
        if not isinstance(n0, int) or n0 < 1:
            return False
        top = max(n0, len(U.pre) + 1) + len(U.period)
        return all(U.contains(n) for n in range(n0, top + 1))
    if isinstance(U, WindowSet):
        start, length = ev.get("run_start"), ev.get("run_length")
        if not isinstance(start, int) or not isinstance(length, int) or start < 1 or start + length - 1 > U.window:
            return False
        return length >= max(2, U.window // cfg.qualify_ratio) and all(U.contains(j) for j in range(start, start + length))
    x = ev.get("multiplier")
    if not sg.is_element(x):
        return False
    R = U.reachable_nonempty()
    if not all(U.run(q, x) in U.accept for q in R):
        return False
    return all(U.contains(e + x) for e in sg.sample(cfg.sample_length))


def _replay_cover(sg, A: SetSpec, F, cfg) -> bool:
    if not F or not all(sg.is_element(t) for t in F):
        return False
    if isinstance(A, ExplicitSet):
        return union_of_quotients(sg, A, F).members == frozenset(range(sg.size))
    if isinstance(A, PeriodicSet):
        top = len(A.pre) + len(A.period)
        return all(any(A.contains(s + t) for t in F) for s in range(1, top + 1))
    if isinstance(A, WindowSet):
        last = A.window - max(F)
        if last < 1:
            return False
        return all(any(A.contains(s + t) for t in F) for s in range(1, last + 1))
    return _word_covers(A, [A.run(A.start, t) for t in F]) is None


def replay(sg: GroundSemigroup, A: SetSpec, cert: Certificate, cfg: ClassifierConfig | None = None) -> bool:
    """Re-check a certificate against the set it claims to describe."""
    cfg = cfg or DEFAULT
    check_backend(sg, A)
    kind = "pws" if cert.kind == "collectionwise-pws" else cert.kind
    if cert.verdict == YES:
        try:
            if kind == "syndetic":
                return _replay_cover(sg, A, cert.translates, cfg)
            if kind == "thick":
                return _replay_thick(sg, A, cert.evidence, cfg)
            if kind == "pws":
                if not cert.translates or not all(sg.is_element(t) for t in cert.translates):
                    return False
                return _replay_thick(sg, union_of_quotients(sg, A, cert.translates), cert.evidence, cfg)
        except (InvalidInput, WindowTooSmall, KeyError, TypeError):
            return False
        return False
    ev = cert.evidence
    if isinstance(A, ExplicitSet) and cert.verdict == NO:
        if kind == "syndetic":
            s = ev.get("uncovered")
            return sg.is_element(s) and all(sg.table[t][s] not in A.members for t in range(sg.size))
        target = A.members if kind == "thick" else union_of_quotients(sg, A, range(sg.size)).members
        esc = ev.get("escapes", {})
        return all(sg.table[esc.get(str(x), -1)][x] not in target if 0 <= esc.get(str(x), -1) < sg.size else False
                   for x in range(sg.size))
    if isinstance(A, WordSet) and kind == "syndetic" and cert.verdict == NO:
        s = ev.get("escape")
        return sg.is_element(s) and not any(A.run(q, s) in A.accept for q in A.reachable_nonempty())
    fn = {"syndetic": is_syndetic, "thick": is_thick, "pws": is_piecewise_syndetic}[kind]
    return fn(sg, A, cfg).verdict == cert.verdict
