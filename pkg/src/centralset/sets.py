"""Subset representations and the closure operations the classifier needs.

One representation per backend, each closed under left quotient, union,
intersection and (where meaningful) complement:

* :class:`ExplicitSet` -- member list over a finite carrier.
* :class:`PeriodicSet` -- eventually periodic indicator over N.
* :class:`WindowSet`   -- raw bitmask over 1..W (promise semantics).
* :class:`WordSet`     -- DFA over the free semigroup. Factor patterns
  ("contains w", optionally negated) compile to a KMP automaton; every
  derived set stays a DFA, so quotients and boolean combinations are exact.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .errors import InvalidInput, WindowTooSmall
from .semigroup import FINITE, FREE, NAT, Element, GroundSemigroup


class SetSpec:
    exact = True

    def contains(self, x: Element) -> bool:
        raise NotImplementedError

    def __contains__(self, x) -> bool:
        return self.contains(x)


# ---------------------------------------------------------------------------
# finite carrier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitSet(SetSpec):
    members: frozenset
    n: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for m in self.members:
            if isinstance(m, bool) or not isinstance(m, int) or not 0 <= m < self.n:
                raise InvalidInput(f"member {m!r} outside carrier 0..{self.n - 1}")

    def contains(self, x) -> bool:
        return x in self.members

    def to_json(self) -> dict:
        return {"kind": "explicit", "members": sorted(self.members)}


# ---------------------------------------------------------------------------
# N: eventually periodic and windowed
# ---------------------------------------------------------------------------


def _check_bits(bits: str, what: str) -> str:
    if not isinstance(bits, str) or set(bits) - {"0", "1"}:
        raise InvalidInput(f"{what} must be a string of 0/1 characters")
    return bits


@dataclass(frozen=True)
class PeriodicSet(SetSpec):
    """Bit j of ``pre + period + period + ...`` is membership of j+1."""

    pre: str
    period: str

    def __post_init__(self):
        _check_bits(self.pre, "preperiod")
        _check_bits(self.period, "period")
        if not self.period:
            raise InvalidInput("period bits must be non-empty")

    def bit(self, j: int) -> bool:
        if j < len(self.pre):
            return self.pre[j] == "1"
        return self.period[(j - len(self.pre)) % len(self.period)] == "1"

    def contains(self, x) -> bool:
        return isinstance(x, int) and x >= 1 and self.bit(x - 1)

    @property
    def horizon(self) -> int:
        """Every element >= horizon sits in the periodic part."""
        return len(self.pre) + 1

    def normalized(self) -> "PeriodicSet":
        p = self.period
        for d in range(1, len(p) + 1):
            if len(p) % d == 0 and p[:d] * (len(p) // d) == p:
                p = p[:d]
                break
        pre = self.pre
        while pre and pre[-1] == p[-1]:
            pre, p = pre[:-1], p[-1] + p[:-1]
        return PeriodicSet(pre, p)

    def extended(self) -> "PeriodicSet":
        """Same set with the preperiod lengthened by one full period."""
        return PeriodicSet(self.pre + self.period, self.period)

    def to_json(self) -> dict:
        return {"kind": "ev-periodic", "pre": self.pre, "period": self.period}


def _periodic_from_fn(length: int, period: int, fn) -> PeriodicSet:
    pre = "".join("1" if fn(j) else "0" for j in range(length))
    per = "".join("1" if fn(j) else "0" for j in range(length, length + period))
    return PeriodicSet(pre, per).normalized()


@dataclass(frozen=True)
class WindowSet(SetSpec):
    """Membership of 1..W only; anything beyond the window is unknown."""

    bits: str
    window: int
    exact = False

    def __post_init__(self):
        _check_bits(self.bits, "window bits")
        if len(self.bits) != self.window:
            raise InvalidInput(f"window bitmask has {len(self.bits)} bits, expected {self.window}")

    def contains(self, x) -> bool:
        if not isinstance(x, int) or x < 1:
            return False
        if x > self.window:
            raise WindowTooSmall(f"element {x} lies beyond window {self.window}", bound=f"W={self.window}")
        return self.bits[x - 1] == "1"

    def members(self) -> list[int]:
        return [j + 1 for j, b in enumerate(self.bits) if b == "1"]

    def to_json(self) -> dict:
        return {"kind": "window", "bits": self.bits, "window": self.window}


# ---------------------------------------------------------------------------
# free semigroup: DFA-backed
# ---------------------------------------------------------------------------


def _kmp_automaton(word: list[int], k: int) -> list[list[int]]:
    """States 0..len(word); the last one is absorbing ('factor seen')."""
    m = len(word)
    fail = [0] * (m + 1)
    delta = [[0] * k for _ in range(m + 1)]
    for q in range(m + 1):
        for a in range(k):
            if q == m:
                delta[q][a] = m
            elif word[q] == a:
                delta[q][a] = q + 1
            elif q == 0:
                delta[q][a] = 0
            else:
                delta[q][a] = delta[fail[q]][a]
        if 0 < q < m:
            fail[q + 1] = delta[fail[q]][word[q]]
    return delta


def _canonical(k, delta, start, accept):
    """Restrict to reachable states, minimize (Moore) and renumber in BFS order."""
    seen = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for a in range(k):
            r = delta[q][a]
            if r not in seen:
                seen[r] = len(order)
                order.append(r)
    cls = {q: int(q in accept) for q in order}
    n_cls = len(set(cls.values()))
    while True:
        sig = {q: (cls[q],) + tuple(cls[delta[q][a]] for a in range(k)) for q in order}
        ids: dict = {}
        new = {}
        for q in order:
            new[q] = ids.setdefault(sig[q], len(ids))
        if len(ids) == n_cls:
            cls = new
            break
        cls, n_cls = new, len(ids)
    # renumber classes by BFS from the start class so equal languages compare equal
    rep = {}
    for q in order:
        rep.setdefault(cls[q], q)
    num = {cls[start]: 0}
    queue = [cls[start]]
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        for a in range(k):
            d = cls[delta[rep[c]][a]]
            if d not in num:
                num[d] = len(queue)
                queue.append(d)
    new_delta = [None] * len(queue)
    for c, idx in num.items():
        new_delta[idx] = tuple(num[cls[delta[rep[c]][a]]] for a in range(k))
    new_accept = frozenset(num[cls[q]] for q in order if q in accept)
    return tuple(new_delta), 0, new_accept


@dataclass(frozen=True)
class WordSet(SetSpec):
    """Language of non-empty words accepted by a complete DFA.

    ``label`` keeps the factor-pattern description (word, negate, prefix)
    when the set still is one, so it can be written back in that schema.
    """

    k: int
    delta: tuple
    start: int
    accept: frozenset
    label: tuple | None = field(default=None, compare=False)

    @classmethod
    def build(cls, k, delta, start, accept, label=None) -> "WordSet":
        d, s, acc = _canonical(k, delta, start, frozenset(accept))
        return cls(k, d, s, acc, label)

    @classmethod
    def factor(cls, k: int, word: str, negate: bool = False, prefix: str = "") -> "WordSet":
        """{s : prefix + s contains word}, or its complement when negated."""
        letters = "abcdefghijklmnopqrstuvwxyz"[:k]
        if not word or any(c not in letters for c in word + prefix):
            raise InvalidInput(f"factor word {word!r} / prefix {prefix!r} not over alphabet {letters!r}")
        delta = _kmp_automaton([letters.index(c) for c in word], k)
        q = 0
        for c in prefix:
            q = delta[q][letters.index(c)]
        full = len(word)
        accept = {full} if not negate else set(range(full + 1)) - {full}
        if word in prefix:
            prefix = word
        else:
            prefix = prefix[-(len(word) - 1):] if len(word) > 1 else ""
        return cls.build(k, delta, q, accept, label=(word, bool(negate), prefix))

    @classmethod
    def everything(cls, k: int) -> "WordSet":
        return cls.build(k, [[0] * k], 0, {0})

    def letter(self, c: str) -> int:
        i = ord(c) - ord("a")
        if not 0 <= i < self.k:
            raise InvalidInput(f"letter {c!r} outside alphabet of size {self.k}")
        return i

    def run(self, q: int, w: str) -> int:
        for c in w:
            q = self.delta[q][self.letter(c)]
        return q

    def contains(self, x) -> bool:
        return isinstance(x, str) and len(x) >= 1 and self.run(self.start, x) in self.accept

    def successors(self, qs: Iterable[int]) -> Iterator[tuple[str, frozenset]]:
        for a in range(self.k):
            yield chr(ord("a") + a), frozenset(self.delta[q][a] for q in qs)

    def reachable_nonempty(self, starts: Iterable[int] | None = None) -> dict[int, str]:
        """States reachable from ``starts`` by a non-empty word, with shortlex-least words."""
        starts = [self.start] if starts is None else list(starts)
        reps: dict[int, str] = {}
        queue = deque()
        for q in starts:
            for a in range(self.k):
                r = self.delta[q][a]
                w = chr(ord("a") + a)
                if r not in reps or (len(w), w) < (len(reps[r]), reps[r]):
                    reps[r] = w
        for r in sorted(reps, key=lambda s: (len(reps[s]), reps[s])):
            queue.append(r)
        while queue:
            q = queue.popleft()
            for a in range(self.k):
                r = self.delta[q][a]
                if r not in reps:
                    reps[r] = reps[q] + chr(ord("a") + a)
                    queue.append(r)
        return reps

    def to_json(self) -> dict:
        if self.label is not None:
            word, negate, prefix = self.label
            out = {"kind": "factor", "word": word, "negate": negate}
            if prefix:
                out["prefix"] = prefix
            return out
        return {
            "kind": "dfa",
            "alphabet": self.k,
            "start": self.start,
            "accept": sorted(self.accept),
            "delta": [list(r) for r in self.delta],
        }


def subset_bfs(ws: WordSet, starts: frozenset, good) -> tuple[str | None, int]:
    """Shortlex BFS over subsets delta(starts, x) for non-empty x.

    Returns the first x whose image subset satisfies ``good`` (or None) and
    the number of distinct subsets explored.
    """
    seen = set()
    queue = deque()
    for c, nxt in ws.successors(starts):
        if nxt not in seen:
            seen.add(nxt)
            queue.append((nxt, c))
    while queue:
        qs, w = queue.popleft()
        if good(qs):
            return w, len(seen)
        for c, nxt in ws.successors(qs):
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, w + c))
    return None, len(seen)


def _product(a: WordSet, b: WordSet, op) -> WordSet:
    if a.k != b.k:
        raise InvalidInput("word sets over different alphabets")
    k = a.k
    idx = {(a.start, b.start): 0}
    pairs = [(a.start, b.start)]
    delta = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        i += 1
        row = []
        for c in range(k):
            nxt = (a.delta[p][c], b.delta[q][c])
            if nxt not in idx:
                idx[nxt] = len(pairs)
                pairs.append(nxt)
            row.append(idx[nxt])
        delta.append(row)
    accept = {i for i, (p, q) in enumerate(pairs) if op(p in a.accept, q in b.accept)}
    return WordSet.build(k, delta, 0, accept)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def check_backend(sg: GroundSemigroup, A: SetSpec) -> SetSpec:
    ok = (
        (sg.kind == FINITE and isinstance(A, ExplicitSet) and A.n == sg.size)
        or (sg.kind == NAT and isinstance(A, (PeriodicSet, WindowSet)))
        or (sg.kind == FREE and isinstance(A, WordSet) and A.k == sg.alphabet_size)
    )
    if not ok:
        raise InvalidInput(f"{type(A).__name__} is not a subset representation for the {sg.kind} semigroup")
    return A


def contains(sg: GroundSemigroup, A: SetSpec, x: Element) -> bool:
    check_backend(sg, A)
    sg.check(x)
    return A.contains(x)


def full_set(sg: GroundSemigroup) -> SetSpec:
    if sg.kind == FINITE:
        return ExplicitSet(frozenset(range(sg.size)), sg.size)
    if sg.kind == NAT:
        return PeriodicSet("", "1")
    return WordSet.everything(sg.alphabet_size)


def empty_set(sg: GroundSemigroup) -> SetSpec:
    return complement(sg, full_set(sg))


def left_quotient(sg: GroundSemigroup, t: Element, A: SetSpec) -> SetSpec:
    """t^{-1}A = {s : t*s in A}, in the representation family of A."""
    check_backend(sg, A)
    sg.check(t)
    if isinstance(A, ExplicitSet):
        return ExplicitSet(frozenset(s for s in range(A.n) if sg.table[t][s] in A.members), A.n)
    if isinstance(A, PeriodicSet):
        # new bit j = old bit j + t; the period keeps its length
        L = max(0, len(A.pre) - t)
        pre = "".join("1" if A.bit(j + t) else "0" for j in range(L))
        per = "".join("1" if A.bit(j + t) else "0" for j in range(L, L + len(A.period)))
        return PeriodicSet(pre, per)
    if isinstance(A, WindowSet):
        if t >= A.window:
            raise WindowTooSmall(f"quotient by {t} leaves nothing of window {A.window}", bound=f"W={A.window}")
        return WindowSet(A.bits[t:], A.window - t)
    if A.label is not None:
        word, negate, prefix = A.label
        return WordSet.factor(A.k, word, negate, prefix + t)
    return WordSet.build(A.k, A.delta, A.run(A.start, t), A.accept)


def _binary(sg: GroundSemigroup, A: SetSpec, B: SetSpec, op) -> SetSpec:
    check_backend(sg, A)
    check_backend(sg, B)
    if isinstance(A, ExplicitSet) and isinstance(B, ExplicitSet):
        return ExplicitSet(frozenset(s for s in range(A.n) if op(s in A.members, s in B.members)), A.n)
    if isinstance(A, WordSet) and isinstance(B, WordSet):
        return _product(A, B, op)
    if isinstance(A, WindowSet) or isinstance(B, WindowSet):
        W = min(getattr(X, "window", math.inf) for X in (A, B))
        bits = "".join("1" if op(A.contains(j), B.contains(j)) else "0" for j in range(1, W + 1))
        return WindowSet(bits, W)
    L = max(len(A.pre), len(B.pre))
    P = math.lcm(len(A.period), len(B.period))
    return _periodic_from_fn(L, P, lambda j: op(A.bit(j), B.bit(j)))


def union(sg: GroundSemigroup, A: SetSpec, B: SetSpec) -> SetSpec:
    return _binary(sg, A, B, lambda x, y: x or y)


def intersection(sg: GroundSemigroup, A: SetSpec, B: SetSpec) -> SetSpec:
    return _binary(sg, A, B, lambda x, y: x and y)


def complement(sg: GroundSemigroup, A: SetSpec) -> SetSpec:
    check_backend(sg, A)
    if isinstance(A, ExplicitSet):
        return ExplicitSet(frozenset(range(A.n)) - A.members, A.n)
    if isinstance(A, PeriodicSet):
        flip = str.maketrans("01", "10")
        return PeriodicSet(A.pre.translate(flip), A.period.translate(flip))
    if isinstance(A, WindowSet):
        return WindowSet(A.bits.translate(str.maketrans("01", "10")), A.window)
    return WordSet.build(A.k, A.delta, A.start, set(range(len(A.delta))) - A.accept)


def union_of_quotients(sg: GroundSemigroup, A: SetSpec, translates: Iterable[Element]) -> SetSpec:
    ts = list(translates)
    if not ts:
        raise InvalidInput("translate set must be non-empty")
    out = left_quotient(sg, ts[0], A)
    for t in ts[1:]:
        out = union(sg, out, left_quotient(sg, t, A))
    return out


def is_subset(sg: GroundSemigroup, A: SetSpec, B: SetSpec) -> bool:
    """A <= B. Exact except for windows, where only the common window is compared."""
    check_backend(sg, A)
    check_backend(sg, B)
    if isinstance(A, ExplicitSet):
        return A.members <= B.members
    if isinstance(A, WordSet):
        diff = _product(A, B, lambda x, y: x and not y)
        return not (set(diff.reachable_nonempty()) & diff.accept)
    if isinstance(A, WindowSet) or isinstance(B, WindowSet):
        W = min(getattr(X, "window", math.inf) for X in (A, B))
        return all(B.contains(j) for j in range(1, W + 1) if A.contains(j))
    L = max(len(A.pre), len(B.pre))
    P = math.lcm(len(A.period), len(B.period))
    return all(B.bit(j) for j in range(L + P) if A.bit(j))


def same_set(sg: GroundSemigroup, A: SetSpec, B: SetSpec) -> bool:
    return is_subset(sg, A, B) and is_subset(sg, B, A)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def set_from_json(sg: GroundSemigroup, data: Any) -> SetSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidInput("set spec must be an object with a 'kind'")
    kind = data["kind"]
    if kind == "explicit":
        if sg.kind != FINITE:
            raise InvalidInput("explicit member lists are only supported over finite semigroups")
        members = data.get("members")
        if not isinstance(members, list):
            raise InvalidInput("'members' must be a list")
        return ExplicitSet(frozenset(members), sg.size)
    if kind == "ev-periodic":
        if sg.kind != NAT:
            raise InvalidInput("eventually periodic sets live over (N,+)")
        return PeriodicSet(data.get("pre", ""), data.get("period", ""))
    if kind == "window":
        if sg.kind != NAT:
            raise InvalidInput("window bitmasks live over (N,+)")
        bits = data.get("bits", "")
        W = data.get("window", len(bits) if isinstance(bits, str) else None)
        if isinstance(W, bool) or not isinstance(W, int) or W < 1:
            raise InvalidInput("'window' must be a positive integer")
        return WindowSet(bits, W)
    if kind == "factor":
        if sg.kind != FREE:
            raise InvalidInput("factor patterns live over free semigroups")
        word = data.get("word")
        if not isinstance(word, str):
            raise InvalidInput("'word' must be a string")
        return WordSet.factor(sg.alphabet_size, word, bool(data.get("negate", False)), data.get("prefix", ""))
    if kind == "dfa":
        if sg.kind != FREE:
            raise InvalidInput("DFA sets live over free semigroups")
        try:
            k = data["alphabet"]
            delta = [list(r) for r in data["delta"]]
            start = data["start"]
            accept = set(data["accept"])
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed dfa set: {exc}") from None
        n = len(delta)
        if k != sg.alphabet_size or any(len(r) != k for r in delta) or not all(
            isinstance(v, int) and 0 <= v < n for r in delta for v in r
        ) or not (isinstance(start, int) and 0 <= start < n) or not all(isinstance(v, int) and 0 <= v < n for v in accept):
            raise InvalidInput("malformed dfa set")
        return WordSet.build(k, delta, start, accept)
    if kind == "all":
        return full_set(sg)
    raise InvalidInput(f"unknown set kind {kind!r}")


def set_to_json(A: SetSpec) -> dict:
    return A.to_json()
