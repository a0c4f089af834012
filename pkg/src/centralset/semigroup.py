"""Semigroup backends: finite Cayley tables, (N,+) and free semigroups.

Elements are plain Python values so they serialize without ceremony:

* finite  -- ``int`` carrier index, 0-based
* nat     -- ``int`` >= 1 (N has no identity here)
* free    -- non-empty ``str`` over the first ``k`` lowercase letters
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence, Union

from .errors import InvalidInput

Element = Union[int, str]

FINITE, NAT, FREE = "finite", "nat", "free"


@dataclass(frozen=True)
class GroundSemigroup:
    kind: str
    table: tuple[tuple[int, ...], ...] | None = None
    alphabet_size: int = 0
    commutative: bool = field(init=False, default=False)

    def __post_init__(self):
        if self.kind == FINITE:
            if not self.table:
                raise InvalidInput("finite semigroup needs a non-empty table")
            n = len(self.table)
            for row in self.table:
                if len(row) != n:
                    raise InvalidInput("operation table must be square")
                for v in row:
                    if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                        raise InvalidInput(f"table entry {v!r} outside carrier 0..{n - 1}")
            t = self.table
            for a, b, c in itertools.product(range(n), repeat=3):
                if t[t[a][b]][c] != t[a][t[b][c]]:
                    raise InvalidInput(f"table is not associative at ({a},{b},{c})")
            comm = all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))
        elif self.kind == NAT:
            comm = True
        elif self.kind == FREE:
            if not 1 <= self.alphabet_size <= 26:
                raise InvalidInput("free semigroup alphabet size must be in 1..26")
            comm = self.alphabet_size == 1
        else:
            raise InvalidInput(f"unknown semigroup kind {self.kind!r}")
        object.__setattr__(self, "commutative", comm)

    # -- constructors ---------------------------------------------------
    @classmethod
    def finite(cls, table: Iterable[Iterable[int]]) -> "GroundSemigroup":
        return cls(FINITE, table=tuple(tuple(row) for row in table))

    @classmethod
    def nat(cls) -> "GroundSemigroup":
        return cls(NAT)

    @classmethod
    def free(cls, k: int) -> "GroundSemigroup":
        return cls(FREE, alphabet_size=k)

    # -- carrier --------------------------------------------------------
    @property
    def size(self) -> int | None:
        return len(self.table) if self.kind == FINITE else None

    @property
    def letters(self) -> str:
        return string.ascii_lowercase[: self.alphabet_size]

    def is_element(self, x: Any) -> bool:
        if self.kind == FREE:
            return isinstance(x, str) and len(x) >= 1 and all(c in self.letters for c in x)
        if isinstance(x, bool) or not isinstance(x, int):
            return False
        if self.kind == NAT:
            return x >= 1
        return 0 <= x < len(self.table)

    def check(self, x: Any) -> Element:
        if not self.is_element(x):
            raise InvalidInput(f"{x!r} is not an element of the {self.kind} semigroup")
        return x

    def elements(self) -> range:
        if self.kind != FINITE:
            raise InvalidInput("only finite semigroups have an enumerable carrier")
        return range(len(self.table))

    def sample(self, bound: int) -> Iterator[Element]:
        """Finite: whole carrier. N: 1..bound. Free: words of length <= bound, shortlex."""
        if self.kind == FINITE:
            yield from range(len(self.table))
        elif self.kind == NAT:
            yield from range(1, bound + 1)
        else:
            for n in range(1, bound + 1):
                for letters in itertools.product(self.letters, repeat=n):
                    yield "".join(letters)

    def apply(self, a: Element, b: Element) -> Element:
        if not (self.is_element(a) and self.is_element(b)):
            raise InvalidInput(f"operands {a!r}, {b!r} do not belong to the {self.kind} semigroup")
        if self.kind == FINITE:
            return self.table[a][b]
        return a + b  # integer sum or string concatenation

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        if self.kind == FINITE:
            return {"kind": FINITE, "table": [list(r) for r in self.table]}
        if self.kind == NAT:
            return {"kind": NAT}
        return {"kind": FREE, "alphabet": self.alphabet_size}

    @classmethod
    def from_json(cls, data: Any) -> "GroundSemigroup":
        if not isinstance(data, dict) or "kind" not in data:
            raise InvalidInput("semigroup spec must be an object with a 'kind'")
        kind = data["kind"]
        if kind == FINITE:
            table = data.get("table")
            if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
                raise InvalidInput("finite semigroup 'table' must be a list of lists")
            return cls.finite(table)
        if kind == NAT:
            return cls.nat()
        if kind == FREE:
            k = data.get("alphabet")
            if isinstance(k, bool) or not isinstance(k, int):
                raise InvalidInput("free semigroup 'alphabet' must be an integer")
            return cls.free(k)
        raise InvalidInput(f"unknown semigroup kind {kind!r}")


def apply(sg: GroundSemigroup, a: Element, b: Element) -> Element:
    return sg.apply(a, b)


def product(sg: GroundSemigroup, xs: Iterable[Element]) -> Element:
    """Left-to-right fold of a non-empty sequence."""
    it = iter(xs)
    try:
        acc = next(it)
    except StopIteration:
        raise InvalidInput("empty product: semigroups need not have an identity") from None
    for x in it:
        acc = sg.apply(acc, x)
    return acc


def value_at(f: Sequence[Element] | Callable[[int], Element], t: int) -> Element:
    """Evaluate a 1-based sequence given either as a callable or a list."""
    if callable(f):
        return f(t)
    if not 1 <= t <= len(f):
        raise InvalidInput(f"index {t} outside sequence domain 1..{len(f)}")
    return f[t - 1]


def aggregate(sg: GroundSemigroup, f, H: Iterable[int]) -> Element:
    """Fold f(t) over t in H in ascending order."""
    idx = sorted(H)
    if not idx:
        raise InvalidInput("aggregate over an empty index set")
    if idx[0] < 1:
        raise InvalidInput("sequence indices start at 1")
    return product(sg, (value_at(f, t) for t in idx))
