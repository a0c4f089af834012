"""Words, variable words and combinatorial lines over the alphabet [t].

Search order is fixed everywhere: fewer wildcards first, then
lexicographic on the string form, where the wildcard ``*`` sorts before
every letter. Results are therefore reproducible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping, Sequence

from .errors import InfeasibleError, InvalidInput

Word = tuple  # letters in 1..t
WILD = 0

DEFAULT_BUDGET = 1 << 24  # max r^(t^N) colorings the certifier agrees to cover


def word_str(w: Sequence[int]) -> str:
    return "".join("*" if c == WILD else str(c) for c in w)


def parse_word(s: str, t: int) -> Word:
    if t > 9:
        raise InvalidInput("digit-string words need t <= 9")
    try:
        w = tuple(int(c) for c in s)
    except ValueError:
        raise InvalidInput(f"bad word {s!r}") from None
    if not w or any(not 1 <= c <= t for c in w):
        raise InvalidInput(f"word {s!r} not over [1..{t}]")
    return w


@dataclass(frozen=True)
class VariableWord:
    letters: tuple  # WILD marks a wildcard position
    t: int

    def __post_init__(self):
        if self.t < 1:
            raise InvalidInput("alphabet size must be >= 1")
        if WILD not in self.letters:
            raise InvalidInput("a variable word needs at least one wildcard")
        if any(not 0 <= c <= self.t for c in self.letters):
            raise InvalidInput(f"letters must lie in 1..{self.t}")

    @classmethod
    def parse(cls, s: str, t: int) -> "VariableWord":
        try:
            letters = tuple(WILD if c == "*" else int(c) for c in s)
        except ValueError:
            raise InvalidInput(f"bad variable word {s!r}") from None
        return cls(letters, t)

    @property
    def wildcards(self) -> tuple[int, ...]:
        """1-based wildcard positions."""
        return tuple(i + 1 for i, c in enumerate(self.letters) if c == WILD)

    def substitute(self, j: int) -> Word:
        return tuple(j if c == WILD else c for c in self.letters)

    @property
    def is_strong(self) -> bool:
        L = self.letters
        return (
            L[0] != WILD
            and L[-1] != WILD
            and all(not (a == WILD and b == WILD) for a, b in zip(L, L[1:]))
        )

    def __str__(self) -> str:
        return word_str(self.letters)


@dataclass(frozen=True)
class CombinatorialLine:
    vw: VariableWord
    points: tuple

    def to_json(self, color: int | None = None) -> dict:
        out = {"vw": str(self.vw), "points": [word_str(p) for p in self.points]}
        if color is not None:
            out["color"] = color
        return out


def line_points(vw: VariableWord) -> CombinatorialLine:
    return CombinatorialLine(vw, tuple(vw.substitute(j) for j in range(1, vw.t + 1)))


class Coloring:
    """r-coloring of [t]^N, from a callback or a materialized table.

    A table is either a mapping word -> color or a string/sequence of colors
    listing the words in lexicographic order. Colors are 1..r.
    """

    def __init__(self, r: int, t: int, N: int, fn: Callable[[Word], int] | None = None,
                 table: Mapping | Sequence | None = None):
        if r < 1 or t < 1 or N < 1:
            raise InvalidInput("r, t and N must be positive")
        self.r, self.t, self.N = r, t, N
        if (fn is None) == (table is None):
            raise InvalidInput("give exactly one of fn or table")
        if table is not None and not isinstance(table, Mapping):
            seq = [int(c) for c in table]
            if len(seq) != t ** N:
                raise InvalidInput(f"coloring table has {len(seq)} entries, expected {t ** N}")
            table = dict(zip(itertools.product(range(1, t + 1), repeat=N), seq))
        self._fn = fn
        self._table = table
        self._cache: dict = {}

    def __call__(self, w: Word) -> int:
        c = self._cache.get(w)
        if c is None:
            c = self._fn(w) if self._fn is not None else self._table[tuple(w)]
            if not 1 <= c <= self.r:
                raise InvalidInput(f"color {c} of {word_str(w)} outside 1..{self.r}")
            self._cache[w] = c
        return c

    def words(self) -> Iterator[Word]:
        return itertools.product(range(1, self.t + 1), repeat=self.N)

    def to_string(self) -> str:
        return "".join(str(self(w)) for w in self.words())


def _variable_words(t: int, N: int, k: int, strong: bool) -> Iterator[tuple]:
    """Variable words of length N with exactly k wildcards, in lex order."""
    buf = [0] * N

    def cap(pos: int) -> int:
        if not strong:
            return N - pos
        start = max(pos, 1)
        if pos > 0 and buf[pos - 1] == WILD:
            start = max(start, pos + 1)
        usable = N - 1 - start
        return (usable + 1) // 2 if usable > 0 else 0

    def rec(pos: int, left: int):
        if pos == N:
            if left == 0:
                yield tuple(buf)
            return
        if left > cap(pos):
            return
        if left and not (strong and (pos == 0 or pos == N - 1 or buf[pos - 1] == WILD)):
            buf[pos] = WILD
            yield from rec(pos + 1, left - 1)
        for c in range(1, t + 1):
            buf[pos] = c
            yield from rec(pos + 1, left)

    yield from rec(0, k)


def variable_words(t: int, N: int, strong: bool = False) -> Iterator[VariableWord]:
    for k in range(1, N + 1):
        for letters in _variable_words(t, N, k, strong):
            yield VariableWord(letters, t)


def is_monochromatic(coloring: Coloring, vw: VariableWord) -> bool:
    c0 = coloring(vw.substitute(1))
    return all(coloring(vw.substitute(j)) == c0 for j in range(2, vw.t + 1))


def _search(coloring: Coloring, t: int, N: int, strong: bool) -> VariableWord | None:
    if coloring.t != t or coloring.N != N:
        raise InvalidInput("coloring is defined on a different cube")
    for vw in variable_words(t, N, strong):
        if is_monochromatic(coloring, vw):
            return vw
    return None


def find_monochromatic_line(coloring: Coloring, t: int, N: int) -> VariableWord | None:
    return _search(coloring, t, N, strong=False)


def find_strong_variable_word(coloring: Coloring, t: int, N: int) -> VariableWord | None:
    """Like find_monochromatic_line, over words with constant ends and no adjacent wildcards."""
    return _search(coloring, t, N, strong=True)


# ---------------------------------------------------------------------------
# exhaustive certification
# ---------------------------------------------------------------------------


@dataclass
class HJCertificate:
    r: int
    t: int
    N: int | None  # least N <= N_max forcing a monochromatic line, if found
    counterexamples: dict = field(default_factory=dict)  # N' -> line-free coloring string
    nodes: dict = field(default_factory=dict)  # N -> backtracking nodes visited
    colorings: dict = field(default_factory=dict)  # N -> colorings logically covered

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "t": self.t,
            "HJ": self.N,
            "counterexamples": {str(k): v for k, v in self.counterexamples.items()},
            "colorings_covered": {str(k): v for k, v in self.colorings.items()},
            "nodes": {str(k): v for k, v in self.nodes.items()},
        }


@lru_cache(maxsize=None)
def _cube_lines(t: int, N: int):
    """For each point index (lex order), the lines whose last point it is."""
    index = {w: i for i, w in enumerate(itertools.product(range(1, t + 1), repeat=N))}
    closing = [[] for _ in index]
    for letters in itertools.product(range(t + 1), repeat=N):
        if WILD not in letters:
            continue
        vw = VariableWord(letters, t)
        pts = [index[vw.substitute(j)] for j in range(1, t + 1)]
        closing[max(pts)].append(tuple(pts))
    return len(index), closing


def _line_free_coloring(r: int, t: int, N: int) -> tuple[list[int] | None, int]:
    """Backtracking over colorings in restricted-growth form (colors up to permutation).

    Returns the first line-free coloring found and the node count.
    """
    P, closing = _cube_lines(t, N)
    colors = [0] * P
    nodes = 0

    def rec(p: int, used: int):
        nonlocal nodes
        if p == P:
            return True
        for c in range(1, min(used + 1, r) + 1):
            nodes += 1
            colors[p] = c
            if any(all(colors[q] == c for q in line) for line in closing[p]):
                continue
            if rec(p + 1, max(used, c)):
                return True
        colors[p] = 0
        return False

    found = rec(0, 0)
    return (colors if found else None), nodes


def hj_certificate_search(r: int, t: int, N_max: int, budget: int = DEFAULT_BUDGET) -> HJCertificate:
    """Least N <= N_max such that every r-coloring of [t]^N has a monochromatic line.

    Exhaustive over colorings up to color permutation, pruned as soon as a
    completed line is monochromatic. Refuses up front when r^(t^N_max)
    exceeds ``budget``.
    """
    if r < 1 or t < 1 or N_max < 1:
        raise InvalidInput("r, t and N_max must be positive")
    if t > 9:
        raise InvalidInput("t > 9 is not supported by the digit-string word format")
    points = t ** N_max
    if r > 1 and points * (r - 1).bit_length() > 4096 or r ** points > budget:
        raise InfeasibleError(
            f"{r}^({t}^{N_max}) = {r}^{points} colorings of the {t}^{N_max}-point cube exceed budget {budget}"
        )
    cert = HJCertificate(r, t, None)
    for N in range(1, N_max + 1):
        coloring, nodes = _line_free_coloring(r, t, N)
        cert.nodes[N] = nodes
        cert.colorings[N] = r ** (t ** N)
        if coloring is None:
            cert.N = N
            return cert
        cert.counterexamples[N] = "".join(map(str, coloring))
    return cert
