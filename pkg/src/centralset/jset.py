"""Witnesses that piecewise syndetic sets are J-sets.

Both extractors follow the same route: evaluate every word of [n]^N into the
semigroup, push the evaluations into the thick union of quotients with a
multiplier, color each word by the least translate that lands it in A, and
read a witness off a monochromatic (variable-word) line. The word length N
is escalated from 1 upward instead of jumping to a Hales-Jewett bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .classify import Certificate, ClassifierConfig, find_multiplier, is_piecewise_syndetic
from .errors import InvalidInput, PreconditionError, SearchExhausted, TruncationTooSmall, WrongAlgorithm
from .hj import Coloring, find_monochromatic_line, find_strong_variable_word, line_points
from .semigroup import Element, GroundSemigroup, product
from .sets import SetSpec, check_backend, union_of_quotients


@dataclass
class JSetConfig:
    escalation_cap: int = 16  # largest word length N tried
    word_budget: int = 250_000  # max n^N words evaluated at one N


@dataclass(frozen=True)
class SequenceFamily:
    """Finitely many sequences f_1..f_n on the indices 1..T."""

    values: tuple  # values[i][t-1] = f_{i+1}(t)
    names: tuple = ()

    def __post_init__(self):
        if not self.values:
            raise InvalidInput("a sequence family needs at least one sequence")
        T = len(self.values[0])
        if T < 1 or any(len(v) != T for v in self.values):
            raise InvalidInput("all sequences must share a positive truncation T")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"f{i + 1}" for i in range(len(self.values))))
        elif len(self.names) != len(self.values):
            raise InvalidInput("one name per sequence")

    @classmethod
    def from_functions(cls, fns: Sequence[Callable[[int], Element]], T: int, names: Sequence[str] = ()) -> "SequenceFamily":
        return cls(tuple(tuple(f(t) for t in range(1, T + 1)) for f in fns), tuple(names))

    @property
    def T(self) -> int:
        return len(self.values[0])

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, i: int, t: int) -> Element:
        """f_i(t), both 1-based."""
        if not 1 <= t <= self.T:
            raise TruncationTooSmall(f"index {t} beyond truncation T={self.T}", bound=f"T={self.T}")
        return self.values[i - 1][t - 1]

    def subfamily(self, indices: Sequence[int]) -> "SequenceFamily":
        """Sequences at the given 1-based positions, in that order."""
        return SequenceFamily(tuple(self.values[i - 1] for i in indices), tuple(self.names[i - 1] for i in indices))

    def validate(self, sg: GroundSemigroup) -> "SequenceFamily":
        for name, vals in zip(self.names, self.values):
            for t, v in enumerate(vals, 1):
                if not sg.is_element(v):
                    raise InvalidInput(f"{name}({t}) = {v!r} is not an element of the {sg.kind} semigroup")
        return self

    def to_json(self) -> dict:
        return {"T": self.T, "sequences": [{"name": n, "values": list(v)} for n, v in zip(self.names, self.values)]}

    @classmethod
    def from_json(cls, sg: GroundSemigroup, data: Any, T: int | None = None) -> "SequenceFamily":
        if not isinstance(data, dict) or not isinstance(data.get("sequences"), list) or not data["sequences"]:
            raise InvalidInput("sequence file needs a non-empty 'sequences' list")
        T = T or data.get("T")
        names, values = [], []
        for i, seq in enumerate(data["sequences"]):
            if not isinstance(seq, dict):
                raise InvalidInput("each sequence must be an object")
            names.append(str(seq.get("name", f"f{i + 1}")))
            if "values" in seq:
                vals = seq["values"]
                if not isinstance(vals, list):
                    raise InvalidInput("'values' must be a list")
                if T is not None:
                    if len(vals) < T:
                        raise InvalidInput(f"sequence {names[-1]} has {len(vals)} values, truncation is {T}")
                    vals = vals[:T]
                values.append(tuple(vals))
            elif "const" in seq:
                if not isinstance(T, int) or T < 1:
                    raise InvalidInput("constant sequences need a truncation T")
                values.append((seq["const"],) * T)
            else:
                raise InvalidInput("sequence needs 'values' or 'const'")
        return cls(tuple(values), tuple(names)).validate(sg)


@dataclass
class JWitness:
    a: Element
    H: tuple
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"a": self.a, "H": list(self.H), "provenance": self.provenance}

    @classmethod
    def from_json(cls, data: dict) -> "JWitness":
        try:
            return cls(data["a"], tuple(data["H"]), dict(data.get("provenance", {})))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed J-witness: {exc}") from None


@dataclass
class NCWitness:
    m: int
    a: tuple
    t: tuple
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"m": self.m, "a": list(self.a), "t": list(self.t), "provenance": self.provenance}

    @classmethod
    def from_json(cls, data: dict) -> "NCWitness":
        try:
            return cls(data["m"], tuple(data["a"]), tuple(data["t"]), dict(data.get("provenance", {})))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed NC-witness: {exc}") from None


# ---------------------------------------------------------------------------
# evaluation and checking
# ---------------------------------------------------------------------------


def j_eval(sg: GroundSemigroup, a: Element, H: Sequence[int], f: Callable[[int], Element]) -> Element:
    """a + sum_{t in H} f(t), the sum taken in increasing t."""
    return product(sg, [a] + [f(t) for t in sorted(H)])


def nc_eval(sg: GroundSemigroup, m: int, a: Sequence[Element], t: Sequence[int], f: Callable[[int], Element]) -> Element:
    """x(m, a, t, f) = a(1) f(t(1)) a(2) ... a(m) f(t(m)) a(m+1)."""
    parts = []
    for j in range(m):
        parts += [a[j], f(t[j])]
    parts.append(a[m])
    return product(sg, parts)


def _valid_index_set(H, T: int) -> bool:
    return (
        len(H) >= 1
        and all(isinstance(h, int) and not isinstance(h, bool) for h in H)
        and list(H) == sorted(set(H))
        and 1 <= H[0]
        and H[-1] <= T
    )


def check_jwitness(sg: GroundSemigroup, A: SetSpec, family: SequenceFamily, w: JWitness) -> bool:
    if not sg.is_element(w.a) or not _valid_index_set(w.H, family.T):
        return False
    return all(A.contains(j_eval(sg, w.a, w.H, lambda t, i=i: family(i, t))) for i in range(1, len(family) + 1))


def check_ncwitness(sg: GroundSemigroup, A: SetSpec, family: SequenceFamily, w: NCWitness) -> bool:
    if not isinstance(w.m, int) or w.m < 1 or len(w.a) != w.m + 1 or len(w.t) != w.m:
        return False
    if not all(sg.is_element(x) for x in w.a) or not _valid_index_set(w.t, family.T):
        return False
    return all(A.contains(nc_eval(sg, w.m, w.a, w.t, lambda t, i=i: family(i, t))) for i in range(1, len(family) + 1))


def fold_ncwitness(sg: GroundSemigroup, w: NCWitness) -> JWitness:
    """Commutative reading of an NC witness: a = a(1)+...+a(m+1), H = t."""
    return JWitness(product(sg, w.a), tuple(w.t), {"folded_from": w.to_json()})


# ---------------------------------------------------------------------------
# extraction
# ---------------------------------------------------------------------------


def _pws_inputs(sg, A, cert, cfg):
    check_backend(sg, A)
    cert = cert or is_piecewise_syndetic(sg, A, cfg)
    if not cert.holds:
        raise PreconditionError(f"set is not certified piecewise syndetic (verdict {cert.verdict})")
    return cert, list(cert.translates), union_of_quotients(sg, A, cert.translates)


def _word_lengths(family, min_index, cfg):
    n = len(family)
    N = 0
    while True:
        N += 1
        if min_index + N > family.T:
            raise TruncationTooSmall(
                f"word length {N} needs indices up to {min_index + N} but T={family.T}", bound=f"T={family.T}"
            )
        if N > cfg.escalation_cap:
            raise SearchExhausted(f"no line up to escalation cap N={cfg.escalation_cap}", bound="escalation_cap")
        if n ** N > cfg.word_budget:
            raise SearchExhausted(f"{n}^{N} words exceed word budget {cfg.word_budget}", bound="word_budget")
        yield N


def _least_translate(sg, A, translates, x) -> int:
    for i, t in enumerate(translates, 1):
        if A.contains(sg.apply(t, x)):
            return i
    raise AssertionError("multiplier left the union of quotients")


def pws_to_jset_commutative(sg: GroundSemigroup, A: SetSpec, family: SequenceFamily, min_index: int = 0,
                            cert: Certificate | None = None, cfg: JSetConfig | None = None,
                            classifier: ClassifierConfig | None = None) -> JWitness:
    """a and H with a + sum_{t in H} f(t) in A for every f in the family, min H > min_index."""
    cfg = cfg or JSetConfig()
    if not sg.commutative:
        raise WrongAlgorithm("commutative J-witness extraction needs a commutative semigroup")
    if min_index < 0:
        raise InvalidInput("min_index must be >= 0")
    family.validate(sg)
    cert, E, U = _pws_inputs(sg, A, cert, classifier)
    n = len(family)
    for N in _word_lengths(family, min_index, cfg):
        g = {
            w: product(sg, [family(w[p], min_index + p + 1) for p in range(N)])
            for w in itertools.product(range(1, n + 1), repeat=N)
        }
        b = find_multiplier(sg, U, set(g.values()), hint=cert.evidence.get("multiplier"))
        coloring = Coloring(len(E), n, N, fn=lambda w: _least_translate(sg, A, E, sg.apply(b, g[w])))
        vw = find_monochromatic_line(coloring, n, N)
        if vw is None:
            continue
        color = coloring(vw.substitute(1))
        a = product(sg, [E[color - 1], b] + [family(c, min_index + p + 1) for p, c in enumerate(vw.letters) if c])
        H = tuple(min_index + p for p in vw.wildcards)
        w = JWitness(a, H, {
            "N": N, "b": b, "translates": E, "color": color, "translate": E[color - 1],
            "line": line_points(vw).to_json(color), "min_index": min_index,
        })
        if not check_jwitness(sg, A, family, w):
            raise AssertionError("extracted J-witness failed verification")
        return w
    raise AssertionError("unreachable")


def pws_to_jset_noncommutative(sg: GroundSemigroup, A: SetSpec, family: SequenceFamily, min_index: int = 0,
                               cert: Certificate | None = None, cfg: JSetConfig | None = None,
                               classifier: ClassifierConfig | None = None) -> NCWitness:
    """(m, a, t) with x(m, a, t, f) in A for every f in the family and t(1) > min_index."""
    cfg = cfg or JSetConfig()
    if min_index < 0:
        raise InvalidInput("min_index must be >= 0")
    family.validate(sg)
    cert, F, U = _pws_inputs(sg, A, cert, classifier)
    k = len(family)
    for N in _word_lengths(family, min_index, cfg):
        if N < 3:
            continue  # no strong variable word this short
        ev = {
            w: product(sg, [family(w[p], min_index + p + 1) for p in range(N)])
            for w in itertools.product(range(1, k + 1), repeat=N)
        }
        c = find_multiplier(sg, U, set(ev.values()), hint=cert.evidence.get("multiplier"))
        coloring = Coloring(len(F), k, N, fn=lambda w: _least_translate(sg, A, F, sg.apply(ev[w], c)))
        vw = find_strong_variable_word(coloring, k, N)
        if vw is None:
            continue
        color = coloring(vw.substitute(1))
        y = F[color - 1]
        # constant blocks between wildcards; strong words make all of them non-empty
        blocks, cur = [], []
        for p, letter in enumerate(vw.letters, 1):
            if letter:
                cur.append(family(letter, min_index + p))
            else:
                blocks.append(cur)
                cur = []
        blocks.append(cur)
        a = [product(sg, blk) for blk in blocks]
        a[0] = sg.apply(y, a[0])
        a[-1] = sg.apply(a[-1], c)
        t = tuple(min_index + p for p in vw.wildcards)
        w = NCWitness(len(t), tuple(a), t, {
            "N": N, "multiplier": c, "translates": F, "color": color, "translate": y,
            "line": line_points(vw).to_json(color), "min_index": min_index,
        })
        if not check_ncwitness(sg, A, family, w):
            raise AssertionError("extracted NC-witness failed verification")
        return w
    raise AssertionError("unreachable")
