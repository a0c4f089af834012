"""Inductive witness tables over a user-supplied central chain.

A :class:`CentralChain` is a finite prefix C_1 >= C_2 >= ... >= C_D of the
decreasing sequence characterizing a central set. The builders process the
non-empty subsets G of a fixed family in (size, lex) order; each step
collects the finite set M of chain sums (products) already promised to lie
in C_N, moves down the chain to some C_P inside C_N and every x^{-1}C_N for
x in M, and extracts a J-witness from C_P whose indices start after
everything assigned so far.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence

from .classify import Certificate, ClassifierConfig, check_decreasing, is_piecewise_syndetic
from .errors import DepthTooSmall, InvalidInput, WindowTooSmall, WrongAlgorithm
from .jset import (
    JSetConfig,
    SequenceFamily,
    j_eval,
    nc_eval,
    pws_to_jset_commutative,
    pws_to_jset_noncommutative,
)
from .semigroup import Element, GroundSemigroup, product
from .sets import SetSpec, WindowSet, WordSet, is_subset, left_quotient, set_from_json, set_to_json


@dataclass
class CentralConfig:
    max_family: int = 3
    max_nmax: int = 3
    sample_bound: int = 24  # N: members <= bound are refinement-checked at load
    word_sample: int = 4  # free: words up to this length are refinement-checked
    jset: JSetConfig = field(default_factory=JSetConfig)
    classifier: ClassifierConfig | None = None


class CentralChain:
    def __init__(self, sg: GroundSemigroup, sets: Sequence[SetSpec], cfg: CentralConfig | None = None,
                 validate: bool = True):
        if not sets:
            raise InvalidInput("a central chain needs at least one set")
        self.sg = sg
        self.sets = tuple(sets)
        self.cfg = cfg or CentralConfig()
        self._certs: dict[int, Certificate] = {}
        self._resolved: dict = {}
        if validate:
            self.validate()

    @property
    def depth(self) -> int:
        return len(self.sets)

    def C(self, n: int) -> SetSpec:
        if not 1 <= n <= self.depth:
            raise DepthTooSmall(f"chain index {n} outside 1..{self.depth}", bound=f"D={self.depth}")
        return self.sets[n - 1]

    def cert(self, n: int) -> Certificate:
        if n not in self._certs:
            self._certs[n] = is_piecewise_syndetic(self.sg, self.C(n), self.cfg.classifier)
        return self._certs[n]

    def resolve(self, n: int, x: Element) -> int:
        """Least m with C_m inside x^{-1} C_n."""
        key = (n, x)
        if key not in self._resolved:
            Q = left_quotient(self.sg, x, self.C(n))
            m = next((m for m in range(1, self.depth + 1) if is_subset(self.sg, self.C(m), Q)), None)
            if m is None:
                raise DepthTooSmall(f"no chain member up to depth {self.depth} lies inside {x!r}^-1 C_{n}",
                                    bound=f"D={self.depth}")
            self._resolved[key] = m
        return self._resolved[key]

    def _sample(self, n: int) -> Iterator[Element]:
        A = self.C(n)
        if self.sg.kind == "free":
            pool = self.sg.sample(self.cfg.word_sample)
        elif self.sg.kind == "nat":
            bound = self.cfg.sample_bound
            if isinstance(A, WindowSet):
                bound = min(bound, A.window // 2)
            pool = self.sg.sample(bound)
        else:
            pool = self.sg.elements()
        return (x for x in pool if A.contains(x))

    def validate(self) -> None:
        check_decreasing(self.sg, self.sets)
        for n in range(1, self.depth + 1):
            cert = self.cert(n)
            if not cert.holds:
                raise InvalidInput(f"C_{n} is not piecewise syndetic ({cert.verdict})")
            for x in self._sample(n):
                try:
                    self.resolve(n, x)
                except DepthTooSmall:
                    raise InvalidInput(f"refinement fails: no C_m inside {x!r}^-1 C_{n}") from None

    def to_json(self) -> dict:
        return {"depth": self.depth, "sets": [set_to_json(A) for A in self.sets]}

    @classmethod
    def from_json(cls, sg: GroundSemigroup, data: Any, cfg: CentralConfig | None = None) -> "CentralChain":
        if isinstance(data, dict) and "kind" in data:
            data = {"sets": [data]}  # a bare set: constant chain
        if not isinstance(data, dict) or not isinstance(data.get("sets"), list) or not data["sets"]:
            raise InvalidInput("chain spec needs a non-empty 'sets' list")
        sets = [set_from_json(sg, s) for s in data["sets"]]
        D = data.get("depth", len(sets))
        if isinstance(D, bool) or not isinstance(D, int) or D < 1:
            raise InvalidInput("'depth' must be a positive integer")
        if len(sets) == 1:
            sets = sets * D  # constant chain shorthand
        elif len(sets) != D:
            raise InvalidInput(f"chain lists {len(sets)} sets but depth is {D}")
        return cls(sg, sets, cfg)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


@dataclass
class TableEntry:
    subset: tuple  # 1-based positions in the family
    alpha: Any  # element (commutative) or tuple of m+1 elements
    H: tuple  # H(G), or tau(G) in the non-commutative case
    m: int | None = None
    P: int = 1
    M_size: int = 0
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"subset": list(self.subset), "alpha": list(self.alpha) if self.m is not None else self.alpha}
        if self.m is None:
            out["H"] = list(self.H)
        else:
            out.update(m=self.m, tau=list(self.H))
        out.update(P=self.P, M_size=self.M_size, provenance=self.provenance)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TableEntry":
        try:
            if "tau" in data:
                return cls(tuple(data["subset"]), tuple(data["alpha"]), tuple(data["tau"]), data["m"],
                           data.get("P", 1), data.get("M_size", 0), data.get("provenance", {}))
            return cls(tuple(data["subset"]), data["alpha"], tuple(data["H"]), None,
                       data.get("P", 1), data.get("M_size", 0), data.get("provenance", {}))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed table entry: {exc}") from None


@dataclass
class CentralWitnessTable:
    commutative: bool
    family: SequenceFamily
    N: int
    entries: dict = field(default_factory=dict)  # subset -> TableEntry, in processing order

    def term(self, sg: GroundSemigroup, G: tuple, i: int) -> Element:
        """alpha(G) + sum_{H(G)} f_i, or x(m(G), alpha(G), tau(G), f_i)."""
        e = self.entries[G]
        f = lambda t: self.family(i, t)  # noqa: E731
        if self.commutative:
            return j_eval(sg, e.alpha, e.H, f)
        return nc_eval(sg, e.m, e.alpha, e.H, f)

    def to_json(self) -> dict:
        return {
            "commutative": self.commutative,
            "N": self.N,
            "family": self.family.to_json(),
            "entries": [e.to_json() for e in self.entries.values()],
        }

    @classmethod
    def from_json(cls, sg: GroundSemigroup, data: dict) -> "CentralWitnessTable":
        try:
            fam = SequenceFamily.from_json(sg, data["family"])
            entries = [TableEntry.from_json(e) for e in data["entries"]]
            return cls(bool(data["commutative"]), fam, data["N"], {e.subset: e for e in entries})
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed witness table: {exc}") from None


def processing_order(n: int) -> list[tuple]:
    """Non-empty subsets of {1..n}, by size then lexicographically."""
    return [G for k in range(1, n + 1) for G in itertools.combinations(range(1, n + 1), k)]


def subset_chains(top: tuple, include_top: bool) -> Iterator[tuple]:
    """Strictly increasing chains of non-empty subsets of ``top``.

    With ``include_top`` the chains end exactly at ``top``; otherwise they
    end at any non-empty proper subset of it.
    """
    def ending_at(X):
        yield (X,)
        for k in range(1, len(X)):
            for Y in itertools.combinations(X, k):
                for ch in ending_at(Y):
                    yield ch + (X,)

    if include_top:
        yield from ending_at(top)
    else:
        for k in range(1, len(top)):
            for Y in itertools.combinations(top, k):
                yield from ending_at(Y)


def chain_values(sg: GroundSemigroup, table: CentralWitnessTable, chains) -> Iterator[tuple]:
    """(chain, selector, value) for every chain and every f_i in G_i."""
    for ch in chains:
        for sel in itertools.product(*ch):
            yield ch, sel, product(sg, [table.term(sg, G, i) for G, i in zip(ch, sel)])


def _index_blocks(table: CentralWitnessTable):
    return [(G, e.H) for G, e in table.entries.items()]


@dataclass
class VerificationReport:
    checks: int = 0
    failures: list = field(default_factory=list)
    ordering_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.ordering_violations

    def to_json(self) -> dict:
        return {"checks": self.checks, "failures": self.failures,
                "ordering_violations": self.ordering_violations, "ok": self.ok}


def _check_ordering(blocks) -> list:
    bad = []
    for (g1, h1), (g2, h2) in zip(blocks, blocks[1:]):
        if not (h1 and h2 and max(h1) < min(h2)):
            bad.append({"before": list(g1) if isinstance(g1, tuple) else g1,
                        "after": list(g2) if isinstance(g2, tuple) else g2})
    return bad


def verify_chain_sums(sg: GroundSemigroup, table: CentralWitnessTable, chain: CentralChain, N: int | None = None) -> VerificationReport:
    """Every chain sum/product over every selector lies in C_N; index blocks ordered."""
    N = table.N if N is None else N
    target = chain.C(N)
    report = VerificationReport()
    n = len(table.family)
    expected = processing_order(n)
    if list(table.entries) != expected:
        report.ordering_violations.append({"reason": "table does not cover every non-empty subset in processing order"})
        return report
    for e in table.entries.values():
        if e.m is not None and (len(e.alpha) != e.m + 1 or len(e.H) != e.m):
            report.ordering_violations.append({"reason": f"entry {list(e.subset)} has malformed (m, alpha, tau)"})
    report.ordering_violations += _check_ordering(_index_blocks(table))
    for e in table.entries.values():
        H = list(e.H)
        if H != sorted(set(H)) or not H or H[0] < 1 or H[-1] > table.family.T:
            report.ordering_violations.append({"reason": f"entry {list(e.subset)} has invalid index set {H}"})
    if report.ordering_violations:
        return report
    chains = [c for G in expected for c in subset_chains(G, include_top=True)]
    for ch in chains:
        for sel in itertools.product(*ch):
            report.checks += 1
            try:
                value = product(sg, [table.term(sg, G, i) for G, i in zip(ch, sel)])
                ok = target.contains(value)
            except (InvalidInput, WindowTooSmall):
                value, ok = None, False
            if not ok:
                report.failures.append({"chain": [list(G) for G in ch], "selector": list(sel), "value": value})
    return report


def _build(sg, chain, N, F_max, commutative, cfg):
    cfg = cfg or chain.cfg
    if not 1 <= len(F_max) <= cfg.max_family:
        raise InvalidInput(f"family size must be in 1..{cfg.max_family}")
    F_max.validate(sg)
    chain.C(N)
    table = CentralWitnessTable(commutative, F_max, N)
    floor = 0  # every new index block starts above this
    for G in processing_order(len(F_max)):
        M = {v for _, _, v in chain_values(sg, table, subset_chains(G, include_top=False))}
        P = max([N] + [chain.resolve(N, x) for x in sorted(M, key=repr)])
        sub = F_max.subfamily(G)
        if commutative:
            w = pws_to_jset_commutative(sg, chain.C(P), sub, floor, chain.cert(P), cfg.jset, cfg.classifier)
            entry = TableEntry(G, w.a, w.H, None, P, len(M), w.provenance)
        else:
            w = pws_to_jset_noncommutative(sg, chain.C(P), sub, floor, chain.cert(P), cfg.jset, cfg.classifier)
            entry = TableEntry(G, w.a, w.t, w.m, P, len(M), w.provenance)
        table.entries[G] = entry
        floor = max(entry.H)
    return table


def build_commutative_witness(sg: GroundSemigroup, chain: CentralChain, N: int, F_max: SequenceFamily,
                              cfg: CentralConfig | None = None) -> CentralWitnessTable:
    """alpha(G), H(G) for every non-empty G inside F_max."""
    if not sg.commutative:
        raise WrongAlgorithm("commutative witness tables need a commutative semigroup")
    return _build(sg, chain, N, F_max, True, cfg)


def build_noncommutative_witness(sg: GroundSemigroup, chain: CentralChain, N: int, F_max: SequenceFamily,
                                 cfg: CentralConfig | None = None) -> CentralWitnessTable:
    """m(G), alpha(G), tau(G) for every non-empty G inside F_max."""
    return _build(sg, chain, N, F_max, False, cfg)


# ---------------------------------------------------------------------------
# sequence forms
# ---------------------------------------------------------------------------


@dataclass
class SequenceWitness:
    form: str  # "furstenberg" or "phi"
    a: list
    H: list
    steps: list
    report: VerificationReport

    def to_json(self) -> dict:
        return {"form": self.form, "a": self.a, "H": [list(h) for h in self.H], "steps": self.steps,
                "verification": self.report.to_json()}


def bounded_selectors(n_max: int, L: int) -> Iterator[tuple]:
    """All f on {1..n_max} with f(n) <= min(n, L)."""
    return itertools.product(*(range(1, min(n, L) + 1) for n in range(1, n_max + 1)))


def _block_sum(sg, ys, a, H, F, choice) -> Element:
    """sum over n in F of a_n + sum_{t in H_n} y_{choice(n)}(t)."""
    return product(sg, [j_eval(sg, a[n - 1], H[n - 1], lambda t, n=n: ys(choice(n), t)) for n in sorted(F)])


def _nonempty_subsets(n: int):
    return [F for k in range(1, n + 1) for F in itertools.combinations(range(1, n + 1), k)]


def _sequence_form(sg, chain, N, ys, n_max, phi, cfg):
    cfg = cfg or chain.cfg
    if not sg.commutative:
        raise WrongAlgorithm("sequence forms are stated for commutative semigroups")
    if not 1 <= n_max <= cfg.max_nmax:
        raise InvalidInput(f"n_max must be in 1..{cfg.max_nmax}")
    if phi and n_max > len(ys):
        raise InvalidInput("the bounded-selector form needs n_max <= number of sequences")
    if not phi and len(ys) > cfg.max_family:
        raise InvalidInput(f"at most {cfg.max_family} sequences")
    ys.validate(sg)
    chain.C(N)
    a, H, steps = [], [], []
    k = len(ys)
    for j in range(1, n_max + 1):
        M = set()
        for F in _nonempty_subsets(j - 1):
            if phi:
                for f in bounded_selectors(j - 1, k):
                    M.add(_block_sum(sg, ys, a, H, F, lambda n, f=f: f[n - 1]))
            else:
                for i in range(1, k + 1):
                    M.add(_block_sum(sg, ys, a, H, F, lambda n, i=i: i))
        P = max([N] + [chain.resolve(N, x) for x in sorted(M, key=repr)])
        fam = ys.subfamily(range(1, min(j, k) + 1)) if phi else ys
        floor = max(H[-1]) if H else 0
        w = pws_to_jset_commutative(sg, chain.C(P), fam, floor, chain.cert(P), cfg.jset, cfg.classifier)
        a.append(w.a)
        H.append(tuple(w.H))
        steps.append({"P": P, "M_size": len(M), "provenance": w.provenance})
    report = VerificationReport(ordering_violations=_check_ordering(list(enumerate(H, 1))))
    target = chain.C(N)
    choices = (
        [lambda n, f=f: f[n - 1] for f in bounded_selectors(n_max, k)] if phi
        else [lambda n, i=i: i for i in range(1, k + 1)]
    )
    for choice in choices:
        for F in _nonempty_subsets(n_max):
            value = _block_sum(sg, ys, a, H, F, choice)
            report.checks += 1
            if not target.contains(value):
                report.failures.append({"F": list(F), "selector": [choice(n) for n in range(1, n_max + 1)], "value": value})
    return SequenceWitness("phi" if phi else "furstenberg", a, H, steps, report)


def derive_furstenberg(sg: GroundSemigroup, chain: CentralChain, N: int, ys: SequenceFamily, n_max: int,
                       cfg: CentralConfig | None = None) -> SequenceWitness:
    """a_n, H_n (n <= n_max) with every sum over F of a_n + sum_{H_n} y_i in C_N."""
    return _sequence_form(sg, chain, N, ys, n_max, False, cfg)


def derive_phi_form(sg: GroundSemigroup, chain: CentralChain, N: int, ys: SequenceFamily, n_max: int,
                    cfg: CentralConfig | None = None) -> SequenceWitness:
    """As derive_furstenberg, with y_{f(n)} for every selector f(n) <= n."""
    return _sequence_form(sg, chain, N, ys, n_max, True, cfg)


def recheck_sequence_witness(sg: GroundSemigroup, chain: CentralChain, N: int, ys: SequenceFamily,
                             w: SequenceWitness) -> VerificationReport:
    """Replay the membership and ordering checks of a derived sequence form."""
    n_max, k = len(w.a), len(ys)
    report = VerificationReport(ordering_violations=_check_ordering(list(enumerate(w.H, 1))))
    for h in w.H:
        if not h or list(h) != sorted(set(h)) or h[0] < 1 or h[-1] > ys.T:
            report.ordering_violations.append({"reason": f"invalid index set {list(h)}"})
    if report.ordering_violations:
        return report
    phi = w.form == "phi"
    choices = (
        [lambda n, f=f: f[n - 1] for f in bounded_selectors(n_max, k)] if phi
        else [lambda n, i=i: i for i in range(1, k + 1)]
    )
    target = chain.C(N)
    for choice in choices:
        for F in _nonempty_subsets(n_max):
            report.checks += 1
            try:
                value = _block_sum(sg, ys, w.a, w.H, F, choice)
                ok = target.contains(value)
            except (InvalidInput, WindowTooSmall):
                value, ok = None, False
            if not ok:
                report.failures.append({"F": list(F), "value": value})
    return report
