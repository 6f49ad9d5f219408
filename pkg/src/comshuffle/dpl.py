"""Diagonal periodic languages and their finite unions.

A diagonal periodic language over a support Γ ⊆ Σ constrains each letter of Γ
to an arithmetic progression of counts and forces every other letter to count
zero; the empty-support language is {ε}.  Finite unions of these are closed
under union, intersection, binary shuffle, iterated shuffle and projection,
which is what this module implements.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Mapping, Optional, Union as TUnion

from .errors import SizeGuardError
from .progressions import Progression, prog_intersect, prog_product
from .words import Alphabet, ParikhVector

DEFAULT_CLAUSE_GUARD = 10_000


@dataclass(frozen=True)
class DiagonalPeriodic:
    """Shuffle over a ∈ Γ of a^{k_a}(a^{p_a})*; letters off Γ count exactly 0."""

    alphabet: Alphabet
    progs: tuple[tuple[str, Progression], ...]

    def __post_init__(self):
        letters = [a for a, _ in self.progs]
        if any(a not in self.alphabet for a in letters):
            raise ValueError("support letter outside alphabet")
        ordered = [a for a in self.alphabet if a in set(letters)]
        if letters != ordered:
            raise ValueError("progs must follow alphabet order without repeats")

    @classmethod
    def make(cls, alphabet: Alphabet, progs: Mapping[str, Progression]) -> "DiagonalPeriodic":
        return cls(alphabet, tuple((a, progs[a]) for a in alphabet if a in progs))

    @classmethod
    def epsilon(cls, alphabet: Alphabet) -> "DiagonalPeriodic":
        return cls(alphabet, ())

    @classmethod
    def sigma_star(cls, alphabet: Alphabet) -> "DiagonalPeriodic":
        return cls.make(alphabet, {a: Progression(0, 1) for a in alphabet})

    @property
    def support(self) -> frozenset[str]:
        return frozenset(a for a, _ in self.progs)

    def prog(self, a: str) -> Optional[Progression]:
        for letter, p in self.progs:
            if letter == a:
                return p
        return None

    def prog_dict(self) -> dict[str, Progression]:
        return dict(self.progs)


def dpl_member(v: ParikhVector, d: DiagonalPeriodic) -> bool:
    if v.alphabet != d.alphabet:
        raise ValueError("alphabet mismatch")
    progs = d.prog_dict()
    for a in d.alphabet:
        if a in progs:
            if v[a] not in progs[a]:
                return False
        elif v[a] != 0:
            return False
    return True


@dataclass(frozen=True)
class DplUnion:
    """Finite union of diagonal periodic languages over one alphabet."""

    alphabet: Alphabet
    terms: tuple[DiagonalPeriodic, ...]

    def __post_init__(self):
        if any(t.alphabet != self.alphabet for t in self.terms):
            raise ValueError("all terms must share the union's alphabet")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("terms must be deduplicated")

    @classmethod
    def of(cls, alphabet: Alphabet, terms: Iterable[DiagonalPeriodic]) -> "DplUnion":
        seen: list[DiagonalPeriodic] = []
        for t in terms:
            if t not in seen:
                seen.append(t)
        return cls(alphabet, tuple(seen))

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "DplUnion":
        return cls(alphabet, ())

    @classmethod
    def epsilon(cls, alphabet: Alphabet) -> "DplUnion":
        return cls(alphabet, (DiagonalPeriodic.epsilon(alphabet),))

    @classmethod
    def sigma_star(cls, alphabet: Alphabet) -> "DplUnion":
        return cls(alphabet, (DiagonalPeriodic.sigma_star(alphabet),))

    def is_empty(self) -> bool:
        return not self.terms


def dpl_union_member(v: ParikhVector, u: DplUnion) -> bool:
    return any(dpl_member(v, t) for t in u.terms)


def dpl_union(u1: DplUnion, u2: DplUnion) -> DplUnion:
    if u1.alphabet != u2.alphabet:
        raise ValueError("alphabet mismatch")
    return DplUnion.of(u1.alphabet, u1.terms + u2.terms)


def _intersect_terms(t1: DiagonalPeriodic, t2: DiagonalPeriodic) -> Optional[DiagonalPeriodic]:
    p1, p2 = t1.prog_dict(), t2.prog_dict()
    merged: dict[str, Progression] = {}
    for a in t1.alphabet:
        if a in p1 and a in p2:
            both = prog_intersect(p1[a], p2[a])
            if both is None:
                return None
            merged[a] = both
        elif a in p1 or a in p2:
            # the other side forces count 0: survives only if 0 is attainable,
            # and then the letter leaves the support
            if (p1.get(a) or p2.get(a)).offset != 0:
                return None
    return DiagonalPeriodic.make(t1.alphabet, merged)


def dpl_intersect(u1: DplUnion, u2: DplUnion) -> DplUnion:
    if u1.alphabet != u2.alphabet:
        raise ValueError("alphabet mismatch")
    terms = []
    for t1 in u1.terms:
        for t2 in u2.terms:
            t = _intersect_terms(t1, t2)
            if t is not None:
                terms.append(t)
    return DplUnion.of(u1.alphabet, terms)


def _shuffle_terms(t1: DiagonalPeriodic, t2: DiagonalPeriodic) -> list[DiagonalPeriodic]:
    p1, p2 = t1.prog_dict(), t2.prog_dict()
    letters = [a for a in t1.alphabet if a in p1 or a in p2]
    options: list[list[Progression]] = []
    for a in letters:
        if a in p1 and a in p2:
            options.append(list(prog_product(p1[a], p2[a])))
        else:
            options.append([p1.get(a) or p2.get(a)])
    return [
        DiagonalPeriodic.make(t1.alphabet, dict(zip(letters, choice)))
        for choice in product(*options)
    ]


def dpl_shuffle(u1: DplUnion, u2: DplUnion) -> DplUnion:
    if u1.alphabet != u2.alphabet:
        raise ValueError("alphabet mismatch")
    terms = []
    for t1 in u1.terms:
        for t2 in u2.terms:
            terms.extend(_shuffle_terms(t1, t2))
    return DplUnion.of(u1.alphabet, terms)


def _iterate_term(t: DiagonalPeriodic) -> DplUnion:
    """{ε} ∪ ⋃_{i=1..N} (term with offsets scaled by i), N = lcm of the periods."""
    progs = t.prog_dict()
    n = reduce(math.lcm, (p.period for p in progs.values()), 1)
    terms = [DiagonalPeriodic.epsilon(t.alphabet)]
    for i in range(1, n + 1):
        terms.append(
            DiagonalPeriodic.make(
                t.alphabet, {a: Progression(i * p.offset, p.period) for a, p in progs.items()}
            )
        )
    return DplUnion.of(t.alphabet, terms)


def dpl_iterated_shuffle(u: DplUnion) -> DplUnion:
    result = DplUnion.epsilon(u.alphabet)
    for t in u.terms:
        result = dpl_shuffle(result, _iterate_term(t))
    return result


def dpl_project(u: DplUnion, keep: Iterable[str]) -> DplUnion:
    keep = set(keep)
    sub = u.alphabet.restrict(keep)
    terms = [
        DiagonalPeriodic.make(sub, {a: p for a, p in t.progs if a in keep}) for t in u.terms
    ]
    return DplUnion.of(sub, terms)


def dpl_inverse_project(u: DplUnion, alphabet: Alphabet) -> DplUnion:
    """Lift a union over a subalphabet to `alphabet`; new letters become free."""
    if any(a not in alphabet for a in u.alphabet):
        raise ValueError("union's alphabet must be contained in the target alphabet")
    new_letters = [a for a in alphabet if a not in u.alphabet]
    terms = []
    for t in u.terms:
        progs = t.prog_dict()
        progs.update({a: Progression(0, 1) for a in new_letters})
        terms.append(DiagonalPeriodic.make(alphabet, progs))
    return DplUnion.of(alphabet, terms)


def dpl_shift(u: DplUnion, v: ParikhVector) -> DplUnion:
    """Add the fixed vector `v` to every term (the shuffle with perm(v)).

    Exact whenever every term's support contains support(v).  A term missing a
    letter of support(v) gets that letter added with period 1, which
    over-approximates the exact count the shuffle would impose; callers that
    need exactness must arrange full supports beforehand.
    """
    if v.alphabet != u.alphabet:
        raise ValueError("alphabet mismatch")
    terms = []
    for t in u.terms:
        progs = t.prog_dict()
        shifted = {a: Progression(p.offset + v[a], p.period) for a, p in progs.items()}
        for a in v.support():
            if a not in shifted:
                shifted[a] = Progression(v[a], 1)
        terms.append(DiagonalPeriodic.make(u.alphabet, shifted))
    return DplUnion.of(u.alphabet, terms)


# --- generators of the positive boolean algebra ---------------------------


@dataclass(frozen=True)
class Fcount:
    """F(a, t): at least t occurrences of the letter a."""

    letter: str
    threshold: int

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")


@dataclass(frozen=True)
class Fmod:
    """F(a, r, n): number of occurrences of a congruent to r mod n."""

    letter: str
    residue: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.residue < self.modulus:
            raise ValueError("residue must satisfy 0 <= r < n")


@dataclass(frozen=True)
class GammaStar:
    """Γ*: only letters of Γ occur."""

    letters: frozenset[str]


@dataclass(frozen=True)
class GammaPlus:
    """Γ+: only letters of Γ occur, and at least one of them does."""

    letters: frozenset[str]


@dataclass(frozen=True)
class GenUnion:
    parts: tuple["PosBoolExpr", ...]


@dataclass(frozen=True)
class GenIntersect:
    parts: tuple["PosBoolExpr", ...]


PosBoolExpr = TUnion[Fcount, Fmod, GammaStar, GammaPlus, GenUnion, GenIntersect]


def _generator_union(g, alphabet: Alphabet) -> DplUnion:
    free = {a: Progression(0, 1) for a in alphabet}
    if isinstance(g, Fcount):
        progs = dict(free)
        progs[g.letter] = Progression(g.threshold, 1)
        return DplUnion.of(alphabet, [DiagonalPeriodic.make(alphabet, progs)])
    if isinstance(g, Fmod):
        progs = dict(free)
        progs[g.letter] = Progression(g.residue, g.modulus)
        return DplUnion.of(alphabet, [DiagonalPeriodic.make(alphabet, progs)])
    if isinstance(g, GammaStar):
        progs = {a: Progression(0, 1) for a in alphabet if a in g.letters}
        return DplUnion.of(alphabet, [DiagonalPeriodic.make(alphabet, progs)])
    if isinstance(g, GammaPlus):
        terms = []
        for b in alphabet:
            if b in g.letters:
                progs = {a: Progression(0, 1) for a in alphabet if a in g.letters}
                progs[b] = Progression(1, 1)
                terms.append(DiagonalPeriodic.make(alphabet, progs))
        return DplUnion.of(alphabet, terms)
    raise TypeError(f"not a generator: {g!r}")


def from_generators(
    expr: PosBoolExpr, alphabet: Alphabet, clause_guard: int = DEFAULT_CLAUSE_GUARD
) -> DplUnion:
    """Evaluate a positive boolean combination of generators to a union of
    diagonal periodic languages, distributing intersection over union."""

    def check(u: DplUnion) -> DplUnion:
        if len(u.terms) > clause_guard:
            raise SizeGuardError(
                f"clause guard exceeded: {len(u.terms)} > {clause_guard} terms"
            )
        return u

    def go(e) -> DplUnion:
        if isinstance(e, GenUnion):
            return check(reduce(dpl_union, (go(p) for p in e.parts)))
        if isinstance(e, GenIntersect):
            return check(reduce(dpl_intersect, (go(p) for p in e.parts)))
        return check(_generator_union(e, alphabet))

    return go(expr)


def lemma_closed_form(
    alphabet: Alphabet,
    thresholds: Mapping[str, int],
    residues: Mapping[str, int],
    moduli: Mapping[str, int],
    gamma: Optional[Iterable[str]] = None,
) -> DiagonalPeriodic:
    """Closed form for ⋂ F(a, t_a) ∩ ⋂ F(a, r_a, n_a) (∩ Γ* when given).

    Independent of the clause-folding path in `from_generators`; the two are
    cross-checked in the tests.  The offset in the threshold-and-modulus case
    is the least count >= t_a congruent to r_a; written with an extra mod to
    cover n_a | (t_a - r_a), where the plain n - ((t-r) mod n) form lands one
    period too high.
    """
    sigma1, sigma2 = set(thresholds), set(residues)
    if sigma2 != set(moduli):
        raise ValueError("residues and moduli must cover the same letters")
    for a in sigma2:
        if not 0 <= residues[a] < moduli[a]:
            raise ValueError(f"residue out of range for letter {a}")
    progs: dict[str, Progression] = {}
    for a in alphabet:
        if a in sigma1 and a in sigma2:
            t, r, n = thresholds[a], residues[a], moduli[a]
            k = t + (n - ((t - r) % n)) % n if t > r else r
        elif a in sigma2:
            k = residues[a]
        elif a in sigma1:
            k = thresholds[a]
        else:
            k = 0
        p = moduli[a] if a in sigma2 else 1
        progs[a] = Progression(k, p)
    d = DiagonalPeriodic.make(alphabet, progs)
    if gamma is not None:
        # clauses carrying a Γ* constraint; empty intersection is a value (None)
        return _intersect_terms(d, _generator_union(GammaStar(frozenset(gamma)), alphabet).terms[0])
    return d


# --- serialization --------------------------------------------------------


def dpl_union_to_dict(u: DplUnion) -> dict:
    terms = [
        {
            "support": sorted(t.support),
            "progs": {a: {"k": p.offset, "p": p.period} for a, p in t.progs},
        }
        for t in u.terms
    ]
    terms.sort(key=lambda t: json.dumps(t, sort_keys=True))
    return {"alphabet": list(u.alphabet.letters), "terms": terms}


def dpl_union_to_json(u: DplUnion) -> str:
    return json.dumps(dpl_union_to_dict(u), sort_keys=True)


def dpl_union_from_dict(data: dict) -> DplUnion:
    alphabet = Alphabet.of(data["alphabet"])
    terms = []
    for t in data["terms"]:
        progs = {a: Progression(q["k"], q["p"]) for a, q in t["progs"].items()}
        if set(t["support"]) != set(progs):
            raise ValueError("support and progs disagree")
        terms.append(DiagonalPeriodic.make(alphabet, progs))
    return DplUnion.of(alphabet, terms)


def dpl_union_from_json(text: str) -> DplUnion:
    return dpl_union_from_dict(json.loads(text))
