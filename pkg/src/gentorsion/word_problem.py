"""Tri-state triviality oracle.

``is_trivial`` answers Trivial only with a mechanical proof (free
reduction, the torus normal form, a rewriting system reducing the word to
the identity, or an explicit chain of relator insertions) and NonTrivial
only with a witness that can be re-checked by direct evaluation (a
character of the abelianization, a permutation representation, or the
torus normal form).  Anything else is Unknown.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from typing import Any

from .presentations import AbelianizationData, Presentation, abelianization
from .rewriting import RewriteSystem, encode, kb_complete, kb_complete_torus
from .words import Word, concat, cyclic_permutations, exponent_vector, invert

__all__ = [
    "Budget",
    "TriState",
    "TorusNormalForm",
    "PermutationWitness",
    "AbelianWitness",
    "torus_normal_form",
    "torus_is_trivial",
    "detect_torus",
    "finite_quotient_witness",
    "relator_insertion_proof",
    "replay_insertion_proof",
    "WordOracle",
    "is_trivial",
    "get_oracle",
]

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Budget:
    kb_max_rules: int = 500
    kb_max_rule_length: int = 64
    kb_max_iterations: int = 100_000
    insertion_depth: int = 6
    insertion_nodes: int = 5_000
    quotient_degree: int = 7
    seed: int = 0


@dataclass(frozen=True)
class TriState:
    value: str
    method: str = ""
    witness: Any = None

    @property
    def trivial(self) -> bool:
        return self.value == TRIVIAL

    @property
    def nontrivial(self) -> bool:
        return self.value == NONTRIVIAL

    @property
    def unknown(self) -> bool:
        return self.value == UNKNOWN

    def describe(self) -> str:
        return f"{self.value} ({self.method})" if self.method else self.value


# -- torus groups -----------------------------------------------------------------


@dataclass(frozen=True)
class TorusNormalForm:
    """``c^central`` times alternating syllables, with c = x^|p| central."""

    central: int
    syllables: tuple[tuple[int, int], ...]

    @property
    def is_identity(self) -> bool:
        return self.central == 0 and not self.syllables


def torus_normal_form(p: int, q: int, w: Word) -> TorusNormalForm:
    """Normal form in ``<x, y | x^p = y^q>``, with x generator 0 and y generator 1.

    With c = x^|p| we have y^|q| = c^e where e = +1 when p, q have the same
    sign.  Syllable exponents live in (0, |p|) and (0, |q|).
    """
    if abs(p) <= 1 or abs(q) <= 1:
        raise ValueError("torus solver needs |p| > 1 and |q| > 1")
    period = (abs(p), abs(q))
    factor = (1, 1 if (p > 0) == (q > 0) else -1)
    central = 0
    stack: list[list[int]] = []
    for x in w.letters:
        g = abs(x) - 1
        if g > 1:
            raise ValueError("torus words use only generators x and y")
        e = 1 if x > 0 else -1
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
        else:
            stack.append([g, e])
        k, r = divmod(stack[-1][1], period[g])
        central += k * factor[g]
        if r:
            stack[-1][1] = r
        else:
            stack.pop()
    return TorusNormalForm(central, tuple((g, e) for g, e in stack))


def torus_is_trivial(p: int, q: int, w: Word) -> bool:
    return torus_normal_form(p, q, w).is_identity


def detect_torus(P: Presentation) -> tuple[int, int] | None:
    """(p, q) if ``P`` is literally ``<x, y | x^p y^-q>`` (up to cyclic rotation)."""
    if P.torus is not None:
        return P.torus
    if P.rank != 2 or len(P.relators) != 1:
        return None
    for rot in cyclic_permutations(P.relators[0]):
        a = rot.letters
        if not a or abs(a[0]) != 1:
            continue
        i = 0
        while i < len(a) and a[i] == a[0]:
            i += 1
        rest = a[i:]
        if rest and all(x == rest[0] for x in rest) and abs(rest[0]) == 2:
            p = i if a[0] > 0 else -i
            q = -len(rest) if rest[0] > 0 else len(rest)
            if abs(p) > 1 and abs(q) > 1:
                return (p, q)
    return None


# -- finite quotients -----------------------------------------------------------


@dataclass(frozen=True)
class PermutationWitness:
    """Generator images in the symmetric group on ``degree`` points."""

    degree: int
    images: tuple[tuple[int, ...], ...]

    def evaluate(self, w: Word) -> tuple[int, ...]:
        return _evaluate(self.images, _inverses(self.images), w, self.degree)

    def check(self, P: Presentation, w: Word) -> bool:
        ident = tuple(range(self.degree))
        if any(self.evaluate(r) != ident for r in P.relators):
            return False
        return self.evaluate(w) != ident

    def to_json(self) -> dict:
        return {"kind": "permutation", "degree": self.degree, "images": [list(p) for p in self.images]}


@dataclass(frozen=True)
class AbelianWitness:
    """A homomorphism to Z (modulus 0) or Z/modulus given by generator weights."""

    modulus: int
    weights: tuple[int, ...]

    def value(self, w: Word) -> int:
        vec = exponent_vector(w, len(self.weights))
        v = sum(a * b for a, b in zip(vec, self.weights))
        return v % self.modulus if self.modulus else v

    def check(self, P: Presentation, w: Word) -> bool:
        return all(self.value(r) == 0 for r in P.relators) and self.value(w) != 0

    def to_json(self) -> dict:
        return {"kind": "abelian", "modulus": self.modulus, "weights": list(self.weights)}


def _inverses(images):
    out = []
    for perm in images:
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        out.append(tuple(inv))
    return out


def _evaluate(images, inverses, w: Word, degree: int) -> tuple[int, ...]:
    # right action: apply letters left to right
    cur = list(range(degree))
    for x in w.letters:
        perm = images[x - 1] if x > 0 else inverses[-x - 1]
        cur = [perm[i] for i in cur]
    return tuple(cur)


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _cycle_type_rep(parts, n):
    perm = list(range(n))
    start = 0
    for k in parts:
        for i in range(k):
            perm[start + i] = start + (i + 1) % k
        start += k
    return tuple(perm)


def finite_quotient_witness(
    P: Presentation,
    w: Word,
    max_degree: int = 7,
    seed: int = 0,
    min_degree: int = 2,
) -> PermutationWitness | None:
    """Search homomorphisms to S_n (n <= max_degree) with nontrivial image of ``w``.

    The first generator ranges over cycle-type representatives (the search
    is invariant under simultaneous conjugation); the rest over all
    permutations, with each relator checked as soon as its generators are
    assigned.  ``seed`` 0 enumerates lexicographically; other seeds shuffle.
    """
    if max_degree > 9:
        raise ValueError("max_degree above 9 is refused")
    if not w:
        return None
    n_gens = P.rank
    # relators grouped by the last generator they mention
    by_level: list[list[Word]] = [[] for _ in range(n_gens)]
    for r in P.relators:
        by_level[max(abs(x) for x in r) - 1].append(r)
    rng = random.Random(seed) if seed else None
    for degree in range(min_degree, max_degree + 1):
        ident = tuple(range(degree))
        everything = list(itertools.permutations(range(degree)))
        firsts = [_cycle_type_rep(parts, degree) for parts in _partitions(degree)]
        if rng is not None:
            rng.shuffle(everything)
            rng.shuffle(firsts)
        images: list[tuple[int, ...]] = [ident] * n_gens
        inverses: list[tuple[int, ...]] = [ident] * n_gens

        def extend(level):
            choices = firsts if level == 0 else everything
            for perm in choices:
                images[level] = perm
                inverses[level] = _inverses([perm])[0]
                ok = all(_evaluate(images, inverses, r, degree) == ident for r in by_level[level])
                if not ok:
                    continue
                if level + 1 == n_gens:
                    if _evaluate(images, inverses, w, degree) != ident:
                        return True
                elif extend(level + 1):
                    return True
            return False

        if extend(0):
            return PermutationWitness(degree, tuple(images))
    return None


# -- relator insertion ---------------------------------------------------------------


def _relator_rotations(P: Presentation) -> list[Word]:
    out: dict[Word, None] = {}
    for r in P.relators:
        for rot in cyclic_permutations(r) + cyclic_permutations(invert(r)):
            out.setdefault(rot, None)
    return list(out)


def relator_insertion_proof(
    P: Presentation,
    w: Word,
    max_depth: int = 6,
    max_nodes: int = 5_000,
    max_length: int | None = None,
) -> list[tuple[int, Word]] | None:
    """Find insertions reducing ``w`` to the identity.

    Each move inserts a cyclic rotation of a relator (or its inverse) at a
    position and freely reduces.  Best-first on word length; returns the
    list of (position, inserted word) or None when the budget runs out.
    """
    if not w:
        return []
    rots = _relator_rotations(P)
    if not rots:
        return None
    longest = max(len(r) for r in rots)
    if max_length is None:
        max_length = len(w) + longest
    start = w
    parent: dict[Word, tuple[Word, int, Word] | None] = {start: None}
    depth = {start: 0}
    heap = [(len(start), 0, 0, start)]
    counter = 1
    expanded = 0
    while heap and expanded < max_nodes:
        _, d, _, cur = heapq.heappop(heap)
        expanded += 1
        if d >= max_depth:
            continue
        for i in range(len(cur) + 1):
            left, right = cur[:i], cur[i:]
            for rot in rots:
                nxt = concat(concat(left, rot), right)
                if len(nxt) > max_length or nxt in parent:
                    continue
                parent[nxt] = (cur, i, rot)
                depth[nxt] = d + 1
                if not nxt:
                    path = []
                    node = nxt
                    while parent[node] is not None:
                        prev, pos, ins = parent[node]
                        path.append((pos, ins))
                        node = prev
                    return path[::-1]
                heapq.heappush(heap, (len(nxt), d + 1, counter, nxt))
                counter += 1
    return None


def replay_insertion_proof(P: Presentation, w: Word, proof: list[tuple[int, Word]]) -> bool:
    """Re-check an insertion chain: every insert is a relator rotation, result is 1."""
    allowed = set(_relator_rotations(P))
    cur = w
    for pos, ins in proof:
        if ins not in allowed or not 0 <= pos <= len(cur):
            return False
        cur = concat(concat(cur[:pos], ins), cur[pos:])
    return not cur


# -- the oracle ---------------------------------------------------------------------


@dataclass
class WordOracle:
    """Per-presentation triviality engine with cached rewriting data."""

    P: Presentation
    budget: Budget = field(default_factory=Budget)
    _rs: RewriteSystem | None = field(default=None, repr=False)
    _ab: AbelianizationData | None = field(default=None, repr=False)
    _torus: tuple[int, int] | None | bool = field(default=False, repr=False)
    _quotients: list[PermutationWitness] = field(default_factory=list, repr=False)

    @property
    def torus(self) -> tuple[int, int] | None:
        if self._torus is False:
            self._torus = detect_torus(self.P)
        return self._torus

    @property
    def abelian(self) -> AbelianizationData:
        if self._ab is None:
            self._ab = abelianization(self.P)
        return self._ab

    @property
    def rewriting(self) -> RewriteSystem:
        if self._rs is None:
            b = self.budget
            limits = dict(
                max_rules=b.kb_max_rules,
                max_rule_length=b.kb_max_rule_length,
                max_iterations=b.kb_max_iterations,
            )
            if self.torus is not None:
                self._rs = kb_complete_torus(*self.torus, **limits)
            else:
                self._rs = kb_complete(self.P, **limits)
        return self._rs

    def canonical(self, w: Word):
        """Hashable form; equal forms imply equal elements, and the converse
        holds when the torus solver or a complete rewriting system is used."""
        if self.torus is not None:
            return torus_normal_form(*self.torus, w)
        return self.rewriting.reduce(encode(w))

    @property
    def canonical_is_exact(self) -> bool:
        return self.torus is not None or self.rewriting.complete

    def is_trivial(self, w: Word) -> TriState:
        if not w:
            return TriState(TRIVIAL, "free reduction")
        character = self.abelian.separating_character(w)
        if character is not None:
            return TriState(NONTRIVIAL, "abelianization", AbelianWitness(character[0], character[1]))
        if self.torus is not None:
            nf = torus_normal_form(*self.torus, w)
            if nf.is_identity:
                return TriState(TRIVIAL, "torus normal form", nf)
            return TriState(NONTRIVIAL, "torus normal form", nf)
        rs = self.rewriting
        reduced = rs.reduce(encode(w))
        if not reduced:
            return TriState(TRIVIAL, "rewriting" + (" (complete)" if rs.complete else " (capped)"))
        if rs.complete:
            return TriState(NONTRIVIAL, "complete rewriting normal form", reduced)
        for q in self._quotients:
            if q.evaluate(w) != tuple(range(q.degree)):
                return TriState(NONTRIVIAL, "finite quotient", q)
        b = self.budget
        proof = relator_insertion_proof(self.P, w, b.insertion_depth, b.insertion_nodes)
        if proof is not None:
            return TriState(TRIVIAL, "relator insertion", proof)
        q = finite_quotient_witness(self.P, w, b.quotient_degree, b.seed)
        if q is not None:
            self._quotients.append(q)
            return TriState(NONTRIVIAL, "finite quotient", q)
        return TriState(UNKNOWN, "budget exhausted")

    def equal(self, u: Word, v: Word) -> TriState:
        if u == v:
            return TriState(TRIVIAL, "free reduction")
        if self.torus is None and self.canonical(u) == self.canonical(v):
            # both sides rewrite to one word by rules derived from the relators
            return TriState(TRIVIAL, "rewriting to a common form")
        return self.is_trivial(concat(u, invert(v)))


_ORACLES: dict[tuple[Presentation, Budget], WordOracle] = {}


def get_oracle(P: Presentation, budget: Budget | None = None) -> WordOracle:
    budget = budget or Budget()
    key = (P, budget)
    oracle = _ORACLES.get(key)
    if oracle is None:
        oracle = _ORACLES[key] = WordOracle(P, budget)
    return oracle


def is_trivial(P: Presentation, w: Word, budget: Budget | None = None) -> TriState:
    return get_oracle(P, budget).is_trivial(w)

