"""Search for generalized-torsion certificates.

The closure set X of nonempty products of conjugates of a base element is
grown shortest-first: seeded with the conjugates base^c for short c,
then expanded by conjugating with generator letters and by multiplying
pairs of settled elements.  Elements are stored by the oracle's canonical
form.  A hit is either an element whose form is the identity or an element
whose inverse is already in X (two products of conjugates that are
mutually inverse).  Every hit is re-verified before it is returned.
"""

from __future__ import annotations

import heapq
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .presentations import Presentation
from .rewriting import decode
from .torsion import Base, Conj, Product, TorsionCertificate, verify
from .word_problem import Budget, TorusNormalForm, WordOracle, get_oracle
from .words import (
    IDENTITY,
    Word,
    commutator,
    concat,
    conjugate,
    cyclic_normal_form,
    invert,
    shortlex_key,
)

__all__ = ["SearchBounds", "NotFound", "SearchError", "search", "search_auto", "candidate_bases", "all_words"]


class SearchError(ValueError):
    """The base element cannot be generalized torsion for a checkable reason."""


@dataclass(frozen=True)
class SearchBounds:
    max_conjugator_length: int = 4
    max_closure: int = 1_000_000
    max_depth: int = 6
    max_word_length: int = 24
    max_expansions: int = 20_000


@dataclass
class NotFound:
    base: Word
    bounds: SearchBounds
    closure_size: int
    expansions: int
    reason: str = "bounds exhausted"

    def to_json(self, P: Presentation) -> dict:
        return {
            "result": "not_found",
            "base": P.render(self.base),
            "reason": self.reason,
            "bounds": asdict(self.bounds),
            "closure_size": self.closure_size,
            "expansions": self.expansions,
        }


def all_words(n_gens: int, max_length: int):
    """Freely reduced words of length <= max_length, in shortlex order."""
    letters = [x for g in range(1, n_gens + 1) for x in (g, -g)]
    level = [IDENTITY]
    yield IDENTITY
    for _ in range(max_length):
        nxt = []
        for w in level:
            for x in letters:
                if w and w.letters[-1] == -x:
                    continue
                nxt.append(Word(w.letters + (x,), reduced=True))
        nxt.sort(key=shortlex_key)
        yield from nxt
        level = nxt


def _torus_word(p: int, q: int, nf: TorusNormalForm) -> Word:
    x, y = Word.gen(0), Word.gen(1)
    out = x ** (abs(p) * nf.central)
    for g, e in nf.syllables:
        out = concat(out, (x if g == 0 else y) ** e)
    return out


class _Closure:
    def __init__(self, oracle: WordOracle, base: Word):
        self.oracle = oracle
        self.base = base
        self.steps: list = []
        self.index: dict = {}  # canonical key -> element id
        self.words: list[Word] = []
        self.weight: list[int] = []
        self.step_of: list[int] = []
        if oracle.torus is not None:
            p, q = oracle.torus
            self._rep = lambda key: _torus_word(p, q, key)
        else:
            self._rep = decode

    def key(self, w: Word):
        return self.oracle.canonical(w)

    def add_step(self, step) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def insert(self, key, step, weight: int) -> int:
        rep = self._rep(key)
        if step.equals is None or step.equals != rep:
            step = type(step)(**{**step.__dict__, "equals": rep})
        s = self.add_step(step)
        eid = len(self.words)
        self.index[key] = eid
        self.words.append(rep)
        self.weight.append(weight)
        self.step_of.append(s)
        return eid


def search(
    P: Presentation,
    base: Word,
    bounds: SearchBounds | None = None,
    budget: Budget | None = None,
) -> TorsionCertificate | NotFound:
    """Look for a product of conjugates of ``base`` equal to the identity."""
    bounds = bounds or SearchBounds()
    oracle = get_oracle(P, budget)
    ab = oracle.abelian
    character = ab.separating_character(base)
    if (ab.weights is not None and ab.image(base) != 0) or (character is not None and character[0] == 0):
        raise SearchError("base has nonzero image under a map onto Z, so no product of its conjugates is 1")
    check = oracle.is_trivial(base)
    if check.trivial:
        raise SearchError("base element is trivial")
    if not check.nontrivial:
        raise SearchError("could not show the base element is nontrivial")

    X = _Closure(oracle, base)
    identity_key = X.key(IDENTITY)
    heap: list[tuple[int, int, int]] = []
    counter = itertools.count()
    settled: list[int] = []
    letters = [Word.gen(g, e) for g in range(P.rank) for e in (1, -1)]

    def finish(final_step: int) -> TorsionCertificate:
        cert = _prune(P, base, X.steps, final_step)
        result = verify(cert, budget, insertion_nodes=0)
        if not result.verified:
            return None
        return cert

    def consider(w: Word, make_step, weight: int):
        """Returns a certificate on a hit, else None; inserts new elements."""
        if weight > bounds.max_depth:
            return None
        key = X.key(w)
        if key == identity_key:
            s = X.add_step(make_step(IDENTITY))
            return finish(s)
        if key in X.index:
            return None
        inv_key = X.key(invert(w))
        other = X.index.get(inv_key)
        if other is not None and weight + X.weight[other] <= bounds.max_depth:
            eid = X.insert(key, make_step(None), weight)
            s = X.add_step(Product(X.step_of[eid], X.step_of[other], equals=IDENTITY))
            return finish(s)
        if len(X.words) >= bounds.max_closure or len(X._rep(key)) > bounds.max_word_length:
            return None
        eid = X.insert(key, make_step(None), weight)
        heapq.heappush(heap, (len(X.words[eid]), next(counter), eid))
        return None

    for c in all_words(P.rank, bounds.max_conjugator_length):
        hit = consider(conjugate(base, c), lambda eq, c=c: Base(c, eq), 1)
        if hit is not None:
            return hit

    expansions = 0
    while heap and expansions < bounds.max_expansions:
        _, _, eid = heapq.heappop(heap)
        expansions += 1
        u, wu, su = X.words[eid], X.weight[eid], X.step_of[eid]
        for g in letters:
            hit = consider(conjugate(u, g), lambda eq, g=g: Conj(su, g, eq), wu)
            if hit is not None:
                return hit
        settled.append(eid)
        for other in settled:
            v, wv, sv = X.words[other], X.weight[other], X.step_of[other]
            if wu + wv > bounds.max_depth:
                continue
            hit = consider(concat(u, v), lambda eq: Product(su, sv, eq), wu + wv)
            if hit is not None:
                return hit
            if other != eid:
                hit = consider(concat(v, u), lambda eq: Product(sv, su, eq), wu + wv)
                if hit is not None:
                    return hit
    return NotFound(base, bounds, len(X.words), expansions)


def _prune(P: Presentation, base: Word, steps: list, final: int) -> TorsionCertificate:
    needed = set()
    stack = [final]
    while stack:
        s = stack.pop()
        if s in needed:
            continue
        needed.add(s)
        st = steps[s]
        if isinstance(st, Product):
            stack.extend((st.i, st.j))
        elif isinstance(st, Conj):
            stack.append(st.i)
    order = sorted(needed)
    remap = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        st = steps[old]
        if isinstance(st, Product):
            st = Product(remap[st.i], remap[st.j], st.equals)
        elif isinstance(st, Conj):
            st = Conj(remap[st.i], st.by, st.equals)
        out.append(st)
    return TorsionCertificate(P, base, tuple(out), remap[final], name="search")


def candidate_bases(P: Presentation, budget: Budget | None = None, max_length: int = 2) -> list[Word]:
    """Commutators [u, v] of short words, nontrivial and killed by the map onto Z.

    Deduplicated up to cyclic rotation and inversion; ordered by length.
    """
    oracle = get_oracle(P, budget)
    ab = oracle.abelian
    words = [w for w in all_words(P.rank, max_length) if w]
    seen: set[Word] = set()
    out: list[Word] = []
    for u, v in itertools.product(words, repeat=2):
        c = commutator(u, v)
        if not c:
            continue
        if ab.weights is not None and ab.image(c) != 0:
            continue
        form = cyclic_normal_form(c)
        if form in seen:
            continue
        seen.add(form)
        if oracle.is_trivial(c).nontrivial:
            out.append(c)
    out.sort(key=shortlex_key)
    return out


def _search_one(args):
    P, base, bounds, budget = args
    return search(P, base, bounds, budget)


def search_auto(
    P: Presentation,
    bounds: SearchBounds | None = None,
    budget: Budget | None = None,
    threads: int = 1,
    max_length: int = 2,
) -> tuple[TorsionCertificate | None, list[NotFound]]:
    """Run ``search`` over every candidate base; the first hit in candidate order wins."""
    bases = candidate_bases(P, budget, max_length)
    misses: list[NotFound] = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_search_one, [(P, b, bounds, budget) for b in bases]))
    else:
        results = None
    for i, base in enumerate(bases):
        res = results[i] if results is not None else search(P, base, bounds, budget)
        if isinstance(res, TorsionCertificate):
            return res, misses
        misses.append(res)
    return None, misses
