"""Finitely presented groups, the knot-group catalog and connected sums."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, replace
from math import gcd

from .smith import integer_kernel, smith_normal_form
from .words import (
    Word,
    WordParseError,
    cyclic_reduce,
    exponent_vector,
    invert,
    parse_word,
    render_word,
)

__all__ = [
    "Presentation",
    "PresentationError",
    "AbelianizationData",
    "parse_presentation",
    "render_presentation",
    "torus_group",
    "catalog",
    "CATALOG_NAMES",
    "connected_sum",
    "abelianization",
    "presentation_to_json",
    "presentation_from_json",
    "load_presentation",
]


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str | None = None
    fibred: bool | None = None
    meridian: Word | None = None
    # (p, q) when this is the standard presentation <x, y | x^p = y^q>
    torus: tuple[int, int] | None = None
    # the knot group satisfies the one-relator hypothesis of the
    # no-positive-root obstruction
    one_relator_criterion: bool = False

    def __post_init__(self):
        if not self.generators:
            raise PresentationError("a presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        n = len(self.generators)
        for r in self.relators:
            if not r:
                raise PresentationError("relator is trivial after reduction")
            if cyclic_reduce(r)[0] != r:
                raise PresentationError(f"relator {render_word(r, self.generators)} is not cyclically reduced")
            if any(abs(x) > n for x in r):
                raise PresentationError("relator uses a generator outside the alphabet")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def gen(self, index: int) -> Word:
        return Word.gen(index)

    def render(self, w: Word) -> str:
        return render_word(w, self.generators)

    def __str__(self) -> str:
        return render_presentation(self)


_REL_SPLIT = re.compile(r"\s*,\s*")


def _parse_side(text: str, names) -> Word:
    return parse_word(text, names, allow_exponents=True)


def parse_presentation(text: str) -> Presentation:
    """Parse ``<gens | rel, rel, ...>``; ``u = v`` is stored as ``u v^-1``."""
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")):
        raise PresentationError("presentation must look like <gens | relators>")
    body = s[1:-1]
    if "|" in body:
        gens_text, rels_text = body.split("|", 1)
    elif ":" in body:
        gens_text, rels_text = body.split(":", 1)
    else:
        gens_text, rels_text = body, ""
    names = tuple(g.strip() for g in gens_text.split(",") if g.strip())
    for g in names:
        if not re.fullmatch(r"[a-z][a-z0-9_]*", g):
            raise PresentationError(f"bad generator name {g!r}")
    relators = []
    for chunk in _REL_SPLIT.split(rels_text.strip()):
        if not chunk:
            continue
        try:
            if "=" in chunk:
                lhs, rhs = chunk.split("=", 1)
                w = _parse_side(lhs, names) * invert(_parse_side(rhs, names))
            else:
                w = _parse_side(chunk, names)
        except WordParseError as exc:
            raise PresentationError(f"in relator {chunk!r}: {exc}") from exc
        core, _ = cyclic_reduce(w)
        if not core:
            raise PresentationError(f"relator {chunk!r} is trivial after reduction")
        relators.append(core)
    return Presentation(names, tuple(relators))


def render_presentation(P: Presentation) -> str:
    rels = ", ".join(P.render(r) for r in P.relators)
    return f"<{','.join(P.generators)} | {rels}>"


# -- catalog ------------------------------------------------------------------


def _bezout(a: int, b: int) -> tuple[int, int]:
    # s, r with a*s + b*r = gcd(a, b)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def torus_group(p: int, q: int) -> Presentation:
    """The group ``<x, y | x^p = y^q>``; a torus knot group when gcd(p, q) = 1."""
    if abs(p) <= 1 or abs(q) <= 1:
        raise PresentationError(f"torus group needs |p| > 1 and |q| > 1, got p={p}, q={q}")
    x, y = Word.gen(0), Word.gen(1)
    relator = (x ** p) * (y ** -q)
    relator = cyclic_reduce(relator)[0]
    meridian = None
    fibred = None
    name = f"T({p},{q})"
    if gcd(p, q) == 1:
        fibred = True
        # weights are x -> q, y -> p (up to sign); pick x^s y^r with q s + p r = 1
        s, r = _bezout(q, p)
        weights = _torus_weights(p, q)
        if weights[0] * s + weights[1] * r != 1:
            s, r = -s, -r
        meridian = (x ** s) * (y ** r)
        if {abs(p), abs(q)} == {2, 3}:
            name = "3_1"
        elif {abs(p), abs(q)} == {2, 5}:
            name = "5_1"
    return Presentation(("x", "y"), (relator,), name=name, fibred=fibred, meridian=meridian, torus=(p, q))


def _torus_weights(p, q):
    # kernel of (p, -q), normalized so the first nonzero weight is positive
    g = gcd(p, q)
    w = [q // g, p // g]
    if w[0] < 0 or (w[0] == 0 and w[1] < 0):
        w = [-w[0], -w[1]]
    return w


CATALOG_NAMES = ("klein", "3_1", "4_1", "5_1", "5_2")


def catalog(name: str) -> Presentation:
    if name == "klein":
        P = parse_presentation("<x,y | Yxy = X>")
        return replace(P, name="klein")
    if name == "3_1":
        return torus_group(2, 3)
    if name == "5_1":
        return torus_group(2, 5)
    if name == "4_1":
        P = parse_presentation("<a,b | ab3a = ba2b>")
        return replace(P, name="4_1", fibred=True, meridian=P.word("a"))
    if name == "5_2":
        P = parse_presentation("<a,b | b2A2b2 = Ab3A>")
        return replace(P, name="5_2", fibred=False, meridian=P.word("a"), one_relator_criterion=True)
    raise PresentationError(f"unknown catalog entry {name!r}; available: {', '.join(CATALOG_NAMES)}")


# -- connected sum --------------------------------------------------------------


def _fresh_names(taken: set[str], wanted: tuple[str, ...]) -> list[str]:
    pool = [c for c in "abcdefghijklmnopqrstuvwxyz" if c not in taken]
    out = []
    for name in wanted:
        if name not in taken:
            out.append(name)
            taken.add(name)
            if name in pool:
                pool.remove(name)
            continue
        if pool:
            fresh = pool.pop(0)
        else:
            k = 0
            while f"g{k}" in taken:
                k += 1
            fresh = f"g{k}"
        out.append(fresh)
        taken.add(fresh)
    return out


def connected_sum(P1: Presentation, P2: Presentation):
    """Knot sum of two knot groups, amalgamated along their meridians.

    Returns ``(P, inclusion1, inclusion2)``; each inclusion is a list
    sending generator ``i`` of the factor to a generator index of ``P``.
    """
    if P1.meridian is None or P2.meridian is None:
        raise PresentationError("connected sum needs meridian metadata on both factors")
    n1 = P1.rank
    names1 = list(P1.generators)
    names2 = _fresh_names(set(names1), P2.generators)
    inc1 = list(range(n1))
    inc2 = [n1 + i for i in range(P2.rank)]
    relators = [r.rename(inc1) for r in P1.relators] + [r.rename(inc2) for r in P2.relators]
    glue = P1.meridian.rename(inc1) * invert(P2.meridian.rename(inc2))
    core = cyclic_reduce(glue)[0]
    if core:
        relators.append(core)
    name = f"{P1.name or '?'}#{P2.name or '?'}"
    fibred = None
    if P1.fibred is not None and P2.fibred is not None:
        fibred = P1.fibred and P2.fibred
    P = Presentation(
        tuple(names1 + names2),
        tuple(relators),
        name=name,
        fibred=fibred,
        meridian=P1.meridian.rename(inc1),
    )
    return P, inc1, inc2


# -- abelianization -------------------------------------------------------------


@dataclass(frozen=True)
class AbelianizationData:
    relation_matrix: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[int, ...]
    free_rank: int
    weights: tuple[int, ...] | None
    # characters: (modulus, weights) with modulus 0 meaning Z
    characters: tuple[tuple[int, tuple[int, ...]], ...] = field(default=())

    @property
    def infinite_cyclic(self) -> bool:
        return self.free_rank == 1 and all(d == 1 for d in self.invariant_factors if d)

    def image(self, w: Word) -> int | None:
        if self.weights is None:
            return None
        vec = exponent_vector(w, len(self.weights))
        return sum(a * b for a, b in zip(vec, self.weights))

    def separating_character(self, w: Word):
        """A character (modulus, weights) killing every relator but not ``w``, or None."""
        n = len(self.relation_matrix[0]) if self.relation_matrix else None
        vec = exponent_vector(w, n if n is not None else max((abs(x) for x in w), default=0))
        for modulus, chi in self.characters:
            value = sum(a * b for a, b in zip(vec, chi))
            if (modulus == 0 and value != 0) or (modulus and value % modulus):
                return modulus, chi
        return None


def abelianization(P: Presentation) -> AbelianizationData:
    n = P.rank
    M = [exponent_vector(r, n) for r in P.relators]
    if M:
        D, _, V = smith_normal_form(M)
        diag = [D[i][i] for i in range(min(len(D), n))]
    else:
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        diag = []
    diag += [0] * (n - len(diag))
    rank = sum(1 for d in diag if d == 0)
    # characters: column j of V gives a map to Z/diag[j] (Z when diag[j] == 0)
    chars = []
    for j, d in enumerate(diag):
        if d == 1:
            continue
        chars.append((d, tuple(V[i][j] for i in range(n))))
    weights = None
    if rank == 1:
        (w,) = integer_kernel(M, n)
        first = next(c for c in w if c)
        if first < 0:
            w = [-c for c in w]
        weights = tuple(w)
    return AbelianizationData(
        relation_matrix=tuple(tuple(r) for r in M),
        invariant_factors=tuple(d for d in diag if d),
        free_rank=rank,
        weights=weights,
        characters=tuple(chars),
    )


# -- serialization --------------------------------------------------------------


def presentation_to_json(P: Presentation) -> dict:
    out = {
        "generators": list(P.generators),
        "relators": [P.render(r) for r in P.relators],
    }
    if P.name is not None:
        out["name"] = P.name
    if P.fibred is not None:
        out["fibred"] = P.fibred
    if P.meridian is not None:
        out["meridian"] = P.render(P.meridian)
    if P.torus is not None:
        out["torus"] = list(P.torus)
    if P.one_relator_criterion:
        out["one_relator_criterion"] = True
    return out


def presentation_from_json(data) -> Presentation:
    if isinstance(data, str):
        if data in CATALOG_NAMES:
            return catalog(data)
        return parse_presentation(data)
    names = tuple(data["generators"])
    relators = []
    for text in data.get("relators", []):
        core = cyclic_reduce(parse_word(text, names, allow_exponents=True))[0]
        relators.append(core)
    meridian = data.get("meridian")
    torus = data.get("torus")
    return Presentation(
        names,
        tuple(relators),
        name=data.get("name"),
        fibred=data.get("fibred"),
        meridian=parse_word(meridian, names) if meridian is not None else None,
        torus=tuple(torus) if torus is not None else None,
        one_relator_criterion=bool(data.get("one_relator_criterion", False)),
    )


_TORUS_SOURCE = re.compile(r"T\((-?\d+),\s*(-?\d+)\)")


def load_presentation(source: str) -> Presentation:
    """Resolve a catalog name, ``T(p,q)``, a ``#``-joined sum, inline text, or a file."""
    source = source.strip()
    if source in CATALOG_NAMES:
        return catalog(source)
    m = _TORUS_SOURCE.fullmatch(source)
    if m:
        return torus_group(int(m.group(1)), int(m.group(2)))
    if "#" in source and not source.startswith("<"):
        parts = [load_presentation(s) for s in source.split("#")]
        P = parts[0]
        for Q in parts[1:]:
            P = connected_sum(P, Q)[0]
        return P
    if source.startswith("<"):
        return parse_presentation(source)
    if not os.path.isfile(source):
        raise PresentationError(
            f"unknown presentation {source!r}: not a catalog name ({', '.join(CATALOG_NAMES)}), "
            "T(p,q), A#B, inline <gens | rels> text or an existing file"
        )
    with open(source, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.strip()
    if stripped.startswith("{"):
        return presentation_from_json(json.loads(stripped))
    return parse_presentation(stripped)
