"""Fox calculus, Alexander polynomials and exact real-root counting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .presentations import Presentation, PresentationError, abelianization
from .words import IDENTITY, Word, concat, exponent_vector

__all__ = [
    "LaurentPolynomial",
    "GroupRingElement",
    "fox_derivative",
    "abelianize",
    "fox_matrix",
    "alexander_polynomial",
    "parse_polynomial",
    "RootReport",
    "positive_real_roots",
    "OrderabilityReport",
    "orderability_report",
    "KNOWN_POLYNOMIALS",
    "ContradictionError",
]


class LaurentPolynomial:
    """Integer Laurent polynomial in t, stored as {exponent: coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def from_coefficients(cls, coeffs, shift: int = 0) -> LaurentPolynomial:
        return cls({i + shift: int(c) for i, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPolynomial:
        return cls({exponent: coefficient})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial({e: c * other for e, c in self.terms.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    @property
    def low(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def high(self) -> int:
        return max(self.terms) if self.terms else 0

    @property
    def degree(self) -> int:
        """Span high - low (the degree after normalization)."""
        return self.high - self.low

    def coefficients(self) -> list[int]:
        """Coefficients from the lowest exponent upwards."""
        if not self.terms:
            return [0]
        lo = self.low
        return [self.terms.get(lo + i, 0) for i in range(self.degree + 1)]

    def normalize(self) -> LaurentPolynomial:
        """Shift to lowest exponent 0 and make the leading coefficient positive."""
        if not self.terms:
            return self
        coeffs = self.coefficients()
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        return LaurentPolynomial.from_coefficients(coeffs)

    def __call__(self, t):
        return sum(c * Fraction(t) ** e for e, c in self.terms.items())

    def exact_div(self, other: LaurentPolynomial) -> LaurentPolynomial:
        """Quotient in Z[t, 1/t]; raises if ``other`` does not divide."""
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPolynomial()
        num = self.coefficients()
        den = other.coefficients()
        q = [0] * (len(num) - len(den) + 1) if len(num) >= len(den) else []
        rem = list(num)
        for i in range(len(q) - 1, -1, -1):
            top = rem[i + len(den) - 1]
            if top % den[-1]:
                raise ArithmeticError("inexact polynomial division")
            c = top // den[-1]
            q[i] = c
            for j, d in enumerate(den):
                rem[i + j] -= c * d
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        return LaurentPolynomial.from_coefficients(q, self.low - other.low)

    def is_palindromic_up_to_sign(self) -> bool:
        c = self.coefficients()
        return c == c[::-1] or c == [-x for x in c[::-1]]

    def to_text(self) -> str:
        """Ascending interface form, e.g. ``2 - 3*t + 2*t^2``."""
        return _format(sorted(self.terms.items()), star=True)

    def pretty(self) -> str:
        """Descending form, e.g. ``2t^2 - 3t + 2``."""
        return _format(sorted(self.terms.items(), reverse=True), star=False)

    def __repr__(self):
        return f"LaurentPolynomial({self.to_text()!r})"

    def __str__(self):
        return self.pretty()


def _format(items, star: bool) -> str:
    if not items:
        return "0"
    parts = []
    for k, (e, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            coef = "" if a == 1 else (f"{a}*" if star else str(a))
            body = f"{coef}t" if e == 1 else f"{coef}t^{e}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(t(?:\s*\^\s*(-?\d+))?)?")


def parse_polynomial(text: str) -> LaurentPolynomial:
    """Parse ``2 - 5t + 2t^2``, ``2 - 5*t + 2*t^2`` or a JSON-style list ``[2, -5, 2]``."""
    s = text.strip()
    if s.startswith("["):
        body = s[1:-1].strip()
        return LaurentPolynomial.from_coefficients([int(x) for x in body.split(",")] if body else [])
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing operator near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) is not None else 1
        else:
            e = 0
        terms[e] = terms.get(e, 0) + sign * coef
        pos = m.end()
    return LaurentPolynomial(terms)


# -- Fox calculus -----------------------------------------------------------------


class GroupRingElement(dict):
    """Finite integer combination of free-group elements, {Word: coefficient}."""

    def add(self, w: Word, c: int):
        v = self.get(w, 0) + c
        if v:
            self[w] = v
        else:
            self.pop(w, None)

    def __add__(self, other):
        out = GroupRingElement(self)
        for w, c in other.items():
            out.add(w, c)
        return out

    def left_multiply(self, u: Word) -> GroupRingElement:
        out = GroupRingElement()
        for w, c in self.items():
            out.add(concat(u, w), c)
        return out


def fox_derivative(r: Word, g: int) -> GroupRingElement:
    """Fox derivative of ``r`` with respect to generator index ``g``."""
    out = GroupRingElement()
    prefix = IDENTITY
    for x in r.letters:
        letter = Word((x,), reduced=True)
        if x == g + 1:
            out.add(prefix, 1)
        elif x == -(g + 1):
            out.add(concat(prefix, letter), -1)
        prefix = concat(prefix, letter)
    return out


def abelianize(element: GroupRingElement, weights) -> LaurentPolynomial:
    out: dict[int, int] = {}
    n = len(weights)
    for w, c in element.items():
        e = sum(a * b for a, b in zip(exponent_vector(w, n), weights))
        out[e] = out.get(e, 0) + c
    return LaurentPolynomial(out)


def fox_matrix(P: Presentation, weights) -> list[list[LaurentPolynomial]]:
    return [[abelianize(fox_derivative(r, j), weights) for j in range(P.rank)] for r in P.relators]


def _det(M: list[list[LaurentPolynomial]]) -> LaurentPolynomial:
    n = len(M)
    if n == 0:
        return LaurentPolynomial({0: 1})
    total = LaurentPolynomial()
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = LaurentPolynomial({0: sign})
        for i, j in enumerate(perm):
            term = term * M[i][j]
            if not term:
                break
        total = total + term
    return total


def _t_power_minus_one(w: int) -> LaurentPolynomial:
    return LaurentPolynomial({w: 1}) - LaurentPolynomial({0: 1})


def alexander_polynomial(P: Presentation) -> LaurentPolynomial:
    """Alexander polynomial of a deficiency-one presentation with H_1 = Z.

    Deleting column j of the abelianized Fox matrix gives a minor D_j, and
    D_j (t - 1) / (t^w_j - 1) is the same polynomial up to units for every j
    with nonzero weight; this is checked for all columns.
    """
    if len(P.relators) != P.rank - 1:
        raise PresentationError(
            f"deficiency must be one: {P.rank} generators, {len(P.relators)} relators"
        )
    ab = abelianization(P)
    if not ab.infinite_cyclic:
        raise PresentationError("abelianization is not infinite cyclic")
    weights = ab.weights
    A = fox_matrix(P, weights)
    minors = []
    for j in range(P.rank):
        sub = [[row[k] for k in range(P.rank) if k != j] for row in A]
        minors.append(_det(sub))
    t_minus_1 = _t_power_minus_one(1)
    candidates = []
    for j, w in enumerate(weights):
        if w == 0:
            if minors[j]:
                raise ArithmeticError(f"column {j} has weight 0 but a nonzero minor")
            continue
        candidates.append((minors[j] * t_minus_1).exact_div(_t_power_minus_one(w)).normalize())
    if any(c != candidates[0] for c in candidates):
        raise ArithmeticError("minors disagree across deleted columns")
    return candidates[0]


# -- real roots --------------------------------------------------------------------


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        a.pop()
    return _trim(a) if a else [Fraction(0)]


def _quo(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        for j, bc in enumerate(b):
            a[i + j] -= c * bc
    return _trim(q)


def _gcd(a, b):
    while any(b):
        a, b = b, _rem(a, b)
    return [c / a[-1] for c in a]


def _deriv(p):
    return _trim([i * c for i, c in enumerate(p)][1:] or [Fraction(0)])


def _eval(p, x):
    v = Fraction(0)
    for c in reversed(p):
        v = v * x + c
    return v


def _sturm(p):
    seq = [p, _deriv(p)]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        r = _rem(seq[-2], seq[-1])
        if len(r) == 1 and r[0] == 0:
            break
        seq.append([-c for c in r])
    return seq


def _variations(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(seq, positive: bool):
    out = []
    for p in seq:
        lead = p[-1]
        deg = len(p) - 1
        s = lead if positive or deg % 2 == 0 else -lead
        out.append(s)
    return out


@dataclass
class RootReport:
    positive_real_roots: int
    real_roots: int
    intervals: list[tuple[Fraction, Fraction]]
    exact_roots: list[Fraction] = field(default_factory=list)
    degree: int = 0

    @property
    def all_roots_real_positive(self) -> bool:
        return self.positive_real_roots == self.degree

    def to_json(self) -> dict:
        return {
            "positive_real_roots": self.positive_real_roots,
            "real_roots": self.real_roots,
            "intervals": [[str(a), str(b)] for a, b in self.intervals],
            "exact_roots": [str(r) for r in self.exact_roots],
            "all_roots_real_positive": self.all_roots_real_positive,
        }


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def positive_real_roots(f: LaurentPolynomial, width: Fraction = Fraction(1, 1024)) -> RootReport:
    """Count distinct real and positive real roots exactly, isolating the positive ones.

    Uses the Sturm sequence of the squarefree part; rational roots are found
    exactly by the rational root test and reported as degenerate intervals.
    """
    if not f:
        raise ValueError("the zero polynomial has no root report")
    coeffs = [Fraction(c) for c in f.normalize().coefficients()]
    degree = len(coeffs) - 1
    if degree == 0:
        return RootReport(0, 0, [], [], 0)
    g = _quo(coeffs, _gcd(coeffs, _deriv(coeffs)))
    seq = _sturm(g)
    at_plus = _variations(_sign_at_infinity(seq, True))
    at_minus = _variations(_sign_at_infinity(seq, False))
    at_zero = _variations([_eval(p, Fraction(0)) for p in seq])
    real = at_minus - at_plus
    positive = at_zero - at_plus

    exact = []
    a0, an = int(coeffs[0]), int(coeffs[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            r = Fraction(num, den)
            if r not in exact and _eval(coeffs, r) == 0:
                exact.append(r)
    exact.sort()

    def count(a, b):
        # roots in (a, b]
        return _variations([_eval(p, a) for p in seq]) - _variations([_eval(p, b) for p in seq])

    bound = 1 + max(abs(c / coeffs[-1]) for c in coeffs[:-1])
    intervals = []
    stack = [(Fraction(0), Fraction(bound))]
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        hit = [r for r in exact if a < r <= b]
        if n == 1 and hit:
            intervals.append((hit[0], hit[0]))
            continue
        if n == 1 and b - a <= width:
            intervals.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    intervals.sort()
    return RootReport(positive, real, intervals, [r for r in exact if r > 0], degree)


# -- orderability criteria -----------------------------------------------------------

FIBRED_ALL_POSITIVE = "[fibred-real-positive] fibred knot whose Alexander polynomial has all roots real and positive: group is bi-orderable"
FIBRED_NO_POSITIVE = "[fibred-no-positive] fibred knot whose Alexander polynomial has no positive real roots: group is not bi-orderable"
ONE_RELATOR = "[one-relator-no-positive] one-relator knot group of the special form whose Alexander polynomial has no positive real roots: group is not bi-orderable"
TORSION = "[generalized-torsion] group has a verified generalized torsion element, so it is not bi-orderable"

# polynomials of knots the catalog has no presentation for, with fibredness
KNOWN_POLYNOMIALS = {
    "6_1": ("2 - 5t + 2t^2", False),
    "6_2": ("1 - 3t + 3t^2 - 3t^3 + t^4", True),
    "6_3": ("1 - 3t + 5t^2 - 3t^3 + t^4", True),
    # untwisted Whitehead double of the trefoil
    "wh_3_1": ("1", False),
}


@dataclass
class OrderabilityReport:
    verdict: str  # "bi-orderable" | "not bi-orderable" | "inconclusive"
    criterion: str
    polynomial: LaurentPolynomial
    roots: RootReport
    inputs: dict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "criterion": self.criterion,
            "polynomial": self.polynomial.to_text(),
            "roots": self.roots.to_json(),
            "inputs": self.inputs,
        }


class ContradictionError(RuntimeError):
    pass


def orderability_report(
    P: Presentation | None = None,
    polynomial: LaurentPolynomial | None = None,
    fibred: bool | None = None,
    one_relator: bool | None = None,
    torsion_verified: bool = False,
    strict: bool = True,
) -> OrderabilityReport:
    """Apply the root criteria; never claims more than they give.

    ``fibred`` and ``one_relator`` default to the presentation's metadata.
    No positive real roots is never read as evidence of generalized torsion.
    When a criterion would need an unknown fibredness, ``strict`` raises;
    otherwise the verdict is inconclusive.
    """
    if polynomial is None:
        if P is None:
            raise ValueError("need a presentation or a polynomial")
        polynomial = alexander_polynomial(P)
    polynomial = polynomial.normalize()
    if P is not None:
        if fibred is None:
            fibred = P.fibred
        if one_relator is None:
            one_relator = P.one_relator_criterion
    roots = positive_real_roots(polynomial)
    inputs = {
        "polynomial": polynomial.to_text(),
        "fibred": fibred,
        "one_relator": bool(one_relator),
        "positive_real_roots": roots.positive_real_roots,
        "all_roots_real_positive": roots.all_roots_real_positive,
        "torsion_verified": torsion_verified,
    }

    def report(verdict, criterion):
        return OrderabilityReport(verdict, criterion, polynomial, roots, inputs)

    nontrivial = roots.degree > 0
    if nontrivial and roots.all_roots_real_positive:
        if fibred:
            if torsion_verified:
                raise ContradictionError("bi-orderable verdict contradicts a verified torsion certificate")
            return report("bi-orderable", FIBRED_ALL_POSITIVE)
    if nontrivial and roots.positive_real_roots == 0:
        if fibred:
            return report("not bi-orderable", FIBRED_NO_POSITIVE)
        if one_relator:
            return report("not bi-orderable", ONE_RELATOR)
    if torsion_verified:
        return report("not bi-orderable", TORSION)
    if fibred is None and nontrivial and (roots.all_roots_real_positive or roots.positive_real_roots == 0):
        if strict:
            raise ValueError("fibredness is needed to apply the root criteria")
        return report("inconclusive", "fibredness unknown; the root criteria need it")
    return report("inconclusive", "no implemented criterion applies")

