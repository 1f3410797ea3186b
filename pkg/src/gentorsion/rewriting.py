"""Shortlex Knuth-Bendix completion for group presentations.

Words are encoded as strings, one character per letter, so that plain
string comparison on equal-length words realizes the shortlex order with
each inverse ranked immediately after its generator (a < A < b < B ...).
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field

from .presentations import Presentation
from .words import Word, parse_word, render_word

__all__ = [
    "RewriteSystem",
    "kb_complete",
    "kb_complete_torus",
    "torus_rewriting_presentation",
    "normal_form",
    "encode",
    "decode",
]

_BASE = 0x100


def encode(w: Word) -> str:
    return "".join(chr(_BASE + 2 * (abs(x) - 1) + (x < 0)) for x in w.letters)


def _letters(s: str) -> list[int]:
    out = []
    for ch in s:
        c = ord(ch) - _BASE
        g = c // 2 + 1
        out.append(-g if c % 2 else g)
    return out


def decode(s: str) -> Word:
    return Word(_letters(s))


@dataclass
class RewriteSystem:
    """Rules ``lhs -> rhs`` over encoded words.

    ``weights`` (one per letter code, generator i at 2i and its inverse at
    2i + 1) turns the shortlex order into a weighted-lex order; ``None``
    means every letter weighs 1, i.e. plain shortlex.
    """

    generators: tuple[str, ...]
    rules: dict[str, str] = field(default_factory=dict)
    complete: bool = False
    weights: tuple[int, ...] | None = None
    _lengths: list[int] = field(default_factory=list, repr=False)

    @property
    def status(self) -> str:
        return "complete" if self.complete else "capped"

    def key(self, s: str):
        if self.weights is None:
            return (len(s), s)
        w = self.weights
        return (sum(w[ord(ch) - _BASE] for ch in s), s)

    def orient(self, a: str, b: str) -> tuple[str, str]:
        # (larger, smaller)
        if self.key(a) > self.key(b):
            return a, b
        return b, a

    def _refresh(self):
        self._lengths = sorted({len(lhs) for lhs in self.rules})

    def reduce(self, s: str) -> str:
        rules = self.rules
        lengths = self._lengths
        if not lengths:
            return s
        out: list[str] = []
        pending = list(reversed(s))
        while pending:
            out.append(pending.pop())
            for L in lengths:
                if L > len(out):
                    break
                key = "".join(out[-L:])
                rhs = rules.get(key)
                if rhs is not None:
                    del out[-L:]
                    pending.extend(reversed(rhs))
                    break
        return "".join(out)

    def normal_form(self, w: Word) -> Word:
        return decode(self.reduce(encode(w)))

    def rule_words(self) -> list[tuple[Word, Word]]:
        return [(decode(lhs), decode(rhs)) for lhs, rhs in self.sorted_rules()]

    def sorted_rules(self) -> list[tuple[str, str]]:
        return sorted(self.rules.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def critical_pairs_resolve(self) -> bool:
        items = list(self.rules.items())
        for l1, r1 in items:
            for l2, r2 in items:
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        if self.reduce(r1 + l2[k:]) != self.reduce(l1[:-k] + r2):
                            return False
        return True

    # text format: one "lhs -> rhs" per line, identity written as 1
    def dump(self) -> str:
        lines = [f"# generators: {','.join(self.generators)}", f"# status: {self.status}"]
        if self.weights is not None:
            lines.append(f"# weights: {','.join(map(str, self.weights))}")
        for lhs, rhs in self.sorted_rules():
            lines.append(f"{_show(lhs, self.generators)} -> {_show(rhs, self.generators)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> RewriteSystem:
        generators: tuple[str, ...] = ()
        complete = False
        weights = None
        rules: dict[str, str] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                if key.strip() == "generators":
                    generators = tuple(g.strip() for g in value.split(",") if g.strip())
                elif key.strip() == "status":
                    complete = value.strip() == "complete"
                elif key.strip() == "weights":
                    weights = tuple(int(v) for v in value.split(","))
                continue
            lhs, sep, rhs = line.partition("->")
            if not sep:
                raise ValueError(f"bad rule line {line!r}")
            rules[_read(lhs.strip(), generators)] = _read(rhs.strip(), generators)
        rs = cls(generators, rules, complete, weights)
        rs._refresh()
        return rs


def _show(s: str, names) -> str:
    return render_word(Word(_letters(s), reduced=True), names) if s else "1"


_TOKEN = re.compile(r"\[[^\]]*\]|\S")


def _read(text: str, names) -> str:
    # rule sides need not be freely reduced (xX -> 1), so parse letter by letter
    if text == "1":
        return ""
    letters = []
    for token in _TOKEN.findall(text):
        letters.extend(parse_word(token, names).letters)
    return "".join(chr(_BASE + 2 * (abs(x) - 1) + (x < 0)) for x in letters)


def kb_complete(
    P: Presentation,
    max_rules: int = 500,
    max_rule_length: int = 64,
    max_iterations: int = 100_000,
    weights: tuple[int, ...] | None = None,
) -> RewriteSystem:
    """Run completion; ``status`` is ``complete`` only if every critical pair resolves.

    Equations are processed in order of combined length, first-in first-out
    among equal lengths.
    """
    rs = RewriteSystem(P.generators, weights=weights)
    rules = rs.rules
    queue: list[tuple[int, int, str, str]] = []
    counter = 0

    def push(a, b):
        nonlocal counter
        heapq.heappush(queue, (len(a) + len(b), counter, a, b))
        counter += 1

    for i in range(P.rank):
        g = encode(Word.gen(i))
        G = encode(Word.gen(i, -1))
        push(g + G, "")
        push(G + g, "")
    for r in P.relators:
        push(encode(r), "")

    capped = False
    iterations = 0
    while queue:
        iterations += 1
        if iterations > max_iterations or len(rules) > max_rules:
            capped = True
            break
        _, _, a, b = heapq.heappop(queue)
        a, b = rs.reduce(a), rs.reduce(b)
        if a == b:
            continue
        lhs, rhs = rs.orient(a, b)
        if len(lhs) > max_rule_length:
            capped = True
            continue
        # interreduce: rules whose lhs contains the new lhs go back in the queue
        for l, r in list(rules.items()):
            if lhs in l:
                del rules[l]
                push(l, r)
        rules[lhs] = rhs
        rs._refresh()
        for l, r in list(rules.items()):
            if lhs in r:
                rules[l] = rs.reduce(r)
        for l, r in list(rules.items()):
            for l1, r1, l2, r2 in ((lhs, rhs, l, r), (l, r, lhs, rhs)):
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        push(r1 + l2[k:], l1[:-k] + r2)
    rs._refresh()
    rs.complete = not capped and rs.critical_pairs_resolve()
    return rs


def normal_form(rs: RewriteSystem, w: Word) -> Word:
    return rs.normal_form(w)


def torus_rewriting_presentation(p: int, q: int) -> tuple[Presentation, tuple[int, ...]]:
    """``<x, y, z | x^p = z, y^q = z^e, z central>`` with a weighted order.

    Words over x, y embed unchanged (z is generator 2).  Inverse letters
    outweigh a full period, so ``X -> x^(p-1) Z`` and ``Y -> y^(q-1) Z^e``
    are decreasing, and z sorts first so it is pushed to the left.
    """
    P_, Q_ = abs(p), abs(q)
    e = 1 if (p > 0) == (q > 0) else -1
    x, y, z = Word.gen(0), Word.gen(1), Word.gen(2)
    # x^p = y^q = c; with z := x^|p| we get y^|q| = z^e
    rels = [
        (x ** P_) * (z ** -1),
        (y ** Q_) * (z ** -e),
        x * z * ~x * ~z,
        y * z * ~y * ~z,
    ]
    P = Presentation(("x", "y", "z"), tuple(rels), name=f"T({p},{q}) central extension")
    weights = (1, P_ + 1, 1, Q_ + 1, 1, 1)
    return P, weights


def kb_complete_torus(p: int, q: int, **limits) -> RewriteSystem:
    P, weights = torus_rewriting_presentation(p, q)
    return kb_complete(P, weights=weights, **limits)
