"""Free-group words.

A word is stored as a tuple of nonzero integers: generator ``i`` (0-based)
is the letter ``i + 1`` and its inverse is ``-(i + 1)``.  Words are always
freely reduced, so two words represent the same free-group element exactly
when their letter tuples are equal.

Text form uses lowercase letters for generators and uppercase for their
inverses (``AbaB`` is a^-1 b a b^-1).  Generators whose names are longer
than one character are written in brackets, ``[g3]`` and ``[G3]``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence

__all__ = [
    "Word",
    "WordParseError",
    "IDENTITY",
    "free_reduce",
    "parse_word",
    "render_word",
    "concat",
    "invert",
    "conjugate",
    "commutator",
    "cyclic_reduce",
    "exponent_vector",
    "default_names",
    "shortlex_key",
    "cyclic_permutations",
    "cyclic_normal_form",
]


class WordParseError(ValueError):
    """Raised for text that does not spell a word over the given alphabet."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class Word:
    """Immutable freely reduced word."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = (), *, reduced: bool = False):
        letters = tuple(letters) if reduced else free_reduce(letters)
        if not reduced and any(x == 0 for x in letters):
            raise ValueError("letter 0 is not a valid generator code")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_hash", hash(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __reduce__(self):
        return (Word, (self.letters,), None)

    @classmethod
    def gen(cls, index: int, power: int = 1) -> Word:
        x = index + 1 if power > 0 else -(index + 1)
        return cls((x,) * abs(power), reduced=True)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other: Word) -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    def __pow__(self, n: int) -> Word:
        base = self if n >= 0 else invert(self)
        return Word(base.letters * abs(n))

    def __xor__(self, other: Word) -> Word:
        # x ^ y is the conjugate y^-1 x y
        return conjugate(self, other)

    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> set[int]:
        return {abs(x) - 1 for x in self.letters}

    def rename(self, mapping: Sequence[int] | dict[int, int]) -> Word:
        """Send generator ``i`` to generator ``mapping[i]``."""
        out = []
        for x in self.letters:
            g = mapping[abs(x) - 1] + 1
            out.append(g if x > 0 else -g)
        return Word(out)

    def substitute(self, images: Sequence[Word]) -> Word:
        """Image under the free-group homomorphism sending generator i to images[i]."""
        out: list[int] = []
        for x in self.letters:
            piece = images[abs(x) - 1]
            out.extend(piece.letters if x > 0 else invert(piece).letters)
        return Word(out)

    def render(self, names: Sequence[str] | None = None) -> str:
        return render_word(self, names)

    def __repr__(self) -> str:
        return f"Word({render_word(self)!r})"

    def __str__(self) -> str:
        return render_word(self)


IDENTITY = Word((), reduced=True)


def shortlex_key(w: Word) -> tuple:
    # generator order, each inverse immediately after its generator
    return (len(w.letters), tuple(2 * abs(x) - (x > 0) for x in w.letters))


def default_names(n: int) -> list[str]:
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"g{i}" for i in range(n)]


def render_word(w: Word, names: Sequence[str] | None = None) -> str:
    if names is None:
        n = max((abs(x) for x in w.letters), default=0)
        names = default_names(n)
    parts = []
    for x in w.letters:
        name = names[abs(x) - 1]
        if len(name) == 1:
            parts.append(name if x > 0 else name.upper())
        else:
            parts.append(f"[{name}]" if x > 0 else f"[{name.upper()}]")
    return "".join(parts)


_EXPONENT = re.compile(r"\d+")


def parse_word(text: str, names: Sequence[str], *, allow_exponents: bool = False) -> Word:
    """Parse ``text`` over the generator names ``names``.

    With ``allow_exponents`` a letter may be followed by a decimal power
    (``x2`` is ``xx``), which is the sugar used in presentation files.
    """
    lookup: dict[str, int] = {}
    for i, name in enumerate(names):
        lookup[name] = i + 1
        lookup[name.upper()] = -(i + 1)
    letters: list[int] = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "[":
            end = text.find("]", pos)
            if end < 0:
                raise WordParseError("unterminated bracket", pos)
            token = text[pos + 1 : end]
            start, pos = pos, end + 1
        else:
            token, start = ch, pos
            pos += 1
        code = lookup.get(token)
        if code is None or (token.upper() == token.lower()):
            raise WordParseError(f"unknown generator {token!r}", start)
        power = 1
        if allow_exponents:
            m = _EXPONENT.match(text, pos)
            if m:
                power = int(m.group())
                pos = m.end()
        letters.extend([code] * power)
    return Word(letters)


def concat(u: Word, v: Word) -> Word:
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word(a[: len(a) - i] + b[i:], reduced=True)


def invert(u: Word) -> Word:
    return Word(tuple(-x for x in reversed(u.letters)), reduced=True)


def conjugate(x: Word, y: Word) -> Word:
    """The conjugate ``x^y = y^-1 x y``."""
    return concat(concat(invert(y), x), y)


def commutator(x: Word, y: Word) -> Word:
    """The commutator ``[x, y] = x^-1 y^-1 x y``."""
    return concat(concat(invert(x), invert(y)), concat(x, y))


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``core = conjugator * u * conjugator^-1``.

    ``core`` is cyclically reduced: its first and last letters are not
    mutually inverse.
    """
    a = u.letters
    i, j = 0, len(a) - 1
    while i < j and a[i] == -a[j]:
        i += 1
        j -= 1
    core = Word(a[i : j + 1], reduced=True)
    conjugator = invert(Word(a[:i], reduced=True))
    return core, conjugator


def exponent_vector(u: Word, n: int | None = None) -> list[int]:
    if n is None:
        n = max((abs(x) for x in u.letters), default=0)
    vec = [0] * n
    for x in u.letters:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return vec


def cyclic_permutations(u: Word) -> list[Word]:
    """All rotations of a cyclically reduced word (duplicates removed, order kept)."""
    a = u.letters
    seen: dict[tuple[int, ...], None] = {}
    for i in range(len(a)):
        seen.setdefault(a[i:] + a[:i], None)
    return [Word(r, reduced=True) for r in seen]


def cyclic_normal_form(u: Word) -> Word:
    """Shortlex-least rotation of the cyclic core of ``u`` or of its inverse."""
    core, _ = cyclic_reduce(u)
    if not core:
        return core
    options = cyclic_permutations(core) + cyclic_permutations(invert(core))
    return min(options, key=shortlex_key)
