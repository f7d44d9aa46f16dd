"""Words in free groups and equation alphabets.

A word is a sequence of signed letters over an :class:`Alphabet`.  Two kinds
of alphabet appear.  An *ambient* alphabet has generators ``a1..an`` (written
``a, b, c, ...`` when n <= 26, capitals for inverses).  An *equation* alphabet
has subgroup letters ``h1..hr`` and variable letters ``x1..xm`` (``x`` is short
for ``x1``, ``~h1`` and ``~x`` denote inverses).  An equation is simply a word
over an equation alphabet; substituting ambient words for the ``h`` and ``x``
letters evaluates it.

Letters are stored as nonzero integers: ``+i`` is the i-th symbol, ``-i`` its
inverse.  In an equation alphabet the symbols ``1..r`` are the ``h`` letters
and ``r+1..r+m`` are the ``x`` letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class WordError(ValueError):
    """Raised for malformed word text or alphabet/arity mismatches."""


_LOWER = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Alphabet:
    """Symbol table for words.

    ``Alphabet.ambient(n)`` gives the free group F_n on ``a1..an``.
    ``Alphabet.equation(r, m)`` gives letters for equations over a rank-r
    subgroup with m variables.
    """

    kind: str
    r: int = 0
    m: int = 0

    @staticmethod
    def ambient(n: int) -> "Alphabet":
        if n < 1:
            raise WordError("ambient rank must be >= 1, got %r" % n)
        return Alphabet("ambient", r=n, m=0)

    @staticmethod
    def equation(r: int, m: int = 1) -> "Alphabet":
        if r < 0:
            raise WordError("subgroup rank must be >= 0, got %r" % r)
        if m < 1:
            raise WordError("variable count must be >= 1, got %r" % m)
        return Alphabet("equation", r=r, m=m)

    @property
    def size(self) -> int:
        return self.r + self.m

    @property
    def n(self) -> int:
        if self.kind != "ambient":
            raise WordError("n is only defined for ambient alphabets")
        return self.r

    def is_variable(self, letter: int) -> bool:
        """True if the (signed) letter is one of the x-letters."""
        return self.kind == "equation" and abs(letter) > self.r

    def symbol_name(self, index: int) -> str:
        if not 1 <= index <= self.size:
            raise WordError("symbol index %r out of range" % index)
        if self.kind == "ambient":
            return "a%d" % index
        if index <= self.r:
            return "h%d" % index
        return "x%d" % (index - self.r)

    def letter_str(self, letter: int, compact: bool) -> str:
        index = abs(letter)
        if self.kind == "ambient" and compact:
            ch = _LOWER[index - 1]
            return ch.upper() if letter < 0 else ch
        if self.kind == "equation" and index == self.r + 1 and self.m == 1:
            name = "x"
        elif self.kind == "equation" and index == 1 and self.r == 1:
            name = "h"
        else:
            name = self.symbol_name(index)
        return "~" + name if letter < 0 else name


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


class FreeWord:
    """An element of the free group on an alphabet.

    Words reduce on construction; use :meth:`raw` to keep an unreduced letter
    sequence (needed only when studying the reduction itself).

    >>> w = FreeWord(Alphabet.ambient(2), [2, -1, 1, -2, 1])
    >>> str(w)
    'a'
    """

    __slots__ = ("alphabet", "letters")

    def __init__(self, alphabet: Alphabet, letters: Iterable[int] = ()):
        letters = tuple(letters)
        for letter in letters:
            if not isinstance(letter, int) or letter == 0 or abs(letter) > alphabet.size:
                raise WordError("letter %r out of range for %r" % (letter, alphabet))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "letters", _free_reduce(letters))

    @classmethod
    def raw(cls, alphabet: Alphabet, letters: Iterable[int]) -> "FreeWord":
        w = cls(alphabet)
        object.__setattr__(w, "letters", tuple(letters))
        for letter in w.letters:
            if not isinstance(letter, int) or letter == 0 or abs(letter) > alphabet.size:
                raise WordError("letter %r out of range for %r" % (letter, alphabet))
        return w

    def __setattr__(self, name, value):
        raise AttributeError("FreeWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FreeWord)
            and self.alphabet == other.alphabet
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.letters))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if not isinstance(other, FreeWord):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise WordError("cannot multiply words over different alphabets")
        return FreeWord(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.alphabet, tuple(-l for l in reversed(self.letters)))

    def __invert__(self) -> "FreeWord":
        return self.inverse()

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        out = FreeWord(self.alphabet)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """by * self * by^-1."""
        return by * self * by.inverse()

    @property
    def is_reduced(self) -> bool:
        return all(self.letters[i] != -self.letters[i + 1] for i in range(len(self.letters) - 1))

    @property
    def is_cyclically_reduced(self) -> bool:
        if not self.is_reduced:
            return False
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def reduced(self) -> "FreeWord":
        return FreeWord(self.alphabet, self.letters)

    def __str__(self) -> str:
        return word_to_str(self)

    def __repr__(self) -> str:
        return "FreeWord(%r)" % (str(self),)


def cyclic_reduce(w: FreeWord) -> tuple[FreeWord, FreeWord]:
    """Split ``w`` as ``c * core * c^-1`` with ``core`` cyclically reduced.

    Returns ``(core, c)``.  The trivial word has trivial core and conjugator.

    >>> core, c = cyclic_reduce(parse_word("Aba", Alphabet.ambient(2)))
    >>> str(core), str(c)
    ('b', 'A')
    """
    letters = FreeWord(w.alphabet, w.letters).letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return FreeWord(w.alphabet, letters[i:j]), FreeWord(w.alphabet, letters[:i])


def degree(equation: FreeWord) -> int:
    """Number of x-letters in the cyclic reduction of the equation.

    The trivial equation has degree 0 by convention.
    """
    if equation.alphabet.kind != "equation":
        raise WordError("degree is defined for equation words")
    core, _ = cyclic_reduce(equation)
    return sum(1 for letter in core if equation.alphabet.is_variable(letter))


def multi_degree(equation: FreeWord) -> tuple[int, ...]:
    """Per-variable occurrence counts (x_i and ~x_i both count) cyclically."""
    alphabet = equation.alphabet
    if alphabet.kind != "equation":
        raise WordError("multi_degree is defined for equation words")
    core, _ = cyclic_reduce(equation)
    counts = [0] * alphabet.m
    for letter in core:
        if alphabet.is_variable(letter):
            counts[abs(letter) - alphabet.r - 1] += 1
    return tuple(counts)


def evaluate(
    equation: FreeWord,
    h_basis: Sequence[FreeWord],
    g_values: Sequence[FreeWord],
) -> FreeWord:
    """Substitute ambient words for the h- and x-letters and reduce.

    ``h_basis`` must list one ambient word per h-letter and ``g_values`` one
    per variable; the result is a reduced ambient word, trivial exactly when
    the equation lies in the ideal of the pair ``(h_basis, g_values)``.
    """
    alphabet = equation.alphabet
    if alphabet.kind != "equation":
        raise WordError("evaluate expects an equation word")
    if len(h_basis) != alphabet.r:
        raise WordError(
            "expected %d subgroup words, got %d" % (alphabet.r, len(h_basis))
        )
    if len(g_values) != alphabet.m:
        raise WordError(
            "expected %d variable words, got %d" % (alphabet.m, len(g_values))
        )
    values = list(h_basis) + list(g_values)
    if not values:
        raise WordError("evaluation needs at least one variable value")
    ambient = values[0].alphabet
    if ambient.kind != "ambient" or any(v.alphabet != ambient for v in values):
        raise WordError("all substituted words must share one ambient alphabet")
    out: list[int] = []
    for letter in equation:
        value = values[abs(letter) - 1]
        chunk = value.letters if letter > 0 else value.inverse().letters
        for a in chunk:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
    return FreeWord(ambient, out)


def _tokenize(text: str, alphabet: Alphabet) -> Iterator[int]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        sign = 1
        if ch == "~":
            sign = -1
            i += 1
            if i >= n or text[i].isspace():
                raise WordError("dangling ~ in %r" % text)
            ch = text[i]
        if ch == "1" and sign == 1:
            # identity element, contributes nothing
            i += 1
            continue
        lower = ch.lower()
        if lower not in _LOWER:
            raise WordError("unexpected character %r in %r" % (ch, text))
        if ch.isupper():
            if sign == -1:
                raise WordError("~ before a capital letter in %r" % text)
            sign = -1
        i += 1
        digits = ""
        while i < n and text[i].isdigit():
            digits += text[i]
            i += 1
        if alphabet.kind == "ambient":
            if digits:
                if lower != "a" or ch.isupper():
                    raise WordError("indexed ambient letters are written a1, a2, ... (got %r)" % (ch + digits))
                index = int(digits)
            else:
                index = _LOWER.index(lower) + 1
            if not 1 <= index <= alphabet.n:
                raise WordError("letter %r exceeds ambient rank %d" % (ch + digits, alphabet.n))
        else:
            if ch.isupper():
                raise WordError("equation letters use ~ for inverses, not capitals (%r)" % ch)
            if lower == "h":
                if not digits and alphabet.r != 1:
                    raise WordError("h-letters need an index: h1..h%d" % alphabet.r)
                index = int(digits) if digits else 1
                if not 1 <= index <= alphabet.r:
                    raise WordError("h%s exceeds subgroup rank %d" % (digits, alphabet.r))
            elif lower == "x":
                index = int(digits) if digits else 1
                if not 1 <= index <= alphabet.m:
                    raise WordError("x%s exceeds variable count %d" % (digits, alphabet.m))
                index += alphabet.r
            else:
                raise WordError("equation letters are h1..h%d and x1..x%d (got %r)" % (alphabet.r, alphabet.m, ch))
        yield sign * index


def parse_word(text: str, alphabet: Alphabet) -> FreeWord:
    """Parse word text over the given alphabet.

    Lowercase runs need no spaces (``"abbA"``); indexed tokens such as ``a10``
    or ``h2`` are delimited by the following non-digit.  ``"1"`` and ``""``
    both denote the trivial word.

    >>> str(parse_word("b A a B", Alphabet.ambient(2)))
    '1'
    >>> str(parse_word("~x h2 x x ~h1 x ~h1", Alphabet.equation(2)))
    '~x h2 x x ~h1 x ~h1'
    """
    return FreeWord(alphabet, _tokenize(text, alphabet))


def word_to_str(w: FreeWord) -> str:
    if not w.letters:
        return "1"
    compact = w.alphabet.kind == "ambient" and w.alphabet.size <= 26
    parts = [w.alphabet.letter_str(letter, compact) for letter in w.letters]
    return "".join(parts) if compact else " ".join(parts)


def ambient_word(text: str, n: int) -> FreeWord:
    """Shorthand: parse an ambient word over F_n."""
    return parse_word(text, Alphabet.ambient(n))


def equation_word(text: str, r: int, m: int = 1) -> FreeWord:
    """Shorthand: parse an equation word with r subgroup letters, m variables."""
    return parse_word(text, Alphabet.equation(r, m))
