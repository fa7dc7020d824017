"""Free noncommutative polynomials over indexed alphabets.

A letter x^a_i (alphabet ``a``, index ``i``) is stored as the integer code
``a * STRIDE + i`` so that words are tuples of ints and integer comparison
agrees with the order on (alphabet, index).  Coefficients are kept as ``int``
whenever they are integral, which keeps the weight-one sequence-model sums fast.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .foundations import as_rational, render_rational

STRIDE = 1 << 16

Word = tuple  # tuple[int, ...]; the empty word is the unit


class Generator(NamedTuple):
    alphabet: int
    index: int

    @property
    def code(self) -> int:
        return self.alphabet * STRIDE + self.index

    @classmethod
    def from_code(cls, code: int) -> "Generator":
        return cls(*divmod(code, STRIDE))

    def __str__(self) -> str:
        return f"x[{self.alphabet},{self.index}]"


def letter(alphabet: int, index: int) -> int:
    if alphabet < 0 or not 0 < index < STRIDE:
        raise ValueError(f"bad generator ({alphabet}, {index})")
    return alphabet * STRIDE + index


def word_letters(word: Word) -> list[Generator]:
    return [Generator.from_code(c) for c in word]


def word_key(word: Word) -> tuple:
    """Graded lexicographic key: length first, then letterwise."""
    return (len(word), word)


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class NCPoly:
    """Finite linear combination of words with exact coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] | None = None):
        data = {}
        for w, c in (terms or {}).items():
            c = _norm(as_rational(c) if not isinstance(c, int) else c)
            if c:
                data[tuple(w)] = c
        self.terms = data
        self._hash = None

    @classmethod
    def _raw(cls, data: dict) -> "NCPoly":
        out = cls.__new__(cls)
        out.terms = data
        out._hash = None
        return out

    @classmethod
    def one(cls) -> "NCPoly":
        return cls._raw({(): 1})

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    @classmethod
    def var(cls, alphabet: int, index: int) -> "NCPoly":
        return cls._raw({(letter(alphabet, index),): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "NCPoly") -> "NCPoly":
        if len(other.terms) > len(self.terms):
            self, other = other, self
        data = dict(self.terms)
        for w, c in other.terms.items():
            s = data.get(w)
            if s is None:
                data[w] = c
            else:
                s += c
                if s:
                    data[w] = _norm(s)
                else:
                    del data[w]
        return NCPoly._raw(data)

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = _norm(as_rational(c)) if not isinstance(c, int) else c
        if not c:
            return NCPoly._raw({})
        if c == 1:
            return self
        return NCPoly._raw({w: _norm(c * v) for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return NCPoly._raw({})
        out: dict = {}
        get = out.get
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                w = w1 + w2
                prev = get(w)
                out[w] = c1 * c2 if prev is None else prev + c1 * c2
        return NCPoly._raw({w: _norm(c) for w, c in out.items() if c})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sup(self) -> Word:
        return sup_monomial(self)

    def render(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"


def poly_add(p: NCPoly, q: NCPoly) -> NCPoly:
    return p + q


def poly_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def scalar_mul(c, p: NCPoly) -> NCPoly:
    return p.scale(c)


def sup_monomial(p: NCPoly) -> Word:
    """The largest word (graded lexicographic order) with nonzero coefficient."""
    if p.is_zero():
        raise ValueError("Sup of the zero polynomial is undefined")
    return max(p.terms, key=word_key)


def render_word(word: Word) -> str:
    if not word:
        return "1"
    return "".join(str(Generator.from_code(c)) for c in word)


def render_poly(p: NCPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for w in sorted(p.terms, key=word_key):
        c = p.terms[w]
        body = render_word(w)
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        elif body == "1":
            parts.append(render_rational(c))
        else:
            parts.append(f"{render_rational(c)}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def m_qsym_truncated(f: Sequence[int], num_vars: int, alphabet: int = 1) -> NCPoly:
    """M_f restricted to the variables x_1..x_num_vars.

    ``f`` lists the values of a surjection [n] -> [k].  Each increasing
    injection phi of [k] into [num_vars] contributes x_phi(f(1)) ... x_phi(f(n)).
    """
    f = tuple(int(v) for v in f)
    k = max(f) if f else 0
    if set(f) != set(range(1, k + 1)):
        raise ValueError(f"{f} is not a surjection onto [1..{k}]")
    if num_vars < 1:
        raise ValueError("num_vars must be positive")
    terms: dict = {}
    for phi in itertools.combinations(range(1, num_vars + 1), k):
        w = tuple(letter(alphabet, phi[v - 1]) for v in f)
        terms[w] = terms.get(w, 0) + 1
    return NCPoly._raw(terms)


def random_poly(rng, letters: Sequence[int], max_degree: int, max_terms: int = 4,
                coeff_range: int = 3) -> NCPoly:
    """Small random polynomial over the given letter codes (test and CLI helper)."""
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        w = tuple(rng.choice(letters) for _ in range(deg))
        c = rng.randint(-coeff_range, coeff_range)
        terms[w] = terms.get(w, 0) + c
    return NCPoly(terms)


def polys_from_words(words: Iterable[Sequence[int]]) -> NCPoly:
    terms: dict = {}
    for w in words:
        terms[tuple(w)] = terms.get(tuple(w), 0) + 1
    return NCPoly(terms)
