"""Exact scalars, truncated Laurent series and the combinatorics the identities consume.

Rationals are :class:`fractions.Fraction`.  Permutations, compositions and set
partitions are plain tuples (with thin validating subclasses) so they hash and
compare cheaply inside the large identity sums.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction

INF = math.inf


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def render_rational(q) -> str:
    q = as_rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class TruncationError(ValueError):
    """An operation needs coefficients beyond a series' known window."""


class LaurentSeries:
    """Truncated Laurent series in ``eps`` with exact coefficients.

    ``trunc`` is the largest exponent whose coefficient is known; ``math.inf``
    marks an exact (finite) Laurent polynomial.  Arithmetic narrows ``trunc``
    to the tightest value the inputs justify.
    """

    __slots__ = ("_coeffs", "trunc", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None, trunc=INF):
        if trunc != INF:
            trunc = int(trunc)
        data = {}
        for e, c in (coeffs or {}).items():
            e = int(e)
            if e > trunc:
                continue
            c = as_rational(c)
            if c:
                data[e] = c
        self._coeffs = data
        self.trunc = trunc
        self._hash = None

    @classmethod
    def _raw(cls, data: dict, trunc) -> "LaurentSeries":
        out = cls.__new__(cls)
        out._coeffs = data
        out.trunc = trunc
        out._hash = None
        return out

    @classmethod
    def constant(cls, c=1) -> "LaurentSeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "LaurentSeries":
        return cls({exponent: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def __getitem__(self, exponent: int) -> Fraction:
        if exponent > self.trunc:
            raise TruncationError(f"coefficient of eps^{exponent} beyond truncation {self.trunc}")
        return self._coeffs.get(exponent, Fraction(0))

    @property
    def min_exponent(self):
        """Lowest exponent that may carry a nonzero coefficient."""
        if self._coeffs:
            return min(self._coeffs)
        return self.trunc + 1 if self.trunc != INF else INF

    @property
    def pole_order(self) -> int:
        neg = [e for e in self._coeffs if e < 0]
        return -min(neg) if neg else 0

    @property
    def exact(self) -> bool:
        return self.trunc == INF

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        data = {e: c for e, c in self._coeffs.items() if e <= trunc}
        for e, c in other._coeffs.items():
            if e > trunc:
                continue
            s = data.get(e, 0) + c
            if s:
                data[e] = s
            else:
                data.pop(e, None)
        return LaurentSeries._raw(data, trunc)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries._raw({e: -c for e, c in self._coeffs.items()}, self.trunc)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = as_rational(c)
        if not c:
            return LaurentSeries._raw({}, self.trunc)
        return LaurentSeries._raw({e: c * v for e, v in self._coeffs.items()}, self.trunc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        trunc = min(self.trunc + other.min_exponent, other.trunc + self.min_exponent)
        data: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                if e > trunc:
                    continue
                data[e] = data.get(e, 0) + c1 * c2
        return LaurentSeries._raw({e: c for e, c in data.items() if c}, trunc)

    __rmul__ = __mul__

    def pole_part(self) -> "LaurentSeries":
        """Projection onto strictly negative powers (minimal subtraction)."""
        if self.trunc < -1:
            raise TruncationError("pole part needs the window to reach eps^-1")
        return LaurentSeries._raw({e: c for e, c in self._coeffs.items() if e < 0}, INF)

    def regular_part(self) -> "LaurentSeries":
        return LaurentSeries._raw({e: c for e, c in self._coeffs.items() if e >= 0}, self.trunc)

    def constant_term(self) -> Fraction:
        return self[0]

    def compare(self, other: "LaurentSeries") -> tuple[bool, bool]:
        """Compare on the common known window.

        Returns ``(agree, truncation_mismatch)``.
        """
        trunc = min(self.trunc, other.trunc)
        exps = {e for e in itertools.chain(self._coeffs, other._coeffs) if e <= trunc}
        agree = all(self._coeffs.get(e, 0) == other._coeffs.get(e, 0) for e in exps)
        return agree, self.trunc != other.trunc

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.trunc, frozenset(self._coeffs.items())))
        return self._hash

    def to_json(self) -> dict[str, str]:
        return {str(e): render_rational(c) for e, c in sorted(self._coeffs.items())}

    def __repr__(self) -> str:
        if not self._coeffs:
            body = "0"
        else:
            parts = []
            for e, c in sorted(self._coeffs.items()):
                if e == 0:
                    parts.append(render_rational(c))
                else:
                    parts.append(f"{render_rational(c)}*eps^{e}")
            body = " + ".join(parts)
        if self.trunc != INF:
            body += f" + O(eps^{self.trunc + 1})"
        return body


# --- permutations -----------------------------------------------------------


class Permutation(tuple):
    """One-line notation ``(sigma(1), ..., sigma(n))``; bijectivity checked."""

    def __new__(cls, values: Iterable[int]):
        values = tuple(int(v) for v in values)
        if sorted(values) != list(range(1, len(values) + 1)):
            raise ValueError(f"{values} is not a permutation of 1..{len(values)}")
        return super().__new__(cls, values)


def enumerate_permutations(n: int) -> Iterator[tuple[int, ...]]:
    """All of S_n in lexicographic order (as plain tuples)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return itertools.permutations(range(1, n + 1))


def descent_count(sigma: Sequence[int]) -> int:
    return sum(1 for i in range(len(sigma) - 1) if sigma[i] > sigma[i + 1])


def cycle_type(sigma: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Cycle lengths (descending) and the number of cycles."""
    n = len(sigma)
    seen = [False] * (n + 1)
    lengths = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = sigma[j - 1]
            length += 1
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths), len(lengths)


def bar_sets(sigma: Sequence[int]) -> tuple[frozenset[int], frozenset[int]]:
    """Bar positions for the left (E) and right (F) packet splittings.

    ``k`` is in E when ``sigma[k+1]`` exceeds every earlier value; ``l`` is in
    F when ``sigma[l]`` is below every later value (1-based positions).
    """
    n = len(sigma)
    E = set()
    running_max = 0
    for k in range(1, n):
        running_max = max(running_max, sigma[k - 1])
        if sigma[k] > running_max:
            E.add(k)
    F = set()
    running_min = n + 1
    for l in range(n - 1, 0, -1):
        running_min = min(running_min, sigma[l])
        if sigma[l - 1] < running_min:
            F.add(l)
    return frozenset(E), frozenset(F)


# --- compositions -----------------------------------------------------------


class Composition(tuple):
    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if not parts or any(p < 1 for p in parts):
            raise ValueError(f"{parts} is not a composition")
        return super().__new__(cls, parts)


def enumerate_compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n in lexicographic order; 2^(n-1) of them."""
    if n < 1:
        raise ValueError("compositions need n >= 1")

    def rec(rest):
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in rec(rest - first):
                yield (first,) + tail

    return rec(n)


def omega_composition(parts: Sequence[int]) -> Fraction:
    """1 / (i1 (i1+i2) ... (i1+...+ik))."""
    denom = 1
    running = 0
    for p in parts:
        running += p
        denom *= running
    return Fraction(1, denom)


def refines(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    """True when every part of ``coarse`` is a sum of consecutive parts of ``fine``."""
    return _split_refinement(fine, coarse) is not None


def _split_refinement(fine, coarse):
    blocks = []
    pos = 0
    for target in coarse:
        block = []
        total = 0
        while total < target and pos < len(fine):
            block.append(fine[pos])
            total += fine[pos]
            pos += 1
        if total != target:
            return None
        blocks.append(tuple(block))
    if pos != len(fine):
        return None
    return blocks


def refinement_blocks(fine: Sequence[int], coarse: Sequence[int]) -> list[tuple[int, ...]]:
    blocks = _split_refinement(fine, coarse)
    if blocks is None:
        raise ValueError(f"{tuple(fine)} does not refine {tuple(coarse)}")
    return blocks


def omega_refined(fine: Sequence[int], coarse: Sequence[int]) -> Fraction:
    """Product of omega over the blocks of ``fine`` aligned with ``coarse``."""
    out = Fraction(1)
    for block in refinement_blocks(fine, coarse):
        out *= omega_composition(block)
    return out


def enumerate_refinements(coarse: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All compositions finer than ``coarse`` (including itself)."""
    for pieces in itertools.product(*(tuple(enumerate_compositions(p)) for p in coarse)):
        yield tuple(itertools.chain.from_iterable(pieces))


# --- set partitions ---------------------------------------------------------


def enumerate_set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Unordered set partitions of {1..n}; blocks sorted, listed by minimum."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(k, blocks):
        if k > n:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(k)
            yield from rec(k + 1, blocks)
            b.pop()
        blocks.append([k])
        yield from rec(k + 1, blocks)
        blocks.pop()

    return rec(1, [])


def enumerate_ordered_set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Ordered set partitions of {1..n}: the first block is chosen first."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield ()
            return
        for size in range(1, len(remaining) + 1):
            for block in itertools.combinations(remaining, size):
                rest = tuple(x for x in remaining if x not in block)
                for tail in rec(rest):
                    yield (block,) + tail

    return rec(tuple(range(1, n + 1)))


@lru_cache(maxsize=None)
def bell_number(n: int) -> int:
    if n == 0:
        return 1
    return sum(math.comb(n - 1, k) * bell_number(k) for k in range(n))


@lru_cache(maxsize=None)
def ordered_bell_number(n: int) -> int:
    if n == 0:
        return 1
    return sum(math.comb(n, k) * ordered_bell_number(n - k) for k in range(1, n + 1))


# --- Bernoulli numbers and iterated integrals -------------------------------


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    total = sum(math.comb(n + 1, k) * bernoulli_number(k) for k in range(n))
    return -total / (n + 1)


def bernoulli_fraction(n: int) -> Fraction:
    """b_n = B_n / n!."""
    return bernoulli_number(n) / math.factorial(n)


def simplex_monomial_integral(exponents: Sequence[int]) -> Fraction:
    """Integral of prod t_j^e_j over 1 > t_1 > t_2 > ... > t_m > 0.

    Integrates innermost-out: each stage is a single monomial antiderivative.
    """
    coeff = Fraction(1)
    degree = 0
    for e in reversed(exponents):
        if e < 0:
            raise ValueError("exponents must be nonnegative")
        degree += e
        coeff /= degree + 1
        degree += 1
    return coeff


def omega_symmetrization_check(m: Sequence[int]) -> bool:
    lhs = sum(
        (omega_composition(perm) for perm in itertools.permutations(m)),
        Fraction(0),
    )
    rhs = Fraction(1)
    for x in m:
        rhs /= x
    return lhs == rhs
