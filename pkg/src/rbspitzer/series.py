"""Truncated power series in t with coefficients in a Rota-Baxter model.

Covers the Atkinson recursion and its factorization, the classical Spitzer
exponential, and three independent routes to the Magnus exponent Omega with
exp(Omega) = F:

* ``magnus_omega_recursive``: fixpoint of the Bernoulli-number recursion;
* ``magnus_omega_strichartz``: closed expansion over compositions with
  descent-weighted simplex integrals;
* ``magnus_omega_from_log``: series logarithm of F (the reference).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .foundations import (
    bernoulli_number,
    descent_count,
    enumerate_compositions,
    enumerate_permutations,
    simplex_monomial_integral,
)
from .rbcore import RBAlgebra, RBElement, left_lambdas, tilde_R


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class RBSeries:
    """sum_{n=0}^{order} coeffs[n] t^n; products truncate at ``order``."""

    algebra: RBAlgebra
    coeffs: tuple

    def __post_init__(self):
        for c in self.coeffs:
            if c.algebra is not self.algebra:
                raise SeriesError("series coefficient from another algebra")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> RBElement:
        return self.coeffs[n]

    @classmethod
    def zero(cls, algebra: RBAlgebra, order: int) -> "RBSeries":
        z = algebra.zero_element()
        return cls(algebra, (z,) * (order + 1))

    @classmethod
    def one(cls, algebra: RBAlgebra, order: int) -> "RBSeries":
        z = algebra.zero_element()
        return cls(algebra, (algebra.unit(),) + (z,) * order)

    @classmethod
    def from_list(cls, algebra: RBAlgebra, coeffs: Sequence[RBElement], order: int) -> "RBSeries":
        coeffs = list(coeffs[: order + 1])
        coeffs += [algebra.zero_element()] * (order + 1 - len(coeffs))
        return cls(algebra, tuple(coeffs))

    def _check(self, other: "RBSeries"):
        if self.algebra is not other.algebra:
            raise SeriesError("series over different algebras")
        if self.order != other.order:
            raise SeriesError("series truncated at different orders")

    def __add__(self, other: "RBSeries") -> "RBSeries":
        self._check(other)
        return RBSeries(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RBSeries") -> "RBSeries":
        self._check(other)
        return RBSeries(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RBSeries":
        return RBSeries(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "RBSeries":
        return RBSeries(self.algebra, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, RBSeries):
            return self.scale(other)
        self._check(other)
        out = []
        for n in range(self.order + 1):
            acc = self.algebra.zero_element()
            for i in range(n + 1):
                a, b = self.coeffs[i], other.coeffs[n - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return RBSeries(self.algebra, tuple(out))

    def __rmul__(self, c):
        return self.scale(c)

    def map(self, f: Callable[[RBElement], RBElement]) -> "RBSeries":
        return RBSeries(self.algebra, tuple(f(c) for c in self.coeffs))

    def shift(self) -> "RBSeries":
        """Multiply by t (dropping the top coefficient)."""
        return RBSeries(self.algebra, (self.algebra.zero_element(),) + self.coeffs[:-1])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RBSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None


def series_mul(a: RBSeries, b: RBSeries) -> RBSeries:
    return a * b


def commutator(a: RBSeries, b: RBSeries) -> RBSeries:
    return a * b - b * a


def series_exp(s: RBSeries) -> RBSeries:
    if not s[0].is_zero():
        raise SeriesError("exp needs a vanishing constant term")
    out = RBSeries.one(s.algebra, s.order)
    power = out
    for k in range(1, s.order + 1):
        power = (power * s).scale(Fraction(1, k))
        out = out + power
    return out


def _unit_offset(s: RBSeries) -> RBSeries:
    if s[0] != s.algebra.unit():
        raise SeriesError("constant term must be the unit")
    return s - RBSeries.one(s.algebra, s.order)


def series_log(s: RBSeries) -> RBSeries:
    u = _unit_offset(s)
    out = RBSeries.zero(s.algebra, s.order)
    power = RBSeries.one(s.algebra, s.order)
    for k in range(1, s.order + 1):
        power = power * u
        out = out + power.scale(Fraction((-1) ** (k - 1), k))
    return out


def series_inverse(s: RBSeries) -> RBSeries:
    """Geometric series 1 - u + u^2 - ... for s = 1 + u.

    Summed coefficientwise: v_0 = 1, v_n = -sum_{j=1..n} u_j v_{n-j}, which
    needs O(order^2) products instead of forming every power of u.
    """
    u = _unit_offset(s)
    out = [s.algebra.unit()]
    for n in range(1, s.order + 1):
        acc = s.algebra.zero_element()
        for j in range(1, n + 1):
            if not u[j].is_zero():
                acc = acc - u[j] * out[n - j]
        out.append(acc)
    return RBSeries(s.algebra, tuple(out))


# --- Atkinson recursion -----------------------------------------------------------


def _require_unital(algebra: RBAlgebra):
    if not algebra.unital:
        raise SeriesError(f"{algebra.name} has no unit")


def atkinson_F(a: RBElement, order: int) -> RBSeries:
    """F = 1 + t R(F a); F_n = (Ra)^[n]."""
    alg = a.algebra
    _require_unital(alg)
    coeffs = [alg.unit()]
    for _ in range(order):
        coeffs.append((coeffs[-1] * a).R())
    return RBSeries(alg, tuple(coeffs))


def atkinson_G(a: RBElement, order: int) -> RBSeries:
    """G = 1 + t R~(a G); G_n = (R~a)^{n}."""
    alg = a.algebra
    _require_unital(alg)
    coeffs = [alg.unit()]
    for _ in range(order):
        coeffs.append(tilde_R(a * coeffs[-1]))
    return RBSeries(alg, tuple(coeffs))


def linear_factor(a: RBElement, order: int) -> RBSeries:
    """1 + theta a t."""
    alg = a.algebra
    return RBSeries.from_list(alg, [alg.unit(), alg.weight * a], order)


def atkinson_residual(a: RBElement, order: int) -> RBSeries:
    """F (1 + theta a t) G - 1; vanishes identically."""
    F, G = atkinson_F(a, order), atkinson_G(a, order)
    return F * linear_factor(a, order) * G - RBSeries.one(a.algebra, order)


def atkinson_inverses(a: RBElement, order: int) -> tuple[RBSeries, RBSeries]:
    """(F^-1, G^-1) from F^-1 = 1 - t R(a G) and G^-1 = 1 - t R~(F a)."""
    alg = a.algebra
    F, G = atkinson_F(a, order), atkinson_G(a, order)
    f_inv = [alg.unit()] + [-(a * G[n - 1]).R() for n in range(1, order + 1)]
    g_inv = [alg.unit()] + [-tilde_R(F[n - 1] * a) for n in range(1, order + 1)]
    return RBSeries(alg, tuple(f_inv)), RBSeries(alg, tuple(g_inv))


def classical_spitzer_rhs(a: RBElement, order: int) -> RBSeries:
    """exp(theta^-1 R(log(1 + a theta t))) termwise; exp(t R(a)) at weight 0."""
    alg = a.algebra
    _require_unital(alg)
    if not alg.commutative:
        raise SeriesError("the classical Spitzer exponential needs a commutative model")
    theta = alg.weight
    zero = alg.zero_element()
    if theta == 0:
        exponent = [zero, a.R()] + [zero] * (order - 1)
    else:
        exponent = [zero]
        power = alg.unit()
        for n in range(1, order + 1):
            power = power * a
            # coefficient of t^n in theta^-1 R(log(1 + a theta t))
            c = Fraction((-1) ** (n - 1), n) * theta ** (n - 1)
            exponent.append(c * power.R())
    return series_exp(RBSeries.from_list(alg, exponent, order))


# --- Magnus exponent ------------------------------------------------------------


def lambda_series(a: RBElement, order: int) -> RBSeries:
    """L-hat(t) = sum_{n>=0} L^(n+1)(a) t^n, truncated at t^order."""
    lams = left_lambdas(a, order + 1)
    return RBSeries(a.algebra, tuple(lams[: order + 1]))


def integrate_t(s: RBSeries) -> RBSeries:
    """Formal t-integration t^n -> t^(n+1)/(n+1), truncated."""
    out = [s.algebra.zero_element()]
    for n in range(s.order):
        out.append(Fraction(1, n + 1) * s[n])
    return RBSeries(s.algebra, tuple(out))


def magnus_omega_recursive(a: RBElement, order: int) -> RBSeries:
    """Fixpoint of Omega = P(L + sum_k (-1)^k b_k ad_Omega^k L), b_k = B_k / k!."""
    alg = a.algebra
    _require_unital(alg)
    lam = lambda_series(a, order)
    coef = [Fraction((-1) ** k) * bernoulli_number(k) / math.factorial(k) for k in range(order + 1)]
    omega = RBSeries.zero(alg, order)
    for _ in range(order + 1):
        total = lam
        term = lam
        for k in range(1, order + 1):
            term = commutator(omega, term)
            if term.is_zero():
                break
            if coef[k]:
                total = total + term.scale(coef[k])
        new = integrate_t(total)
        if new == omega:
            break
        omega = new
    return omega


@lru_cache(maxsize=None)
def strichartz_coefficient(composition: tuple, leading_factor: bool = False) -> Fraction:
    """Coefficient of L^(i_1) ... L^(i_m) in Omega_{|I|}.

    Sum over sigma in S_m of (-1)^d(sigma) / (m binom(m-1, d(sigma))) times the
    simplex integral of the monomial carried by L(t_{sigma_m}) ... L(t_{sigma_1}):
    the factor in position p (from the left) is evaluated at t_{sigma_{m+1-p}}
    and contributes the exponent i_p - 1.  ``leading_factor`` multiplies by
    |I|, a normalization that fails the order-two check c((2,)) = 1/2.
    """
    m = len(composition)
    total = Fraction(0)
    for sigma in enumerate_permutations(m):
        d = descent_count(sigma)
        exps = [0] * m
        for p, i in enumerate(composition, start=1):
            exps[sigma[m - p] - 1] += i - 1
        total += Fraction((-1) ** d, m * math.comb(m - 1, d)) * simplex_monomial_integral(exps)
    if leading_factor:
        total *= sum(composition)
    return total


def strichartz_table(order: int, leading_factor: bool = False) -> dict[tuple, Fraction]:
    return {
        comp: strichartz_coefficient(comp, leading_factor)
        for k in range(1, order + 1)
        for comp in enumerate_compositions(k)
    }


def magnus_omega_strichartz(a: RBElement, order: int, leading_factor: bool = False) -> RBSeries:
    alg = a.algebra
    _require_unital(alg)
    lams = left_lambdas(a, order)
    out = [alg.zero_element()]
    for k in range(1, order + 1):
        acc = alg.zero_element()
        for comp in enumerate_compositions(k):
            c = strichartz_coefficient(tuple(comp), leading_factor)
            if not c:
                continue
            word = lams[comp[0] - 1]
            for i in comp[1:]:
                word = word * lams[i - 1]
            acc = acc + c * word
        out.append(acc)
    return RBSeries(alg, tuple(out))


def magnus_omega_from_log(a: RBElement, order: int) -> RBSeries:
    return series_log(atkinson_F(a, order))
