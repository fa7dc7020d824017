"""Birkhoff decomposition of regularized characters.

A character gamma: H -> Laurent series is split as gamma = gamma_-^{*-1} * gamma_+
with gamma_- taking pole values and gamma_+ regular ones.  Four routes are
provided and cross-checked:

* ``bogoliubov``: the degree-by-degree recursion through the prepared map;
* ``closed_counterterm``: the composition sum of iterated pre-Lie words in the
  convolution Rota-Baxter algebra (weight -1, R = pole part pointwise);
* ``exp_counterterm``: the exponential of the Magnus-type exponent Omega;
* ``uniqueness_check``: the Atkinson series F and G^{-1} in the convolution algebra.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .foundations import (
    LaurentSeries,
    as_rational,
    enumerate_compositions,
    enumerate_refinements,
    omega_refined,
    render_rational,
)
from .hopf import (
    UNIT,
    HopfAlgebra,
    HopfError,
    LinMap,
    character,
    conv_exp,
    convolution,
    counit_map,
    dynkin,
    gamma_reconstruct,
    is_character,
    make_hopf,
)
from .rbcore import RBAlgebra, RBElement, left_lambdas
from .rbmodels import LaurentMS
from .series import atkinson_F, atkinson_inverses, strichartz_coefficient


class CharacterFileError(ValueError):
    pass


class WindowOverflowError(ValueError):
    """A pole deeper than the allotted window appeared."""


class ResidualPoleError(ValueError):
    pass


# --- convolution algebra as a Rota-Baxter algebra ---------------------------------------


class ConvolutionAlgebra(RBAlgebra):
    """Lin(H, A) up to a degree, with the convolution product and pointwise pole part."""

    name = "convolution"
    unital = True

    def __init__(self, hopf: HopfAlgebra, target: RBAlgebra, degree: int):
        self.hopf = hopf
        self.target = target
        self.degree = degree
        self.weight = target.weight
        self.commutative = hopf.cocommutative
        self.name = f"convolution({hopf.name})"

    def zero(self):
        return LinMap(self.hopf, self.target, self.degree, {})

    def one(self):
        return counit_map(self.hopf, self.target, self.degree)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def scale(self, c, x):
        return x.scale(c)

    def mul(self, x, y):
        return convolution(x, y)

    def apply_R(self, x):
        return x.map_values(self.target.apply_R)

    def is_zero(self, x):
        return x.is_zero()

    def equal(self, x, y):
        return x == y

    def random_payload(self, rng):
        values = {}
        for b in self.hopf.basis_up_to(self.degree):
            if rng.random() < 0.7:
                values[b] = self.target.random_payload(rng)
        return LinMap(self.hopf, self.target, self.degree, values)

    def render(self, x):
        return repr(x)

    def wrap(self, f: LinMap) -> RBElement:
        return RBElement(self, f)


# --- characters -------------------------------------------------------------


@dataclass
class RegCharacter:
    """A character into Laurent series, given on generators and extended multiplicatively."""

    hopf: HopfAlgebra
    degree: int
    generators: dict
    target: LaurentMS = field(default_factory=LaurentMS)
    max_pole: int | None = None
    linmap: LinMap = field(init=False)

    def __post_init__(self):
        for g in self.generators:
            if self.hopf.generator_degree(g) > self.degree:
                raise CharacterFileError(f"generator {self.hopf.render_generator(g)} exceeds degree {self.degree}")
        if self.max_pole is not None:
            for g, v in self.generators.items():
                if v.pole_order > self.max_pole * self.hopf.generator_degree(g):
                    raise WindowOverflowError(
                        f"pole of order {v.pole_order} on {self.hopf.render_generator(g)} exceeds the window"
                    )
        self.linmap = character(self.hopf, self.target, self.degree, self.generators)

    @property
    def pole_rate(self) -> int:
        """Largest ceil(pole order / degree) over the generators."""
        rate = 0
        for g, v in self.generators.items():
            d = self.hopf.generator_degree(g)
            rate = max(rate, -(-v.pole_order // d))
        return rate


def make_character(hopf: HopfAlgebra | str, degree: int, generators: Mapping, **kw) -> RegCharacter:
    if isinstance(hopf, str):
        hopf = make_hopf(hopf)
    gens = {}
    for key, value in generators.items():
        if isinstance(key, str):
            b = hopf.parse(key)
            if len(b) != 1:
                raise CharacterFileError(f"{key!r} is not a generator")
            key = b[0]
        if not isinstance(value, LaurentSeries):
            value = LaurentSeries({int(e): as_rational(c) for e, c in value.items()})
        gens[key] = value
    return RegCharacter(hopf, degree, gens, **kw)


def _parse_rational(text) -> Fraction:
    try:
        return as_rational(Fraction(str(text)))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise CharacterFileError(f"bad rational {text!r}") from exc


def character_from_json(data: Mapping) -> RegCharacter:
    if not isinstance(data, Mapping):
        raise CharacterFileError("character file must hold a JSON object")
    if "degree" not in data:
        raise CharacterFileError("character file lacks 'degree'")
    hopf_name = data.get("hopf", "ladder")
    if hopf_name not in ("ladder", "trees"):
        raise CharacterFileError(f"unsupported hopf {hopf_name!r}")
    degree = data["degree"]
    if not isinstance(degree, int) or degree < 0:
        raise CharacterFileError("degree must be a nonnegative integer")
    hopf = make_hopf(hopf_name)
    gens = {}
    for key, series in (data.get("values") or {}).items():
        try:
            b = hopf.parse(key)
        except HopfError as exc:
            raise CharacterFileError(str(exc)) from exc
        if len(b) != 1:
            raise CharacterFileError(f"{key!r} is not a generator")
        if not isinstance(series, Mapping):
            raise CharacterFileError(f"value of {key!r} must map exponents to rationals")
        try:
            coeffs = {int(e): _parse_rational(c) for e, c in series.items()}
        except ValueError as exc:
            raise CharacterFileError(f"bad exponent in {key!r}") from exc
        gens[b[0]] = LaurentSeries(coeffs)
    max_pole = data.get("max_pole")
    return RegCharacter(hopf, degree, gens, max_pole=max_pole)


def ingest_character(path: str | Path) -> RegCharacter:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CharacterFileError(f"cannot parse {path}: {exc}") from exc
    return character_from_json(data)


# --- Bogoliubov recursion ------------------------------------------------------


@dataclass
class BirkhoffPair:
    gamma_minus: LinMap
    gamma_plus: LinMap
    prepared: LinMap


def _check_window(f: LinMap, rate: int, what: str):
    for b, v in f.values.items():
        d = f.hopf.degree(b)
        if v.pole_order > d * rate:
            raise WindowOverflowError(
                f"{what} on {f.hopf.render(b)} has a pole of order {v.pole_order} beyond {d * rate}"
            )


def bogoliubov(gamma: RegCharacter) -> BirkhoffPair:
    """gamma_- = -R(bar), gamma_+ = (1 - R)(bar) with bar(x) = gamma(x) + sum' gamma_-(x') gamma(x'')."""
    hopf, A, N = gamma.hopf, gamma.target, gamma.degree
    g = gamma.linmap
    minus = {UNIT: A.one()}
    plus = {UNIT: A.one()}
    prepared = {}
    for d in range(1, N + 1):
        for b in hopf.basis(d):
            acc = g(b)
            for (left, right), c in hopf.coproduct(b).items():
                if left == UNIT or right == UNIT:
                    continue
                lv = minus.get(left)
                if lv is None:
                    continue
                term = A.mul(lv, g(right))
                acc = A.add(acc, term if c == 1 else A.scale(c, term))
            pole = A.apply_R(acc)
            prepared[b] = acc
            minus[b] = A.neg(pole)
            plus[b] = A.add(acc, A.neg(pole))
    pair = BirkhoffPair(
        LinMap(hopf, A, N, minus), LinMap(hopf, A, N, plus), LinMap(hopf, A, N, prepared)
    )
    _check_window(pair.gamma_minus, gamma.pole_rate, "counterterm")
    return pair


def support_ok(pair: BirkhoffPair) -> bool:
    """gamma_- has pure pole values off the unit; gamma_+ has no poles."""
    for b, v in pair.gamma_minus.values.items():
        if b != UNIT and any(e >= 0 for e in v.coeffs):
            return False
    return all(v.pole_order == 0 for v in pair.gamma_plus.values.values())


def multiplicativity_ok(pair: BirkhoffPair) -> bool:
    return is_character(pair.gamma_minus) and is_character(pair.gamma_plus)


def birkhoff_product_ok(pair: BirkhoffPair, gamma: RegCharacter) -> bool:
    """gamma_-^{*-1} * gamma_+ = gamma, with the inverse of a character taken as f o S."""
    from .hopf import antipode_map

    return convolution(antipode_map(pair.gamma_minus), pair.gamma_plus) == gamma.linmap


# --- closed and exponential counterterms ----------------------------------------------


def _convolution_handle(gamma: RegCharacter) -> tuple[ConvolutionAlgebra, RBElement]:
    C = ConvolutionAlgebra(gamma.hopf, gamma.target, gamma.degree)
    a = C.unit() - C.wrap(gamma.linmap)
    return C, a


def closed_counterterm(gamma: RegCharacter) -> LinMap:
    """e + sum_n sum_{I composition of n} omega(I) L^(i_1)(a) * ... * L^(i_k)(a), a = e - gamma.

    The pre-Lie words use the weight of the convolution algebra (-1).  Each
    inner sum is evaluated with the last-part recursion V_m = (1/m) sum_j V_{m-j} L^(j).
    """
    C, a = _convolution_handle(gamma)
    N = gamma.degree
    if N == 0:
        return C.one()
    lams = left_lambdas(a, N)
    V = [C.unit()]
    total = C.unit()
    for m in range(1, N + 1):
        acc = C.zero_element()
        for j in range(1, m + 1):
            acc = acc + V[m - j] * lams[j - 1]
        V.append(Fraction(1, m) * acc)
        total = total + V[m]
    return total.value


def omega_coefficients(order: int, degree_factor: bool = False) -> dict[tuple, Fraction]:
    """Coefficient of L^K in Omega_{|K|}: sum over coarser J of (-1)^(l(J)-1)/l(J) omega(K, J).

    With ``degree_factor`` each Omega_n is multiplied by n, a normalization
    that does not reproduce log F at order two.
    """
    coeffs: dict = {}
    for n in range(1, order + 1):
        for J in enumerate_compositions(n):
            weight = Fraction((-1) ** (len(J) - 1), len(J)) * (n if degree_factor else 1)
            for K in enumerate_refinements(J):
                coeffs[K] = coeffs.get(K, 0) + weight * omega_refined(K, J)
    return {K: c for K, c in coeffs.items() if c}


def _word_products(lams, compositions):
    cache: dict = {}

    def word(K):
        if K not in cache:
            cache[K] = lams[K[0] - 1] if len(K) == 1 else word(K[:-1]) * lams[K[-1] - 1]
        return cache[K]

    return word


def counterterm_exponent(gamma: RegCharacter, route: str = "combinatorial", degree_factor: bool = False) -> LinMap:
    """Omega = sum_n Omega_n in the convolution algebra (so that gamma_- = exp(Omega))."""
    C, a = _convolution_handle(gamma)
    N = gamma.degree
    if N == 0:
        return C.zero()
    lams = left_lambdas(a, N)
    if route == "combinatorial":
        table = omega_coefficients(N, degree_factor)
    elif route == "strichartz":
        table = {
            K: strichartz_coefficient(K, degree_factor)
            for n in range(1, N + 1)
            for K in enumerate_compositions(n)
        }
    else:
        raise ValueError(f"unknown route {route!r}")
    word = _word_products(lams, table)
    omega = C.zero_element()
    for K in sorted(table, key=lambda k: (sum(k), k)):
        c = table[K]
        if c:
            omega = omega + c * word(K)
    return omega.value


def exp_counterterm(gamma: RegCharacter, route: str = "combinatorial", degree_factor: bool = False) -> LinMap:
    return conv_exp(counterterm_exponent(gamma, route, degree_factor))


def uniqueness_check(gamma: RegCharacter, pair: BirkhoffPair | None = None) -> bool:
    """Atkinson series in the convolution algebra reproduce the Birkhoff pair.

    With a = e - gamma and t = 1: F gives gamma_-, and G^{-1} gives gamma_+.
    """
    pair = pair or bogoliubov(gamma)
    C, a = _convolution_handle(gamma)
    N = gamma.degree
    F = atkinson_F(a, N)
    _, G_inv = atkinson_inverses(a, N)
    f_sum = C.zero_element()
    g_sum = C.zero_element()
    for n in range(N + 1):
        f_sum = f_sum + F[n]
        g_sum = g_sum + G_inv[n]
    return f_sum.value == pair.gamma_minus and g_sum.value == pair.gamma_plus


# --- reports -------------------------------------------------------------------


def renormalized_limit(pair: BirkhoffPair) -> dict:
    """Constant term of gamma_+ on every basis element (the eps -> 0 limit)."""
    f = pair.gamma_plus
    out = {}
    for b in f.hopf.basis_up_to(f.degree):
        v = f(b)
        if v.pole_order:
            raise ResidualPoleError(f"gamma_+ has a pole on {f.hopf.render(b)}")
        out[b] = v[0] if v.trunc >= 0 else Fraction(0)
    return out


def beta_report(pair: BirkhoffPair) -> dict:
    """Dynkin image of the counterterm, its reconstruction, and the scalar-form flags.

    For each degree n the flag records whether every degree-n value of
    D(gamma_-) is a multiple of eps^-n; this is reported, never enforced.
    """
    gm = pair.gamma_minus
    D = dynkin(gm)
    reconstructed = gamma_reconstruct(D) == gm
    scalar_form = {}
    for n in range(1, gm.degree + 1):
        ok = True
        for b in gm.hopf.basis(n):
            v = D(b)
            if any(e != -n for e in v.coeffs):
                ok = False
                break
        scalar_form[n] = ok
    return {"dynkin": D, "reconstruction_ok": reconstructed, "scalar_form": scalar_form}


def _series_json(v: LaurentSeries) -> dict:
    return v.to_json()


def _map_json(f: LinMap) -> dict:
    return {
        f.hopf.render(b): _series_json(f(b))
        for b in f.hopf.basis_up_to(f.degree)
        if not f.target.is_zero(f(b))
    }


def renormalize(gamma: RegCharacter) -> tuple[dict, bool]:
    """Full report and an all-checks-passed flag."""
    pair = bogoliubov(gamma)
    closed = closed_counterterm(gamma)
    expo = exp_counterterm(gamma)
    strich = exp_counterterm(gamma, route="strichartz")
    beta = beta_report(pair)
    renormalized = renormalized_limit(pair)
    checks = {
        "multiplicative": multiplicativity_ok(pair),
        "support": support_ok(pair),
        "birkhoff_product": birkhoff_product_ok(pair, gamma),
        "closed_counterterm_agrees": closed == pair.gamma_minus,
        "exp_counterterm_agrees": expo == pair.gamma_minus,
        "strichartz_exponent_agrees": strich == pair.gamma_minus,
        "uniqueness": uniqueness_check(gamma, pair),
        "dynkin_reconstruction": beta["reconstruction_ok"],
    }
    trivial = pair.gamma_minus == counit_map(gamma.hopf, gamma.target, gamma.degree)
    report = {
        "hopf": gamma.hopf.name,
        "degree": gamma.degree,
        "gamma_minus": _map_json(pair.gamma_minus),
        "gamma_plus": _map_json(pair.gamma_plus),
        "renormalized": {
            gamma.hopf.render(b): render_rational(v) for b, v in renormalized.items()
        },
        "beta": {
            "dynkin_counterterm": _map_json(beta["dynkin"]),
            "scalar_form": {str(n): ok for n, ok in beta["scalar_form"].items()},
        },
        "checks": checks,
        "trivial_counterterm": trivial,
    }
    return report, all(checks.values())


def random_character(hopf: HopfAlgebra | str, degree: int, rng, pole_depth: int = 1,
                     positive: int = 1) -> RegCharacter:
    """Random generator values with poles of order <= pole_depth * (generator degree)."""
    if isinstance(hopf, str):
        hopf = make_hopf(hopf)
    gens = {}
    for d in range(1, degree + 1):
        for g in hopf.generators(d):
            coeffs = {}
            for e in range(-pole_depth * d, positive + 1):
                if rng.random() < 0.7:
                    coeffs[e] = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            coeffs.setdefault(-1, Fraction(1))
            gens[g] = LaurentSeries(coeffs)
    return RegCharacter(hopf, degree, gens)
