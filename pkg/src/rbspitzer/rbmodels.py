"""Concrete Rota-Baxter algebras.

* :class:`SequenceModel`: sequences of noncommutative polynomials with the
  partial-sum operator, weight 1; the free model used for identity checks.
* :class:`LaurentMS`: Laurent series with minimal subtraction, weight -1.
* :class:`PolyInt`: polynomials with integration from 0, weight 0.
* :class:`MatrixPoly`: 2x2 (by default) polynomial matrices, entrywise integration.
* :class:`TabulatedFn`: functions sampled on a grid with Riemann sums, weight -step
  (or +step for the strict variant).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .foundations import INF, LaurentSeries, as_rational, render_rational
from .ncpoly import NCPoly, letter, m_qsym_truncated, random_poly
from .rbcore import RBAlgebra, RBElement, bracket_left, bracket_right


# --- sequence model -----------------------------------------------------------


class SequenceModel(RBAlgebra):
    """Length-N sequences of NC polynomials; R(y)_k = y_1 + ... + y_{k-1}.

    Components are indexed 1..N.  Truncating the infinite sequences at N is
    harmless because every operation acts on component k using components
    < k only.
    """

    name = "seq"
    weight = Fraction(1)
    commutative = False
    unital = True

    def __init__(self, length: int = 8, random_letters: int = 3, random_degree: int = 2):
        if length < 1:
            raise ValueError("sequence length must be positive")
        self.length = length
        self.random_letters = random_letters
        self.random_degree = random_degree

    def zero(self):
        z = NCPoly.zero()
        return (z,) * self.length

    def one(self):
        o = NCPoly.one()
        return (o,) * self.length

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def scale(self, c, x):
        return tuple(a.scale(c) for a in x)

    def mul(self, x, y):
        return tuple(a * b for a, b in zip(x, y))

    def apply_R(self, x):
        out = [NCPoly.zero()]
        acc = NCPoly.zero()
        for comp in x[:-1]:
            acc = acc + comp
            out.append(acc)
        return tuple(out)

    def is_zero(self, x):
        return all(a.is_zero() for a in x)

    def equal(self, x, y):
        return x == y

    def random_payload(self, rng):
        letters = [letter(1, i) for i in range(1, self.random_letters + 1)]
        return tuple(random_poly(rng, letters, self.random_degree) for _ in range(self.length))

    def render(self, x):
        return "(" + ", ".join(p.render() for p in x) + ")"

    def generator_sequence(self, alphabet: int = 1) -> RBElement:
        """X = (x_1, x_2, ..., x_N) in the given alphabet."""
        return RBElement(self, tuple(NCPoly.var(alphabet, k) for k in range(1, self.length + 1)))

    def component(self, x: RBElement, k: int) -> NCPoly:
        """Component k (1-based)."""
        if not 1 <= k <= self.length:
            raise IndexError(f"component {k} outside 1..{self.length}")
        return x.value[k - 1]


def standard_R(y: RBElement) -> RBElement:
    if not isinstance(y.algebra, SequenceModel):
        raise TypeError("standard_R acts on the sequence model")
    return y.R()


def generator_sequence(model: SequenceModel, alphabet: int = 1) -> RBElement:
    return model.generator_sequence(alphabet)


def rx_bracket(model: SequenceModel, n: int, variant: str = "left", alphabet: int = 1) -> RBElement:
    """(RX)^[n] (left) or (RX)^{n} (right) for the generator sequence X."""
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    x = model.generator_sequence(alphabet)
    if variant == "left":
        return bracket_left(x, n)
    if variant == "right":
        return bracket_right(x, n)
    raise ValueError(f"unknown variant {variant!r}")


def qsym_component_check(model: SequenceModel, n: int, variant: str = "left") -> bool:
    """Component k of the bracket equals the truncated NCQSym monomial in k-1 variables.

    Left brackets give M_{(1,2,...,n)}, right brackets M_{(n,...,2,1)}.
    """
    br = rx_bracket(model, n, variant)
    f = tuple(range(1, n + 1)) if variant == "left" else tuple(range(n, 0, -1))
    for k in range(1, model.length + 1):
        comp = model.component(br, k)
        if n == 0:
            expected = NCPoly.one()
        else:
            expected = m_qsym_truncated(f, k - 1) if k > 1 else NCPoly.zero()
        if comp != expected:
            return False
    return True


# --- Laurent series, minimal subtraction ------------------------------------------


class LaurentMS(RBAlgebra):
    """Laurent series in eps; R keeps the strictly negative powers."""

    name = "laurent"
    weight = Fraction(-1)
    commutative = True
    unital = True

    def __init__(self, max_pole: int = 3, max_positive: int = 3):
        self.max_pole = max_pole
        self.max_positive = max_positive

    def zero(self):
        return LaurentSeries()

    def one(self):
        return LaurentSeries.constant(1)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def scale(self, c, x):
        return x.scale(c)

    def mul(self, x, y):
        return x * y

    def apply_R(self, x):
        return x.pole_part()

    def is_zero(self, x):
        return x.is_zero()

    def equal(self, x, y):
        return (x - y).is_zero()

    def random_payload(self, rng):
        coeffs = {}
        for e in range(-self.max_pole, self.max_positive + 1):
            if rng.random() < 0.6:
                coeffs[e] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        return LaurentSeries(coeffs)

    def render(self, x):
        return repr(x)

    def series(self, coeffs, trunc=INF) -> RBElement:
        return RBElement(self, LaurentSeries(coeffs, trunc))


def ms_project(x: RBElement) -> RBElement:
    """Minimal subtraction on a Laurent element (the model's R)."""
    if not isinstance(x.algebra, LaurentMS):
        raise TypeError("ms_project acts on the Laurent model")
    return x.R()


# --- weight-zero integration ----------------------------------------------------


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def poly_add(p: tuple, q: tuple) -> tuple:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def poly_scale(c, p: tuple) -> tuple:
    return _trim(c * v for v in p)


def poly_mul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_integrate(p: tuple) -> tuple:
    """Antiderivative vanishing at 0."""
    if not p:
        return ()
    return (Fraction(0),) + tuple(Fraction(c) / (i + 1) for i, c in enumerate(p))


def render_upoly(p: tuple, var: str = "x") -> str:
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(render_rational(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{render_rational(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _random_upoly(rng, degree: int) -> tuple:
    return _trim(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(rng.randint(0, degree) + 1))


class PolyInt(RBAlgebra):
    """Q[x] with R(f) = integral of f from 0 to x."""

    name = "polyint"
    weight = Fraction(0)
    commutative = True
    unital = True

    def __init__(self, random_degree: int = 3):
        self.random_degree = random_degree

    def zero(self):
        return ()

    def one(self):
        return (Fraction(1),)

    def add(self, x, y):
        return poly_add(x, y)

    def scale(self, c, x):
        return poly_scale(as_rational(c), x)

    def mul(self, x, y):
        return poly_mul(x, y)

    def apply_R(self, x):
        return poly_integrate(x)

    def is_zero(self, x):
        return not x

    def equal(self, x, y):
        return x == y

    def random_payload(self, rng):
        return _random_upoly(rng, self.random_degree)

    def render(self, x):
        return render_upoly(x)

    def poly(self, coeffs: Sequence) -> RBElement:
        return RBElement(self, _trim(as_rational(c) for c in coeffs))


class MatrixPoly(RBAlgebra):
    """d x d matrices over Q[x]; R integrates every entry."""

    name = "matrix"
    weight = Fraction(0)
    commutative = False
    unital = True

    def __init__(self, dim: int = 2, random_degree: int = 2):
        self.dim = dim
        self.random_degree = random_degree

    def _build(self, f):
        return tuple(tuple(f(i, j) for j in range(self.dim)) for i in range(self.dim))

    def zero(self):
        return self._build(lambda i, j: ())

    def one(self):
        return self._build(lambda i, j: (Fraction(1),) if i == j else ())

    def add(self, x, y):
        return self._build(lambda i, j: poly_add(x[i][j], y[i][j]))

    def scale(self, c, x):
        c = as_rational(c)
        return self._build(lambda i, j: poly_scale(c, x[i][j]))

    def mul(self, x, y):
        def entry(i, j):
            acc = ()
            for k in range(self.dim):
                acc = poly_add(acc, poly_mul(x[i][k], y[k][j]))
            return acc

        return self._build(entry)

    def apply_R(self, x):
        return self._build(lambda i, j: poly_integrate(x[i][j]))

    def is_zero(self, x):
        return all(not e for row in x for e in row)

    def equal(self, x, y):
        return x == y

    def random_payload(self, rng):
        return self._build(lambda i, j: _random_upoly(rng, self.random_degree))

    def render(self, x):
        return "[" + "; ".join(", ".join(render_upoly(e) for e in row) for row in x) + "]"

    def matrix(self, rows) -> RBElement:
        return RBElement(self, tuple(tuple(_trim(as_rational(c) for c in e) for e in row) for row in rows))


# --- Riemann sums on a grid ----------------------------------------------------


class TabulatedFn(RBAlgebra):
    """Functions sampled at step*1, step*2, ..., step*M.

    ``R_step(f)(n*step) = step * sum_{k<=n} f(k*step)`` has weight ``-step``;
    the strict variant ``sum_{k<=n-1}`` has weight ``+step``.
    """

    name = "riemann"
    commutative = True
    unital = True

    def __init__(self, step=1, samples: int = 8, strict: bool = False):
        self.step = as_rational(step)
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        self.samples = samples
        self.strict = strict
        self.weight = self.step if strict else -self.step

    def zero(self):
        return (Fraction(0),) * self.samples

    def one(self):
        return (Fraction(1),) * self.samples

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def scale(self, c, x):
        c = as_rational(c)
        return tuple(c * a for a in x)

    def mul(self, x, y):
        return tuple(a * b for a, b in zip(x, y))

    def apply_R(self, x):
        out = []
        acc = Fraction(0)
        for v in x:
            if self.strict:
                out.append(self.step * acc)
                acc += v
            else:
                acc += v
                out.append(self.step * acc)
        return tuple(out)

    def is_zero(self, x):
        return not any(x)

    def equal(self, x, y):
        return x == y

    def random_payload(self, rng):
        return tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(self.samples))

    def render(self, x):
        return "[" + ", ".join(render_rational(v) for v in x) + "]"

    def tabulate(self, values: Sequence) -> RBElement:
        if len(values) != self.samples:
            raise ValueError(f"expected {self.samples} samples")
        return RBElement(self, tuple(as_rational(v) for v in values))


MODEL_NAMES = ("seq", "laurent", "polyint", "matrix", "riemann")


def make_model(name: str, *, length: int = 8, step=1) -> RBAlgebra:
    """Model by CLI name with default parameters."""
    if name == "seq":
        return SequenceModel(length=length)
    if name == "laurent":
        return LaurentMS()
    if name == "polyint":
        return PolyInt()
    if name == "matrix":
        return MatrixPoly()
    if name == "riemann":
        return TabulatedFn(step=step, samples=length)
    raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")
