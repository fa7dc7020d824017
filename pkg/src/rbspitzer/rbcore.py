"""Rota-Baxter algebra interface, derived products and free-term rewriting.

Concrete models subclass :class:`RBAlgebra` and implement the payload-level
operations.  Formulas are written once against :class:`RBElement`, which
wraps a payload together with the algebra instance it belongs to, so the same
code runs in every model and at every weight.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .foundations import as_rational, render_rational


class ModelMismatchError(ValueError):
    """Two elements from different algebra instances were combined."""


class NotUnitalError(ValueError):
    pass


class RBAlgebra:
    """A Rota-Baxter algebra of weight ``weight`` acting on opaque payloads.

    Subclasses provide ``zero``, ``add``, ``neg``, ``scale``, ``mul``,
    ``apply_R`` and ``is_zero``; ``one`` only when ``unital``.
    """

    name = "abstract"
    weight: Fraction = Fraction(0)
    commutative = False
    unital = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotUnitalError(f"{self.name} has no unit")

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        return self.scale(-1, x)

    def scale(self, c, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def apply_R(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def equal(self, x, y) -> bool:
        return self.is_zero(self.add(x, self.neg(y)))

    def random_payload(self, rng):
        raise NotImplementedError(f"{self.name} has no random element generator")

    def render(self, x) -> str:
        return repr(x)

    # element helpers

    def element(self, payload) -> "RBElement":
        return RBElement(self, payload)

    def zero_element(self) -> "RBElement":
        return RBElement(self, self.zero())

    def unit(self) -> "RBElement":
        return RBElement(self, self.one())

    def random_element(self, rng) -> "RBElement":
        return RBElement(self, self.random_payload(rng))

    def __repr__(self) -> str:
        return f"<{self.name} weight={self.weight}>"


class RBElement:
    """A payload tied to its algebra; supports ``+ - *`` and ``.R()``."""

    __slots__ = ("algebra", "value")

    def __init__(self, algebra: RBAlgebra, value):
        self.algebra = algebra
        self.value = value

    def _same(self, other: "RBElement") -> RBAlgebra:
        if self.algebra is not other.algebra:
            raise ModelMismatchError(f"cannot combine {self.algebra!r} with {other.algebra!r}")
        return self.algebra

    def __add__(self, other):
        if not isinstance(other, RBElement):
            return NotImplemented
        alg = self._same(other)
        return RBElement(alg, alg.add(self.value, other.value))

    def __sub__(self, other):
        if not isinstance(other, RBElement):
            return NotImplemented
        alg = self._same(other)
        return RBElement(alg, alg.add(self.value, alg.neg(other.value)))

    def __neg__(self):
        return RBElement(self.algebra, self.algebra.neg(self.value))

    def __mul__(self, other):
        if isinstance(other, RBElement):
            alg = self._same(other)
            return RBElement(alg, alg.mul(self.value, other.value))
        if isinstance(other, (int, Fraction)):
            return RBElement(self.algebra, self.algebra.scale(as_rational(other), self.value))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RBElement(self.algebra, self.algebra.scale(as_rational(other), self.value))
        return NotImplemented

    def R(self) -> "RBElement":
        return RBElement(self.algebra, self.algebra.apply_R(self.value))

    def is_zero(self) -> bool:
        return self.algebra.is_zero(self.value)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RBElement):
            return NotImplemented
        return self.algebra is other.algebra and self.algebra.equal(self.value, other.value)

    __hash__ = None

    def __repr__(self) -> str:
        return f"RBElement[{self.algebra.name}]({self.algebra.render(self.value)})"


def R(x: RBElement) -> RBElement:
    return x.R()


def element_sum(items: Iterable[RBElement], algebra: RBAlgebra) -> RBElement:
    value = algebra.zero()
    for it in items:
        if it.algebra is not algebra:
            raise ModelMismatchError("summand from a different algebra")
        value = algebra.add(value, it.value)
    return RBElement(algebra, value)


# --- derived structure ------------------------------------------------------


def tilde_R(x: RBElement) -> RBElement:
    """The complementary operator -theta*id - R (again Rota-Baxter)."""
    theta = x.algebra.weight
    return (-theta) * x - x.R()


def check_rb(x: RBElement, y: RBElement) -> RBElement:
    """R(x)R(y) - R(R(x)y + xR(y) + theta*xy); zero iff the relation holds."""
    x._same(y)
    theta = x.algebra.weight
    rx, ry = x.R(), y.R()
    return rx * ry - (rx * y + x * ry + theta * (x * y)).R()


def double_product(x: RBElement, y: RBElement) -> RBElement:
    x._same(y)
    theta = x.algebra.weight
    return x.R() * y + x * y.R() + theta * (x * y)


def pre_lie_left(a: RBElement, b: RBElement) -> RBElement:
    """a |> b = R(a)b - bR(a) - theta*ba."""
    a._same(b)
    ra = a.R()
    return ra * b - b * ra - a.algebra.weight * (b * a)


def pre_lie_right(a: RBElement, b: RBElement) -> RBElement:
    """a <| b = aR(b) - R(b)a - theta*ba."""
    a._same(b)
    rb = b.R()
    return a * rb - rb * a - a.algebra.weight * (b * a)


def commutator(x: RBElement, y: RBElement) -> RBElement:
    return x * y - y * x


def iterated_left_word(args: Sequence[RBElement]) -> RBElement:
    """(((a1 |> a2) |> a3) ...) |> an."""
    if not args:
        raise ValueError("iterated pre-Lie word needs at least one argument")
    out = args[0]
    for a in args[1:]:
        out = pre_lie_left(out, a)
    return out


def iterated_right_word(args: Sequence[RBElement]) -> RBElement:
    """a1 <| (a2 <| (... <| an))."""
    if not args:
        raise ValueError("iterated pre-Lie word needs at least one argument")
    out = args[-1]
    for a in reversed(args[:-1]):
        out = pre_lie_right(a, out)
    return out


def left_word_powers(a: RBElement, n: int) -> list[RBElement]:
    """[l^(1)(a), ..., l^(n)(a)] with l^(k+1) = l^(k) |> a."""
    out = [a]
    for _ in range(n - 1):
        out.append(pre_lie_left(out[-1], a))
    return out


def right_word_powers(a: RBElement, n: int) -> list[RBElement]:
    out = [a]
    for _ in range(n - 1):
        out.append(pre_lie_right(a, out[-1]))
    return out


def left_lambdas(a: RBElement, n: int) -> list[RBElement]:
    """[L^(1)(a), ..., L^(n)(a)] where L^(k) = R(l^(k)(a))."""
    return [w.R() for w in left_word_powers(a, n)]


def right_lambdas(a: RBElement, n: int) -> list[RBElement]:
    return [w.R() for w in right_word_powers(a, n)]


def bracket_left(a: RBElement, n: int, op: Callable[[RBElement], RBElement] = R) -> RBElement:
    """(op a)^[n]: op((op a)^[n-1] * a), with the unit at n = 0."""
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    if n == 0:
        return a.algebra.unit()
    out = op(a)
    for _ in range(n - 1):
        out = op(out * a)
    return out


def bracket_right(a: RBElement, n: int, op: Callable[[RBElement], RBElement] = R) -> RBElement:
    """(op a)^{n}: op(a * (op a)^{n-1}), with the unit at n = 0."""
    if n < 0:
        raise ValueError("bracket order must be nonnegative")
    if n == 0:
        return a.algebra.unit()
    out = op(a)
    for _ in range(n - 1):
        out = op(a * out)
    return out


# --- derived algebras -------------------------------------------------------


class RescaledAlgebra(RBAlgebra):
    """Same algebra with R replaced by mu*R; the weight becomes mu*theta."""

    def __init__(self, base: RBAlgebra, mu):
        self.base = base
        self.mu = as_rational(mu)
        self.weight = self.mu * base.weight
        self.commutative = base.commutative
        self.unital = base.unital
        self.name = f"{base.name}*{render_rational(self.mu)}"

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.base.one()

    def add(self, x, y):
        return self.base.add(x, y)

    def neg(self, x):
        return self.base.neg(x)

    def scale(self, c, x):
        return self.base.scale(c, x)

    def mul(self, x, y):
        return self.base.mul(x, y)

    def apply_R(self, x):
        return self.base.scale(self.mu, self.base.apply_R(x))

    def is_zero(self, x):
        return self.base.is_zero(x)

    def equal(self, x, y):
        return self.base.equal(x, y)

    def random_payload(self, rng):
        return self.base.random_payload(rng)

    def render(self, x):
        return self.base.render(x)

    def __getattr__(self, item):
        # model-specific helpers (generator sequences, grids) pass through
        if item.startswith("__") or item == "base":
            raise AttributeError(item)
        return getattr(self.base, item)


def rescale(algebra: RBAlgebra, mu) -> RescaledAlgebra:
    return RescaledAlgebra(algebra, mu)


class DoubleAlgebra(RBAlgebra):
    """The vector space of ``base`` with the double product x*y; same R and weight."""

    def __init__(self, base: RBAlgebra):
        self.base = base
        self.weight = base.weight
        self.commutative = base.commutative
        self.unital = False
        self.name = f"double({base.name})"

    def zero(self):
        return self.base.zero()

    def add(self, x, y):
        return self.base.add(x, y)

    def neg(self, x):
        return self.base.neg(x)

    def scale(self, c, x):
        return self.base.scale(c, x)

    def mul(self, x, y):
        b = self.base
        out = b.add(b.mul(b.apply_R(x), y), b.mul(x, b.apply_R(y)))
        if self.weight:
            out = b.add(out, b.scale(self.weight, b.mul(x, y)))
        return out

    def apply_R(self, x):
        return self.base.apply_R(x)

    def is_zero(self, x):
        return self.base.is_zero(x)

    def equal(self, x, y):
        return self.base.equal(x, y)

    def random_payload(self, rng):
        return self.base.random_payload(rng)

    def render(self, x):
        return self.base.render(x)


# --- free RB terms ----------------------------------------------------------


class RBTerm:
    """Expression tree over generators Z1, Z2, ..."""

    def render(self) -> str:
        return render_term(self)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Gen(RBTerm):
    index: int


@dataclass(frozen=True)
class Prod(RBTerm):
    factors: tuple  # empty product is the unit


@dataclass(frozen=True)
class RApp(RBTerm):
    child: RBTerm


@dataclass(frozen=True)
class Sum(RBTerm):
    terms: tuple  # of (Fraction, RBTerm)


@dataclass(frozen=True)
class PreLieL(RBTerm):
    left: RBTerm
    right: RBTerm


@dataclass(frozen=True)
class PreLieR(RBTerm):
    left: RBTerm
    right: RBTerm


@dataclass(frozen=True)
class DoubleProd(RBTerm):
    left: RBTerm
    right: RBTerm


def term_sum(pairs: Iterable[tuple[object, RBTerm]]) -> Sum:
    return Sum(tuple((as_rational(c), t) for c, t in pairs))


def prod(*factors: RBTerm) -> RBTerm:
    return factors[0] if len(factors) == 1 else Prod(tuple(factors))


def _wrap(t: RBTerm) -> str:
    s = render_term(t)
    return f"({s})" if isinstance(t, Sum) and len(t.terms) > 1 else s


def render_term(t: RBTerm) -> str:
    if isinstance(t, Gen):
        return f"Z{t.index}"
    if isinstance(t, RApp):
        return f"R({render_term(t.child)})"
    if isinstance(t, Prod):
        if not t.factors:
            return "1"
        return "*".join(_wrap(f) for f in t.factors)
    if isinstance(t, Sum):
        if not t.terms:
            return "0"
        out = []
        for c, sub in t.terms:
            body = _wrap(sub)
            if c == 1:
                piece = body
            elif c == -1:
                piece = f"-{body}"
            else:
                piece = f"{render_rational(c)}*{body}"
            out.append(piece)
        return " + ".join(out).replace("+ -", "- ")
    if isinstance(t, PreLieL):
        return f"({render_term(t.left)} |> {render_term(t.right)})"
    if isinstance(t, PreLieR):
        return f"({render_term(t.left)} <| {render_term(t.right)})"
    if isinstance(t, DoubleProd):
        return f"({render_term(t.left)} <*> {render_term(t.right)})"
    raise TypeError(f"not an RB term: {t!r}")


_TOKEN = re.compile(r"\s*(?:(<\*>|\|>|<\||[()+\-*/])|(Z)(\d+)|(R)|(\d+))")


class TermSyntaxError(ValueError):
    pass


def parse_term(text: str) -> RBTerm:
    """Parse prefix ``R(...)``, ``*``, ``+``/``-``, rationals and ``Z1..Zn``.

    ``|>``, ``<|`` and ``<*>`` denote the left/right pre-Lie and double
    products; all binary products are left associative.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermSyntaxError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        op, z, zi, r, num = m.groups()
        if op:
            tokens.append(op)
        elif z:
            tokens.append(("Z", int(zi)))
        elif r:
            tokens.append("R")
        else:
            tokens.append(("N", int(num)))
        pos = m.end()
    parser = _Parser(tokens)
    out = parser.expr()
    if parser.i != len(tokens):
        raise TermSyntaxError(f"trailing tokens: {tokens[parser.i:]}")
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TermSyntaxError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> RBTerm:
        pairs = []
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        pairs.append(self._signed(sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.take() == "+" else -1
            pairs.append(self._signed(sign, self.term()))
        if len(pairs) == 1 and pairs[0][0] == 1:
            return pairs[0][1]
        return Sum(tuple(pairs))

    @staticmethod
    def _signed(sign, item):
        coef, t = item
        return (sign * coef, t)

    def term(self):
        coef = Fraction(1)
        factors: list[RBTerm] = []
        item = self.factor()
        coef, current = self._absorb(coef, item)
        while self.peek() in ("*", "|>", "<|", "<*>"):
            op = self.take()
            item = self.factor()
            if op == "*":
                if isinstance(item, Fraction):
                    coef *= item
                    continue
                if current is not None:
                    factors.append(current)
                current = item
            else:
                if isinstance(item, Fraction) or current is None:
                    raise TermSyntaxError(f"{op} needs terms on both sides")
                node = {"|>": PreLieL, "<|": PreLieR, "<*>": DoubleProd}[op]
                current = node(current, item)
        if current is not None:
            factors.append(current)
        if not factors:
            return coef, Prod(())
        return coef, (factors[0] if len(factors) == 1 else Prod(tuple(factors)))

    @staticmethod
    def _absorb(coef, item):
        if isinstance(item, Fraction):
            return coef * item, None
        return coef, item

    def factor(self):
        tok = self.peek()
        if isinstance(tok, tuple) and tok[0] == "Z":
            self.take()
            if tok[1] < 1:
                raise TermSyntaxError("generators are Z1, Z2, ...")
            return Gen(tok[1])
        if isinstance(tok, tuple) and tok[0] == "N":
            self.take()
            value = Fraction(tok[1])
            if self.peek() == "/":
                self.take()
                den = self.take()
                if not (isinstance(den, tuple) and den[0] == "N"):
                    raise TermSyntaxError("expected a denominator")
                value /= den[1]
            return value
        if tok == "R":
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            return RApp(inner)
        if tok == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise TermSyntaxError(f"unexpected token {tok!r}")


# Elementary monomials: tuples of factors, a factor being a generator index
# (int) or ("R", monomial).  The empty tuple is the unit.


def is_elementary(mono: tuple) -> bool:
    prev_r = False
    for f in mono:
        if isinstance(f, int):
            prev_r = False
            continue
        if prev_r or not is_elementary(f[1]):
            return False
        prev_r = True
    return True


def render_monomial(mono: tuple) -> str:
    if not mono:
        return "1"
    return "*".join(f"Z{f}" if isinstance(f, int) else f"R({render_monomial(f[1])})" for f in mono)


def _monomial_sort_key(mono):
    s = render_monomial(mono)
    return (len(s), s)


class NormalForm(dict):
    """Linear combination of elementary monomials (monomial -> Fraction)."""

    def render(self) -> str:
        if not self:
            return "0"
        parts = []
        for mono in sorted(self, key=_monomial_sort_key):
            c = self[mono]
            body = render_monomial(mono)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{render_rational(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_term(self) -> RBTerm:
        return Sum(tuple((c, _mono_to_term(m)) for m, c in sorted(self.items(), key=lambda kv: _monomial_sort_key(kv[0]))))


def _mono_to_term(mono) -> RBTerm:
    factors = tuple(Gen(f) if isinstance(f, int) else RApp(_mono_to_term(f[1])) for f in mono)
    return factors[0] if len(factors) == 1 else Prod(factors)


def _lc_add(target: dict, source: Mapping, scale=1):
    for m, c in source.items():
        v = target.get(m, 0) + scale * c
        if v:
            target[m] = v
        else:
            target.pop(m, None)


class _Rewriter:
    def __init__(self, weight):
        self.theta = as_rational(weight)
        self.cache: dict = {}

    def mono_mul(self, m1: tuple, m2: tuple) -> dict:
        if not m1:
            return {m2: Fraction(1)}
        if not m2:
            return {m1: Fraction(1)}
        a, b = m1[-1], m2[0]
        if isinstance(a, int) or isinstance(b, int):
            return {m1 + m2: Fraction(1)}
        key = (m1, m2)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        c, d = a[1], b[1]
        # R(c)R(d) -> R(c R(d)) + R(R(c) d) + theta R(c d)
        inner: dict = {}
        _lc_add(inner, self.mono_mul(c, (b,)))
        _lc_add(inner, self.mono_mul((a,), d))
        if self.theta:
            _lc_add(inner, self.mono_mul(c, d), self.theta)
        out: dict = {}
        head, tail = m1[:-1], m2[1:]
        for mono, coef in inner.items():
            new = head + (("R", mono),) + tail
            out[new] = out.get(new, 0) + coef
        out = {m: v for m, v in out.items() if v}
        self.cache[key] = out
        return out

    def lc_mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                _lc_add(out, self.mono_mul(m1, m2), c1 * c2)
        return out

    def normal(self, t: RBTerm) -> dict:
        if isinstance(t, Gen):
            return {(t.index,): Fraction(1)}
        if isinstance(t, RApp):
            return {(("R", m),): c for m, c in self.normal(t.child).items()}
        if isinstance(t, Prod):
            acc: dict = {(): Fraction(1)}
            for f in t.factors:
                acc = self.lc_mul(acc, self.normal(f))
            return acc
        if isinstance(t, Sum):
            out: dict = {}
            for c, sub in t.terms:
                _lc_add(out, self.normal(sub), c)
            return out
        if isinstance(t, (PreLieL, PreLieR, DoubleProd)):
            return self.normal(expand_derived(t, self.theta))
        raise TypeError(f"not an RB term: {t!r}")


def expand_derived(t: RBTerm, weight) -> RBTerm:
    """Rewrite one pre-Lie / double-product node in terms of R and products."""
    theta = as_rational(weight)
    a, b = t.left, t.right
    if isinstance(t, PreLieL):
        return term_sum([(1, Prod((RApp(a), b))), (-1, Prod((b, RApp(a)))), (-theta, Prod((b, a)))])
    if isinstance(t, PreLieR):
        return term_sum([(1, Prod((a, RApp(b)))), (-1, Prod((RApp(b), a))), (-theta, Prod((b, a)))])
    if isinstance(t, DoubleProd):
        return term_sum([(1, Prod((RApp(a), b))), (1, Prod((a, RApp(b)))), (theta, Prod((a, b)))])
    raise TypeError("not a derived node")


def normal_form(t: RBTerm, weight=0) -> NormalForm:
    """Expand into elementary monomials (no adjacent R-factors anywhere).

    Adjacent factors R(c)R(d) are rewritten with the Rota-Baxter relation,
    innermost first; each rewrite lowers the number of nested R's in the
    offending factor, so the procedure terminates.
    """
    return NormalForm(_Rewriter(weight).normal(t))


def eval_term(t: RBTerm, algebra: RBAlgebra, assignment) -> RBElement:
    """Interpret a term in ``algebra``; ``assignment`` maps generator index -> element."""

    def lookup(i):
        try:
            x = assignment[i]
        except (KeyError, IndexError):
            raise ValueError(f"no value assigned to Z{i}") from None
        if x.algebra is not algebra:
            raise ModelMismatchError(f"Z{i} assigned an element of another algebra")
        return x

    def ev(node):
        if isinstance(node, Gen):
            return lookup(node.index)
        if isinstance(node, RApp):
            return ev(node.child).R()
        if isinstance(node, Prod):
            if not node.factors:
                return algebra.unit()
            out = ev(node.factors[0])
            for f in node.factors[1:]:
                out = out * ev(f)
            return out
        if isinstance(node, Sum):
            out = algebra.zero_element()
            for c, sub in node.terms:
                out = out + c * ev(sub)
            return out
        if isinstance(node, PreLieL):
            return pre_lie_left(ev(node.left), ev(node.right))
        if isinstance(node, PreLieR):
            return pre_lie_right(ev(node.left), ev(node.right))
        if isinstance(node, DoubleProd):
            return double_product(ev(node.left), ev(node.right))
        raise TypeError(f"not an RB term: {node!r}")

    return ev(t)


def eval_normal_form(nf: Mapping, algebra: RBAlgebra, assignment) -> RBElement:
    return eval_term(NormalForm(nf).to_term(), algebra, assignment)


def term_generators(t: RBTerm) -> set[int]:
    if isinstance(t, Gen):
        return {t.index}
    if isinstance(t, RApp):
        return term_generators(t.child)
    if isinstance(t, Prod):
        return set().union(*(term_generators(f) for f in t.factors)) if t.factors else set()
    if isinstance(t, Sum):
        return set().union(*(term_generators(s) for _, s in t.terms)) if t.terms else set()
    return term_generators(t.left) | term_generators(t.right)


def random_term(rng, num_generators: int, depth: int) -> RBTerm:
    """Random product/R/sum tree used by the rewriting property tests."""
    if depth <= 0:
        return Gen(rng.randint(1, num_generators))
    kind = rng.random()
    if kind < 0.3:
        return Gen(rng.randint(1, num_generators))
    if kind < 0.55:
        return RApp(random_term(rng, num_generators, depth - 1))
    if kind < 0.85:
        k = rng.randint(2, 3)
        return Prod(tuple(random_term(rng, num_generators, depth - 1) for _ in range(k)))
    return Sum(tuple(
        (Fraction(rng.randint(-2, 2) or 1), random_term(rng, num_generators, depth - 1))
        for _ in range(2)
    ))
