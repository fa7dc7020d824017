"""Graded connected Hopf algebras with a monomial basis, and linear maps out of them.

Three instances share one interface:

* :class:`LadderHopf`: polynomials in t_1, t_2, ... with Delta(t_n) = sum t_i (x) t_{n-i};
* :class:`TreeHopf`: rooted forests with the admissible-cut coproduct;
* :class:`NCSFHopf`: noncommutative symmetric functions on S_1, S_2, ... with the
  divided-powers coproduct.

Basis elements are tuples of generator keys (the empty tuple is the unit), so
the product of two basis elements is again a basis element.  Linear maps into
a commutative target algebra (:class:`LinMap`) carry the convolution product,
exp/log, the Dynkin map and its inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .foundations import enumerate_compositions
from .rbcore import RBAlgebra

UNIT = ()


class HopfError(ValueError):
    pass


class HopfAlgebra:
    """Connected graded bialgebra with a multiplicative monomial basis."""

    name = "abstract"
    commutative = True
    cocommutative = True

    def __init__(self):
        self._coproduct_cache: dict = {}
        self._antipode_cache: dict = {UNIT: {UNIT: Fraction(1)}}
        self._basis_cache: dict = {}

    # instance-specific pieces

    def generators(self, degree: int) -> list:
        raise NotImplementedError

    def generator_degree(self, g) -> int:
        raise NotImplementedError

    def generator_coproduct(self, g) -> dict:
        """Delta(g) as {(left basis, right basis): coefficient}."""
        raise NotImplementedError

    def render_generator(self, g) -> str:
        raise NotImplementedError

    def parse_generator(self, text: str):
        raise NotImplementedError

    # shared machinery

    def normalize(self, factors: Iterable) -> tuple:
        factors = tuple(factors)
        return tuple(sorted(factors)) if self.commutative else factors

    def multiply(self, b1: tuple, b2: tuple) -> tuple:
        return self.normalize(b1 + b2)

    def degree(self, b: tuple) -> int:
        return sum(self.generator_degree(g) for g in b)

    def factors(self, b: tuple) -> tuple:
        return b

    def is_generator(self, b: tuple) -> bool:
        return len(b) == 1

    def basis(self, degree: int) -> list:
        """All basis elements of the given degree, in a deterministic order."""
        hit = self._basis_cache.get(degree)
        if hit is not None:
            return hit
        if degree == 0:
            out = [UNIT]
        else:
            found = set()
            out = []
            for first in range(1, degree + 1):
                for g in self.generators(first):
                    for rest in self.basis(degree - first):
                        b = self.multiply((g,), rest)
                        if b not in found:
                            found.add(b)
                            out.append(b)
            out.sort(key=self.sort_key)
        self._basis_cache[degree] = out
        return out

    def basis_up_to(self, degree: int) -> list:
        return [b for d in range(degree + 1) for b in self.basis(d)]

    def sort_key(self, b: tuple):
        return (self.degree(b), len(b), self.render(b))

    def coproduct(self, b: tuple) -> dict:
        hit = self._coproduct_cache.get(b)
        if hit is not None:
            return hit
        out: dict = {(UNIT, UNIT): Fraction(1)}
        for g in b:
            dg = self.generator_coproduct(g)
            new: dict = {}
            for (l1, r1), c1 in out.items():
                for (l2, r2), c2 in dg.items():
                    key = (self.multiply(l1, l2), self.multiply(r1, r2))
                    new[key] = new.get(key, 0) + c1 * c2
            out = {k: v for k, v in new.items() if v}
        self._coproduct_cache[b] = out
        return out

    def antipode_basis(self, b: tuple) -> dict:
        """S(b) via S(b) = -sum_{b'' != 1} S(b') b''."""
        hit = self._antipode_cache.get(b)
        if hit is not None:
            return hit
        out: dict = {}
        for (left, right), c in self.coproduct(b).items():
            if right == UNIT:
                continue
            for s_b, s_c in self.antipode_basis(left).items():
                key = self.multiply(s_b, right)
                out[key] = out.get(key, 0) - c * s_c
        out = {k: v for k, v in out.items() if v}
        self._antipode_cache[b] = out
        return out

    def render(self, b: tuple) -> str:
        if not b:
            return "1"
        return self.joiner.join(self.render_generator(g) for g in b)

    joiner = " "

    def parse(self, text: str) -> tuple:
        text = text.strip()
        if text == "1":
            return UNIT
        return self.normalize(self.parse_generator(tok) for tok in self.split_tokens(text))

    def split_tokens(self, text: str) -> list[str]:
        return text.split()


# --- ladder -----------------------------------------------------------------


class LadderHopf(HopfAlgebra):
    """Polynomial algebra on t_1, t_2, ...; generators are the positive integers."""

    name = "ladder"
    joiner = "*"

    def generators(self, degree):
        return [degree] if degree > 0 else []

    def generator_degree(self, g):
        return g

    def generator_coproduct(self, g):
        out = {}
        for i in range(g + 1):
            left = (i,) if i else UNIT
            right = (g - i,) if g - i else UNIT
            out[(left, right)] = Fraction(1)
        return out

    def render_generator(self, g):
        return f"t{g}"

    def parse_generator(self, text):
        if not text.startswith("t") or not text[1:].isdigit() or int(text[1:]) < 1:
            raise HopfError(f"not a ladder generator: {text!r}")
        return int(text[1:])

    def split_tokens(self, text):
        return [t for t in text.replace("*", " ").split()]


# --- rooted trees -------------------------------------------------------------


def parse_tree(text: str) -> str:
    """Canonical form of a parenthesized tree, e.g. ``(()(()))``."""
    text = "".join(text.split())
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(text) or text[pos] != "(":
            raise HopfError(f"malformed tree {text!r}")
        pos += 1
        children = []
        while pos < len(text) and text[pos] == "(":
            children.append(node())
        if pos >= len(text) or text[pos] != ")":
            raise HopfError(f"malformed tree {text!r}")
        pos += 1
        return "(" + "".join(sorted(children)) + ")"

    out = node()
    if pos != len(text):
        raise HopfError(f"trailing characters in tree {text!r}")
    return out


def tree_children(tree: str) -> list[str]:
    """Top-level subtrees of a canonical tree string."""
    out, depth, start = [], 0, None
    for i, ch in enumerate(tree[1:-1], start=1):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        else:
            depth -= 1
            if depth == 0:
                out.append(tree[start:i + 1])
    return out


def tree_size(tree: str) -> int:
    return tree.count("(")


def make_tree(children: Iterable[str]) -> str:
    return "(" + "".join(sorted(children)) + ")"


def enumerate_trees(n: int) -> list[str]:
    """Unlabelled rooted trees with n vertices (canonical strings)."""
    return sorted(make_tree(forest) for forest in _forests(n - 1))


def _forests(n: int) -> list[tuple]:
    if n == 0:
        return [()]
    out = set()
    for first in range(1, n + 1):
        for t in enumerate_trees(first):
            for rest in _forests(n - first):
                out.add(tuple(sorted((t,) + rest)))
    return sorted(out)


def admissible_cuts(tree: str) -> list[tuple[tuple, str]]:
    """All admissible cuts as (pruned forest, trunk), the empty cut included."""
    options_per_child = []
    for child in tree_children(tree):
        opts = [((child,), None)]  # cut the edge above the child
        for pruned, trunk in admissible_cuts(child):
            opts.append((pruned, trunk))
        options_per_child.append(opts)
    out = []
    for combo in itertools.product(*options_per_child):
        pruned = []
        kept = []
        for p, t in combo:
            pruned.extend(p)
            if t is not None:
                kept.append(t)
        out.append((tuple(sorted(pruned)), make_tree(kept)))
    return out


class TreeHopf(HopfAlgebra):
    """Connes-Kreimer Hopf algebra of rooted forests; degree = number of vertices."""

    name = "trees"
    cocommutative = False

    def generators(self, degree):
        return enumerate_trees(degree) if degree > 0 else []

    def generator_degree(self, g):
        return tree_size(g)

    def generator_coproduct(self, g):
        out = {((g,), UNIT): Fraction(1)}
        for pruned, trunk in admissible_cuts(g):
            key = (pruned, (trunk,))
            out[key] = out.get(key, 0) + 1
        return out

    def render_generator(self, g):
        return g

    def parse_generator(self, text):
        return parse_tree(text)

    def split_tokens(self, text):
        # trees may be written with internal spaces; split at top level
        tokens, depth, cur = [], 0, []
        for ch in text:
            if ch.isspace():
                continue
            if ch not in "()":
                raise HopfError(f"unexpected character {ch!r} in forest")
            cur.append(ch)
            depth += 1 if ch == "(" else -1
            if depth < 0:
                raise HopfError(f"unbalanced forest {text!r}")
            if depth == 0:
                tokens.append("".join(cur))
                cur = []
        if depth:
            raise HopfError(f"unbalanced forest {text!r}")
        return tokens


# --- noncommutative symmetric functions ------------------------------------------


class NCSFHopf(HopfAlgebra):
    """Free associative algebra on S_1, S_2, ...; basis = compositions."""

    name = "ncsf"
    commutative = False

    def generators(self, degree):
        return [degree] if degree > 0 else []

    def generator_degree(self, g):
        return g

    def basis(self, degree):
        return [tuple(c) for c in enumerate_compositions(degree)] if degree else [UNIT]

    def generator_coproduct(self, g):
        return LadderHopf.generator_coproduct(self, g)

    def render_generator(self, g):
        return f"S{g}"

    def parse_generator(self, text):
        if not text.startswith("S") or not text[1:].isdigit() or int(text[1:]) < 1:
            raise HopfError(f"not an NCSF generator: {text!r}")
        return int(text[1:])

    joiner = "*"

    def split_tokens(self, text):
        return text.replace("*", " ").split()


HOPF_INSTANCES = {"ladder": LadderHopf, "trees": TreeHopf, "ncsf": NCSFHopf}


def make_hopf(name: str) -> HopfAlgebra:
    try:
        return HOPF_INSTANCES[name]()
    except KeyError:
        raise HopfError(f"unknown Hopf algebra {name!r}") from None


# --- elements of H -------------------------------------------------------------


Element = dict  # basis tuple -> Fraction


def el_add(x: Mapping, y: Mapping, c=1) -> dict:
    out = dict(x)
    for b, v in y.items():
        s = out.get(b, 0) + c * v
        if s:
            out[b] = s
        else:
            out.pop(b, None)
    return out


def el_mul(hopf: HopfAlgebra, x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    for b1, c1 in x.items():
        for b2, c2 in y.items():
            b = hopf.multiply(b1, b2)
            out[b] = out.get(b, 0) + c1 * c2
    return {b: v for b, v in out.items() if v}


def el_coproduct(hopf: HopfAlgebra, x: Mapping) -> dict:
    out: dict = {}
    for b, c in x.items():
        for key, v in hopf.coproduct(b).items():
            out[key] = out.get(key, 0) + c * v
    return {k: v for k, v in out.items() if v}


def antipode(hopf: HopfAlgebra, x: Mapping) -> dict:
    out: dict = {}
    for b, c in x.items():
        out = el_add(out, hopf.antipode_basis(b), c)
    return out


def grading(hopf: HopfAlgebra, x: Mapping) -> dict:
    return {b: hopf.degree(b) * c for b, c in x.items() if hopf.degree(b)}


def el_convolve(hopf: HopfAlgebra, f: Callable, g: Callable, x: Mapping) -> dict:
    """(f * g)(x) = m (f (x) g) Delta(x) for endomorphisms f, g of H."""
    out: dict = {}
    for (left, right), c in el_coproduct(hopf, x).items():
        out = el_add(out, el_mul(hopf, f({left: Fraction(1)}), g({right: Fraction(1)})), c)
    return out


def dynkin_endomorphism(hopf: HopfAlgebra, x: Mapping) -> dict:
    """D_H = S * Y applied to x."""
    return el_convolve(hopf, lambda e: antipode(hopf, e), lambda e: grading(hopf, e), x)


def render_element(hopf: HopfAlgebra, x: Mapping) -> str:
    if not x:
        return "0"
    from .foundations import render_rational

    parts = []
    for b in sorted(x, key=hopf.sort_key):
        c = x[b]
        body = hopf.render(b)
        parts.append(body if c == 1 else f"-{body}" if c == -1 else f"{render_rational(c)}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def hopf_axiom_report(hopf: HopfAlgebra, max_degree: int) -> dict[str, bool]:
    """Associativity, coassociativity, counit and antipode laws on all basis elements."""
    basis = hopf.basis_up_to(max_degree)
    assoc = all(
        hopf.multiply(hopf.multiply(a, b), c) == hopf.multiply(a, hopf.multiply(b, c))
        for a in basis for b in basis for c in basis
        if hopf.degree(a) + hopf.degree(b) + hopf.degree(c) <= max_degree
    )
    coassoc = True
    counit = True
    antipode_ok = True
    compat = True
    for b in basis:
        delta = hopf.coproduct(b)
        left_iter: dict = {}
        right_iter: dict = {}
        for (l, r), c in delta.items():
            for (ll, lr), c2 in hopf.coproduct(l).items():
                key = (ll, lr, r)
                left_iter[key] = left_iter.get(key, 0) + c * c2
            for (rl, rr), c2 in hopf.coproduct(r).items():
                key = (l, rl, rr)
                right_iter[key] = right_iter.get(key, 0) + c * c2
        left_iter = {k: v for k, v in left_iter.items() if v}
        right_iter = {k: v for k, v in right_iter.items() if v}
        coassoc &= left_iter == right_iter
        counit &= delta.get((b, UNIT)) == 1 and delta.get((UNIT, b)) == 1
        if b != UNIT:
            s_left: dict = {}
            s_right: dict = {}
            for (l, r), c in delta.items():
                s_left = el_add(s_left, el_mul(hopf, hopf.antipode_basis(l), {r: Fraction(1)}), c)
                s_right = el_add(s_right, el_mul(hopf, {l: Fraction(1)}, hopf.antipode_basis(r)), c)
            antipode_ok &= not s_left and not s_right
    for a in basis:
        for b in basis:
            if hopf.degree(a) + hopf.degree(b) > max_degree:
                continue
            prod_delta = hopf.coproduct(hopf.multiply(a, b))
            expected: dict = {}
            for (l1, r1), c1 in hopf.coproduct(a).items():
                for (l2, r2), c2 in hopf.coproduct(b).items():
                    key = (hopf.multiply(l1, l2), hopf.multiply(r1, r2))
                    expected[key] = expected.get(key, 0) + c1 * c2
            compat &= prod_delta == {k: v for k, v in expected.items() if v}
    return {
        "associativity": assoc,
        "coassociativity": coassoc,
        "counit": counit,
        "antipode": antipode_ok,
        "bialgebra": compat,
    }


# --- linear maps H -> A ------------------------------------------------------------


@dataclass
class LinMap:
    """Linear map from ``hopf`` (up to ``degree``) to a commutative ``target``.

    ``values`` holds target payloads for basis elements; missing keys are zero.
    """

    hopf: HopfAlgebra
    target: RBAlgebra
    degree: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.target.commutative:
            raise HopfError("linear maps are taken into a commutative algebra")
        self.values = {b: v for b, v in self.values.items() if not self.target.is_zero(v)}

    def __call__(self, b: tuple):
        return self.values.get(b, self.target.zero())

    def at(self, text: str):
        return self(self.hopf.parse(text))

    def _same(self, other: "LinMap"):
        if self.hopf is not other.hopf or self.target is not other.target:
            raise HopfError("linear maps on different spaces")
        if self.degree != other.degree:
            raise HopfError("linear maps truncated at different degrees")

    def _new(self, values: dict) -> "LinMap":
        return LinMap(self.hopf, self.target, self.degree, values)

    def __add__(self, other: "LinMap") -> "LinMap":
        self._same(other)
        t = self.target
        out = dict(self.values)
        for b, v in other.values.items():
            out[b] = t.add(out[b], v) if b in out else v
        return self._new(out)

    def __neg__(self) -> "LinMap":
        return self._new({b: self.target.neg(v) for b, v in self.values.items()})

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + (-other)

    def scale(self, c) -> "LinMap":
        return self._new({b: self.target.scale(c, v) for b, v in self.values.items()})

    def map_values(self, f: Callable) -> "LinMap":
        return self._new({b: f(v) for b, v in self.values.items()})

    def component(self, n: int) -> "LinMap":
        """Restriction to the degree-n part."""
        return self._new({b: v for b, v in self.values.items() if self.hopf.degree(b) == n})

    def graded(self) -> "LinMap":
        """f o Y: degree-n values multiplied by n."""
        return self._new({b: self.target.scale(self.hopf.degree(b), v) for b, v in self.values.items()})

    def compose(self, x: Mapping) -> object:
        """f(x) for an element x of H."""
        t = self.target
        acc = t.zero()
        for b, c in x.items():
            v = self.values.get(b)
            if v is not None and self.hopf.degree(b) <= self.degree:
                acc = t.add(acc, t.scale(c, v))
        return acc

    def precompose(self, endo: Callable[[tuple], Mapping]) -> "LinMap":
        out = {}
        for b in self.hopf.basis_up_to(self.degree):
            out[b] = self.compose(endo(b))
        return self._new(out)

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        items = ", ".join(
            f"{self.hopf.render(b)}: {self.target.render(v)}"
            for b, v in sorted(self.values.items(), key=lambda kv: self.hopf.sort_key(kv[0]))
        )
        return f"LinMap[{self.hopf.name}, deg<={self.degree}]({{{items}}})"


def counit_map(hopf: HopfAlgebra, target: RBAlgebra, degree: int) -> LinMap:
    """e_A: 1 -> 1, everything else -> 0."""
    return LinMap(hopf, target, degree, {UNIT: target.one()})


def zero_map(hopf: HopfAlgebra, target: RBAlgebra, degree: int) -> LinMap:
    return LinMap(hopf, target, degree, {})


def character(hopf: HopfAlgebra, target: RBAlgebra, degree: int, generator_values: Mapping) -> LinMap:
    """Multiplicative extension of values on generators (missing generators map to 0)."""
    t = target
    values = {}
    for b in hopf.basis_up_to(degree):
        v = t.one()
        for g in hopf.factors(b):
            gv = generator_values.get(g)
            if gv is None:
                v = t.zero()
                break
            v = t.mul(v, gv)
        values[b] = v
    return LinMap(hopf, target, degree, values)


def is_character(f: LinMap) -> bool:
    t = f.target
    if not t.equal(f(UNIT), t.one()):
        return False
    for b in f.hopf.basis_up_to(f.degree):
        if len(b) < 2:
            continue
        v = t.one()
        for g in f.hopf.factors(b):
            v = t.mul(v, f((g,)))
        if not t.equal(v, f(b)):
            return False
    return True


def is_infinitesimal(f: LinMap) -> bool:
    """f(1) = 0 and f vanishes on every product of two or more generators."""
    return all(len(b) == 1 for b in f.values)


def convolution(f: LinMap, g: LinMap) -> LinMap:
    f._same(g)
    hopf, t = f.hopf, f.target
    out = {}
    if not f.values or not g.values:
        return f._new({})
    for b in hopf.basis_up_to(f.degree):
        acc = None
        for (left, right), c in hopf.coproduct(b).items():
            fv = f.values.get(left)
            if fv is None:
                continue
            gv = g.values.get(right)
            if gv is None:
                continue
            term = t.mul(fv, gv)
            if c != 1:
                term = t.scale(c, term)
            acc = term if acc is None else t.add(acc, term)
        if acc is not None:
            out[b] = acc
    return f._new(out)


def _unit_value(f: LinMap):
    return f(UNIT)


def conv_inverse(f: LinMap) -> LinMap:
    t = f.target
    if not t.equal(_unit_value(f), t.one()):
        raise HopfError("convolution inverse needs f(1) = 1")
    e = counit_map(f.hopf, t, f.degree)
    u = f - e
    out, power = e, e
    for k in range(1, f.degree + 1):
        power = convolution(power, u)
        out = out + (power if k % 2 == 0 else -power)
    return out


def conv_exp(f: LinMap) -> LinMap:
    if not f.target.is_zero(_unit_value(f)):
        raise HopfError("convolution exponential needs f(1) = 0")
    e = counit_map(f.hopf, f.target, f.degree)
    out, power = e, e
    for k in range(1, f.degree + 1):
        power = convolution(power, f).scale(Fraction(1, k))
        out = out + power
    return out


def conv_log(f: LinMap) -> LinMap:
    t = f.target
    if not t.equal(_unit_value(f), t.one()):
        raise HopfError("convolution logarithm needs f(1) = 1")
    e = counit_map(f.hopf, t, f.degree)
    u = f - e
    out = zero_map(f.hopf, t, f.degree)
    power = e
    for k in range(1, f.degree + 1):
        power = convolution(power, u)
        out = out + power.scale(Fraction((-1) ** (k - 1), k))
    return out


def antipode_map(f: LinMap) -> LinMap:
    """f o S."""
    return f.precompose(lambda b: f.hopf.antipode_basis(b))


def dynkin(f: LinMap) -> LinMap:
    """(f o S) * (f o Y); for a character this is f^{*-1} * (f o Y)."""
    t = f.target
    if not t.equal(_unit_value(f), t.one()):
        raise HopfError("the Dynkin map needs f(1) = 1")
    return convolution(antipode_map(f), f.graded())


def precompose_dynkin(f: LinMap) -> LinMap:
    """f o D_H with D_H = S * Y the Dynkin endomorphism of H."""
    hopf = f.hopf
    return f.precompose(lambda b: dynkin_endomorphism(hopf, {b: Fraction(1)}))


def gamma_reconstruct(h: LinMap) -> LinMap:
    """Sum over compositions I of omega(I) h_{i_1} * ... * h_{i_k}.

    Uses V_0 = e and V_m = (1/m) sum_j V_{m-j} * h_j, which regroups the
    composition sum by its last part.
    """
    t = h.target
    if not t.is_zero(_unit_value(h)):
        raise HopfError("gamma_reconstruct needs h(1) = 0")
    comps = [h.component(n) for n in range(h.degree + 1)]
    V = [counit_map(h.hopf, t, h.degree)]
    total = V[0]
    for m in range(1, h.degree + 1):
        acc = zero_map(h.hopf, t, h.degree)
        for j in range(1, m + 1):
            if comps[j].is_zero() or V[m - j].is_zero():
                continue
            acc = acc + convolution(V[m - j], comps[j])
        V.append(acc.component(m).scale(Fraction(1, m)))
        total = total + V[m]
    return total


def gamma_reconstruct_direct(h: LinMap) -> LinMap:
    """Same sum enumerated composition by composition (cross-check for small degree)."""
    from .foundations import omega_composition

    t = h.target
    comps = [h.component(n) for n in range(h.degree + 1)]
    total = counit_map(h.hopf, t, h.degree)
    for n in range(1, h.degree + 1):
        for comp in enumerate_compositions(n):
            term = comps[comp[0]]
            for i in comp[1:]:
                term = convolution(term, comps[i])
            total = total + term.scale(omega_composition(comp))
    return total
