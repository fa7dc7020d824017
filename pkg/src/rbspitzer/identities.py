"""Checkers for the Spitzer-type identities.

Every checker evaluates both sides exactly in a given model and returns an
:class:`IdentityReport` holding the residual (LHS - RHS), term counts and a
zero flag.  In the sequence model with distinct generator alphabets a zero
residual certifies the identity as a formal consequence of the Rota-Baxter
relation up to the truncation length.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

from .foundations import (
    bar_sets,
    cycle_type,
    enumerate_compositions,
    enumerate_ordered_set_partitions,
    enumerate_permutations,
    enumerate_set_partitions,
    omega_composition,
    ordered_bell_number,
    render_rational,
)
from .hopf import NCSFHopf, antipode, dynkin_endomorphism
from .rbcore import (
    DoubleAlgebra,
    RBAlgebra,
    RBElement,
    bracket_left,
    bracket_right,
    double_product,
    iterated_left_word,
    iterated_right_word,
    left_lambdas,
    left_word_powers,
    pre_lie_left,
    pre_lie_right,
    tilde_R,
)
from .rbmodels import SequenceModel, qsym_component_check, rx_bracket


class IdentityError(ValueError):
    pass


@dataclass
class IdentityReport:
    name: str
    label: str
    params: dict
    lhs_terms: int
    rhs_terms: int
    residual_zero: bool
    residual: object = field(default=None, repr=False)
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "identity": self.name,
            "label": self.label,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "residual_zero": self.residual_zero,
        }
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        if include_timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out


def _jsonable(v):
    if isinstance(v, Fraction):
        return render_rational(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _report(name, label, algebra, n, lhs, rhs, lhs_terms, rhs_terms, start, **details) -> IdentityReport:
    residual = lhs - rhs
    return IdentityReport(
        name=name,
        label=label,
        params={"n": n, "model": algebra.name, "weight": algebra.weight},
        lhs_terms=lhs_terms,
        rhs_terms=rhs_terms,
        residual_zero=residual.is_zero(),
        residual=residual,
        elapsed=time.perf_counter() - start,
        details=details,
    )


def _same_algebra(xs: Sequence[RBElement]) -> RBAlgebra:
    if not xs:
        raise IdentityError("need at least one argument")
    alg = xs[0].algebra
    for x in xs[1:]:
        x._same(xs[0])
    return alg


# --- parallel permutation sums ---------------------------------------------------


def _sum_payloads(algebra: RBAlgebra, fn: Callable, xs_payloads, items) -> object:
    xs = [RBElement(algebra, p) for p in xs_payloads]
    acc = algebra.zero_element()
    for item in items:
        acc = acc + fn(xs, item)
    return acc.value


def permutation_sum(fn: Callable, xs: Sequence[RBElement], items: Sequence, workers: int = 1) -> RBElement:
    """sum_{item} fn(xs, item), optionally split across processes.

    ``fn`` must be a module-level function.  Chunks are contiguous and summed
    in order, and addition is exact, so the result does not depend on the
    worker count.
    """
    alg = _same_algebra(xs)
    items = list(items)
    if workers <= 1 or len(items) < 2 * workers:
        return RBElement(alg, _sum_payloads(alg, fn, [x.value for x in xs], items))
    size = math.ceil(len(items) / workers)
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    job = partial(_sum_payloads, alg, fn, [x.value for x in xs])
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(job, chunks))
    acc = alg.zero()
    for p in parts:
        acc = alg.add(acc, p)
    return RBElement(alg, acc)


def _nested_left_term(xs, sigma):
    out = xs[sigma[0] - 1].R()
    for i in sigma[1:]:
        out = (out * xs[i - 1]).R()
    return out


def _nested_right_term(xs, sigma):
    out = xs[sigma[-1] - 1].R()
    for i in reversed(sigma[:-1]):
        out = (xs[i - 1] * out).R()
    return out


def _r_t_sigma(xs, sigma):
    return t_sigma(xs, sigma).R()


def _r_u_sigma(xs, sigma):
    return u_sigma(xs, sigma).R()


def nested_left_sum(xs: Sequence[RBElement], workers: int = 1) -> RBElement:
    """sum_sigma R(R(... R(x_s1) x_s2 ...) x_sn)."""
    n = len(xs)
    _same_algebra(xs)
    if workers > 1:
        return permutation_sum(_nested_left_term, xs, enumerate_permutations(n), workers)
    # depth-first over permutation prefixes shares the common inner brackets
    alg = xs[0].algebra
    total = alg.zero_element()

    def dfs(value, remaining):
        nonlocal total
        if not remaining:
            total = total + value
            return
        for j in remaining:
            nxt = (value * xs[j]).R() if value is not None else xs[j].R()
            dfs(nxt, [k for k in remaining if k != j])

    dfs(None, list(range(n)))
    return total


def nested_right_sum(xs: Sequence[RBElement], workers: int = 1) -> RBElement:
    """sum_sigma R(x_s1 R(x_s2 ... R(x_sn)))."""
    n = len(xs)
    _same_algebra(xs)
    if workers > 1:
        return permutation_sum(_nested_right_term, xs, enumerate_permutations(n), workers)
    alg = xs[0].algebra
    total = alg.zero_element()

    def dfs(value, remaining):
        nonlocal total
        if not remaining:
            total = total + value
            return
        for j in remaining:
            nxt = (xs[j] * value).R() if value is not None else xs[j].R()
            dfs(nxt, [k for k in remaining if k != j])

    dfs(None, list(range(n)))
    return total


# --- noncommutative Bohnenblust-Spitzer ---------------------------------------------


def block_lambda(xs: Sequence[RBElement], block: Sequence[int]) -> RBElement:
    """sum over orderings of the block of R(l^(m)(x_j1, ..., x_jm)); 1-based indices."""
    alg = xs[0].algebra
    acc = alg.zero_element()
    for order in itertools.permutations(block):
        acc = acc + iterated_left_word([xs[j - 1] for j in order]).R()
    return acc


def omega_partition(blocks: Sequence[Sequence[int]]) -> Fraction:
    return omega_composition([len(b) for b in blocks])


def ncbs_rhs(xs: Sequence[RBElement], method: str = "subsets") -> tuple[RBElement, int]:
    """sum over ordered set partitions of omega(pi) L(pi_1) ... L(pi_k).

    Returns (value, number of ordered partitions).  ``method="direct"``
    enumerates the partitions.  The default groups them by their last block:
    omega(pi) = omega(pi without its last block) / |S|, so
    V(S) = (1/|S|) sum_{B subset S} V(S - B) L(B) with V(empty) = 1 gives the
    same sum with 3^n block products instead of one product per partition.
    """
    alg = _same_algebra(xs)
    n = len(xs)
    cache: dict = {}

    def lam(block):
        key = tuple(sorted(block))
        if key not in cache:
            cache[key] = block_lambda(xs, key)
        return cache[key]

    count = ordered_bell_number(n)
    if method == "direct":
        total = alg.zero_element()
        for pi in enumerate_ordered_set_partitions(n):
            term = lam(pi[0])
            for block in pi[1:]:
                term = term * lam(block)
            total = total + omega_partition(pi) * term
        return total, count
    if method != "subsets":
        raise IdentityError(f"unknown method {method!r}")
    V: dict = {(): None}  # None stands for the unit, so non-unital models work
    for size in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), size):
            acc = alg.zero_element()
            for bsize in range(1, size + 1):
                for B in itertools.combinations(S, bsize):
                    rest = tuple(j for j in S if j not in B)
                    head = V[rest]
                    acc = acc + (lam(B) if head is None else head * lam(B))
            V[S] = Fraction(1, size) * acc
    return V[tuple(range(1, n + 1))], count


def check_ncbs(xs: Sequence[RBElement], workers: int = 1, method: str = "subsets") -> IdentityReport:
    start = time.perf_counter()
    alg = _same_algebra(xs)
    lhs = nested_left_sum(xs, workers)
    rhs, count = ncbs_rhs(xs, method)
    return _report("ncbs", "noncommutative Bohnenblust-Spitzer identity", alg, len(xs),
                   lhs, rhs, math.factorial(len(xs)), count, start)


# --- key identity -------------------------------------------------------------


def key_identity_rhs(a: RBElement, n: int) -> RBElement:
    """sum over compositions I of n of omega(I) L^(i_1)(a) ... L^(i_k)(a).

    Evaluated as V_n with V_0 = 1 and V_m = (1/m) sum_j V_{m-j} L^(j): grouping
    compositions by their last part peels the final factor 1/m off omega(I).
    """
    lams = left_lambdas(a, n)
    V = [a.algebra.unit()]
    for m in range(1, n + 1):
        acc = a.algebra.zero_element()
        for j in range(1, m + 1):
            acc = acc + V[m - j] * lams[j - 1]
        V.append(Fraction(1, m) * acc)
    return V[n]


def key_identity_rhs_direct(a: RBElement, n: int) -> RBElement:
    """Composition-by-composition enumeration of the same sum (small n)."""
    lams = left_lambdas(a, n)
    acc = a.algebra.zero_element()
    for comp in enumerate_compositions(n):
        term = lams[comp[0] - 1]
        for i in comp[1:]:
            term = term * lams[i - 1]
        acc = acc + omega_composition(comp) * term
    return acc


def check_key_identity(n: int, algebra: RBAlgebra, a: RBElement | None = None) -> IdentityReport:
    """(Ra)^[n] against the composition sum; ``a`` defaults to the generator sequence."""
    start = time.perf_counter()
    if a is None:
        if not hasattr(algebra, "generator_sequence"):
            raise IdentityError("pass an element outside the sequence model")
        a = generator_of(algebra, 1)
    if n < 1:
        raise IdentityError("n must be positive")
    lhs = bracket_left(a, n)
    rhs = key_identity_rhs(a, n)
    return _report("key", "left bracket as composition sum of pre-Lie words", algebra, n,
                   lhs, rhs, 1, 2 ** (n - 1), start)


# --- T_sigma / U_sigma ----------------------------------------------------------


def _packets(sigma: Sequence[int], bars: frozenset) -> list[list[int]]:
    packets, cur = [], []
    for pos, v in enumerate(sigma, start=1):
        cur.append(v)
        if pos in bars:
            packets.append(cur)
            cur = []
    packets.append(cur)
    return packets


def t_sigma(xs: Sequence[RBElement], sigma: Sequence[int]) -> RBElement:
    """Packets cut after E_sigma, left-folded |> inside, joined by the double product."""
    if len(xs) != len(sigma):
        raise IdentityError("permutation size does not match the argument count")
    E, _ = bar_sets(sigma)
    out = None
    for packet in _packets(sigma, E):
        word = iterated_left_word([xs[i - 1] for i in packet])
        out = word if out is None else double_product(out, word)
    return out


def u_sigma(xs: Sequence[RBElement], sigma: Sequence[int]) -> RBElement:
    """Packets cut after F_sigma, right-folded <| inside, joined by the double product."""
    if len(xs) != len(sigma):
        raise IdentityError("permutation size does not match the argument count")
    _, F = bar_sets(sigma)
    out = None
    for packet in _packets(sigma, F):
        word = iterated_right_word([xs[i - 1] for i in packet])
        out = word if out is None else double_product(out, word)
    return out


def check_new_identity(xs: Sequence[RBElement], variant: str = "left", workers: int = 1) -> IdentityReport:
    start = time.perf_counter()
    alg = _same_algebra(xs)
    n = len(xs)
    perms = list(enumerate_permutations(n))
    if variant == "left":
        lhs = nested_left_sum(xs, workers)
        rhs = permutation_sum(_r_t_sigma, xs, perms, workers)
        label = "nested left sum as sum of R(T_sigma)"
    elif variant == "right":
        lhs = nested_right_sum(xs, workers)
        rhs = permutation_sum(_r_u_sigma, xs, perms, workers)
        label = "nested right sum as sum of R(U_sigma)"
    else:
        raise IdentityError(f"unknown variant {variant!r}")
    return _report(f"tu-{variant}", label, alg, n, lhs, rhs, len(perms), len(perms), start)


# --- commutative identities -------------------------------------------------------


def _require_commutative(alg: RBAlgebra):
    if not alg.commutative:
        raise IdentityError(f"{alg.name} is not commutative")


def waring_rhs(a: RBElement, n: int) -> tuple[RBElement, int]:
    """sum_sigma (-theta)^(n - #cycles) prod_cycles R(a^|cycle|)."""
    alg = a.algebra
    theta = alg.weight
    powers = [alg.unit()]
    for _ in range(n):
        powers.append(powers[-1] * a)
    r_pow = [None] + [p.R() for p in powers[1:]]
    by_type: dict = {}
    count = 0
    for sigma in enumerate_permutations(n):
        count += 1
        key = cycle_type(sigma)
        by_type[key] = by_type.get(key, 0) + 1
    total = alg.zero_element()
    for (lengths, k), mult in sorted(by_type.items()):
        term = alg.unit()
        for length in lengths:
            term = term * r_pow[length]
        total = total + (mult * (-theta) ** (n - k)) * term
    return total, count


def check_waring(a: RBElement, n: int) -> IdentityReport:
    start = time.perf_counter()
    alg = a.algebra
    _require_commutative(alg)
    lhs = math.factorial(n) * bracket_left(a, n)
    rhs, count = waring_rhs(a, n)
    return _report("waring", "cycle expansion of n!(Ra)^[n]", alg, n, lhs, rhs, 1, count, start)


def commutative_bs_rhs(xs: Sequence[RBElement]) -> tuple[RBElement, int]:
    """sum over set partitions of (-theta)^(n-|pi|) prod (m_i - 1)! R(prod x_j)."""
    alg = _same_algebra(xs)
    theta = alg.weight
    n = len(xs)
    total = alg.zero_element()
    count = 0
    for pi in enumerate_set_partitions(n):
        count += 1
        term = alg.unit()
        coef = (-theta) ** (n - len(pi))
        for block in pi:
            coef *= math.factorial(len(block) - 1)
            prod = xs[block[0] - 1]
            for j in block[1:]:
                prod = prod * xs[j - 1]
            term = term * prod.R()
        total = total + coef * term
    return total, count


def check_commutative_bs(xs: Sequence[RBElement], workers: int = 1) -> IdentityReport:
    start = time.perf_counter()
    alg = _same_algebra(xs)
    _require_commutative(alg)
    lhs = nested_left_sum(xs, workers)
    rhs, count = commutative_bs_rhs(xs)
    return _report("bs", "commutative Bohnenblust-Spitzer identity", alg, len(xs), lhs, rhs,
                   math.factorial(len(xs)), count, start)


# --- sequence-model correspondences ----------------------------------------------


def check_ncqsym(n: int, k: int) -> IdentityReport:
    """Components 1..k of (RX)^[n] and (RX)^{n} against truncated NCQSym monomials."""
    start = time.perf_counter()
    model = SequenceModel(length=k)
    left = qsym_component_check(model, n, "left")
    right = qsym_component_check(model, n, "right")
    ok = left and right
    return IdentityReport(
        name="ncqsym",
        label="bracket components as quasi-symmetric monomials",
        params={"n": n, "model": "seq", "weight": model.weight, "components": k},
        lhs_terms=2 * k,
        rhs_terms=2 * k,
        residual_zero=ok,
        elapsed=time.perf_counter() - start,
        details={"left": left, "right": right},
    )


def _ncsf_evaluate(x: dict, images: dict, algebra: RBAlgebra) -> RBElement:
    """Algebra map from NCSF: S_k -> images[k], composition words -> products."""
    acc = algebra.zero_element()
    for word, c in x.items():
        term = images[word[0]]
        for k in word[1:]:
            term = term * images[k]
        acc = acc + c * term
    return acc


def _ncsf_images(model: SequenceModel, n: int, double: bool):
    X = model.generator_sequence(1)
    if not double:
        return model, X, {k: bracket_left(X, k) for k in range(1, n + 1)}
    dalg = DoubleAlgebra(model)
    imgs = {}
    for k in range(1, n + 1):
        w = bracket_left(X, k - 1) * X
        imgs[k] = RBElement(dalg, w.value)
    return dalg, X, imgs


def check_antipode_spitzer(n: int, length: int | None = None) -> IdentityReport:
    """Antipode of S_n under S_k -> (RX)^[k], and its double-product analogue.

    Ordinary product: S(S_n) -> -R(X (R~X)^{n-1}).
    Double product with generators w_k = (RX)^[k-1] X: S(w_n) -> -X (R~X)^{n-1}.
    """
    start = time.perf_counter()
    model = SequenceModel(length=length or n + 3)
    H = NCSFHopf()
    s_n = antipode(H, {(n,): Fraction(1)})
    X = model.generator_sequence(1)
    tilde_bracket = bracket_right(X, n - 1, tilde_R)

    alg, _, imgs = _ncsf_images(model, n, double=False)
    lhs = _ncsf_evaluate(s_n, imgs, alg)
    rhs = -(X * tilde_bracket).R()

    dalg, _, dimgs = _ncsf_images(model, n, double=True)
    dlhs = _ncsf_evaluate(s_n, dimgs, dalg)
    drhs = RBElement(dalg, (-(X * tilde_bracket)).value)
    double_ok = (dlhs - drhs).is_zero()
    report = _report("antipode", "antipode of divided powers under the bracket map", model, n,
                     lhs, rhs, len(s_n), 1, start, double_product_variant=double_ok)
    report.residual_zero = report.residual_zero and double_ok
    return report


def check_dynkin_generators(n: int, length: int | None = None) -> IdentityReport:
    """Dynkin operator on S_n: D(S_n) -> L^(n)(X) and, with the double product, l^(n)(X)."""
    start = time.perf_counter()
    model = SequenceModel(length=length or n + 3)
    H = NCSFHopf()
    d_n = dynkin_endomorphism(H, {(n,): Fraction(1)})
    X = model.generator_sequence(1)
    words = left_word_powers(X, n)

    alg, _, imgs = _ncsf_images(model, n, double=False)
    lhs = _ncsf_evaluate(d_n, imgs, alg)
    rhs = words[n - 1].R()

    dalg, _, dimgs = _ncsf_images(model, n, double=True)
    dlhs = _ncsf_evaluate(d_n, dimgs, dalg)
    drhs = RBElement(dalg, words[n - 1].value)
    double_ok = (dlhs - drhs).is_zero()
    report = _report("dynkin", "Dynkin operator on divided powers under the bracket map", model, n,
                     lhs, rhs, len(d_n), 1, start, double_product_variant=double_ok)
    report.residual_zero = report.residual_zero and double_ok
    return report


# --- argument helpers -------------------------------------------------------------


def distinct_arguments(algebra: RBAlgebra, n: int, rng) -> list[RBElement]:
    """n arguments for multilinear checks.

    In the sequence model: c_i X^(pi(i)) with independent generator alphabets,
    random nonzero rationals c_i and a random permutation pi; elsewhere random
    elements.
    """
    if hasattr(algebra, "generator_sequence"):
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        out = []
        for i in range(n):
            c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
            out.append(c * generator_of(algebra, perm[i]))
        return out
    return [algebra.random_element(rng) for _ in range(n)]


def default_element(algebra: RBAlgebra, rng) -> RBElement:
    if hasattr(algebra, "generator_sequence"):
        return generator_of(algebra, 1)
    return algebra.random_element(rng)


def generator_of(algebra: RBAlgebra, alphabet: int) -> RBElement:
    """Generator sequence re-tied to ``algebra`` (which may wrap the sequence model)."""
    return RBElement(algebra, algebra.generator_sequence(alphabet).value)


def pre_lie_left_check(x, y, z) -> bool:
    """Left pre-Lie associator symmetric in its first two arguments."""
    def assoc(a, b, c):
        return pre_lie_left(pre_lie_left(a, b), c) - pre_lie_left(a, pre_lie_left(b, c))

    return (assoc(x, y, z) - assoc(y, x, z)).is_zero()


def pre_lie_right_check(x, y, z) -> bool:
    """Right pre-Lie associator symmetric in its last two arguments."""
    def assoc(a, b, c):
        return pre_lie_right(pre_lie_right(a, b), c) - pre_lie_right(a, pre_lie_right(b, c))

    return (assoc(x, y, z) - assoc(x, z, y)).is_zero()
