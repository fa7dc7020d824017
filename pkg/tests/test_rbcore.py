import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbspitzer.foundations import LaurentSeries
from rbspitzer.rbcore import (
    DoubleAlgebra,
    Gen,
    ModelMismatchError,
    Prod,
    RApp,
    TermSyntaxError,
    bracket_left,
    check_rb,
    commutator,
    double_product,
    element_sum,
    eval_normal_form,
    eval_term,
    is_elementary,
    iterated_left_word,
    left_lambdas,
    left_word_powers,
    normal_form,
    parse_term,
    pre_lie_left,
    pre_lie_right,
    random_term,
    rescale,
    term_generators,
    tilde_R,
)
from rbspitzer.rbmodels import LaurentMS, MatrixPoly, PolyInt, SequenceModel, TabulatedFn

seeds = st.integers(0, 2**32)

MODELS = {
    "seq": lambda: SequenceModel(length=5),
    "laurent": LaurentMS,
    "polyint": PolyInt,
    "matrix": MatrixPoly,
    "riemann": TabulatedFn,
    "riemann-strict": lambda: TabulatedFn(step=Fraction(1, 3), strict=True),
}


LMS = LaurentMS()


def laurent(coeffs):
    return LMS.series(coeffs)


@pytest.fixture(scope="module", params=sorted(MODELS))
def model(request):
    return MODELS[request.param]()


class TestRelation:
    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_rb_each_model(self, model, seed):
        rng = random.Random(seed)
        x, y = model.random_element(rng), model.random_element(rng)
        assert check_rb(x, y).is_zero()

    @settings(max_examples=10, deadline=None)
    @given(seeds, st.sampled_from([Fraction(-1), Fraction(2), Fraction(-1, 2), Fraction(0)]))
    def test_rb_rescaled(self, model, seed, mu):
        alg = rescale(model, mu)
        assert alg.weight == mu * model.weight
        rng = random.Random(seed)
        assert check_rb(alg.random_element(rng), alg.random_element(rng)).is_zero()

    def test_rescale_by_one_is_same_operator(self):
        base = SequenceModel(length=4)
        alg = rescale(base, 1)
        rng = random.Random(3)
        x = alg.random_element(rng)
        assert x.R().value == base.apply_R(x.value)

    def test_laurent_pole_example(self):
        x = laurent({-1: 1})
        assert check_rb(x, x).is_zero()
        assert x.R() * x.R() == laurent({-2: 1})

    def test_zero(self, model):
        z = model.zero_element()
        assert check_rb(z, model.random_element(random.Random(0))).is_zero()


class TestTilde:
    def test_laurent_example(self):
        x = laurent({-1: 1, 0: 1})
        assert tilde_R(x) == laurent({0: 1})

    def test_weight_zero_is_minus_R(self):
        alg = PolyInt()
        x = alg.poly([1, 2])
        assert tilde_R(x) == -x.R()

    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_tilde_is_rb(self, model, seed):
        rng = random.Random(seed)
        x, y = model.random_element(rng), model.random_element(rng)
        th = model.weight
        lhs = tilde_R(x) * tilde_R(y)
        rhs = tilde_R(tilde_R(x) * y + x * tilde_R(y) + th * (x * y))
        assert lhs == rhs


class TestDoubleProduct:
    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_R_is_homomorphism(self, model, seed):
        rng = random.Random(seed)
        x, y = model.random_element(rng), model.random_element(rng)
        assert double_product(x, y).R() == x.R() * y.R()
        assert tilde_R(double_product(x, y)) == -(tilde_R(x) * tilde_R(y))

    def test_laurent_example(self):
        x = laurent({-1: 1})
        assert double_product(x, x).R() == laurent({-2: 1})

    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_double_algebra_associative_and_rb(self, model, seed):
        rng = random.Random(seed)
        d = DoubleAlgebra(model)
        x, y, z = (d.random_element(rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert check_rb(x, y).is_zero()


class TestPreLie:
    def test_commutative_collapse(self):
        alg = LaurentMS()
        rng = random.Random(1)
        a, b = alg.random_element(rng), alg.random_element(rng)
        assert pre_lie_left(a, b) == -alg.weight * (b * a)

    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_associator_symmetry(self, model, seed):
        rng = random.Random(seed)
        a, b, c = (model.random_element(rng) for _ in range(3))

        def assoc(op, x, y, z):
            return op(op(x, y), z) - op(x, op(y, z))

        # left pre-Lie: symmetric in the first two slots
        assert assoc(pre_lie_left, a, b, c) == assoc(pre_lie_left, b, a, c)
        # right pre-Lie: symmetric in the last two slots
        assert assoc(pre_lie_right, a, b, c) == assoc(pre_lie_right, a, c, b)

    @settings(max_examples=10, deadline=None)
    @given(seeds)
    def test_bracket_identity(self, model, seed):
        rng = random.Random(seed)
        a, b = model.random_element(rng), model.random_element(rng)
        assert pre_lie_left(a, b) - pre_lie_left(b, a) == double_product(a, b) - double_product(b, a)

    def test_words(self):
        alg = MatrixPoly()
        rng = random.Random(2)
        a = alg.random_element(rng)
        words = left_word_powers(a, 4)
        assert words[0] == a
        assert words[2] == iterated_left_word([a, a, a])
        assert [w.R() for w in words] == left_lambdas(a, 4)

    def test_commutative_lambda_closed_form(self):
        alg = LMS
        a = laurent({-1: 2, 0: 1})
        th = alg.weight
        for n, lam in enumerate(left_lambdas(a, 5), start=1):
            power = alg.unit()
            for _ in range(n):
                power = power * a
            assert lam == (-th) ** (n - 1) * power.R()

    def test_weight_zero_lambda_recursion(self):
        alg = MatrixPoly()
        a = alg.random_element(random.Random(5))
        lams = left_lambdas(a, 4)
        for n in range(1, 4):
            assert lams[n] == -commutator(a, lams[n - 1]).R()


class TestBrackets:
    def test_bracket_zero_is_unit(self):
        alg = SequenceModel(length=4)
        x = alg.random_element(random.Random(0))
        assert bracket_left(x, 0) == alg.unit()
        assert bracket_left(x, 1) == x.R()
        assert bracket_left(x, 2) == (x.R() * x).R()


class TestTerms:
    def test_parse_render_roundtrip(self):
        for text in ["R(Z1)*R(Z2)", "R(R(Z1)*Z2) + 1/2*R(Z1*Z2)", "(Z1 |> Z2)", "R((Z1 <*> Z2))"]:
            t = parse_term(text)
            assert parse_term(t.render()) == t

    def test_parse_errors(self):
        for bad in ["R(Z1", "Z", "Z1 +", "Q(Z1)"]:
            with pytest.raises(TermSyntaxError):
                parse_term(bad)

    def test_rb_rewrite_single_step(self):
        nf = normal_form(parse_term("R(Z1)*R(Z1)"), weight=Fraction(1, 3))
        expected = normal_form(parse_term("R(Z1*R(Z1)) + R(R(Z1)*Z1) + 1/3*R(Z1*Z1)"), weight=Fraction(1, 3))
        assert nf == expected
        assert len(nf) == 3

    def test_generator_is_elementary(self):
        assert normal_form(Gen(1)) == {(1,): 1}
        assert is_elementary((1,))
        assert not is_elementary((("R", (1,)), ("R", (1,))))

    @pytest.mark.parametrize("name", ["seq", "laurent", "matrix", "riemann"])
    def test_cube_evaluates_equal(self, name):
        alg = MODELS[name]()
        rng = random.Random(11)
        t = parse_term("R(Z1)*R(Z1)*R(Z1)")
        nf = normal_form(t, alg.weight)
        assert all(is_elementary(m) for m in nf)
        env = {1: alg.random_element(rng)}
        assert eval_normal_form(nf, alg, env) == eval_term(t, alg, env)

    def test_eval_basics(self):
        alg = LMS
        a = laurent({-1: 1, 0: 1})
        assert eval_term(Gen(1), alg, {1: a}) == a
        assert eval_term(RApp(Gen(1)), alg, {1: a}) == laurent({-1: 1})
        with pytest.raises(ValueError):
            eval_term(Gen(2), alg, {1: a})

    def test_mismatch(self):
        a, b = LaurentMS(), LaurentMS()
        with pytest.raises(ModelMismatchError):
            a.unit() + b.unit()

    def test_term_generators(self):
        assert term_generators(Prod((Gen(1), RApp(Gen(3))))) == {1, 3}

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.sampled_from(["seq", "laurent", "matrix", "riemann-strict"]))
    def test_normal_form_invariance(self, seed, name):
        rng = random.Random(seed)
        alg = MODELS[name]()
        t = random_term(rng, 3, 4)
        nf = normal_form(t, alg.weight)
        assert all(is_elementary(m) for m in nf)
        env = {i: alg.random_element(rng) for i in (1, 2, 3)}
        assert eval_normal_form(nf, alg, env) == eval_term(t, alg, env)

    def test_element_sum(self):
        alg = PolyInt()
        xs = [alg.poly([1]), alg.poly([0, 1]), alg.poly([2])]
        assert element_sum(xs, alg) == alg.poly([3, 1])
        assert element_sum([], alg).is_zero()


def test_laurent_series_payload():
    x = laurent({-1: 1, 0: 2, 1: 1})
    assert x.R().value == LaurentSeries({-1: 1})
