import math
import random
from fractions import Fraction

import pytest

from rbspitzer.foundations import enumerate_permutations
from rbspitzer.identities import (
    IdentityError,
    check_antipode_spitzer,
    check_commutative_bs,
    check_dynkin_generators,
    check_key_identity,
    check_ncbs,
    check_ncqsym,
    check_new_identity,
    check_waring,
    distinct_arguments,
    generator_of,
    key_identity_rhs,
    key_identity_rhs_direct,
    ncbs_rhs,
    nested_left_sum,
    nested_right_sum,
    pre_lie_left_check,
    pre_lie_right_check,
    t_sigma,
    u_sigma,
    waring_rhs,
)
from rbspitzer.rbcore import (
    bracket_left,
    double_product,
    eval_term,
    iterated_left_word,
    iterated_right_word,
    left_lambdas,
    normal_form,
    parse_term,
    pre_lie_left,
    pre_lie_right,
    rescale,
)
from rbspitzer.rbmodels import LaurentMS, MatrixPoly, PolyInt, SequenceModel

LMS = LaurentMS()
SEQ = SequenceModel(length=6)
MAT = MatrixPoly()

NESTED_THREE = " + ".join(
    f"R(R(R(Z{a})*Z{b})*Z{c})" for a, b, c in enumerate_permutations(3)
)
# the displayed three-argument instance, written out term by term
TU_LEFT_THREE = (
    "R(Z1)*R(Z2)*R(Z3) + R(Z1)*R((Z3 |> Z2)) + R(Z2)*R((Z3 |> Z1))"
    " + R((Z2 |> Z1))*R(Z3) + R(((Z3 |> Z2) |> Z1)) + R(((Z3 |> Z1) |> Z2))"
)


def args(alg, n, seed=0):
    return distinct_arguments(alg, n, random.Random(seed))


class TestNested:
    def test_small(self):
        xs = args(MAT, 2)
        assert nested_left_sum(xs[:1]) == xs[0].R()
        assert nested_left_sum(xs) == (xs[0].R() * xs[1]).R() + (xs[1].R() * xs[0]).R()
        assert nested_right_sum(xs) == (xs[0] * xs[1].R()).R() + (xs[1] * xs[0].R()).R()

    def test_workers_agree(self):
        xs = args(SEQ, 4, seed=3)
        assert nested_left_sum(xs, workers=1) == nested_left_sum(xs, workers=3)


class TestNCBS:
    def test_n2_formula(self):
        x1, x2 = args(MAT, 2, seed=5)
        rhs, count = ncbs_rhs([x1, x2])
        half = Fraction(1, 2)
        expected = half * (x1.R() * x2.R() + x2.R() * x1.R()) + half * (
            pre_lie_left(x1, x2) + pre_lie_left(x2, x1)
        ).R()
        assert count == 3
        assert rhs == expected

    @pytest.mark.parametrize("alg", [SEQ, MAT, LMS], ids=["seq", "matrix", "laurent"])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_identity(self, alg, n):
        assert check_ncbs(args(alg, n, seed=n)).residual_zero

    def test_subsets_match_direct(self):
        xs = args(MAT, 4, seed=2)
        assert ncbs_rhs(xs, "subsets")[0] == ncbs_rhs(xs, "direct")[0]

    def test_equal_arguments_collapse(self):
        a = MAT.random_element(random.Random(6))
        for n in range(1, 5):
            rhs, _ = ncbs_rhs([a] * n)
            assert rhs == math.factorial(n) * key_identity_rhs(a, n)
            assert rhs == math.factorial(n) * bracket_left(a, n)

    def test_bad_method(self):
        with pytest.raises(IdentityError):
            ncbs_rhs(args(MAT, 2), method="bogus")


class TestKeyIdentity:
    def test_n2(self):
        a = MAT.random_element(random.Random(1))
        half = Fraction(1, 2)
        assert (a.R() * a).R() == half * a.R() * a.R() + half * pre_lie_left(a, a).R()

    @pytest.mark.parametrize("n", range(1, 6))
    def test_seq(self, n):
        assert check_key_identity(n, SequenceModel(length=n + 2)).residual_zero

    @pytest.mark.parametrize("mu", [Fraction(-1), Fraction(2), Fraction(-1, 2)])
    def test_rescaled(self, mu):
        alg = rescale(SequenceModel(length=6), mu)
        assert check_key_identity(4, alg).residual_zero

    def test_dp_matches_direct(self):
        a = MAT.random_element(random.Random(9))
        for n in range(1, 6):
            assert key_identity_rhs(a, n) == key_identity_rhs_direct(a, n)

    def test_generator_of_rescaled(self):
        alg = rescale(SEQ, 2)
        assert generator_of(alg, 1).algebra is alg


class TestNewIdentity:
    def test_t_sigma_example(self):
        alg = SequenceModel(length=4)
        a = args(alg, 7, seed=4)
        A = {i + 1: x for i, x in enumerate(a)}
        sigma = (3, 2, 6, 1, 4, 5, 7)
        expected = double_product(
            double_product(pre_lie_left(A[3], A[2]), iterated_left_word([A[6], A[1], A[4], A[5]])), A[7]
        )
        assert t_sigma(a, sigma) == expected

    def test_u_sigma_example(self):
        alg = SequenceModel(length=4)
        a = args(alg, 7, seed=4)
        A = {i + 1: x for i, x in enumerate(a)}
        sigma = (3, 2, 6, 1, 4, 5, 7)
        inner = pre_lie_right(A[3], pre_lie_right(A[2], pre_lie_right(A[6], A[1])))
        assert inner == iterated_right_word([A[3], A[2], A[6], A[1]])
        expected = double_product(double_product(double_product(inner, A[4]), A[5]), A[7])
        assert u_sigma(a, sigma) == expected

    def test_identity_permutation(self):
        a = args(MAT, 4, seed=1)
        expected = a[0]
        for x in a[1:]:
            expected = double_product(expected, x)
        assert t_sigma(a, (1, 2, 3, 4)) == expected

    def test_n2_displayed(self):
        x1, x2 = args(SEQ, 2, seed=8)
        lhs = (x1.R() * x2).R() + (x2.R() * x1).R()
        assert lhs == x1.R() * x2.R() + pre_lie_left(x2, x1).R()

    @pytest.mark.parametrize("weight", [Fraction(1), Fraction(-1), Fraction(0), Fraction(2), Fraction(-1, 2)])
    def test_n3_displayed_symbolic(self, weight):
        assert normal_form(parse_term(NESTED_THREE), weight) == normal_form(parse_term(TU_LEFT_THREE), weight)

    def test_n3_displayed_in_model(self):
        xs = args(SEQ, 3, seed=2)
        env = {i + 1: x for i, x in enumerate(xs)}
        assert eval_term(parse_term(NESTED_THREE), SEQ, env) == eval_term(parse_term(TU_LEFT_THREE), SEQ, env)

    @pytest.mark.parametrize("alg", [SEQ, MAT, LMS], ids=["seq", "matrix", "laurent"])
    @pytest.mark.parametrize("variant", ["left", "right"])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_identity(self, alg, variant, n):
        assert check_new_identity(args(alg, n, seed=n), variant).residual_zero

    def test_matrix_weight_zero_n4(self):
        rep = check_new_identity(args(MAT, 4, seed=11), "left")
        assert rep.residual_zero and rep.params["weight"] == 0

    def test_bad_variant(self):
        with pytest.raises(IdentityError):
            check_new_identity(args(MAT, 2), "middle")

    def test_size_mismatch(self):
        with pytest.raises(IdentityError):
            t_sigma(args(MAT, 2), (1, 2, 3))


class TestCommutative:
    def test_waring_n2(self):
        a = LMS.random_element(random.Random(1))
        th = LMS.weight
        assert 2 * bracket_left(a, 2) == a.R() * a.R() - th * (a * a).R()

    @pytest.mark.parametrize("n", range(1, 6))
    def test_waring(self, n):
        assert check_waring(LMS.random_element(random.Random(n)), n).residual_zero

    def test_waring_rhs_counts_permutations(self):
        _, count = waring_rhs(LMS.unit(), 4)
        assert count == 24

    def test_waring_rejects_noncommutative(self):
        with pytest.raises(IdentityError):
            check_waring(MAT.unit(), 2)

    def test_bs_n2(self):
        x1, x2 = args(LMS, 2, seed=3)
        th = LMS.weight
        lhs = (x1.R() * x2).R() + (x2.R() * x1).R()
        assert lhs == x1.R() * x2.R() - th * (x1 * x2).R()

    @pytest.mark.parametrize("n", range(1, 5))
    def test_bs(self, n):
        assert check_commutative_bs(args(LMS, n, seed=n)).residual_zero

    def test_integration_by_parts_degeneration(self):
        alg = PolyInt()
        xs = args(alg, 3, seed=1)
        expected = xs[0].R() * xs[1].R() * xs[2].R()
        assert nested_left_sum(xs) == expected

    def test_equal_arguments(self):
        a = LMS.random_element(random.Random(4))
        for n in range(1, 5):
            assert nested_left_sum([a] * n) == math.factorial(n) * bracket_left(a, n)


class TestSubstitutions:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("k", [4, 6])
    def test_ncqsym(self, n, k):
        assert check_ncqsym(n, k).residual_zero

    @pytest.mark.parametrize("n", range(1, 5))
    def test_antipode(self, n):
        rep = check_antipode_spitzer(n)
        assert rep.residual_zero
        assert rep.details["double_product_variant"]

    @pytest.mark.parametrize("n", range(1, 5))
    def test_dynkin(self, n):
        rep = check_dynkin_generators(n)
        assert rep.residual_zero
        assert rep.details["double_product_variant"]

    def test_dynkin_one_is_identity_on_generator(self):
        X = SEQ.generator_sequence()
        assert left_lambdas(X, 1)[0] == X.R()


class TestPreLieChecks:
    def test_models(self):
        for alg in (SEQ, MAT, LMS):
            x, y, z = args(alg, 3, seed=12)
            assert pre_lie_left_check(x, y, z)
            assert pre_lie_right_check(x, y, z)


def test_report_dict_is_json_ready():
    import json

    rep = check_key_identity(2, MAT, MAT.random_element(random.Random(0)))
    data = rep.to_dict()
    assert "elapsed_seconds" not in data
    json.dumps(data)
    assert "elapsed_seconds" in rep.to_dict(include_timing=True)
