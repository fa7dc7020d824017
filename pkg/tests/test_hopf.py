import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbspitzer.hopf import (
    UNIT,
    HopfError,
    LadderHopf,
    LinMap,
    NCSFHopf,
    TreeHopf,
    admissible_cuts,
    antipode,
    character,
    conv_exp,
    conv_inverse,
    conv_log,
    convolution,
    counit_map,
    dynkin,
    dynkin_endomorphism,
    el_add,
    enumerate_trees,
    gamma_reconstruct,
    gamma_reconstruct_direct,
    grading,
    hopf_axiom_report,
    is_character,
    is_infinitesimal,
    make_hopf,
    parse_tree,
    precompose_dynkin,
    render_element,
)
from rbspitzer.rbmodels import LaurentMS, MatrixPoly

LMS = LaurentMS()
seeds = st.integers(0, 2**32)


def random_character(hopf, degree, seed, max_pole=1):
    rng = random.Random(seed)
    gens = {}
    for d in range(1, degree + 1):
        for g in hopf.generators(d):
            coeffs = {e: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for e in range(-max_pole, 2)}
            gens[g] = LMS.series(coeffs).value
    return character(hopf, LMS, degree, gens)


class TestAxioms:
    @pytest.mark.parametrize("name", ["ladder", "trees", "ncsf"])
    def test_all_axioms(self, name):
        report = hopf_axiom_report(make_hopf(name), 5)
        assert all(report.values()), report

    def test_unknown(self):
        with pytest.raises(HopfError):
            make_hopf("graphs")


class TestLadder:
    H = LadderHopf()

    def test_coproduct_t2(self):
        assert self.H.coproduct((2,)) == {((2,), UNIT): 1, ((1,), (1,)): 1, (UNIT, (2,)): 1}

    def test_antipode(self):
        assert self.H.antipode_basis((1,)) == {(1,): -1}
        assert self.H.antipode_basis((2,)) == {(2,): -1, (1, 1): 1}

    def test_parse_render(self):
        b = self.H.parse("t2*t1")
        assert b == (1, 2)
        assert self.H.render(b) == "t1*t2"
        with pytest.raises(HopfError):
            self.H.parse("x1")

    def test_basis_sizes(self):
        # integer partitions
        assert [len(self.H.basis(d)) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]


class TestTrees:
    H = TreeHopf()

    def test_counts(self):
        # rooted unlabelled trees: 1, 1, 2, 4, 9, 20
        assert [len(enumerate_trees(n)) for n in range(1, 7)] == [1, 1, 2, 4, 9, 20]

    def test_single_vertex_primitive(self):
        v = "()"
        assert self.H.coproduct((v,)) == {((v,), UNIT): 1, (UNIT, (v,)): 1}

    def test_two_vertex(self):
        t = "(())"
        assert self.H.coproduct((t,)) == {((t,), UNIT): 1, (UNIT, (t,)): 1, (("()",), ("()",)): 1}

    def test_cherry(self):
        cherry = "(()())"
        delta = self.H.coproduct((cherry,))
        assert delta[(("()",), ("(())",))] == 2
        assert delta[(("()", "()"), ("()",))] == 1
        assert len(delta) == 4

    def test_cut_count(self):
        # a tree whose root has k leaf children has 2^k admissible cuts
        assert len(admissible_cuts("(()()())")) == 8

    def test_parse(self):
        assert parse_tree("( (()) () )") == parse_tree("(()(()))")
        with pytest.raises(HopfError):
            parse_tree("(()")
        assert self.H.parse("() (())") == self.H.parse("(()) ()")

    def test_render_element(self):
        x = {("()",): Fraction(2), ("(())",): Fraction(-1)}
        assert "2*()" in render_element(self.H, x)


class TestNCSF:
    H = NCSFHopf()

    def test_noncommutative_basis(self):
        assert self.H.multiply((1,), (2,)) != self.H.multiply((2,), (1,))
        assert len(self.H.basis(4)) == 8

    def test_primitive_dynkin_scaling(self):
        # p = S2 - S1*S1/2 is primitive, so D_H(p) = 2p
        p = {(2,): Fraction(1), (1, 1): Fraction(-1, 2)}
        assert dynkin_endomorphism(self.H, p) == {b: 2 * c for b, c in p.items()}


class TestConvolution:
    H = LadderHopf()

    def test_counit_is_unit(self):
        g = random_character(self.H, 4, 0)
        e = counit_map(self.H, LMS, 4)
        assert convolution(e, g) == g == convolution(g, e)

    def test_inverse(self):
        g = random_character(self.H, 5, 1)
        assert convolution(g, conv_inverse(g)) == counit_map(self.H, LMS, 5)
        assert conv_inverse(g) == g.precompose(lambda b: self.H.antipode_basis(b))

    def test_log_kills_products(self):
        g = random_character(self.H, 4, 2)
        lg = conv_log(g)
        assert lg.values.get((1, 1)) is None
        assert is_infinitesimal(lg)

    @settings(max_examples=5, deadline=None)
    @given(seeds)
    def test_exp_log_round_trip(self, seed):
        g = random_character(self.H, 6, seed)
        assert is_character(g)
        assert conv_exp(conv_log(g)) == g

    def test_exp_of_infinitesimal_is_character(self):
        g = random_character(TreeHopf(), 4, 3)
        assert is_character(conv_exp(conv_log(g)))

    def test_noncommutative_target_rejected(self):
        with pytest.raises(HopfError):
            LinMap(self.H, MatrixPoly(), 2, {})

    def test_unit_value_checks(self):
        z = counit_map(self.H, LMS, 2) - counit_map(self.H, LMS, 2)
        with pytest.raises(HopfError):
            conv_log(z)


class TestDynkin:
    @pytest.mark.parametrize("hopf", [LadderHopf(), TreeHopf(), NCSFHopf()], ids=["ladder", "trees", "ncsf"])
    def test_quasi_idempotent(self, hopf):
        for b in hopf.basis_up_to(5):
            x = {b: Fraction(1)}
            d = dynkin_endomorphism(hopf, x)
            assert dynkin_endomorphism(hopf, d) == grading(hopf, d)

    def test_definition_s_star_y(self):
        H = LadderHopf()
        for b in H.basis_up_to(4):
            total = {}
            for (l, r), c in H.coproduct(b).items():
                s = antipode(H, {l: Fraction(1)})
                y = grading(H, {r: Fraction(1)})
                for b1, c1 in s.items():
                    for b2, c2 in y.items():
                        total = el_add(total, {H.multiply(b1, b2): c1 * c2}, c)
            assert dynkin_endomorphism(H, {b: Fraction(1)}) == total

    def test_primitive_degree_one(self):
        g = random_character(LadderHopf(), 3, 5)
        assert dynkin(g)((1,)) == g((1,))

    @pytest.mark.parametrize("hopf", [LadderHopf(), TreeHopf()], ids=["ladder", "trees"])
    def test_components_infinitesimal(self, hopf):
        D = dynkin(random_character(hopf, 5, 6))
        for n in range(1, 6):
            assert is_infinitesimal(D.component(n))

    def test_matches_precomposition_for_characters(self):
        g = random_character(TreeHopf(), 4, 7)
        assert dynkin(g) == precompose_dynkin(g)

    def test_gamma_degree_two(self):
        H = LadderHopf()
        g = random_character(H, 2, 8)
        h = dynkin(g)
        expected = counit_map(H, LMS, 2) + h.component(1) + (
            h.component(2) + convolution(h.component(1), h.component(1))
        ).scale(Fraction(1, 2))
        assert gamma_reconstruct(h) == expected

    @pytest.mark.parametrize("hopf,degree", [(LadderHopf(), 6), (TreeHopf(), 5)], ids=["ladder", "trees"])
    def test_gamma_inverts_dynkin(self, hopf, degree):
        g = random_character(hopf, degree, 9)
        h = dynkin(g)
        assert gamma_reconstruct(h) == g
        assert gamma_reconstruct_direct(h) == gamma_reconstruct(h)
