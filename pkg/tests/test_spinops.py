import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidedsuq.coeff import ONE, Q, LaurentPoly, lp_expand_eps
from braidedsuq.geom import spinor_assignment
from braidedsuq.ncalg import (
    FIRST,
    SECOND,
    SG,
    SPIN,
    CopyId,
    Generator,
    NCPoly,
    UnknownGeneratorError,
    abelianize,
    normalize,
    star,
)
from braidedsuq.spinops import (
    DOWN,
    UP,
    OperatorMatrix,
    bar_spinor,
    bra,
    classical_eval,
    commutator,
    first_order_rhs,
    load_all_orders_commutator,
    load_first_order_commutator,
    lower_spinor,
    pauli,
    prob_op,
    probability_from_kets,
    projector,
    vanishes_classically,
    verify_first_order,
)
from braidedsuq.suq2 import native_spinor, rotate_spinor

S1, SG1 = CopyId(SPIN, 1), CopyId(SG, 1)
a = NCPoly.gen(Generator(SG1, FIRST))
c = NCPoly.gen(Generator(SG1, SECOND))


def device(al, ga, i=1):
    return {Generator(CopyId(SG, i), FIRST): complex(al), Generator(CopyId(SG, i), SECOND): complex(ga)}


def spin(al, ga, i=1):
    return {Generator(CopyId(SPIN, i), FIRST): complex(al), Generator(CopyId(SPIN, i), SECOND): complex(ga)}


def numeric(m: OperatorMatrix, assignment, q=1):
    return np.array([[classical_eval(m[r, k], assignment, q) for k in range(2)] for r in range(2)])


def random_unit_pair(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return complex(v[0], v[1]), complex(v[2], v[3])


class TestSpinors:
    def test_bar_of_device_bra(self):
        wbar = bar_spinor(bra(native_spinor(SG1)))
        assert wbar.components == (star(c).scale(-Q), star(a))
        assert wbar.variance == "ket-bar"

    def test_lowering_round_trip(self):
        w = bra(native_spinor(SG1))
        assert lower_spinor(bar_spinor(w)).components == w.components

    def test_classical_limit_is_orthogonal_spinor(self):
        wbar = bar_spinor(bra(native_spinor(SG1)))
        at1 = [p.map_coeffs(lambda k: LaurentPoly.const(k.eval(1))) for p in wbar]
        assert at1 == [-star(c), star(a)]

    def test_variance_checked(self):
        with pytest.raises(ValueError):
            bar_spinor(native_spinor(SG1))


class TestProjectors:
    def test_up_corner(self, sys11):
        assert projector(1, UP, sys11)[0, 0] == normalize(NCPoly.scalar(1) - (star(c) * c).scale(Q * Q), sys11)

    def test_resolution_of_identity(self, sys22):
        for i in (1, 2):
            total = (projector(i, UP, sys22) + projector(i, DOWN, sys22)).normalized(sys22)
            assert total == OperatorMatrix.identity()

    def test_down_matches_complement(self, sys11):
        down = projector(1, DOWN, sys11)
        assert down == (OperatorMatrix.identity() - projector(1, UP, sys11)).normalized(sys11)

    def test_z_aligned_device(self, sys11):
        got = numeric(projector(1, UP, sys11), device(1, 0))
        assert np.allclose(got, np.diag([1, 0]), atol=1e-15)

    def test_unknown_apparatus(self, sys11):
        with pytest.raises(UnknownGeneratorError):
            projector(3, UP, sys11)


class TestPauli:
    def test_z_aligned_is_deformed_sigma_z(self, sys11):
        q = Fraction(9, 10)
        got = numeric(pauli(1, sys11), device(1, 0), q)
        assert np.allclose(got, np.diag([0.9, -1 / 0.9]), atol=1e-14)

    def test_x_aligned_classical(self, sys11):
        h = 1 / math.sqrt(2)
        got = numeric(pauli(1, sys11), device(h, h))
        assert np.allclose(got, [[0, 1], [1, 0]], atol=1e-14)

    def test_hermitian(self, sys11):
        s = pauli(1, sys11)
        assert s.dagger().normalized(sys11) == s


class TestProbability:
    def test_aligned(self, sys11):
        asg = {**spin(1, 0), **device(1, 0)}
        assert classical_eval(prob_op(1, UP, sys11).value, asg) == pytest.approx(1)

    def test_orthogonal_axes(self, sys11):
        h = 1 / math.sqrt(2)
        asg = {**spin(1, 0), **device(h, h)}
        assert classical_eval(prob_op(1, UP, sys11).value, asg) == pytest.approx(0.5)

    def test_born_rule_against_matrices(self, sys11):
        rng = np.random.default_rng(11)
        p = prob_op(1, UP, sys11).value
        for _ in range(25):
            u, w = random_unit_pair(rng), random_unit_pair(rng)
            expected = abs(np.vdot(np.array(w), np.array(u))) ** 2
            got = classical_eval(p, {**spin(*u), **device(*w)})
            assert got == pytest.approx(expected, abs=1e-12)

    def test_relative_angle(self, sys11):
        p = prob_op(1, UP, sys11).value
        for theta in np.linspace(0, math.pi, 7):
            asg = {**spinor_assignment(S1, theta, 0.7), **device(1, 0)}
            assert classical_eval(p, asg).real == pytest.approx((1 + math.cos(theta)) / 2, abs=1e-14)

    def test_completeness(self, sys33):
        for i in (1, 2, 3):
            total = prob_op(i, UP, sys33).value + prob_op(i, DOWN, sys33).value
            assert normalize(total - NCPoly.scalar(1), sys33) == NCPoly()

    def test_rotation_invariance(self, sys11_rot):
        u, w = native_spinor(S1), native_spinor(SG1)
        ur, wr = rotate_spinor(u, sys11_rot), rotate_spinor(w, sys11_rot)
        diff = probability_from_kets(ur.components, wr.components) - probability_from_kets(u.components, w.components)
        assert normalize(diff, sys11_rot) == NCPoly()

    def test_bad_outcome(self, sys11):
        with pytest.raises(ValueError):
            prob_op(1, "sideways", sys11)


class TestCommutator:
    def test_self(self, sys22):
        p = prob_op(1, UP, sys22)
        assert commutator(p, p, sys22) == NCPoly()

    def test_antisymmetric(self, sys22):
        p1, p2 = prob_op(1, UP, sys22), prob_op(2, UP, sys22)
        assert commutator(p1, p2, sys22) == -commutator(p2, p1, sys22)

    def test_classical_limit(self, sys22):
        p1, p2 = prob_op(1, UP, sys22), prob_op(2, UP, sys22)
        c12 = commutator(p1, p2, sys22)
        assert c12 and vanishes_classically(c12)


class TestStoredForms:
    def test_all_orders_shape(self):
        t = load_all_orders_commutator(1, 2)
        assert len(t) <= 36
        assert vanishes_classically(t)

    def test_all_orders_prefactor_applied(self):
        t = load_all_orders_commutator(1, 2)
        for _, coef in t.items():
            assert not lp_expand_eps(coef, 0)[0]

    def test_leading_form_equals_bracket(self):
        """The stored leading-order form and the direction-operator bracket agree classically."""
        stored, rhs = load_first_order_commutator(1, 2), first_order_rhs(1, 2)
        rng = np.random.default_rng(3)
        for _ in range(10):
            asg = {}
            for kind in (SPIN, SG):
                for i in (1, 2):
                    asg.update(spinor_assignment(CopyId(kind, i), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)))
            slope = lambda p: sum(
                complex(lp_expand_eps(k, 1)[1]) * np.prod([asg[g] for g in w]) for w, k in p.items()
            )
            assert slope(stored) == pytest.approx(slope(rhs), abs=1e-12)

    def test_rhs_has_no_constant_part(self):
        for _, coef in first_order_rhs(1, 2).items():
            assert not lp_expand_eps(coef, 0)[0]

    def test_rhs_antisymmetric(self):
        assert abelianize(first_order_rhs(2, 1)) == abelianize(-first_order_rhs(1, 2))

    def test_first_order_needs_two(self, sys22):
        with pytest.raises(ValueError):
            verify_first_order(1, 1, sys22)

    def test_first_order_reports_are_mirror_images(self, sys22):
        r12, r21 = verify_first_order(1, 2, sys22), verify_first_order(2, 1, sys22)
        assert r12.residual_terms == r21.residual_terms
        assert r12.first_nonzero_eps_order == r21.first_nonzero_eps_order


class TestClassicalEval:
    def test_identity(self):
        assert classical_eval(NCPoly.scalar(1), {}) == 1

    @given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
    def test_norm(self, th, om):
        asg = spinor_assignment(S1, th, om)
        x, y = (NCPoly.gen(Generator(S1, k)) for k in (FIRST, SECOND))
        assert classical_eval(x * star(x) + y * star(y), asg) == pytest.approx(1)

    def test_incomplete(self):
        with pytest.raises(KeyError):
            classical_eval(a * c, device(1, 0).__class__({Generator(SG1, FIRST): 1}))

    def test_starred_defaults_to_conjugate(self):
        got = classical_eval(star(c), {Generator(SG1, SECOND): 2j})
        assert got == -2j
