from pathlib import Path

import pytest

from braidedsuq.coeff import ONE, Q, ZERO
from braidedsuq.ncalg import (
    FIRST,
    ROT,
    SECOND,
    SG,
    SPIN,
    CopyId,
    Generator,
    NCPoly,
    is_zero,
    normalize,
    star,
)
from braidedsuq.suq2 import (
    EPS_LOWER,
    EPS_UPPER,
    MissingRotationError,
    QSpinor,
    braid_pair,
    braid_relations,
    lower_index,
    make_system,
    native_spinor,
    r_matrix,
    raise_index,
    rotate_spinor,
)

GOLDEN = Path(__file__).parent / "golden"
S1, SG1, R = CopyId(SPIN, 1), CopyId(SG, 1), CopyId(ROT, 1)


def g(copy, letter, starred=False):
    return NCPoly.gen(Generator(copy, letter, starred))


x, y = g(S1, FIRST), g(S1, SECOND)
a, c = g(SG1, FIRST), g(SG1, SECOND)


class TestRMatrix:
    def test_entries(self):
        R4 = r_matrix()
        # by hand: q d d + eps^{ab} eps_{cd}, with eps^{01} = 1, eps^{10} = -q,
        # eps_{01} = -1/q, eps_{10} = 1
        assert R4[0][0][0][0] == Q
        assert R4[1][1][1][1] == Q
        assert R4[0][1][0][1] == Q - Q.inverse()
        assert R4[1][0][1][0] == ZERO
        assert R4[0][1][1][0] == ONE
        assert R4[1][0][0][1] == ONE
        assert R4[0][0][1][1] == ZERO

    def test_epsilon(self):
        assert EPS_UPPER == ((ZERO, ONE), (-Q, ZERO))
        assert EPS_LOWER == ((ZERO, -Q.inverse()), (ONE, ZERO))

    def test_raise_lower_round_trip(self):
        u = native_spinor(S1).components
        assert lower_index(raise_index(u)) == u
        assert raise_index(lower_index(u)) == u


class TestMakeSystem:
    def test_dump_matches_golden(self, sys11):
        assert sys11.dump_rules() == (GOLDEN / "rules_n1_1.txt").read_text().splitlines()

    def test_cross_rules_include_plain_commutation(self, sys11):
        assert sys11.rule(Generator(S1, FIRST), Generator(SG1, FIRST)) == a * x
        assert is_zero(y * a - (a * y).scale(Q.inverse()), sys11)

    def test_xastar(self, sys11):
        astar, cstar = star(a), star(c)
        assert is_zero(x * astar - astar * x - (cstar * y).scale(ONE - Q * Q), sys11)

    def test_rotation_only(self):
        sys = make_system(0, 0, with_rotation=True)
        assert sys.copies == (R,)
        assert len(sys.rules) == 7  # six rank inversions plus x x*

    def test_rule_count(self, sys22):
        # 7 reducible intra pairs per copy, 16 cross patterns per ordered pair
        assert len(sys22.rules) == 7 * 4 + 16 * 6

    def test_negative_counts(self):
        with pytest.raises(ValueError):
            make_system(-1, 0)

    def test_unitarity(self, sys22):
        for copy in sys22.copies:
            al, ga = g(copy, FIRST), g(copy, SECOND)
            one = NCPoly.scalar(1)
            assert is_zero(star(ga) * ga + star(al) * al - one, sys22)
            assert is_zero(al * star(al) + (star(ga) * ga).scale(Q * Q) - one, sys22)


class TestBraiding:
    def test_native_pair(self, sys11):
        res = braid_pair(native_spinor(S1), native_spinor(SG1), sys11)
        assert len(res) == 8 and not any(res)

    def test_self_braiding_vanishes(self, sys11):
        for copy in (S1, SG1):
            u = native_spinor(copy).components
            assert not any(normalize(r, sys11) for r in braid_relations(u, u))

    def test_needs_kets(self, sys11):
        bra = QSpinor(native_spinor(S1).components, S1, "bra")
        with pytest.raises(ValueError):
            braid_pair(bra, native_spinor(SG1), sys11)


class TestRotation:
    def test_rotate_components(self, sys11_rot):
        u = rotate_spinor(native_spinor(S1), sys11_rot)
        ra, rg = g(R, FIRST), g(R, SECOND)
        assert u[0] == normalize(ra * x - (star(rg) * y).scale(Q), sys11_rot)
        assert u[1] == normalize(rg * x + star(ra) * y, sys11_rot)

    def test_rotated_pair_still_braided(self, sys11_rot):
        u = rotate_spinor(native_spinor(S1), sys11_rot)
        w = rotate_spinor(native_spinor(SG1), sys11_rot)
        assert not any(braid_pair(u, w, sys11_rot))

    def test_missing_rotation(self, sys11):
        with pytest.raises(MissingRotationError):
            rotate_spinor(native_spinor(S1), sys11)
