import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidedsuq.coeff import ONE, Q, EpsSeries, GaussRational, LaurentPoly
from braidedsuq.ncalg import (
    FIRST,
    SECOND,
    SG,
    SPIN,
    CopyId,
    Generator,
    NCPoly,
    RelationSystem,
    RewriteError,
    RewriteTrace,
    UnknownGeneratorError,
    abelianize,
    critical_pairs,
    expand_terms_eps,
    is_zero,
    nc_mul,
    normalize,
    render_word,
    star,
)
from braidedsuq.suq2 import make_system

from conftest import ncpolys_of, words_of

S1, SG1 = CopyId(SPIN, 1), CopyId(SG, 1)
x, y = Generator(S1, FIRST), Generator(S1, SECOND)
a, c = Generator(SG1, FIRST), Generator(SG1, SECOND)
X, Y, A, C = (NCPoly.gen(g) for g in (x, y, a, c))
Xs, Ys = star(X), star(Y)
I = LaurentPoly.const(GaussRational(0, 1))

_SYS11 = make_system(1, 1)
_BRAIDED = make_system(2, 2, conjugates="braided")


class TestMul:
    def test_concatenation(self):
        assert nc_mul(X, Y) == NCPoly.word((x, y))

    def test_identity(self):
        p = X * Y + Q * A
        assert nc_mul(NCPoly.scalar(1), p) == p

    def test_distributes(self):
        assert nc_mul(X + Y, Xs) == NCPoly.word((x, x.toggled())) + NCPoly.word((y, x.toggled()))


class TestStar:
    def test_reverses_word(self):
        assert star(X * Y) == Ys * Xs

    def test_conjugates_coefficient(self):
        assert star(X.scale(I)) == Xs.scale(-I)

    def test_real_coefficient(self):
        assert star(Ys.scale(Q)) == Y.scale(Q)

    @given(ncpolys_of(_SYS11), ncpolys_of(_SYS11))
    @settings(max_examples=50)
    def test_anti_automorphism(self, p, r):
        assert star(star(p)) == p
        assert star(nc_mul(p, r)) == nc_mul(star(r), star(p))
        assert normalize(star(nc_mul(p, r)), _SYS11) == normalize(nc_mul(star(r), star(p)), _SYS11)


class TestNormalize:
    def test_same_copy_swap(self, sys11):
        assert normalize(X * Y, sys11) == (Y * X).scale(Q)

    def test_x_xstar(self, sys11):
        got = normalize(X * Xs, sys11)
        assert got == NCPoly.scalar(1) - (Y * Ys).scale(Q * Q)
        assert str(got) == "1 - q^2 * y1 y1*"

    def test_cross_copy_rule(self, sys11):
        got = normalize(X * C, sys11)
        assert got == (C * X).scale(Q.inverse()) + (A * Y).scale(ONE - Q**-2)

    def test_empty_word(self, sys11):
        one = NCPoly.scalar(1)
        assert normalize(one, sys11) == one

    def test_unknown_generator(self, sys11):
        stranger = NCPoly.gen(Generator(CopyId(SPIN, 5), FIRST))
        with pytest.raises(UnknownGeneratorError):
            normalize(stranger, sys11)

    @given(ncpolys_of(_SYS11), ncpolys_of(_SYS11))
    @settings(max_examples=40, deadline=None)
    def test_linear_and_idempotent(self, p, r):
        n = normalize(p, _SYS11)
        assert normalize(n, _SYS11) == n
        assert normalize(p + r, _SYS11) == n + normalize(r, _SYS11)
        assert all(_SYS11.is_normal_word(w) for w in n.terms)

    @given(words_of(_SYS11, 7))
    @settings(max_examples=60, deadline=None)
    def test_every_step_lowers_measure(self, w):
        trace = RewriteTrace()
        normalize(NCPoly.word(w), _SYS11, trace=trace)
        assert trace.checked >= trace.steps

    def test_rules_are_consistent(self, sys11):
        for (g1, g2), rhs in sys11.rules.items():
            assert is_zero(NCPoly.word((g1, g2)) - rhs, sys11)


class TestIsZero:
    def test_relation(self, sys11):
        assert is_zero(X * Y - (Y * X).scale(Q), sys11)

    def test_trivial(self, sys11):
        assert is_zero(X - X, sys11)
        assert not is_zero(X, sys11)


class TestAbelianize:
    def test_merge(self):
        assert abelianize((Y * X).scale(Q) + X * Y) == abelianize(X * Y).scale(ONE + Q)

    def test_commutator_vanishes(self):
        assert not abelianize(X * Xs - Xs * X)

    def test_commutative_input_kept(self):
        p = abelianize(X * Y * A)
        assert abelianize(p) == p


class TestExpandTerms:
    def test_binomial(self):
        w = (x, y)
        assert expand_terms_eps(NCPoly.word(w, ONE - Q * Q), 1) == {w: EpsSeries([0, 2], 1)}

    def test_q(self):
        w = (y,)
        assert expand_terms_eps(NCPoly.word(w, Q), 1) == {w: EpsSeries([1, -1], 1)}


class TestRegistration:
    def test_rejects_growing_rule(self):
        sys = RelationSystem([S1])
        with pytest.raises(RewriteError):
            sys.register(x, y, NCPoly.word((y, x, x)))

    def test_rejects_ordered_pair(self):
        sys = RelationSystem([S1])
        with pytest.raises(RewriteError):
            sys.register(y, x, NCPoly.word((x, y)))

    def test_rejects_duplicate_copies(self):
        with pytest.raises(ValueError):
            RelationSystem([S1, S1])


class TestConfluence:
    def test_default_table_has_known_overlap(self, sys11):
        # recorded gap: the * images of the cross rules clash with x x* = 1 - q^2 y y*
        bad = {render_word(w) for w, _ in critical_pairs(sys11)}
        assert "x1 x1* a1" in bad

    def test_braided_table_is_locally_confluent(self, braided22):
        assert critical_pairs(braided22) == []

    @given(words_of(_BRAIDED, 8))
    @settings(max_examples=150, deadline=None)
    def test_braided_strategies_agree(self, w):
        p = NCPoly.word(w)
        assert normalize(p, _BRAIDED, "leftmost") == normalize(p, _BRAIDED, "rightmost")

    def test_bad_strategy(self, sys11):
        with pytest.raises(ValueError):
            normalize(X * Y, sys11, strategy="random")
