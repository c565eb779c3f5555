from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidedsuq.coeff import Q
from braidedsuq.expr import (
    BinOp,
    Bracket,
    Builtin,
    Gen,
    Imag,
    Neg,
    Num,
    ParseError,
    QPow,
    Star,
    evaluate,
    parse,
    render,
    tokenize,
)
from braidedsuq.ncalg import NCPoly, normalize
from braidedsuq.spinops import OperatorMatrix, pauli, prob_op, UP


class TestParse:
    def test_product(self):
        assert parse("x1 * y1") == BinOp("*", Gen("x", 1, False), Gen("y", 1, False))

    def test_star_marker(self):
        # a star right before a binary operator marks the generator
        assert parse("x1 * + y1") == BinOp("+", Gen("x", 1, True), Gen("y", 1, False))
        assert parse("x1*") == Gen("x", 1, True)
        assert parse("x1* * y1") == BinOp("*", Gen("x", 1, True), Gen("y", 1, False))

    def test_literals(self):
        assert parse("3/4") == Num(Fraction(3, 4))
        assert parse("q^-2") == QPow(-2)
        assert parse("q") == QPow(1)
        assert parse("i") == Imag()

    def test_builtins(self):
        assert parse("P_up(2)") == Builtin("P_up", 2)
        assert parse("star(sigma(1))") == Star(Builtin("sigma", 1))

    def test_bracket(self):
        assert parse("[x1, a1*]") == Bracket(Gen("x", 1, False), Gen("a", 1, True))

    def test_leading_minus(self):
        assert parse("-x1 + y1") == BinOp("+", Neg(Gen("x", 1, False)), Gen("y", 1, False))

    def test_precedence(self):
        node = parse("x1 + y1 * a1")
        assert isinstance(node, BinOp) and node.op == "+"
        assert parse("(x1 + y1) * a1").op == "*"

    def test_left_associative(self):
        assert parse("x1 - y1 - a1") == BinOp("-", BinOp("-", Gen("x", 1, False), Gen("y", 1, False)), Gen("a", 1, False))

    def test_whitespace_insensitive(self):
        assert parse("x1*y1+ q^2") == parse(" x1 * y1 +\n q ^ 2 ")


class TestErrors:
    @pytest.mark.parametrize(
        "text, kind, column",
        [
            ("x1 $ y1", "lexical error", 4),
            ("x1 +", "syntax error", 5),
            ("3 * + y1", "syntax error", 3),
            ("foo(1)", "unknown name", 1),
            ("x1**", "syntax error", 4),
            ("(x1 + y1", "syntax error", 9),
            ("1/0", "syntax error", 3),
        ],
    )
    def test_column(self, text, kind, column):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.kind == kind
        assert info.value.column == column

    def test_malformed_star_message(self):
        with pytest.raises(ParseError, match="malformed star marker"):
            parse("x1**")

    def test_line_numbers(self):
        with pytest.raises(ParseError) as info:
            parse("x1 +\n  $")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_range(self, sys11):
        with pytest.raises(ParseError) as info:
            parse("x1 * y2", sys11)
        assert info.value.kind == "range error"
        assert info.value.column == 6

    def test_rotation_letters_need_rotation_copy(self, sys11, sys11_rot):
        parse("r1 * r2*", sys11_rot)
        with pytest.raises(ParseError):
            parse("r1", sys11)

    def test_tokens_have_positions(self):
        toks = tokenize("x1 *\ny1")
        assert [(t.line, t.column) for t in toks[:3]] == [(1, 1), (1, 4), (2, 1)]


# -- round trip ------------------------------------------------------------

leaves = st.one_of(
    st.builds(Num, st.fractions(min_value=0, max_value=50, max_denominator=9)),
    st.builds(QPow, st.integers(-4, 4)),
    st.just(Imag()),
    st.builds(Gen, st.sampled_from("xyac"), st.integers(1, 3), st.booleans()),
    st.builds(Builtin, st.sampled_from(["P_up", "P_down", "sigma"]), st.integers(1, 3)),
)


def _extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*"), children, children),
        st.builds(Bracket, children, children),
        st.builds(Star, children),
        st.builds(Neg, children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


def _canonical(node):
    """Nested negations only appear at the start of a sum, so compare after parsing once."""
    return parse(render(node))


@given(trees)
@settings(max_examples=300, deadline=None)
def test_render_parse_round_trip(node):
    once = _canonical(node)
    assert parse(render(once)) == once
    assert render(parse(render(once))) == render(once)


@given(st.builds(Gen, st.sampled_from("xyac"), st.integers(1, 9), st.booleans()))
def test_generator_round_trip(node):
    assert parse(render(node)) == node


class TestEvaluate:
    def test_star_of_product(self, sys11):
        got = normalize(evaluate(parse("star(x1 * y1)"), sys11), sys11)
        want = normalize(evaluate(parse("y1* * x1*"), sys11), sys11)
        assert got == want

    def test_builtin(self, sys11):
        assert evaluate(parse("P_up(1)"), sys11) == prob_op(1, UP, sys11).value

    def test_sigma_is_matrix(self, sys11):
        m = evaluate(parse("q * sigma(1)"), sys11)
        assert isinstance(m, OperatorMatrix)
        assert m.normalized(sys11) == pauli(1, sys11).scale(Q).normalized(sys11)

    def test_bracket_self_vanishes(self, sys11):
        assert normalize(evaluate(parse("[x1, x1]"), sys11), sys11) == NCPoly()

    def test_mixed_sum_rejected(self, sys11):
        with pytest.raises(TypeError):
            evaluate(parse("sigma(1) + x1"), sys11)

