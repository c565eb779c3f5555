"""A small expression language over the generator alphabet.

Grammar (whitespace-insensitive)::

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := literal | genref | builtin | '(' expr ')'
             | '[' expr ',' expr ']' | 'star' '(' expr ')'
    builtin := ('P_up' | 'P_down' | 'sigma') '(' int ')'
    genref  := ('x' | 'y' | 'a' | 'c' | 'r') digits '*'?
    literal := int ['/' int] | 'q' ['^' ['-'] int] | 'i'

A ``*`` right after a generator is its star marker when the token after
it cannot start a factor, so ``x1* * y1`` is ``x1*`` times ``y1`` while
``x1 * y1`` is a product.  ``r1`` and ``r2`` are the two letters of the
rotation copy.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .coeff import GaussRational, LaurentPoly, Q
from .ncalg import FIRST, ROT, SECOND, SG, SPIN, CopyId, Generator, NCPoly, RelationSystem, star

__all__ = [
    "ParseError",
    "Num",
    "QPow",
    "Imag",
    "Gen",
    "Builtin",
    "Star",
    "Bracket",
    "BinOp",
    "Neg",
    "tokenize",
    "parse",
    "render",
    "evaluate",
]


class ParseError(ValueError):
    """Lexical, syntax or range error with a 1-based line and column."""

    def __init__(self, kind: str, message: str, line: int, column: int):
        super().__init__(f"{kind} at line {line}, column {column}: {message}")
        self.kind = kind
        self.line = line
        self.column = column


# -- AST -------------------------------------------------------------------

_pos = dict(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class QPow:
    exp: int
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Imag:
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Gen:
    letter: str
    index: int
    starred: bool = False
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Builtin:
    name: str
    arg: int
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Star:
    arg: object
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Bracket:
    left: object
    right: object
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: object
    right: object
    pos: tuple | None = field(**_pos)


@dataclass(frozen=True)
class Neg:
    arg: object
    pos: tuple | None = field(**_pos)


# -- lexer -----------------------------------------------------------------

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")
_GENREF = re.compile(r"^([xyacr])(\d+)$")
BUILTINS = ("P_up", "P_down", "sigma")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, GEN, NAME, OP, EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, k = 1, 1, 0
    while k < len(text):
        ch = text[k]
        if ch.isspace():
            line, col = (line + 1, 1) if ch == "\n" else (line, col + 1)
            k += 1
            continue
        m = _TOKEN.match(text, k)
        num, name, other = m.groups()
        if num is not None:
            out.append(Token("INT", num, line, col))
        elif name is not None:
            if _GENREF.match(name):
                out.append(Token("GEN", name, line, col))
            elif name in ("q", "i", "star") + BUILTINS:
                out.append(Token("NAME", name, line, col))
            else:
                raise ParseError("unknown name", repr(name), line, col)
        elif other in "+-*/^()[],":
            out.append(Token("OP", other, line, col))
        else:
            raise ParseError("lexical error", f"unexpected character {other!r}", line, col)
        col += m.end() - k
        k = m.end()
    out.append(Token("EOF", "", line, col))
    return out


# -- parser ----------------------------------------------------------------

_LIMITS = {"x": SPIN, "y": SPIN, "a": SG, "c": SG}


class _Parser:
    def __init__(self, tokens, sys):
        self.toks = tokens
        self.k = 0
        self.sys = sys

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def peek(self, n=1) -> Token:
        return self.toks[min(self.k + n, len(self.toks) - 1)]

    def error(self, message, tok=None, kind="syntax error"):
        tok = tok or self.tok
        raise ParseError(kind, message, tok.line, tok.column)

    def take(self, text=None) -> Token:
        tok = self.tok
        if text is not None and tok.text != text:
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        self.k += 1
        return tok

    @staticmethod
    def starts_factor(tok: Token) -> bool:
        return tok.kind in ("INT", "GEN", "NAME") or tok.text in ("(", "[")

    def expr(self):
        first = self.tok
        neg = False
        if first.text == "-":
            self.take()
            neg = True
        node = self.term()
        if neg:
            node = Neg(node, pos=(first.line, first.column))
        while self.tok.text in ("+", "-"):
            op = self.take()
            node = BinOp(op.text, node, self.term(), pos=(op.line, op.column))
        return node

    def term(self):
        node = self.factor()
        while self.tok.text == "*":
            op = self.take()
            if not self.starts_factor(self.tok):
                self.error("expected a factor after '*'", op)
            node = BinOp("*", node, self.factor(), pos=(op.line, op.column))
        return node

    def factor(self):
        tok = self.tok
        pos = (tok.line, tok.column)
        if tok.kind == "INT":
            self.take()
            num = Fraction(int(tok.text))
            if self.tok.text == "/":
                self.take()
                den = self.take()
                if den.kind != "INT":
                    self.error("expected an integer denominator", den)
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                num /= int(den.text)
            return Num(num, pos=pos)
        if tok.kind == "GEN":
            self.take()
            letter, digits = _GENREF.match(tok.text).groups()
            starred = False
            if self.tok.text == "*" and not self.starts_factor(self.peek()):
                nxt = self.peek()
                if nxt.text == "*" and not self.starts_factor(self.peek(2)):
                    self.error("malformed star marker", nxt)
                self.take()
                starred = True
            node = Gen(letter, int(digits), starred, pos=pos)
            self.check_range(node, tok)
            return node
        if tok.kind == "NAME":
            self.take()
            if tok.text == "i":
                return Imag(pos=pos)
            if tok.text == "q":
                exp = 1
                if self.tok.text == "^":
                    self.take()
                    sign = 1
                    if self.tok.text == "-":
                        self.take()
                        sign = -1
                    e = self.take()
                    if e.kind != "INT":
                        self.error("expected an integer exponent", e)
                    exp = sign * int(e.text)
                return QPow(exp, pos=pos)
            if tok.text == "star":
                self.take("(")
                inner = self.expr()
                self.take(")")
                return Star(inner, pos=pos)
            self.take("(")
            arg = self.take()
            if arg.kind != "INT":
                self.error("expected an apparatus index", arg)
            self.take(")")
            node = Builtin(tok.text, int(arg.text), pos=pos)
            self.check_range(node, arg)
            return node
        if tok.text == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if tok.text == "[":
            self.take()
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Bracket(left, right, pos=pos)
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    def check_range(self, node, tok):
        if self.sys is None:
            return
        if isinstance(node, Gen):
            if node.letter == "r":
                ok = bool(self.sys.copies_of(ROT)) and node.index in (1, 2)
            else:
                ok = CopyId(_LIMITS[node.letter], node.index) in self.sys.position
        else:
            ok = CopyId(SG, node.arg) in self.sys.position and (
                node.name == "sigma" or CopyId(SPIN, node.arg) in self.sys.position
            )
        if not ok:
            self.error(f"index out of range for this system", tok, kind="range error")


def parse(text: str, sys: RelationSystem | None = None):
    """Parse ``text`` to an AST; with ``sys`` also check generator indices."""
    p = _Parser(tokenize(text), sys)
    node = p.expr()
    if p.tok.kind != "EOF":
        p.error(f"unexpected {p.tok.text!r}")
    return node


# -- rendering -------------------------------------------------------------

def _prec(node) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Neg):
        return 0
    return 3


def render(node) -> str:
    """Text that parses back to an equal AST."""
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, QPow):
        return "q" if node.exp == 1 else f"q^{node.exp}"
    if isinstance(node, Imag):
        return "i"
    if isinstance(node, Gen):
        return f"{node.letter}{node.index}{'*' if node.starred else ''}"
    if isinstance(node, Builtin):
        return f"{node.name}({node.arg})"
    if isinstance(node, Star):
        return f"star({render(node.arg)})"
    if isinstance(node, Bracket):
        return f"[{render(node.left)}, {render(node.right)}]"
    if isinstance(node, Neg):
        inner = render(node.arg)
        return f"-({inner})" if _prec(node.arg) < 2 else f"-{inner}"
    if isinstance(node, BinOp):
        p = _prec(node)
        left = render(node.left)
        if _prec(node.left) < p and not (isinstance(node.left, Neg) and p == 1):
            left = f"({left})"
        right = render(node.right)
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation ------------------------------------------------------------

def _generator(node: Gen) -> Generator:
    if node.letter == "r":
        letter = FIRST if node.index == 1 else SECOND
        return Generator(CopyId(ROT, 1), letter, node.starred)
    kind = _LIMITS[node.letter]
    letter = FIRST if node.letter in "xa" else SECOND
    return Generator(CopyId(kind, node.index), letter, node.starred)


def evaluate(node, sys: RelationSystem):
    """Build the (unnormalized) NCPoly, or an OperatorMatrix for ``sigma``."""
    from .spinops import UP, DOWN, OperatorMatrix, pauli, prob_op

    def ev(n):
        if isinstance(n, Num):
            return NCPoly.scalar(GaussRational(n.value))
        if isinstance(n, QPow):
            return NCPoly.scalar(LaurentPoly.monomial(1, n.exp))
        if isinstance(n, Imag):
            return NCPoly.scalar(GaussRational(0, 1))
        if isinstance(n, Gen):
            return NCPoly.gen(_generator(n))
        if isinstance(n, Builtin):
            if n.name == "sigma":
                return pauli(n.arg, sys)
            return prob_op(n.arg, UP if n.name == "P_up" else DOWN, sys).value
        if isinstance(n, Star):
            v = ev(n.arg)
            return v.dagger() if isinstance(v, OperatorMatrix) else star(v)
        if isinstance(n, Neg):
            v = ev(n.arg)
            return v.scale(-1)
        if isinstance(n, Bracket):
            a, b = ev(n.left), ev(n.right)
            return _mul(a, b) - _mul(b, a)
        if isinstance(n, BinOp):
            a, b = ev(n.left), ev(n.right)
            if n.op == "*":
                return _mul(a, b)
            if isinstance(a, OperatorMatrix) != isinstance(b, OperatorMatrix):
                raise TypeError("cannot add a matrix and a scalar element")
            return a + b if n.op == "+" else a - b
        raise TypeError(f"not an expression node: {n!r}")

    def _mul(a, b):
        am, bm = isinstance(a, OperatorMatrix), isinstance(b, OperatorMatrix)
        if am and bm:
            return a @ b
        if am or bm:
            mat, sc = (a, b) if am else (b, a)
            if len(sc) == 0:
                return mat.scale(0)
            if any(w for w, _ in sc.items()):
                raise TypeError("matrices can only be scaled by numbers and powers of q")
            return mat.scale(sc.coeff(()))
        return a * b

    return ev(node)
