"""Projectors, the deformed Pauli matrix and probability operators.

Apparatus ``i`` owns a spin copy ``S_i`` (letters ``x_i``, ``y_i``) and a
Stern-Gerlach copy ``SG_i`` (letters ``a_i``, ``c_i``).  Its up-outcome
probability is the quartic element

    P_i(up) = (x_i* a_i + y_i* c_i)(a_i* x_i + c_i* y_i)

and ``P_i(down) = 1 - P_i(up)``.  The module also carries two stored
reference forms of ``[P_i(up), P_j(up)]`` (see ``data/``) and the
checks that compare the engine's commutator against them.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .coeff import ONE, EpsSeries, GaussRational, LaurentPoly, Q, lp_expand_eps
from .ncalg import (
    FIRST,
    SECOND,
    SG,
    SPIN,
    CopyId,
    Generator,
    NCPoly,
    RelationSystem,
    UnknownGeneratorError,
    abelianize,
    normalize,
    render_poly,
    star,
)
from .suq2 import EpsilonTensor, QSpinor, lower_index, native_spinor, raise_index

__all__ = [
    "QSpinor",
    "OperatorMatrix",
    "ProbabilityOperator",
    "CheckReport",
    "UP",
    "DOWN",
    "bra",
    "bar_spinor",
    "lower_spinor",
    "projector",
    "pauli",
    "prob_op",
    "probability_from_kets",
    "commutator",
    "load_all_orders_commutator",
    "load_first_order_commutator",
    "first_order_rhs",
    "verify_all_orders",
    "verify_first_order",
    "classical_eval",
    "vanishes_classically",
]

UP, DOWN = "up", "down"
Q_INV = Q.inverse()


# -- spinors ---------------------------------------------------------------

def bra(ket: QSpinor) -> QSpinor:
    """``u-bar_a``: componentwise * of a ket."""
    if ket.variance != "ket":
        raise ValueError(f"expected a ket, got {ket.variance}")
    return QSpinor(tuple(star(c) for c in ket.components), ket.copy, "bra")


def bar_spinor(s: QSpinor, eps: EpsilonTensor = EpsilonTensor()) -> QSpinor:
    """Raise the index of a bra: ``wbar^a = wbar_b eps^{ba}``.

    For the native bra ``(a*, c*)`` this is ``(-q c*, a*)``.
    """
    if s.variance != "bra":
        raise ValueError(f"bar_spinor expects a bra, got {s.variance}")
    if eps != EpsilonTensor():
        raise ValueError("only the standard q-epsilon tensor is supported")
    return QSpinor(raise_index(s.components), s.copy, "ket-bar")


def lower_spinor(s: QSpinor) -> QSpinor:
    """Inverse of :func:`bar_spinor` (and ket -> lowered ket)."""
    target = {"ket-bar": "bra", "ket": "bra-bar"}.get(s.variance)
    if target is None:
        raise ValueError(f"cannot lower a {s.variance}")
    return QSpinor(lower_index(s.components), s.copy, target)


def _copies(i: int, sys: RelationSystem, need_spin: bool = True) -> tuple:
    spin, sg = CopyId(SPIN, i), CopyId(SG, i)
    if sg not in sys.position or (need_spin and spin not in sys.position):
        raise UnknownGeneratorError(f"apparatus {i} is not registered in this relation system")
    return spin, sg


# -- operator matrices -----------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrix:
    """A 2x2 matrix of algebra elements."""

    entries: tuple

    @classmethod
    def from_rows(cls, rows) -> "OperatorMatrix":
        return cls(tuple(tuple(NCPoly.coerce(v) for v in row) for row in rows))

    @classmethod
    def identity(cls) -> "OperatorMatrix":
        return cls.from_rows([[1, 0], [0, 1]])

    def __getitem__(self, idx):
        r, c = idx
        return self.entries[r][c]

    def _zip(self, other, op):
        return OperatorMatrix(
            tuple(tuple(op(self.entries[r][c], other.entries[r][c]) for c in range(2)) for r in range(2))
        )

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(tuple(tuple(e.scale(c) for e in row) for row in self.entries))

    def __matmul__(self, other):
        return OperatorMatrix(
            tuple(
                tuple(
                    self.entries[r][0] * other.entries[0][c] + self.entries[r][1] * other.entries[1][c]
                    for c in range(2)
                )
                for r in range(2)
            )
        )

    def dagger(self) -> "OperatorMatrix":
        """Transpose combined with the * involution."""
        return OperatorMatrix(tuple(tuple(star(self.entries[c][r]) for c in range(2)) for r in range(2)))

    def normalized(self, sys: RelationSystem) -> "OperatorMatrix":
        return OperatorMatrix(tuple(tuple(normalize(e, sys) for e in row) for row in self.entries))

    def is_zero(self) -> bool:
        return not any(e for row in self.entries for e in row)

    def __str__(self):
        return "[" + "; ".join(", ".join(render_poly(e) for e in row) for row in self.entries) + "]"


def _outer(left, right) -> OperatorMatrix:
    return OperatorMatrix(tuple(tuple(left[r] * right[c] for c in range(2)) for r in range(2)))


def projector(i: int, outcome: str, sys: RelationSystem) -> OperatorMatrix:
    """Projector of apparatus ``i`` onto the up or down state of its device.

    Up is ``w^a wbar_b`` with ``w = (a, c)``; down is the outer product of
    ``wbar^a`` with its own conjugate.
    """
    _, sg = _copies(i, sys, need_spin=False)
    w = native_spinor(sg)
    if outcome == UP:
        return _outer(w.components, bra(w).components).normalized(sys)
    if outcome == DOWN:
        wbar = bar_spinor(bra(w)).components
        return _outer(wbar, tuple(star(c) for c in wbar)).normalized(sys)
    raise ValueError(f"outcome must be {UP!r} or {DOWN!r}")


def pauli(i: int, sys: RelationSystem) -> OperatorMatrix:
    """``q Pi_up - q^-1 Pi_down`` of apparatus ``i``."""
    up = projector(i, UP, sys)
    down = projector(i, DOWN, sys)
    return (up.scale(Q) - down.scale(Q_INV)).normalized(sys)


# -- probability operators -------------------------------------------------

@dataclass(frozen=True)
class ProbabilityOperator:
    value: NCPoly
    apparatus: int
    outcome: str

    def __str__(self):
        return f"P_{self.outcome}({self.apparatus}) = {render_poly(self.value)}"


def probability_from_kets(u, w) -> NCPoly:
    """``(ubar_a w^a)(wbar_b u^b)`` for arbitrary ket components ``u``, ``w``."""
    ubar = [star(c) for c in u]
    wbar = [star(c) for c in w]
    return (ubar[0] * w[0] + ubar[1] * w[1]) * (wbar[0] * u[0] + wbar[1] * u[1])


def prob_op(i: int, outcome: str, sys: RelationSystem) -> ProbabilityOperator:
    """Normalized ``P_i(up)`` or ``P_i(down) = 1 - P_i(up)``."""
    _copies(i, sys)
    up = probability_from_kets(native_spinor(CopyId(SPIN, i)), native_spinor(CopyId(SG, i)))
    if outcome == UP:
        value = up
    elif outcome == DOWN:
        value = NCPoly.scalar(1) - up
    else:
        raise ValueError(f"outcome must be {UP!r} or {DOWN!r}")
    return ProbabilityOperator(normalize(value, sys), i, outcome)


def commutator(A, B, sys: RelationSystem, strategy: str = "leftmost") -> NCPoly:
    """``normalize(AB - BA)``; accepts probability operators or NCPoly."""
    a = A.value if isinstance(A, ProbabilityOperator) else NCPoly.coerce(A)
    b = B.value if isinstance(B, ProbabilityOperator) else NCPoly.coerce(B)
    return normalize(a * b - b * a, sys, strategy)


# -- stored reference forms ------------------------------------------------

_MONO = re.compile(r"^([+-])(\d+)?(q(?:\^(-?\d+))?)?$")
_LETTER = re.compile(r"^([xyac])_([ij])(\*?)$")


def _parse_monomial(text: str) -> LaurentPoly:
    m = _MONO.match(text)
    if not m or (m.group(2) is None and m.group(3) is None):
        raise ValueError(f"bad monomial {text!r}")
    coef = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
    exp = 0 if m.group(3) is None else int(m.group(4) or 1)
    return LaurentPoly.monomial(coef, exp)


def _parse_letter(tok: str, i: int, j: int) -> Generator:
    m = _LETTER.match(tok)
    if not m:
        raise ValueError(f"bad letter {tok!r}")
    name, idx, st = m.groups()
    kind = SPIN if name in "xy" else SG
    letter = FIRST if name in "xa" else SECOND
    return Generator(CopyId(kind, i if idx == "i" else j), letter, bool(st))


def _load(name: str, i: int, j: int) -> NCPoly:
    text = resources.files(__package__).joinpath("data", name).read_text()
    prefactor, total = None, NCPoly()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("prefactor:"):
            prefactor = sum((_parse_monomial(t) for t in line.split(":", 1)[1].split()), LaurentPoly())
            continue
        mono, word = (part.strip() for part in line.split("|"))
        letters = tuple(_parse_letter(t, i, j) for t in word.split())
        total = total + NCPoly.word(letters, _parse_monomial(mono))
    if prefactor is None:
        raise ValueError(f"{name}: missing prefactor line")
    return total.scale(prefactor)


def load_all_orders_commutator(i: int = 1, j: int = 2) -> NCPoly:
    """Stored all-orders form of ``[P_i(up), P_j(up)]`` (not normalized)."""
    return _load("commutator_all_orders.txt", i, j)


def load_first_order_commutator(i: int = 1, j: int = 2) -> NCPoly:
    """Stored leading-order form of ``[P_i(up), P_j(up)]``."""
    return _load("commutator_first_order.txt", i, j)


def first_order_rhs(i: int, j: int) -> NCPoly:
    """``(i/2)(1-q) [(m_i+m_j).(n_i x n_j) - (n_i+n_j).(m_i x m_j)]``.

    ``n`` are spin direction operators and ``m`` device direction
    operators, multiplied in a fixed left-to-right order.
    """
    from .geom import direction_components

    ni = direction_components(CopyId(SPIN, i))
    nj = direction_components(CopyId(SPIN, j))
    mi = direction_components(CopyId(SG, i))
    mj = direction_components(CopyId(SG, j))

    def add(u, v):
        return [p + r for p, r in zip(u, v)]

    def dot(u, v):
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]

    def cross(u, v):
        return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]

    bracket = dot(add(mi, mj), cross(ni, nj)) - dot(add(ni, nj), cross(mi, mj))
    half_i = LaurentPoly.const(GaussRational(0, Fraction(1, 2)))
    return bracket.scale(half_i * (ONE - Q))


# -- checks ----------------------------------------------------------------

@dataclass
class CheckReport:
    """Outcome of one symbolic check, ready for JSON serialization."""

    check: str
    indices: tuple
    residual_terms: int
    first_nonzero_eps_order: int | None
    elapsed: float
    passed: bool
    residual: str = ""
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "indices": list(self.indices),
            "residual_terms": self.residual_terms,
            "first_nonzero_eps_order": self.first_nonzero_eps_order,
            "passed": self.passed,
            "residual": self.residual,
            "details": self.details,
        }


def _first_eps_order(a: NCPoly, max_order: int) -> tuple[int | None, dict]:
    series = {w: lp_expand_eps(c, max_order) for w, c in a._terms.items()}
    orders = [s.leading_order() for s in series.values()]
    orders = [o for o in orders if o is not None]
    return (min(orders) if orders else None), series


def verify_all_orders(sys: RelationSystem, i: int = 1, j: int = 2, strategy: str = "leftmost") -> CheckReport:
    """Exact comparison of ``[P_i, P_j]`` with the stored all-orders form.

    A failing report carries the normalized residual verbatim.
    """
    t0 = time.perf_counter()
    c = commutator(prob_op(i, UP, sys), prob_op(j, UP, sys), sys, strategy)
    resid = normalize(c - load_all_orders_commutator(i, j), sys, strategy)
    order, _ = _first_eps_order(resid, 2)
    return CheckReport(
        "all-orders",
        (i, j),
        len(resid),
        order,
        time.perf_counter() - t0,
        not resid,
        render_poly(resid),
        {"commutator_terms": len(c), "strategy": strategy},
    )


def verify_first_order(
    i: int, j: int, sys: RelationSystem, strategy: str = "leftmost", max_order: int = 2
) -> CheckReport:
    """Leading-order check of ``[P_i, P_j]`` against :func:`first_order_rhs`.

    The difference is normalized, abelianized and expanded in
    ``eps = 1 - q``.  The check passes when the eps^0 and eps^1 parts vanish;
    the report gives the first order at which anything survives.
    """
    if i == j:
        raise ValueError("first-order check needs two distinct apparatuses")
    t0 = time.perf_counter()
    c = commutator(prob_op(i, UP, sys), prob_op(j, UP, sys), sys, strategy)
    diff = abelianize(normalize(c - first_order_rhs(i, j), sys, strategy))
    order, series = _first_eps_order(diff, max_order)
    low = NCPoly({w: s[0] + s[1] for w, s in series.items() if s[0] or s[1]})
    return CheckReport(
        "first-order",
        (i, j),
        len(low),
        order,
        time.perf_counter() - t0,
        order is None or order >= 2,
        render_poly(abelianize(low)) if low else "",
        {"strategy": strategy, "max_order": max_order},
    )


# -- classical evaluation --------------------------------------------------

def classical_eval(a: NCPoly, assignment: dict, q_value=1) -> complex:
    """Evaluate ``a`` with every generator replaced by a commuting number.

    ``assignment`` maps generators to complex values.  A starred generator
    with no entry of its own takes the conjugate of its partner.  This is
    exact only at ``q = 1``; at other ``q`` it is a leading-order probe.
    """
    values = dict(assignment)
    for g, v in assignment.items():
        values.setdefault(g.toggled(), complex(v).conjugate())
    q = float(Fraction(q_value)) if not isinstance(q_value, float) else q_value
    total = 0j
    for w, c in a._terms.items():
        term = c.eval_complex(q)
        for g in w:
            try:
                term *= values[g]
            except KeyError:
                raise KeyError(f"no value assigned to generator {g}") from None
        total += term
    return total


def vanishes_classically(a: NCPoly) -> bool:
    """True when every coefficient of ``a`` is zero at ``q = 1``."""
    return all(not c.eval(1) for c in a._terms.values())
