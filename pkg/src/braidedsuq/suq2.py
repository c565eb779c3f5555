"""SU_q(2) relations, the R-matrix and braided copies.

:func:`make_system` builds the full rewrite table for ``n`` spin copies,
``n`` Stern-Gerlach copies and an optional rotation copy.  Nothing is
typed in by hand: intra-copy rules come from the defining relations of
SU_q(2) and cross-copy rules from the R-matrix braiding, in both cases
closed under the * involution and solved for the out-of-order products.
"""
from __future__ import annotations

from dataclasses import dataclass

from .coeff import ONE, ZERO, LaurentPoly, Q
from .ncalg import (
    FIRST,
    ROT,
    SECOND,
    SG,
    SPIN,
    CopyId,
    Generator,
    NCPoly,
    RelationSystem,
    RewriteError,
    normalize,
    star,
)

__all__ = [
    "EPS_UPPER",
    "EPS_LOWER",
    "EpsilonTensor",
    "RMatrix",
    "r_matrix",
    "QSpinor",
    "make_system",
    "braid_pair",
    "rotate_spinor",
    "raise_index",
    "lower_index",
    "native_spinor",
    "suq2_relations",
    "braid_relations",
    "MissingRotationError",
    "rotation_matrix_entries",
]

Q_INV = Q.inverse()

EPS_UPPER = ((ZERO, ONE), (-Q, ZERO))
EPS_LOWER = ((ZERO, -Q_INV), (ONE, ZERO))


@dataclass(frozen=True)
class EpsilonTensor:
    upper: tuple = EPS_UPPER
    lower: tuple = EPS_LOWER


def _delta(a: int, b: int) -> LaurentPoly:
    return ONE if a == b else ZERO


def r_matrix() -> tuple:
    """``R[a][b][c][d] = q d^a_c d^b_d + eps^{ab} eps_{cd}``."""
    return tuple(
        tuple(
            tuple(
                tuple(Q * _delta(a, c) * _delta(b, d) + EPS_UPPER[a][b] * EPS_LOWER[c][d] for d in range(2))
                for c in range(2)
            )
            for b in range(2)
        )
        for a in range(2)
    )


RMatrix = tuple  # 2x2x2x2 nested tuple of LaurentPoly
_R = r_matrix()


@dataclass(frozen=True)
class QSpinor:
    """Two NCPoly components with a variance tag.

    ``ket`` is ``u^a``, ``bra`` is ``u-bar_a``, ``ket-bar`` is the raised
    conjugate ``u-bar^a`` and ``bra-bar`` the lowered ket ``u_a``.
    """

    components: tuple
    copy: CopyId | None = None
    variance: str = "ket"

    def __getitem__(self, k: int) -> NCPoly:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def normalized(self, sys: RelationSystem) -> "QSpinor":
        return QSpinor(tuple(normalize(c, sys) for c in self.components), self.copy, self.variance)


def native_spinor(copy: CopyId) -> QSpinor:
    """The ket ``(alpha, gamma)`` of a copy: ``(x, y)`` or ``(a, c)``."""
    return QSpinor(
        (NCPoly.gen(Generator(copy, FIRST)), NCPoly.gen(Generator(copy, SECOND))), copy, "ket"
    )


def raise_index(lower) -> tuple:
    """``v^a = v_b eps^{ba}``."""
    return tuple(sum((lower[b] * EPS_UPPER[b][a] for b in range(2)), NCPoly()) for a in range(2))


def lower_index(upper) -> tuple:
    """``v_a = v^b eps_{ba}``."""
    return tuple(sum((upper[b] * EPS_LOWER[b][a] for b in range(2)), NCPoly()) for a in range(2))


def _bar_upper(ket) -> tuple:
    return raise_index(tuple(star(c) for c in ket))


def _exchange(u, w, factor: LaurentPoly) -> list[NCPoly]:
    out = []
    for a in range(2):
        for b in range(2):
            rhs = NCPoly()
            for c in range(2):
                for d in range(2):
                    coef = _R[a][b][c][d]
                    if coef:
                        rhs = rhs + (w[c] * u[d]).scale(coef * factor)
            out.append(u[a] * w[b] - rhs)
    return out


def braid_relations(u, w) -> list[NCPoly]:
    """The eight braiding residuals for kets ``u`` (left) and ``w`` (right).

    ``u^a w^b - q^-1 R^{ab}_{cd} w^c u^d`` followed by
    ``u^a wbar^b - R^{ab}_{cd} wbar^c u^d``; all vanish for braided pairs.
    """
    return _exchange(u, w, Q_INV) + _exchange(u, _bar_upper(w), ONE)


def suq2_relations(copy: CopyId) -> list[NCPoly]:
    """Defining relations of one SU_q(2) copy, as polynomials equal to zero."""
    al = NCPoly.gen(Generator(copy, FIRST))
    ga = NCPoly.gen(Generator(copy, SECOND))
    al_s, ga_s = star(al), star(ga)
    return [
        al * ga - (ga * al).scale(Q),
        al * ga_s - (ga_s * al).scale(Q),
        ga * ga_s - ga_s * ga,
        ga_s * ga + al_s * al - NCPoly.scalar(1),
        al * al_s - al_s * al - (ga_s * ga).scale(ONE - Q * Q),
    ]


def _close_under_star(relations: list[NCPoly]) -> list[NCPoly]:
    return relations + [star(r) for r in relations]


def _solve(sys: RelationSystem, relations: list[NCPoly]) -> None:
    """Turn two-letter relations into directed rules and register them.

    Each pass substitutes known rules, then picks any relation with a
    single out-of-order word whose coefficient is a unit and solves for
    it.  Relations left with no unknown must reduce to zero.
    """
    pending = list(relations)
    while pending:
        progress = False
        rest = []
        for rel in pending:
            rel = _substitute(sys, rel)
            unknown = [w for w in rel._terms if len(w) == 2 and sys.is_reducible(*w)]
            if not unknown:
                if rel:
                    raise RewriteError(f"inconsistent relation left over: {rel} = 0")
                progress = True
                continue
            if len(unknown) == 1 and rel.coeff(unknown[0]).is_monomial():
                lhs = unknown[0]
                c = rel.coeff(lhs)
                rhs = (rel - NCPoly.word(lhs, c)).scale(-c.inverse())
                sys.register(lhs[0], lhs[1], rhs)
                progress = True
            else:
                rest.append(rel)
        if not progress:
            raise RewriteError(
                "cannot direct relations: " + "; ".join(str(r) for r in rest)
            )
        pending = rest


def _substitute(sys: RelationSystem, rel: NCPoly) -> NCPoly:
    out = NCPoly()
    for w, c in rel._terms.items():
        rule = sys.rules.get(tuple(w)) if len(w) == 2 else None
        out = out + (rule.scale(c) if rule is not None else NCPoly.word(w, c))
    return out


def _cross_relations(ci: CopyId, cj: CopyId, conjugates: str) -> list[NCPoly]:
    u = native_spinor(ci).components
    w = native_spinor(cj).components
    rels = braid_relations(u, w)
    if conjugates == "star":
        return _close_under_star(rels)
    # raised conjugate of u braided like a ket: q^-1 R with wbar, R with w
    ubar = _bar_upper(u)
    return rels + _exchange(ubar, w, ONE) + _exchange(ubar, _bar_upper(w), Q_INV)


def make_system(
    n_spin: int, n_sg: int, with_rotation: bool = False, conjugates: str = "star"
) -> RelationSystem:
    """Relation system for copies ``(S_1..S_n, SG_1..SG_m[, R])``.

    Every copy satisfies the SU_q(2) relations.  Each ordered pair of
    non-rotation copies (earlier ``i``, later ``j``) is braided with the
    R-matrix; the rotation copy commutes with everything else.

    ``conjugates`` fixes the cross rules for starred spin letters.
    ``"star"`` (default) takes the * images of the unstarred braid
    relations.  ``"braided"`` instead braids the raised conjugate spinor
    as a ket, with ``R`` against ``w`` and ``q^-1 R`` against ``wbar``;
    that table is confluent but the * map does not preserve it.
    """
    if n_spin < 0 or n_sg < 0:
        raise ValueError("copy counts must be non-negative")
    if conjugates not in ("star", "braided"):
        raise ValueError(f"unknown conjugate convention {conjugates!r}")
    copies = [CopyId(SPIN, k) for k in range(1, n_spin + 1)]
    copies += [CopyId(SG, k) for k in range(1, n_sg + 1)]
    if with_rotation:
        copies.append(CopyId(ROT, 1))
    sys = RelationSystem(copies, label=f"n_spin={n_spin} n_sg={n_sg} rotation={with_rotation} conjugates={conjugates}")

    for c in copies:
        _solve(sys, _close_under_star(suq2_relations(c)))

    braided = [c for c in copies if c.kind != ROT]
    for s, ci in enumerate(braided):
        for cj in braided[s + 1:]:
            _solve(sys, _cross_relations(ci, cj, conjugates))

    if with_rotation:
        rot = CopyId(ROT, 1)
        for c in braided:
            for g in sys.generators(c):
                for r in sys.generators(rot):
                    sys.register(g, r, NCPoly.word((r, g)))

    missing = sys.missing_rules()
    if missing:
        raise RewriteError(f"{len(missing)} reducible pairs have no rule, e.g. {missing[0]}")
    return sys


def braid_pair(u: QSpinor, w: QSpinor, sys: RelationSystem) -> list[NCPoly]:
    """Normalized braiding residuals of two kets; all zero iff braided."""
    if u.variance != "ket" or w.variance != "ket":
        raise ValueError("braid_pair expects two kets")
    return [normalize(r, sys) for r in braid_relations(u.components, w.components)]


class MissingRotationError(ValueError):
    pass


def rotation_matrix_entries(sys: RelationSystem) -> tuple:
    """``U_r = [[r_a, -q r_g*], [r_g, r_a*]]`` built from the rotation copy."""
    rots = sys.copies_of(ROT)
    if not rots:
        raise MissingRotationError("relation system has no rotation copy")
    rot = rots[0]
    ra = NCPoly.gen(Generator(rot, FIRST))
    rg = NCPoly.gen(Generator(rot, SECOND))
    return ((ra, star(rg).scale(-Q)), (rg, star(ra)))


def rotate_spinor(s: QSpinor, sys: RelationSystem) -> QSpinor:
    """``s'^a = (U_r)^a_b s^b`` with entries from the rotation copy."""
    if s.variance != "ket":
        raise ValueError("only kets transform by left multiplication")
    U = rotation_matrix_entries(sys)
    comps = tuple(
        normalize(U[a][0] * s[0] + U[a][1] * s[1], sys) for a in range(2)
    )
    return QSpinor(comps, s.copy, "ket")
