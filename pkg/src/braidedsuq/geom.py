"""Direction operators, uncertainty bounds and the rotation E-tensor.

Axis indices are encoded ``x, y, z -> 0, 1, 2`` and the Levi-Civita
symbol has ``eps[0, 1, 2] = +1``.  Everything numeric here is plain
double precision; the bound prefactors ``(1 - q)/4`` and ``(1 - q)`` are
kept as exact fractions and only the geometric factor is a float.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coeff import GaussRational, LaurentPoly
from .ncalg import FIRST, SECOND, SG, SPIN, CopyId, Generator, NCPoly, star

__all__ = [
    "AXES",
    "DirectionVector",
    "BoundReport",
    "RowEqualityResult",
    "direction_components",
    "angles_to_direction",
    "spinor_assignment",
    "check_rotation",
    "levi_civita",
    "bound_probabilities",
    "bound_rotation_elements",
    "e_tensor",
    "row_difference_identities",
    "random_rotations",
    "rotation_from_seed",
    "sample_seeds",
    "no_sharp_rotation_check",
    "row_equality_derivation",
    "classical_protocol",
    "protocol_to_rotation",
    "sweep",
    "SWEEP_HEADER",
]

AXES = "xyz"
UNIT_TOL = 1e-12
ROT_TOL = 1e-10
SWEEP_HEADER = ("sample", "seed", "q", "i", "j", "k", "l", "bound", "maxE")


# -- direction operators ---------------------------------------------------

def direction_components(copy: CopyId, kind: str | None = None) -> list[NCPoly]:
    """Leading-order direction operator of a spin or device copy.

    ``(al ga* + ga al*, i(ga al* - al ga*), 1 - 2 ga ga*)`` with
    ``(al, ga) = (x, y)`` for a spin copy and ``(a, c)`` for a device.
    """
    kind = copy.kind if kind is None else kind
    if kind not in (SPIN, SG) or copy.kind != kind:
        raise ValueError(f"direction operators need a spin or device copy, got {copy} as {kind!r}")
    al = NCPoly.gen(Generator(copy, FIRST))
    ga = NCPoly.gen(Generator(copy, SECOND))
    al_s, ga_s = star(al), star(ga)
    i_unit = LaurentPoly.const(GaussRational(0, 1))
    return [
        al * ga_s + ga * al_s,
        (ga * al_s - al * ga_s).scale(i_unit),
        NCPoly.scalar(1) - (ga * ga_s).scale(2),
    ]


@dataclass(frozen=True)
class DirectionVector:
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, v) -> "DirectionVector":
        v = np.asarray(v, dtype=float)
        if v.shape != (3,):
            raise ValueError("direction vectors have three components")
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def axis(cls, name: str) -> "DirectionVector":
        v = np.zeros(3)
        v[AXES.index(name)] = 1.0
        return cls.from_array(v)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol


def angles_to_direction(theta: float, omega: float) -> DirectionVector:
    """``(sin th cos om, sin th sin om, cos th)`` for th in [0, pi], om in [0, 2 pi]."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta={theta} outside [0, pi]")
    if not 0.0 <= omega <= 2 * math.pi:
        raise ValueError(f"omega={omega} outside [0, 2 pi]")
    st = math.sin(theta)
    return DirectionVector(st * math.cos(omega), st * math.sin(omega), math.cos(theta))


def spinor_assignment(copy: CopyId, theta: float, omega: float) -> dict:
    """Numeric values of a copy's letters pointing along ``(theta, omega)``.

    ``al = cos(th/2)`` and ``ga = sin(th/2) exp(-i om)``; with this phase
    convention the direction operator evaluates to the vector returned by
    :func:`angles_to_direction`.
    """
    al = complex(math.cos(theta / 2))
    ga = math.sin(theta / 2) * complex(math.cos(omega), -math.sin(omega))
    out = {Generator(copy, FIRST): al, Generator(copy, SECOND): ga}
    out.update({g.toggled(): v.conjugate() for g, v in list(out.items())})
    return out


# -- rotations -------------------------------------------------------------

def check_rotation(R, tol: float = ROT_TOL) -> np.ndarray:
    """Return ``R`` as a float array, or raise if it is not in SO(3)."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got shape {R.shape}")
    err = np.max(np.abs(R.T @ R - np.eye(3)))
    if err > tol:
        raise ValueError(f"matrix is not orthogonal (max |R^T R - 1| = {err:.3g})")
    det = np.linalg.det(R)
    if abs(det - 1.0) > tol:
        raise ValueError(f"determinant {det:.6g} is not +1")
    return R


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for p in itertools.permutations(range(3)):
        eps[p] = np.linalg.det(np.eye(3)[list(p)])
    return eps


_EPS = levi_civita()


def _axis(k) -> int:
    if isinstance(k, str):
        if k not in AXES:
            raise ValueError(f"unknown axis {k!r}")
        return AXES.index(k)
    if k not in (0, 1, 2):
        raise ValueError(f"axis index {k} outside 0..2")
    return int(k)


# -- bounds ----------------------------------------------------------------

@dataclass
class BoundReport:
    """Right-hand side of an uncertainty bound: ``prefactor * vector_part``."""

    indices: tuple
    q: Fraction
    prefactor: Fraction
    vector_part: float
    inputs: dict = field(default_factory=dict)

    @property
    def bound(self) -> float:
        return float(self.prefactor) * self.vector_part

    def as_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "q": str(self.q),
            "prefactor": str(self.prefactor),
            "vector_part": self.vector_part,
            "bound": self.bound,
            "inputs": self.inputs,
        }


def _q(q) -> Fraction:
    q = Fraction(q)
    if not 0 < q <= 1:
        raise ValueError(f"q={q} outside (0, 1]")
    return q


def _unit(v, name: str) -> np.ndarray:
    arr = v.as_array() if isinstance(v, DirectionVector) else np.asarray(v, dtype=float)
    if abs(np.linalg.norm(arr) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} is not a unit vector")
    return arr


def bound_probabilities(n_i, m_i, n_j, m_j, q) -> BoundReport:
    """``(1-q)/4 |(m_i+m_j).(n_i x n_j) - (n_i+n_j).(m_i x m_j)|``."""
    q = _q(q)
    ni, mi, nj, mj = (_unit(v, name) for v, name in ((n_i, "n_i"), (m_i, "m_i"), (n_j, "n_j"), (m_j, "m_j")))
    vec = (mi + mj) @ np.cross(ni, nj) - (ni + nj) @ np.cross(mi, mj)
    return BoundReport(
        ("i", "j"),
        q,
        (1 - q) / 4,
        float(abs(vec)),
        {"n_i": ni.tolist(), "m_i": mi.tolist(), "n_j": nj.tolist(), "m_j": mj.tolist()},
    )


def bound_rotation_elements(R, i, j, k, l, q) -> BoundReport:
    """``(1-q) |(e_j+e_l).(n_i x n_k) - (n_i+n_k).(e_j x e_l)|``, ``n_i`` = column i of R."""
    q = _q(q)
    R = check_rotation(R)
    i, j, k, l = (_axis(v) for v in (i, j, k, l))
    e = np.eye(3)
    ni, nk = R[:, i], R[:, k]
    vec = (e[j] + e[l]) @ np.cross(ni, nk) - (ni + nk) @ np.cross(e[j], e[l])
    return BoundReport((i, j, k, l), q, 1 - q, float(abs(vec)), {"R": R.tolist()})


def e_tensor(R, check: bool = True) -> np.ndarray:
    """The 81 values ``E[i,j,k,l]`` for a rotation ``R``.

    Computed as ``eps_ikm (R_jm + R_lm) - eps_ajl (R_ak + R_ai)``.  With
    ``check`` the quadratic form ``eps_jbc R_bi R_ck + eps_lbc R_bi R_ck - ...``
    is evaluated too and the two must agree to 1e-10.
    """
    R = check_rotation(R)
    lin = np.einsum("ikm,jm->ijk", _EPS, R)[:, :, :, None] + np.einsum("ikm,lm->ikl", _EPS, R)[:, None, :, :]
    tail = np.einsum("ajl,ak->jkl", _EPS, R)[None, :, :, :] + np.einsum("ajl,ai->ijl", _EPS, R)[:, :, None, :]
    E = lin - tail
    if check:
        quad_j = np.einsum("jbc,bi,ck->ijk", _EPS, R, R)
        quad_l = np.einsum("lbc,bi,ck->ikl", _EPS, R, R)
        E2 = quad_j[:, :, :, None] + quad_l[:, None, :, :] - tail
        err = np.max(np.abs(E - E2))
        if err > ROT_TOL:
            raise ValueError(f"E-tensor forms disagree by {err:.3g}")
    return E


def row_difference_identities(R) -> list[tuple[str, float, float]]:
    """The three E-differences tied to row 1 minus row 3 of ``R``.

    Returns ``(label, lhs, rhs)`` triples.
    """
    R = check_rotation(R)
    E = e_tensor(R)
    x, y, z = 0, 1, 2
    return [
        ("E_yxzx - E_xyxx = 2(R_xx - R_zx)", E[y, x, z, x] - E[x, y, x, x], 2 * (R[x, x] - R[z, x])),
        ("E_xxzx - E_yxyy = -2(R_xy - R_zy)", E[x, x, z, x] - E[y, x, y, y], -2 * (R[x, y] - R[z, y])),
        ("E_xxyx - E_zyzx = 2(R_xz - R_zz)", E[x, x, y, x] - E[z, y, z, x], 2 * (R[x, z] - R[z, z])),
    ]


def sample_seeds(samples: int, seed: int) -> list[int]:
    """Per-sample seeds derived from one master seed.

    Sample ``k`` always gets the same seed, whatever order samples are
    processed in.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(samples, dtype=np.uint64)]


def rotation_from_seed(sample_seed: int) -> np.ndarray:
    """Uniform rotation from a normalized quaternion of four standard normals."""
    w, x, y, z = np.random.default_rng(sample_seed).standard_normal(4)
    n = math.sqrt(w * w + x * x + y * y + z * z)
    w, x, y, z = w / n, x / n, y / n, z / n
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_rotations(samples: int, seed: int) -> np.ndarray:
    return np.stack([rotation_from_seed(s) for s in sample_seeds(samples, seed)])


# -- no sharp rotation ----------------------------------------------------

@dataclass
class RowEqualityResult:
    identities_hold: bool
    rows_equal: bool
    determinant: object
    statements: list


def row_equality_derivation() -> RowEqualityResult:
    """Symbolic version of the argument that some E must be nonzero.

    Over nine commuting symbols ``R_ab`` the three E-differences reduce
    to multiples of row 1 minus row 3.  Setting them to zero forces the
    first and third rows to coincide, so ``det R = 0``.
    """
    import sympy as sp

    R = sp.Matrix(3, 3, lambda a, b: sp.Symbol(f"R_{AXES[a]}{AXES[b]}"))
    eps = sp.LeviCivita

    def E(i, j, k, l):
        return sum(eps(i, k, m) * (R[j, m] + R[l, m]) for m in range(3)) - sum(
            eps(a, j, l) * (R[a, k] + R[a, i]) for a in range(3)
        )

    x, y, z = 0, 1, 2
    diffs = [
        (E(y, x, z, x) - E(x, y, x, x), 2 * (R[x, x] - R[z, x])),
        (E(x, x, z, x) - E(y, x, y, y), -2 * (R[x, y] - R[z, y])),
        (E(x, x, y, x) - E(z, y, z, x), 2 * (R[x, z] - R[z, z])),
    ]
    identities_hold = all(sp.expand(lhs - rhs) == 0 for lhs, rhs in diffs)
    sol = sp.solve([lhs for lhs, _ in diffs], [R[z, x], R[z, y], R[z, z]], dict=True)
    rows_equal = len(sol) == 1 and all(sp.simplify(R[z, b].subs(sol[0]) - R[x, b]) == 0 for b in range(3))
    det = sp.simplify(R.subs(sol[0]).det()) if sol else None
    statements = [f"{sp.sstr(lhs)} = {sp.sstr(rhs)}" for lhs, rhs in diffs]
    if rows_equal:
        statements.append("all three vanish => R_z. = R_x. (first and third rows equal)")
        statements.append(f"det R = {det}")
    return RowEqualityResult(identities_hold, rows_equal, det, statements)


def no_sharp_rotation_check(samples: int, seed: int, floor: float = 0.1) -> dict:
    """Every sampled rotation has some ``|E_ijkl|`` above ``floor``.

    Returns a plain report dict with the smallest per-sample maximum and
    the symbolic row-equality result.
    """
    seeds = sample_seeds(samples, seed)
    maxima = np.array([np.max(np.abs(e_tensor(rotation_from_seed(s)))) for s in seeds])
    worst = int(np.argmin(maxima))
    derivation = row_equality_derivation()
    passed = bool(np.all(maxima > floor)) and derivation.rows_equal and derivation.identities_hold
    return {
        "check": "rotations",
        "samples": samples,
        "seed": seed,
        "floor": floor,
        "min_max_abs_E": float(maxima[worst]),
        "worst_sample": worst,
        "worst_seed": seeds[worst],
        "identity_max_abs_E": float(np.max(np.abs(e_tensor(np.eye(3))))),
        "rows_equal": derivation.rows_equal,
        "determinant": str(derivation.determinant),
        "passed": passed,
    }


# -- classical protocol ----------------------------------------------------

def classical_protocol(R) -> np.ndarray:
    """Up-outcome probabilities ``p_ij = (1 + R_ij)/2``."""
    return (1.0 + check_rotation(R)) / 2.0


def protocol_to_rotation(p) -> np.ndarray:
    """Inverse of :func:`classical_protocol`: ``R = 2p - 1``, checked to be in SO(3)."""
    p = np.asarray(p, dtype=float)
    R = 2.0 * p - 1.0
    try:
        return check_rotation(R)
    except ValueError as exc:
        raise ValueError(f"probability table does not come from a rotation: {exc}") from None


# -- sweep -----------------------------------------------------------------

def sweep(samples: int, seed: int, q, indices: Sequence | None = None) -> list[dict]:
    """One row per sampled rotation with the rotation-element bound.

    With ``indices=None`` each row reports the index tuple where ``|E|`` is
    largest; otherwise the given ``(i, j, k, l)`` is used throughout.
    """
    q = _q(q)
    rows = []
    for n, s in enumerate(sample_seeds(samples, seed)):
        R = rotation_from_seed(s)
        E = np.abs(e_tensor(R))
        if indices is None:
            idx = np.unravel_index(int(np.argmax(E)), E.shape)
        else:
            idx = tuple(_axis(v) for v in indices)
        rep = bound_rotation_elements(R, *idx, q)
        rows.append(
            {
                "sample": n,
                "seed": s,
                "q": str(q),
                "i": AXES[idx[0]],
                "j": AXES[idx[1]],
                "k": AXES[idx[2]],
                "l": AXES[idx[3]],
                "bound": rep.bound,
                "maxE": float(np.max(E)),
            }
        )
    return rows
