"""Named verification suites used by ``braidedsuq verify`` and the tests.

Each suite returns a :class:`SuiteResult` holding plain-dict records, so
results serialize to JSON unchanged.  Wall-clock time is kept in a
separate field and never inside the records.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .geom import (
    bound_rotation_elements,
    check_rotation,
    no_sharp_rotation_check,
    random_rotations,
    row_difference_identities,
    row_equality_derivation,
    spinor_assignment,
)
from .ncalg import (
    SG,
    SPIN,
    CopyId,
    NCPoly,
    RelationSystem,
    RewriteError,
    RewriteTrace,
    critical_pairs,
    normalize,
    render_poly,
    render_word,
    star,
)
from .spinops import (
    UP,
    DOWN,
    classical_eval,
    commutator,
    prob_op,
    probability_from_kets,
    vanishes_classically,
    verify_all_orders,
    verify_first_order,
)
from .suq2 import (
    braid_pair,
    braid_relations,
    make_system,
    native_spinor,
    rotate_spinor,
    suq2_relations,
)

__all__ = ["SuiteResult", "SUITES", "run_suite", "golden_braided_rules", "NO_SHARP_FLOOR"]

# Smallest max|E| over 1000 seeded rotations (seed 7) was 1.894; the
# check keeps a wide margin below that measured value.
NO_SHARP_FLOOR = 0.1


@dataclass
class SuiteResult:
    name: str
    passed: bool
    records: list = field(default_factory=list)
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "records": self.records}


def golden_braided_rules() -> list[str]:
    text = resources.files(__package__).joinpath("data", "braided_rules.txt").read_text()
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def _residuals(polys) -> list[str]:
    return [render_poly(p) for p in polys if p]


# -- suites ----------------------------------------------------------------

def suite_braiding(cfg) -> list[dict]:
    sys = make_system(1, 1, conjugates=cfg.get("conjugates", "star"))
    dump = set(sys.dump_rules())
    missing = [ln for ln in golden_braided_rules() if ln not in dump]
    records = [{"check": "golden-cross-rules", "missing": missing, "passed": not missing}]
    big = make_system(cfg["n_spin"], cfg["n_sg"], conjugates=cfg.get("conjugates", "star"))
    apparatus = [c for c in big.copies]
    for s, ci in enumerate(apparatus):
        for cj in apparatus[s + 1:]:
            res = _residuals(braid_pair(native_spinor(ci), native_spinor(cj), big))
            records.append({"check": "native-braiding", "copies": [str(ci), str(cj)], "residuals": res, "passed": not res})
    return records


def _monomial_multiple(a: NCPoly, b: NCPoly) -> bool:
    if not a or not b:
        return not a and not b
    w = next(iter(a.terms))
    cb = b.coeff(w)
    if not cb or not cb.is_monomial():
        return False
    return a == b.scale(a.coeff(w) * cb.inverse())


def suite_self_braiding(cfg) -> list[dict]:
    records = []
    for kind in (SPIN, SG):
        copy = CopyId(kind, 1)
        sys = make_system(1, 0) if kind == SPIN else make_system(0, 1)
        u = native_spinor(copy).components
        rels = braid_relations(u, u)
        rels = rels + [star(r) for r in rels]
        res = _residuals(normalize(r, sys) for r in rels)
        # every defining relation except the unit normalization appears
        targets = [r for k, r in enumerate(suq2_relations(copy)) if k != 3]
        found = [any(_monomial_multiple(t, r) for r in rels) for t in targets]
        records.append(
            {
                "check": "self-braiding",
                "copy": str(copy),
                "residuals": res,
                "relations_recovered": sum(found),
                "relations_expected": len(targets),
                "passed": not res and all(found),
            }
        )
    return records


def suite_properties(cfg) -> list[dict]:
    records = []
    for n in range(1, max(cfg["n_spin"], 3) + 1):
        sys = make_system(n, n, conjugates=cfg.get("conjugates", "star"))
        one = NCPoly.scalar(1)
        for i in range(1, n + 1):
            up, down = prob_op(i, UP, sys), prob_op(i, DOWN, sys)
            herm = normalize(star(up.value) - up.value, sys)
            comp = normalize(up.value + down.value - one, sys)
            records.append(
                {
                    "check": "hermiticity",
                    "system": n,
                    "apparatus": i,
                    "residual_terms": len(herm),
                    "residual": render_poly(herm),
                    "passed": not herm,
                }
            )
            records.append(
                {
                    "check": "completeness",
                    "system": n,
                    "apparatus": i,
                    "residual_terms": len(comp),
                    "residual": render_poly(comp),
                    "passed": not comp,
                }
            )
    return records


def suite_covariance(cfg) -> list[dict]:
    n_spin, n_sg = max(cfg["n_spin"], 1), max(cfg["n_sg"], 1)
    sys = make_system(n_spin, n_sg, with_rotation=True, conjugates=cfg.get("conjugates", "star"))
    records = []
    braided = [c for c in sys.copies if c.kind in (SPIN, SG)]
    rotated = {c: rotate_spinor(native_spinor(c), sys) for c in braided}
    for s, ci in enumerate(braided):
        for cj in braided[s:]:
            res = _residuals(braid_pair(rotated[ci], rotated[cj], sys))
            records.append({"check": "rotated-braiding", "copies": [str(ci), str(cj)], "residuals": res, "passed": not res})
    for i in range(1, min(n_spin, n_sg) + 1):
        u, w = CopyId(SPIN, i), CopyId(SG, i)
        diff = normalize(
            probability_from_kets(rotated[u].components, rotated[w].components)
            - probability_from_kets(native_spinor(u).components, native_spinor(w).components),
            sys,
        )
        records.append(
            {"check": "rotated-probability", "apparatus": i, "residual": render_poly(diff), "passed": not diff}
        )
    return records


def suite_all_orders(cfg) -> list[dict]:
    sys = make_system(2, 2, conjugates=cfg.get("conjugates", "star"))
    return [verify_all_orders(sys, 1, 2, s).as_dict() for s in ("leftmost", "rightmost")]


def suite_first_order(cfg) -> list[dict]:
    sys = make_system(2, 2, conjugates=cfg.get("conjugates", "star"))
    return [verify_first_order(i, j, sys, max_order=cfg.get("order", 2)).as_dict() for i, j in ((1, 2), (2, 1))]


def suite_classical_limit(cfg) -> list[dict]:
    n = max(cfg["n_spin"], 3)
    sys = make_system(n, n, conjugates=cfg.get("conjugates", "star"))
    records = []
    ups = {i: prob_op(i, UP, sys) for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            c = commutator(ups[i], ups[j], sys)
            records.append({"check": "commutator-at-q=1", "indices": [i, j], "terms": len(c), "passed": vanishes_classically(c)})
    err = 0.0
    device = {g: v for g, v in spinor_assignment(CopyId(SG, 1), 0.0, 0.0).items()}
    for theta in np.linspace(0.0, math.pi, 100):
        asg = dict(device)
        asg.update(spinor_assignment(CopyId(SPIN, 1), float(theta), 0.3))
        val = classical_eval(ups[1].value, asg, 1)
        err = max(err, abs(val - (1 + math.cos(theta)) / 2))
    records.append({"check": "born-rule-grid", "points": 100, "max_error": err, "passed": err <= 1e-12})
    return records


def suite_rotations(cfg) -> list[dict]:
    records = []
    rots = random_rotations(100, cfg.get("seed", 0))
    worst = max(abs(lhs - rhs) for R in rots for _, lhs, rhs in row_difference_identities(R))
    records.append({"check": "row-difference-identities", "rotations": 100, "max_error": worst, "passed": worst <= 1e-10})
    deriv = row_equality_derivation()
    records.append(
        {
            "check": "row-equality-derivation",
            "statements": deriv.statements,
            "passed": deriv.identities_hold and deriv.rows_equal,
        }
    )
    report = no_sharp_rotation_check(cfg.get("samples", 1000), cfg.get("seed", 0), NO_SHARP_FLOOR)
    records.append(report)
    for q in cfg.get("q_values", ("1", "99/100", "9/10")):
        rep = bound_rotation_elements(np.eye(3), "x", "x", "y", "z", q)
        ok = abs(rep.vector_part - 2) <= 1e-12 and rep.prefactor == 1 - rep.q
        records.append({"check": "aligned-bound", "q": str(rep.q), "bound": rep.bound, "passed": ok})
    return records


def random_words(sys: RelationSystem, count: int, max_len: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    gens = sys.generators()
    return [tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len))) for _ in range(count)]


def suite_confluence(cfg) -> list[dict]:
    sys = make_system(max(cfg["n_spin"], 2), max(cfg["n_sg"], 2), conjugates=cfg.get("conjugates", "star"))
    words = random_words(sys, cfg.get("words", 1000), 8, cfg.get("seed", 0))
    mismatched = []
    trace = RewriteTrace()
    violation = ""
    for w in words:
        p = NCPoly.word(w)
        try:
            left = normalize(p, sys, "leftmost", trace=trace)
        except RewriteError as exc:
            violation = str(exc)
            left = normalize(p, sys, "leftmost")
        right = normalize(p, sys, "rightmost")
        if left != right:
            mismatched.append(render_word(w))
    pairs = critical_pairs(sys)
    return [
        {
            "check": "strategy-agreement",
            "words": len(words),
            "mismatched": len(mismatched),
            "examples": mismatched[:5],
            "passed": not mismatched,
        },
        {
            "check": "measure-decrease",
            "rewrites": trace.steps,
            "checked": trace.checked,
            "violation": violation,
            "passed": not violation and trace.checked > 0,
        },
        {
            "check": "critical-pairs",
            "unresolved": len(pairs),
            "examples": [render_word(w) for w, _ in pairs[:5]],
            "passed": not pairs,
        },
    ]


SUITES = {
    "braiding": suite_braiding,
    "self-braiding": suite_self_braiding,
    "properties": suite_properties,
    "covariance": suite_covariance,
    "all-orders": suite_all_orders,
    "first-order": suite_first_order,
    "classical-limit": suite_classical_limit,
    "rotations": suite_rotations,
    "confluence": suite_confluence,
}


def run_suite(name: str, cfg: dict | None = None) -> SuiteResult:
    """Run one named suite; ``cfg`` keys: n_spin, n_sg, seed, samples, order, conjugates."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    base = {"n_spin": 2, "n_sg": 2, "seed": 0, "samples": 1000, "order": 2, "conjugates": "star"}
    base.update({k: v for k, v in (cfg or {}).items() if v is not None})
    t0 = time.perf_counter()
    records = SUITES[name](base)
    return SuiteResult(name, all(r["passed"] for r in records), records, time.perf_counter() - t0)
