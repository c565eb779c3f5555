"""Probability operators and their failure to commute away from q = 1.

Run with ``python3 demos/probabilities.py``.
"""
import math

from braidedsuq.coeff import lp_expand_eps
from braidedsuq.geom import spinor_assignment
from braidedsuq.ncalg import SG, SPIN, CopyId, render_poly
from braidedsuq.spinops import UP, DOWN, classical_eval, commutator, prob_op, vanishes_classically
from braidedsuq.suq2 import make_system

sys = make_system(2, 2)
p1, p2 = prob_op(1, UP, sys), prob_op(2, UP, sys)
print("P_up(1) =", render_poly(p1.value))

# With commuting numbers the operator is the ordinary Born probability.
device = spinor_assignment(CopyId(SG, 1), 0.0, 0.0)
for theta in (0.0, math.pi / 3, math.pi / 2, math.pi):
    asg = {**device, **spinor_assignment(CopyId(SPIN, 1), theta, 0.0)}
    value = classical_eval(p1.value, asg).real
    print(f"theta = {theta:5.3f}: P_up = {value:.6f}, (1 + cos theta)/2 = {(1 + math.cos(theta)) / 2:.6f}")

c = commutator(p1, p2, sys)
print(f"[P_up(1), P_up(2)] has {len(c)} terms; vanishes at q = 1: {vanishes_classically(c)}")
orders = sorted({min(k for k, v in enumerate(lp_expand_eps(coef, 3)) if v) for _, coef in c.items()})
print("lowest powers of eps = 1 - q appearing in its coefficients:", orders)
