"""Uncertainty bounds on rotation-matrix elements for seeded random rotations.

Run with ``python3 demos/rotation_bounds.py``.
"""
from fractions import Fraction

import numpy as np

from braidedsuq.geom import bound_rotation_elements, e_tensor, no_sharp_rotation_check, random_rotations

q = Fraction(99, 100)
rep = bound_rotation_elements(np.eye(3), "x", "x", "y", "z", q)
print(f"aligned frame, q = {q}: bound = ({rep.prefactor}) * {rep.vector_part:g} = {rep.bound:g}")

print("largest |E| for a few random rotations:")
for n, R in enumerate(random_rotations(5, seed=7)):
    E = np.abs(e_tensor(R))
    idx = np.unravel_index(int(np.argmax(E)), E.shape)
    print(f"  sample {n}: max|E| = {E[idx]:.4f} at {''.join('xyz'[i] for i in idx)}")

report = no_sharp_rotation_check(1000, seed=7)
print(f"over 1000 rotations the smallest max|E| is {report['min_max_abs_E']:.4f}, so no rotation is sharp")
print("symbolic argument:", "first and third rows equal" if report["rows_equal"] else "inconclusive")
