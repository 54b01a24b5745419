"""Build a spline basis, look at its design matrix, and price roughness.

Run:  python3 demos/01_basis_and_penalties.py
"""

import numpy as np

from fkspline import (
    PenaltyConfig,
    assemble_system,
    eval_design,
    make_basis_spec,
    penalty_matrix,
    variant_config,
)

# A cubic basis on [0, 1] with two interior knots has 4 + 2 = 6 functions.
spec = make_basis_spec(0.0, 1.0, order=4, interior_knots=[0.3, 0.7])
print(f"basis: order {spec.order}, interior knots {spec.interior_knots}, "
      f"{spec.n_basis} functions")

# Rows of the design matrix sum to one everywhere (partition of unity) and
# at most `order` consecutive entries are nonzero (local support).
t = np.linspace(0, 1, 9)
design = eval_design(spec, t)
print("\ndesign matrix rows at 9 points (rounded):")
for row in design.values:
    print("  " + "  ".join(f"{v:5.3f}" for v in row), f"| sum {row.sum():.12f}")

# Roughness matrices: entry (i, j) integrates the product of the l-th
# derivatives of basis functions i and j.  Order 0 is the Gram matrix of
# the basis itself; higher orders price wiggliness.
for l in range(3):
    r = penalty_matrix(spec, l).values
    print(f"\nderivative order {l}: trace {np.trace(r):10.3f}, "
          f"largest entry {np.abs(r).max():10.3f}")

# The hat-function special case has a closed form worth knowing: with two
# linear hats on [0, 1] the Gram matrix is [[1/3, 1/6], [1/6, 1/3]] and the
# first-derivative matrix is [[1, -1], [-1, 1]].
hats = make_basis_spec(0.0, 1.0, order=2, interior_knots=[])
print("\nlinear-hat Gram matrix:")
print(penalty_matrix(hats, 0).values)
print("linear-hat first-derivative matrix:")
print(penalty_matrix(hats, 1).values)

# The normal-equations matrix B'B + lambda1 R1 + lambda2 R2 comes with a
# certified interval containing its whole spectrum; the solver uses it to
# refuse systems that are numerically singular instead of returning junk.
grid = np.linspace(0, 1, 40)
system = assemble_system(eval_design(spec, grid), PenaltyConfig(lambda1=1e-3, lambda2=1e-2))
lo, hi = system.eigen_bounds
eigs = np.linalg.eigvalsh(system.values)
print(f"\nsystem spectrum in [{eigs.min():.4f}, {eigs.max():.4f}], "
      f"certified envelope [{lo:.4f}, {hi:.4f}]")

# Three penalty presets are used throughout: no penalty, a second-derivative
# penalty alone, and the double first-plus-second-derivative penalty.
for name in ("fs0", "fs1", "fs2"):
    cfg = variant_config(name)
    print(f"variant {name}: lambda1 = {cfg.lambda1:g}, lambda2 = {cfg.lambda2:g}")
