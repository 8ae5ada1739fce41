"""Principal angles, the Asimov distance, and why they are the right metric.

The distance between two k-dimensional subspaces is summarized by k
principal angles; the largest of them (the Asimov distance) is what the
attacks in this package maximize.  This script shows the basic mechanics:
computation from singular values, agreement with a from-the-definition
search oracle, and invariance under rotations of everything.
"""

import numpy as np

from pcattack import (SearchConfig, asimov_distance, brute_force_principal_angles,
                      leading_subspace, pca_distance, principal_angles,
                      unitary_conjugate)

# Two planes in R^3 sharing one direction: angles are exactly {0, phi}.
phi = 0.6
a = np.eye(3)[:, :2]
b = np.column_stack([np.eye(3)[:, 0],
                     [0.0, np.cos(phi), np.sin(phi)]])
print("planes sharing a line:", np.round(principal_angles(a, b), 9),
      f"(phi = {phi})")
print("asimov distance:", round(asimov_distance(a, b), 9))

# The SVD-based values agree with a brute-force search straight from the
# recursive definition (maximize cosines with orthogonality constraints).
rng = np.random.default_rng(3)
qa, _ = np.linalg.qr(rng.standard_normal((5, 2)))
qb, _ = np.linalg.qr(rng.standard_normal((5, 2)))
svd_based = principal_angles(qa, qb)
searched = brute_force_principal_angles(
    qa, qb, SearchConfig(trials=1, seed=0, grid_resolution=200, refine_steps=4))
print("\nrandom pair of 2-dim subspaces of R^5:")
print("  via singular values:", np.round(svd_based, 9))
print("  via recursive search:", np.round(searched, 9))

# Rotating data and comparison matrix together changes nothing: subspace
# geometry only sees the spectrum and relative orientation.
x = rng.standard_normal((4, 6))
y = rng.standard_normal((4, 6))
p, _ = np.linalg.qr(rng.standard_normal((4, 4)))
t, _ = np.linalg.qr(rng.standard_normal((6, 6)))
before, _ = pca_distance(x, y, 2)
after, _ = pca_distance(unitary_conjugate(x, p, t), unitary_conjugate(y, p, t), 2)
print(f"\nrotation invariance: {before:.12f} vs {after:.12f}")

# PCA truncations with tied trailing singular values are flagged: the
# subspace is then not well defined and attacks must not trust it.
print("\ntied spectrum flag:", leading_subspace(np.eye(3), 2).ambiguous)
print("clean spectrum flag:", leading_subspace(np.diag([3.0, 2.0, 1.0]), 2).ambiguous)
