"""Tour of the closed-form rank-one attacks across the three spectral regimes.

A rank-one perturbation a b^T is the cheapest structured attack: it covers
editing one sample, inserting one sample, or deleting one feature.  This
script builds one matrix per regime, attacks it at a few budgets, and shows
that the achieved rotation of the PCA subspace matches the predicted law.
"""

import numpy as np

from pcattack import attack_rank_one, full_svd, synth_gaussian, synth_low_rank


def show(title, x, k, etas):
    svd = full_svd(x)
    print(f"\n=== {title} ===")
    print(f"shape {x.shape}, numerical rank {svd.rank}, "
          f"sigma = {np.round(svd.sigma, 4)}")
    print(f"{'eta':>8} {'regime':<16} {'theta_pred':>12} {'theta_ach':>12} {'|diff|':>9}")
    for eta in etas:
        attack, report = attack_rank_one(x, k, float(eta))
        diff = abs(report.theta_predicted - report.theta_achieved)
        print(f"{eta:8.4f} {report.regime.value:<16} "
              f"{report.theta_predicted:12.8f} {report.theta_achieved:12.8f} {diff:9.2e}")


# 1. Full column rank, k = rank = n < d.  The law bends the weakest
#    direction: theta = arcsin(eta / sigma_n), then pi/2 once eta > sigma_n.
x_full = synth_gaussian(6, 4, seed=23)
sigma_n = full_svd(x_full).sigma[-1]
show("full column rank (k = n = 4, d = 6)", x_full, 4,
     sigma_n * np.array([0.25, 0.5, 0.9, 1.2]))

# 2. Rank-deficient data with k = rank.  Same arcsin law, driven by sigma_k.
x_low = synth_low_rank(5, 5, 3, seed=11)
sigma_k = full_svd(x_low).sigma[2]
show("rank-deficient (rank = k = 3)", x_low, 3,
     sigma_k * np.array([0.25, 0.5, 0.9, 1.2]))

# 3. k below the rank.  The attack mixes the k-th and (k+1)-th singular
#    directions at stationary angles; the threshold is the spectral gap.
x_gen = synth_gaussian(5, 5, seed=29)
svd = full_svd(x_gen)
gap = svd.sigma[2] - svd.sigma[3]
show("k below rank (k = 3, rank = 5)", x_gen, 3,
     gap * np.array([0.25, 0.5, 0.9, 1.1]))

print("\nEvery achieved angle is recomputed by running PCA on the perturbed")
print("matrix; the closed forms predict it to machine precision.")
