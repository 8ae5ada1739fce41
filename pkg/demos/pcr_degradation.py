"""How subspace attacks poison principal component regression.

PCR projects features onto their k leading principal components before
regressing.  An attacker who perturbs the training features can rotate that
subspace; the regression is then fit in the wrong coordinates and its
accuracy on clean test data collapses.

The benchmark is a collinear synthetic dataset (20 features, 40 samples,
4 latent factors) whose target depends mostly on the weakest retained
component, mimicking the fragile end of a spectroscopy-style calibration.
"""

import pathlib

import numpy as np

from pcattack import attack_pcr, fit_pcr, synthetic_collinear, write_regression_csv
from pcattack.pcr import DEFAULT_ETA_RATIOS

features, targets = synthetic_collinear(seed=0)
model = fit_pcr(features, targets, k=4)
print(f"clean fit: r2_train = {model.r2_train:.5f}")

grid = list(DEFAULT_ETA_RATIOS)
reports = {}
for strategy in ("rank_one", "unconstrained"):
    reports[strategy] = attack_pcr(features, targets, 4, grid, strategy,
                                   split_seed=1000)

out = pathlib.Path(__file__).with_suffix(".csv")
write_regression_csv(reports["rank_one"] + reports["unconstrained"], out)
print(f"wrote {out}\n")

print(f"{'eta/gap':>8} | {'r1 train':>9} {'r1 test':>9} | {'wr train':>9} {'wr test':>9}")
for r1, wr in zip(reports["rank_one"], reports["unconstrained"]):
    marker = "  <- past 1/sqrt(2)" if r1.eta_ratio > 1 / np.sqrt(2) else ""
    print(f"{r1.eta_ratio:8.3f} | {r1.r2_train:9.5f} {r1.r2_test:9.5f} "
          f"| {wr.r2_train:9.5f} {wr.r2_test:9.5f}{marker}")

print("\nthe unconstrained attack crosses its pi/2 threshold at")
print("eta/gap = 1/sqrt(2) ~ 0.707: the retained component is replaced")
print("outright and test accuracy falls off a cliff.")
