"""Principal component regression and its degradation under subspace attacks.

Features are stored with columns as samples.  The attack pipeline centers
the training features once, perturbs the centered matrix at a grid of
energy budgets, refits the regression on the perturbed features without
re-centering, and scores both the (perturbed) training fit and clean test
predictions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, ParseError, SingularFit, UndefinedR2
from .experiments import eta_scale
from .fileio import format_float
from .linalg import as_matrix, full_svd
from .oracle import normal_stream
from .rank_one import attack_rank_one
from .unconstrained import attack_unconstrained

PCR_STRATEGIES = ("rank_one", "unconstrained")
DEFAULT_ETA_RATIOS = tuple(np.linspace(0.08, 0.92, 12))


@dataclass(frozen=True)
class PcrModel:
    """k-component PCA regression: orthonormal components plus linear fit."""

    components: np.ndarray      # d x k, orthonormal columns
    coefficients: np.ndarray    # k weights on the component scores
    intercept: float
    feature_means: np.ndarray   # d, training means used for centering
    r2_train: float

    def predict(self, features) -> np.ndarray:
        features = as_matrix(features)
        if features.shape[0] != self.components.shape[0]:
            raise InvalidDimension("feature dimension does not match the model")
        scores = self.components.T @ (features - self.feature_means[:, None])
        return self.coefficients @ scores + self.intercept


@dataclass(frozen=True)
class RegressionReport:
    eta_ratio: float
    strategy: str
    r2_train: float
    r2_test: float


def r_squared(predicted, actual) -> float:
    """1 - ||y - yhat||^2 / ||y - ybar||^2; may be negative."""
    predicted = np.asarray(predicted, dtype=float).reshape(-1)
    actual = np.asarray(actual, dtype=float).reshape(-1)
    if predicted.size != actual.size or actual.size < 2:
        raise InvalidDimension("predicted and actual must share a length >= 2")
    total = float(np.sum((actual - actual.mean()) ** 2))
    if total == 0.0:
        raise UndefinedR2("actual values are constant")
    residual = float(np.sum((actual - predicted) ** 2))
    return 1.0 - residual / total


def _fit_on_centered(xc: np.ndarray, means: np.ndarray, targets: np.ndarray,
                     k: int) -> PcrModel:
    svd = full_svd(xc)
    if not 1 <= k <= svd.rank:
        raise InvalidDimension(f"k={k} exceeds the numerical rank {svd.rank}")
    components = svd.u[:, :k].copy()
    scores = components.T @ xc
    design = np.column_stack([scores.T, np.ones(targets.size)])
    coef, _, design_rank, _ = np.linalg.lstsq(design, targets, rcond=None)
    if design_rank < k + 1:
        raise SingularFit("component scores do not determine the fit")
    fitted = coef[:k] @ scores + coef[k]
    return PcrModel(components=components, coefficients=coef[:k],
                    intercept=float(coef[k]), feature_means=means.copy(),
                    r2_train=r_squared(fitted, targets))


def fit_pcr(features, targets, k: int) -> PcrModel:
    """Center features, keep k leading components, least-squares the targets."""
    features = as_matrix(features)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    if targets.size != features.shape[1]:
        raise InvalidDimension("one target per sample column is required")
    means = features.mean(axis=1)
    return _fit_on_centered(features - means[:, None], means, targets, k)


def attack_pcr(features, targets, k: int, eta_grid=DEFAULT_ETA_RATIOS,
               strategy: str = "unconstrained", split_seed: int = 0,
               split_fraction: float = 0.8) -> list[RegressionReport]:
    """Refit PCR on attacked training features across a budget-ratio grid.

    Ratios are relative to the training spectrum (see ``eta_scale``).  The
    targets are never modified; test features stay clean and are centered
    with the training means.
    """
    if strategy not in PCR_STRATEGIES:
        raise InvalidDimension(f"strategy must be one of {PCR_STRATEGIES}")
    features = as_matrix(features)
    targets = np.asarray(targets, dtype=float).reshape(-1)
    n = features.shape[1]
    if targets.size != n:
        raise InvalidDimension("one target per sample column is required")
    if not 0.0 < split_fraction < 1.0:
        raise InvalidDimension("split_fraction must be in (0, 1)")
    n_train = int(round(split_fraction * n))
    if n_train < 2 or n - n_train < 2:
        raise InvalidDimension("both split halves need at least two samples")

    perm = np.random.Generator(np.random.PCG64(split_seed)).permutation(n)
    train, test = perm[:n_train], perm[n_train:]
    x_train, y_train = features[:, train], targets[train]
    x_test, y_test = features[:, test], targets[test]
    means = x_train.mean(axis=1)
    xc = x_train - means[:, None]
    scale = eta_scale(xc, k)

    reports = []
    for ratio in sorted(float(r) for r in eta_grid):
        eta = ratio * scale
        if eta == 0.0:
            delta = np.zeros_like(xc)
        elif strategy == "rank_one":
            attack, _ = attack_rank_one(xc, k, eta)
            delta = attack.delta
        else:
            pm, _ = attack_unconstrained(xc, k, eta)
            delta = pm.delta
        model = _fit_on_centered(xc + delta, means, y_train, k)
        reports.append(RegressionReport(
            eta_ratio=ratio,
            strategy=strategy,
            r2_train=model.r2_train,
            r2_test=r_squared(model.predict(x_test), y_test),
        ))
    return reports


def synthetic_collinear(seed: int, d: int = 20, n: int = 40, n_factors: int = 4,
                        noise: float = 0.35) -> tuple[np.ndarray, np.ndarray]:
    """Collinear benchmark: few strong latent factors plus dense noise.

    The target loads mostly on the weakest retained principal direction, so
    attacks on the k = n_factors subspace degrade it measurably and
    monotonically.  Stands in for spectroscopy-style data in CI.
    """
    if n_factors < 1 or n_factors > min(d, n) - 1:
        raise InvalidDimension("n_factors must leave room below min(d, n)")
    rng = np.random.Generator(np.random.PCG64(seed))
    loadings = normal_stream(rng, (d, n_factors))
    factors = normal_stream(rng, (n_factors, n))
    features = loadings @ factors + noise * normal_stream(rng, (d, n))
    centered = features - features.mean(axis=1, keepdims=True)
    svd = full_svd(centered)
    scores = (svd.u[:, :n_factors].T @ centered) / svd.sigma[:n_factors, None]
    weights = np.full(n_factors, 0.6)
    weights[-1] = 2.2
    targets = weights @ scores + 0.004 * normal_stream(rng, (n,))
    return features, targets


def load_feature_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Samples as rows, last column the target; features return transposed.

    A single leading header line is skipped when it contains any
    non-numeric cell.
    """
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    rows = []
    width = None
    for lineno, line in enumerate(raw, start=1):
        text = line.strip()
        if not text:
            continue
        cells = text.split(",")
        try:
            parsed = [float(c) for c in cells]
        except ValueError:
            if not rows and width is None:
                width = len(cells)     # header line fixes the expected width
                continue
            raise ParseError(f"{path}:{lineno}: non-numeric cell") from None
        if width is None:
            width = len(parsed)
        if len(parsed) != width:
            raise ParseError(f"{path}:{lineno}: ragged row "
                             f"({len(parsed)} cells, expected {width})")
        rows.append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    if width < 2:
        raise ParseError(f"{path}: need at least one feature column plus a target")
    data = np.array(rows, dtype=float)
    return data[:, :-1].T.copy(), data[:, -1].copy()


def write_regression_csv(reports, path) -> None:
    lines = ["eta_ratio,strategy,r2_train,r2_test"]
    for rep in reports:
        lines.append(",".join([
            format_float(rep.eta_ratio),
            rep.strategy,
            format_float(rep.r2_train),
            format_float(rep.r2_test),
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
