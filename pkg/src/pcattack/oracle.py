"""Search-based verification oracles for the closed-form attacks.

Randomized baselines, exhaustive grid search over the two-angle reduction,
finite-difference stationarity checks, and a from-the-definition principal
angle solver.  These never consult the closed forms they are used to check
(beyond evaluating the shared two-angle objective where that IS the search
space).

Reproducibility contract: randomness comes from a PCG64 stream seeded with
``cfg.seed``; trial i consumes the i-th fixed-size block of that uniform
stream, and normals are produced from uniforms by the Box-Muller transform.
Results are therefore independent of chunking and identical across runs,
and the best over trials is reduced with a lowest-index tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, OracleTooExpensive
from .linalg import _as_basis, _leading_from_svd, as_matrix, full_svd
from .rank_one import RankOneAttack, _check_eta, theta_from_angles
from .unconstrained import PerturbationMatrix

_CHUNK = 4096


@dataclass(frozen=True)
class SearchConfig:
    trials: int = 10_000
    seed: int = 0
    grid_resolution: int = 400
    refine_steps: int = 2

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.grid_resolution < 2:
            raise ValueError("grid_resolution must be >= 2")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be >= 0")


def _box_muller(uniforms: np.ndarray, count: int) -> np.ndarray:
    """Standard normals from uniform rows via Box-Muller; returns (rows, count)."""
    pairs = uniforms.shape[1] // 2
    u1 = uniforms[:, :pairs]
    u2 = uniforms[:, pairs:2 * pairs]
    radius = np.sqrt(-2.0 * np.log1p(-u1))   # u1 in [0, 1) keeps the log finite
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    return z[:, :count]


def normal_stream(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Standard normals drawn from the generator's uniform stream."""
    count = int(np.prod(shape))
    block = 2 * ((count + 1) // 2)
    z = _box_muller(rng.random((1, block)), count)
    return z.reshape(shape)


def portable_normal(seed: int, shape: tuple[int, ...]) -> np.ndarray:
    """Deterministic standard-normal array, stable across platforms."""
    return normal_stream(np.random.Generator(np.random.PCG64(seed)), shape)


def _trial_normals(rng: np.random.Generator, rows: int, count: int) -> np.ndarray:
    block = 2 * ((count + 1) // 2)
    return _box_muller(rng.random((rows, block)), count)


def _batched_theta(basis: np.ndarray, x: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Achieved Asimov distance for a stack of candidate perturbations."""
    k = basis.shape[1]
    u_hat = np.linalg.svd(x[None, :, :] + deltas)[0][:, :, :k]
    m = np.einsum("ji,bjl->bil", basis, u_hat)
    smallest = np.linalg.svd(m, compute_uv=False)[:, -1]
    return np.arccos(np.clip(smallest, 0.0, 1.0))


def random_rank_one(x, k: int, eta: float, cfg: SearchConfig) -> tuple[RankOneAttack, float]:
    """Best of ``cfg.trials`` random rank-one attacks at budget eta.

    Each trial draws standard-normal (a, b), normalizes b to unit length and
    rescales a so the perturbation energy equals eta exactly.
    """
    x = as_matrix(x)
    eta = _check_eta(eta)
    d, n = x.shape
    basis = _leading_from_svd(full_svd(x), k).columns
    rng = np.random.Generator(np.random.PCG64(cfg.seed))

    best_theta = -1.0
    best_a = np.zeros(d)
    best_b = np.zeros(n)
    done = 0
    while done < cfg.trials:
        rows = min(_CHUNK, cfg.trials - done)
        z = _trial_normals(rng, rows, d + n)
        a = z[:, :d]
        b = z[:, d:]
        b_norm = np.linalg.norm(b, axis=1, keepdims=True)
        a_norm = np.linalg.norm(a, axis=1, keepdims=True)
        b = b / b_norm
        a = a * (eta / a_norm)
        deltas = a[:, :, None] * b[:, None, :]
        theta = _batched_theta(basis, x, deltas)
        i = int(np.argmax(theta))
        if theta[i] > best_theta:
            best_theta = float(theta[i])
            best_a, best_b = a[i].copy(), b[i].copy()
        done += rows
    return RankOneAttack(a=best_a, b=best_b, regime=None), best_theta


def random_unconstrained(x, k: int, eta: float, cfg: SearchConfig) -> tuple[PerturbationMatrix, float]:
    """Best of ``cfg.trials`` dense Gaussian attacks scaled to energy eta."""
    x = as_matrix(x)
    eta = _check_eta(eta)
    d, n = x.shape
    basis = _leading_from_svd(full_svd(x), k).columns
    rng = np.random.Generator(np.random.PCG64(cfg.seed))

    best_theta = -1.0
    best_delta = np.zeros((d, n))
    done = 0
    while done < cfg.trials:
        rows = min(_CHUNK, cfg.trials - done)
        z = _trial_normals(rng, rows, d * n).reshape(rows, d, n)
        norms = np.linalg.norm(z, axis=(1, 2))
        deltas = z * (eta / norms)[:, None, None]
        theta = _batched_theta(basis, x, deltas)
        i = int(np.argmax(theta))
        if theta[i] > best_theta:
            best_theta = float(theta[i])
            best_delta = deltas[i].copy()
        done += rows
    pm = PerturbationMatrix(delta=best_delta, canonical_b=None,
                            fro_norm=float(np.linalg.norm(best_delta)))
    return pm, best_theta


def _golden_max(f, lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def grid_search_angles(sigma_k: float, sigma_k1: float, eta: float,
                       cfg: SearchConfig) -> tuple[float, float, float]:
    """Exhaustive maximization of the two-angle objective plus refinement.

    Scans a grid over [0, pi/2] x [pi/2, pi] and then runs coordinate-wise
    golden-section rounds inside the best cell.  Returns (alpha, beta,
    theta); ties resolve to the lowest grid index.
    """
    res = cfg.grid_resolution
    alphas = np.linspace(0.0, math.pi / 2.0, res)
    betas = np.linspace(math.pi / 2.0, math.pi, res)
    grid = theta_from_angles(sigma_k, sigma_k1, eta,
                             alphas[:, None], betas[None, :])
    flat = int(np.argmax(grid))
    ia, ib = divmod(flat, res)
    alpha, beta = float(alphas[ia]), float(betas[ib])
    theta = float(grid[ia, ib])

    best = (alpha, beta, theta)
    half = (math.pi / 2.0) / (res - 1)
    for _ in range(cfg.refine_steps):
        alpha, _ = _golden_max(
            lambda a: theta_from_angles(sigma_k, sigma_k1, eta, a, beta),
            max(0.0, alpha - half), min(math.pi / 2.0, alpha + half))
        beta, t = _golden_max(
            lambda b: theta_from_angles(sigma_k, sigma_k1, eta, alpha, b),
            max(math.pi / 2.0, beta - half), min(math.pi, beta + half))
        if t > best[2]:
            best = (alpha, beta, t)
        half *= 0.5
    return best


def _phi(sigma_k: float, sigma_k1: float, eta: float, alpha: float, beta: float) -> float:
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    ax = (sigma_k**2 - sigma_k1**2 + 2.0 * sigma_k * eta * ca * cb
          - 2.0 * sigma_k1 * eta * sa * sb + eta**2 * math.cos(2.0 * alpha))
    ay = 2.0 * eta * (sigma_k * sa * cb + sigma_k1 * ca * sb + eta * ca * sa)
    return 0.5 * math.atan2(ay, ax)


def stationarity_residual(sigma_k: float, sigma_k1: float, eta: float,
                          alpha: float, beta: float, step: float = 1e-5) -> float:
    """Max |central finite difference| of the rotation angle at (alpha, beta).

    Near zero only at stationary points of the two-angle objective.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    d_alpha = (_phi(sigma_k, sigma_k1, eta, alpha + step, beta)
               - _phi(sigma_k, sigma_k1, eta, alpha - step, beta)) / (2.0 * step)
    d_beta = (_phi(sigma_k, sigma_k1, eta, alpha, beta + step)
              - _phi(sigma_k, sigma_k1, eta, alpha, beta - step)) / (2.0 * step)
    return max(abs(d_alpha), abs(d_beta))


def _max_on_sphere(g: np.ndarray, cfg: SearchConfig) -> tuple[np.ndarray, float]:
    """Maximize ||g c|| over unit c in R^m (m <= 3) by search.

    A hemisphere grid seeds the search; great-circle coordinate ascent
    (golden-section along tangent arcs, re-orthonormalized each round)
    refines it without any pole pathology.
    """
    m = g.shape[1]
    if m == 1:
        c = np.array([1.0])
        return c, float(np.linalg.norm(g @ c))
    res = max(cfg.grid_resolution, 64)
    if m == 2:
        psis = np.linspace(0.0, math.pi, res)
        cands = np.stack([np.cos(psis), np.sin(psis)])
        span = math.pi / (res - 1)
    else:
        psis = np.linspace(0.0, 2.0 * math.pi, 2 * res)
        chis = np.linspace(0.0, math.pi / 2.0, res // 2 + 1)
        pp, cc = np.meshgrid(psis, chis, indexing="ij")
        cands = np.stack([np.sin(cc) * np.cos(pp),
                          np.sin(cc) * np.sin(pp),
                          np.cos(cc)]).reshape(3, -1)
        span = max(2.0 * math.pi / (2 * res - 1), (math.pi / 2.0) / max(1, res // 2))
    vals = np.linalg.norm(g @ cands, axis=0)
    best = int(np.argmax(vals))
    c = cands[:, best].copy()

    def fval(vec: np.ndarray) -> float:
        return float(np.linalg.norm(g @ vec))

    # Pattern-search step control: keep the arc span generous while the
    # iterate is still traveling, shrink only once moves stall.
    initial = 2.0 * span
    span = initial
    for _ in range(40):
        moved = 0.0
        for t in _tangent_basis(c):
            omega, _ = _golden_max(
                lambda w, t=t: fval(math.cos(w) * c + math.sin(w) * t),
                -span, span, iters=40)
            if omega != 0.0:
                c = math.cos(omega) * c + math.sin(omega) * t
                c /= np.linalg.norm(c)
            moved = max(moved, abs(omega))
        span = min(max(2.5 * moved, 0.35 * span), initial)
        if span < 1e-9:
            break
    return c, fval(c)


def _tangent_basis(c: np.ndarray) -> list[np.ndarray]:
    m = c.size
    basis = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        t = e - (c @ e) * c
        for q in basis:
            t -= (q @ t) * q
        nt = np.linalg.norm(t)
        if nt > 1e-6:
            basis.append(t / nt)
        if len(basis) == m - 1:
            break
    return basis


def _drop_direction(cols: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(cols) with ``direction`` projected out."""
    m = cols.shape[1]
    resid = cols - np.outer(direction, direction @ cols)
    kept = []
    for j in range(m):
        w = resid[:, j].copy()
        for q in kept:
            w -= (q @ w) * q
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            kept.append(w / nw)
        if len(kept) == m - 1:
            break
    return np.stack(kept, axis=1) if kept else np.zeros((cols.shape[0], 0))


def brute_force_principal_angles(a, b, cfg: SearchConfig) -> np.ndarray:
    """Principal angles from the recursive definition, by projected search.

    At each step the cosine is maximized over unit vectors in the remaining
    subspaces (the inner maximization over the second subspace is a
    projection; the outer one is an angle-grid search), then both subspaces
    are deflated.  Intended purely as a small-scale test oracle.
    """
    a = _as_basis(a)
    b = _as_basis(b)
    if a.subspace_dim != b.subspace_dim or a.ambient_dim != b.ambient_dim:
        raise InvalidDimension("bases must match in shape")
    if a.subspace_dim > 3 or a.ambient_dim > 6:
        raise OracleTooExpensive(
            f"brute force limited to k <= 3, d <= 6; got k={a.subspace_dim}, d={a.ambient_dim}")
    cols_a = a.columns.copy()
    cols_b = b.columns.copy()
    angles = []
    for _ in range(a.subspace_dim):
        g = cols_b.T @ cols_a
        c, best = _max_on_sphere(g, cfg)
        u = cols_a @ c
        w = cols_b.T @ u
        nw = np.linalg.norm(w)
        if nw > 1e-12:
            v = cols_b @ (w / nw)
        else:
            v = cols_b[:, 0]
        angles.append(math.acos(min(1.0, max(0.0, best))))
        cols_a = _drop_direction(cols_a, u)
        cols_b = _drop_direction(cols_b, v)
        if cols_a.shape[1] == 0 or cols_b.shape[1] == 0:
            break
    return np.sort(np.array(angles))
