"""Finite sections of exponential systems on [-pi, pi]^d.

With e_t(x) = (2 pi)^(-d/2) exp(i <x, t>), the inner product of two such
functions is real:

    <e_t, e_s> = prod_m sinc(pi (t_m - s_m)).

Everything here (Gram matrices, perturbation defects, analysis sections) is
assembled from that closed form, so no quadrature is involved.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal

from frametol.tolerance import DomainError, FrameRatio, omega_d

DENSE_MAX_ORDER = 512
RESIDUAL_RTOL = 1e-8
BOUND_RTOL = 1e-9


class SpectralConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def sinpi(u):
    """sin(pi u) with exact zeros at the integers."""
    u = np.asarray(u, dtype=float)
    n = np.rint(u)
    r = u - n  # exact for |u| < 2**52
    sign = np.where(np.fmod(n, 2.0) == 0.0, 1.0, -1.0)
    return sign * np.sin(np.pi * r)


def sinc_pi(u):
    """sinc(pi u) = sin(pi u) / (pi u), exactly 0 at nonzero integers."""
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    nz = u != 0.0
    out[nz] = sinpi(u[nz]) / (np.pi * u[nz])
    return out


@dataclass(frozen=True)
class NodeSet:
    """n frequency vectors in R^d, stored as an (n, d) array."""

    nodes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.nodes, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DomainError(f"nodes must be an (n, d) array with n, d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("node coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "nodes", arr)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def __len__(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class PerturbedSystem:
    base: NodeSet
    perturbed: NodeSet
    delta: float = field(init=False)

    def __post_init__(self) -> None:
        if self.base.nodes.shape != self.perturbed.nodes.shape:
            raise DomainError(
                f"shape mismatch: {self.base.nodes.shape} vs {self.perturbed.nodes.shape}"
            )
        diff = np.abs(self.perturbed.nodes - self.base.nodes)
        object.__setattr__(self, "delta", float(diff.max()))

    @property
    def dim(self) -> int:
        return self.base.dim

    def __len__(self) -> int:
        return len(self.base)


@dataclass(frozen=True)
class SpectralEstimate:
    lambda_min: float
    lambda_max: float
    method: str  # "dense" or "iterative"
    residual: float
    iterations: int


@dataclass(frozen=True)
class LemmaReport:
    delta: float
    bound_B: float
    exact_sup: float  # sqrt(lambda_max) of the difference Gram
    sampled_max: float  # max defect/||a|| over the random coefficient trials
    bound: float  # B (exp(pi d delta) - 1)
    slack: float  # exact_sup / bound, 0 when bound == 0
    holds: bool


@dataclass(frozen=True)
class FrameReport:
    d: int
    window_halfwidth: int
    interior_halfwidth: int
    delta: float
    sigma_min: tuple[float, ...]
    sigma_max: tuple[float, ...]
    interior_floor: float  # 1 - (exp(pi d delta) - 1)

    @property
    def worst_sigma_min(self) -> float:
        return min(self.sigma_min)


def cross_gram(left: NodeSet, right: NodeSet) -> np.ndarray:
    """Matrix of <e_s, e_t> for s in left, t in right."""
    if left.dim != right.dim:
        raise DomainError(f"dimension mismatch: {left.dim} vs {right.dim}")
    diff = left.nodes[:, None, :] - right.nodes[None, :, :]
    return np.prod(sinc_pi(diff), axis=-1)


def gram(nodes: NodeSet) -> np.ndarray:
    g = cross_gram(nodes, nodes)
    # mirror the upper triangle so symmetry is exact by construction
    upper = np.triu(g)
    return upper + np.triu(upper, 1).T


def difference_gram(system: PerturbedSystem) -> np.ndarray:
    """Gram matrix of the differences h_k - f_k."""
    g_tt = gram(system.base)
    g_ss = gram(system.perturbed)
    g_ts = cross_gram(system.base, system.perturbed)
    m = g_tt + g_ss - g_ts - g_ts.T
    return 0.5 * (m + m.T)


def spectral_extremes(matrix: np.ndarray, method: str | None = None) -> SpectralEstimate:
    """Smallest and largest eigenvalue of a real symmetric matrix.

    Orders up to DENSE_MAX_ORDER use a dense LAPACK solve restricted to the two
    extreme eigenpairs; larger ones (or ``method="iterative"``) run Lanczos
    with full reorthogonalization. Either way the reported residual is the
    larger of ||M v - lambda v|| over the two extreme pairs.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DomainError(f"expected a nonempty square matrix, got shape {m.shape}")
    scale = max(float(np.abs(m).max()), 1.0)
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    if method is None:
        method = "dense" if m.shape[0] <= DENSE_MAX_ORDER else "iterative"
    if method == "dense":
        return _dense_extremes(m)
    if method == "iterative":
        return _lanczos_extremes(m)
    raise DomainError(f"unknown method {method!r}")


def _residual(m: np.ndarray, lam: float, v: np.ndarray) -> float:
    return float(np.linalg.norm(m @ v - lam * v))


def _dense_extremes(m: np.ndarray) -> SpectralEstimate:
    n = m.shape[0]
    lo_w, lo_v = eigh(m, subset_by_index=[0, 0], driver="evr")
    hi_w, hi_v = eigh(m, subset_by_index=[n - 1, n - 1], driver="evr")
    res = max(_residual(m, lo_w[0], lo_v[:, 0]), _residual(m, hi_w[0], hi_v[:, 0]))
    return SpectralEstimate(float(lo_w[0]), float(hi_w[0]), "dense", res, 1)


def _lanczos_extremes(m: np.ndarray, rtol: float = 1e-11, check_every: int = 10) -> SpectralEstimate:
    n = m.shape[0]
    norm_est = float(np.linalg.norm(m, 1))
    if norm_est == 0.0:
        return SpectralEstimate(0.0, 0.0, "iterative", 0.0, 1)
    rng = np.random.default_rng(0)
    q = np.zeros((n, n + 1))
    alpha = np.zeros(n)
    beta = np.zeros(n)
    v = rng.standard_normal(n)
    q[:, 0] = v / np.linalg.norm(v)
    k = 0
    best = math.inf
    while True:
        w = m @ q[:, k]
        alpha[k] = q[:, k] @ w
        w -= q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        w -= q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        b = float(np.linalg.norm(w))
        k += 1
        if k == n:
            b = 0.0
        elif b <= 1e-12 * norm_est:
            # invariant subspace: restart in its orthogonal complement
            w = rng.standard_normal(n)
            for _ in range(2):
                w -= q[:, :k] @ (q[:, :k].T @ w)
            b = 0.0
            q[:, k] = w / np.linalg.norm(w)
        else:
            q[:, k] = w / b
        beta[k - 1] = b
        if k % check_every and k < n:
            continue
        theta, s = eigh_tridiagonal(alpha[:k], beta[: k - 1])
        est = np.abs(beta[k - 1] * s[-1, [0, -1]])
        best = min(best, float(est.max()))
        if est.max() <= rtol * norm_est or k == n:
            lo_v = q[:, :k] @ s[:, 0]
            hi_v = q[:, :k] @ s[:, -1]
            lo_v /= np.linalg.norm(lo_v)
            hi_v /= np.linalg.norm(hi_v)
            res = max(_residual(m, theta[0], lo_v), _residual(m, theta[-1], hi_v))
            if res > RESIDUAL_RTOL * norm_est:
                raise SpectralConvergenceError(
                    f"Lanczos residual {res:.3g} above certificate after {k} steps", res
                )
            return SpectralEstimate(float(theta[0]), float(theta[-1]), "iterative", res, k)


def upper_bound_B(nodes: NodeSet) -> float:
    """Best Bessel constant B of the finite system: sqrt(lambda_max(Gram))."""
    lam = spectral_extremes(gram(nodes)).lambda_max
    return math.sqrt(max(lam, 0.0))


def perturbation_defect(system: PerturbedSystem, coeffs) -> float:
    """|| sum_k a_k (h_k - f_k) || in L2 of the cube, from the closed-form Gram."""
    a = np.asarray(coeffs, dtype=complex)
    if a.shape != (len(system),):
        raise DomainError(f"expected {len(system)} coefficients, got shape {a.shape}")
    if not np.any(a):
        raise DomainError("coefficients must not all vanish")
    m = difference_gram(system)
    q = float(np.real(np.vdot(a, m @ a)))
    return math.sqrt(max(q, 0.0))


def lemma_bound(system: PerturbedSystem, bound_B: float) -> float:
    return bound_B * math.expm1(math.pi * system.dim * system.delta)


def lemma_certificate(system: PerturbedSystem, trials: int, seed: int) -> LemmaReport:
    """Check the perturbation bound B (e^{pi d delta} - 1) against the exact
    worst case and against ``trials`` random complex coefficient vectors."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    n = len(system)
    b = upper_bound_B(system.base)
    m = difference_gram(system)
    exact = math.sqrt(max(spectral_extremes(m).lambda_max, 0.0))
    sampled = 0.0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        q = float(np.real(np.vdot(a, m @ a)))
        sampled = max(sampled, math.sqrt(max(q, 0.0)) / float(np.linalg.norm(a)))
    bound = lemma_bound(system, b)
    limit = bound * (1.0 + BOUND_RTOL)
    holds = exact <= limit and sampled <= limit
    slack = exact / bound if bound > 0.0 else 0.0
    return LemmaReport(system.delta, b, exact, sampled, bound, slack, holds)


def random_system(rng: np.random.Generator, d: int, n: int, delta: float, spread: float = 1.0) -> PerturbedSystem:
    """Base nodes uniform in a box of side ~ spread * n**(1/d), perturbed by
    independent uniform vectors in [-delta, delta]^d."""
    side = spread * n ** (1.0 / d)
    base = rng.uniform(-side / 2, side / 2, size=(n, d))
    eps = rng.uniform(-delta, delta, size=(n, d))
    return PerturbedSystem(NodeSet(base), NodeSet(base + eps))


def lattice_window(d: int, halfwidth: int) -> np.ndarray:
    """Integer points of [-N, N]^d in lexicographic order, shape ((2N+1)^d, d)."""
    if d < 1 or halfwidth < 0:
        raise DomainError("need d >= 1 and halfwidth >= 0")
    axis = range(-halfwidth, halfwidth + 1)
    return np.array(list(itertools.product(axis, repeat=d)), dtype=float).reshape(-1, d)


def analysis_section(perturbed: NodeSet, window) -> np.ndarray:
    """Inner products of the perturbed exponentials with the lattice window.

    Row k, column m holds prod_j sinc(pi (tau_kj - m_j)).
    """
    w = np.asarray(window, dtype=float)
    if w.ndim == 1:
        w = w[:, None]
    if w.shape[0] == 0:
        raise DomainError("window must be nonempty")
    if len({tuple(p) for p in w}) != w.shape[0]:
        raise DomainError("window lattice points must be distinct")
    if not np.array_equal(w, np.rint(w)):
        raise DomainError("window points must be integer lattice points")
    return cross_gram(perturbed, NodeSet(w))


def singular_extremes(section: np.ndarray) -> tuple[float, float]:
    s = np.linalg.svd(section, compute_uv=False)
    return float(s.min()) if section.shape[0] >= section.shape[1] else 0.0, float(s.max())


def frame_margin_experiment(
    d: int,
    window_halfwidth: int,
    interior_halfwidth: int,
    delta: float,
    trials: int,
    seed: int,
) -> FrameReport:
    """Perturb the lattice [-N, N]^d and measure the analysis section against
    the interior window [-M, M]^d.

    The integer lattice is orthonormal (A = B = 1), so delta must stay below
    omega_d(d, rho=1) = ln 2 / (pi d).
    """
    N, M = window_halfwidth, interior_halfwidth
    if not 0 <= M < N:
        raise DomainError(f"need 0 <= M < N, got M={M}, N={N}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    limit = omega_d(d, FrameRatio(1.0, 1.0))
    if not 0.0 <= delta < limit:
        raise DomainError(f"delta must lie in [0, {limit:.6g}) for d={d}")
    base = lattice_window(d, N)
    interior = lattice_window(d, M)
    lows, highs = [], []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        eps = rng.uniform(-delta, delta, size=base.shape) if delta > 0 else 0.0
        lo, hi = singular_extremes(analysis_section(NodeSet(base + eps), interior))
        lows.append(lo)
        highs.append(hi)
    floor = 1.0 - math.expm1(math.pi * d * delta)
    return FrameReport(d, N, M, delta, tuple(lows), tuple(highs), floor)


def truncation_study(
    d: int, interior_halfwidth: int, margins, delta: float, seed: int
) -> list[tuple[int, float]]:
    """sigma_min of the section for several outer margins N - M.

    One perturbation is drawn for the widest window and restricted to the
    narrower ones, so the rows differ only by truncation.
    """
    M = interior_halfwidth
    margins = sorted(margins)
    if not margins or margins[0] < 1:
        raise DomainError("margins must be positive")
    limit = omega_d(d, FrameRatio(1.0, 1.0))
    if not 0.0 <= delta < limit:
        raise DomainError(f"delta must lie in [0, {limit:.6g}) for d={d}")
    widest = M + margins[-1]
    base = lattice_window(d, widest)
    eps = np.random.default_rng([seed, 0]).uniform(-delta, delta, size=base.shape)
    interior = lattice_window(d, M)
    out = []
    for margin in margins:
        keep = np.all(np.abs(base) <= M + margin, axis=1)
        lo, _ = singular_extremes(analysis_section(NodeSet(base[keep] + eps[keep]), interior))
        out.append((margin, lo))
    return out
