"""Numerical minimization of the distance functional.

This is the independent oracle against which every closed-form result in
the package is checked: damped Newton steps on the exact analytic Hessian
with a backtracking line search, run from one or many starting points.

The gauge flat directions (compensating per-qubit rescalings) make the
curvature matrix singular; a damping floor proportional to its trace
regularizes them, and an optional exact gauge fix rescales the answer so
all per-qubit norms agree without changing the product state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainError, MultistartError, NumericalError
from .hessian import build_hessian
from .states import ProductParams, TargetState

DAMPING_FLOOR_REL = 1e-10
MIN_INIT_PAIR_NORM = 1e-3


@dataclass
class OptimOptions:
    """Knobs for `minimize` and `multistart`.

    step_init is the initial Levenberg damping relative to the trace of the
    curvature matrix; seed_list supplies one RNG seed per multistart run.
    """

    max_iter: int = 500
    grad_tol: float = 1e-9
    step_init: float = 1e-2
    seed_list: list[int] = field(default_factory=list)
    gauge_fix: bool = True

    def __post_init__(self):
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.grad_tol <= 0:
            raise DomainError(f"grad_tol must be positive, got {self.grad_tol}")


@dataclass(frozen=True)
class Extremum:
    """A stationary point candidate returned by the optimizer."""

    params: ProductParams
    dsq: float
    grad_norm: float
    iters: int
    converged: bool


def gauge_fix(params: ProductParams) -> ProductParams:
    """Rescale pairs so all per-qubit norms equal, leaving phi unchanged.

    Qubit t is scaled by sqrt(G / N_t) with G the geometric mean of the
    norms; the product of the scale factors is exactly 1 in exact
    arithmetic, so the product state and D^2 are untouched.
    """
    params.require_positive_norms()
    norms = params.norms
    target = np.exp(np.mean(np.log(norms)))
    scales = np.sqrt(target / norms)
    return ProductParams(params.q, params.pairs * scales[:, None])


def _residual(chi: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    out = np.array([1.0])
    for v in vecs:
        out = np.kron(out, v)
    return out - chi


def _residual_jacobian(chi: np.ndarray, vecs: np.ndarray):
    """Residual phi - chi and its Jacobian d(phi)/d(params)."""
    q = len(vecs)
    pre = [np.array([1.0])]
    for t in range(q - 1):
        pre.append(np.kron(pre[-1], vecs[t]))
    suf = [np.array([1.0])] * q
    for t in range(q - 2, -1, -1):
        suf[t] = np.kron(vecs[t + 1], suf[t + 1])
    r = np.kron(pre[-1], vecs[-1]) - chi
    J = np.empty((chi.size, 2 * q))
    e0 = np.array([1.0, 0.0])
    e1 = np.array([0.0, 1.0])
    for t in range(q):
        J[:, 2 * t] = np.kron(pre[t], np.kron(e0, suf[t]))
        J[:, 2 * t + 1] = np.kron(pre[t], np.kron(e1, suf[t]))
    return r, J


def minimize(target: TargetState, init: ProductParams, opts: OptimOptions | None = None) -> Extremum:
    """Find a stationary point of D^2 by damped Newton descent from `init`.

    Each step solves (H + mu*I) delta = -grad with the exact Hessian and a
    Levenberg parameter mu kept positive-definite via Cholesky; steps must
    pass an Armijo decrease test, so the iteration is strictly descending
    and never climbs out of the basin it starts in (escaping saddles is
    multistart's job).  Convergence is max-norm of the gradient below
    opts.grad_tol.
    """
    if target.q != init.q:
        raise DimensionMismatch(f"target has q={target.q}, init q={init.q}")
    opts = opts or OptimOptions()
    with np.errstate(over="ignore"):
        init.require_positive_norms()
    chi = target.coeffs
    q = init.q
    n = 2 * q
    eye = np.eye(n)
    x = init.flat()
    mu = None
    f = grad_norm = np.inf
    iters = 0
    converged = False
    for it in range(1, opts.max_iter + 1):
        iters = it
        # overflow here is handled by the finiteness check below, not warned
        with np.errstate(over="ignore", invalid="ignore"):
            r, J = _residual_jacobian(chi, x.reshape(q, 2))
            f = float(r @ r)
            g = 2.0 * (J.T @ r)
            grad_norm = float(np.max(np.abs(g)))
        if not (np.isfinite(f) and np.isfinite(grad_norm)):
            raise NumericalError("non-finite objective or gradient", iteration=it)
        if grad_norm <= opts.grad_tol:
            converged = True
            break
        H = build_hessian(target, ProductParams.from_flat(x)).entries
        trace = float(np.trace(H))
        floor = DAMPING_FLOOR_REL * abs(trace)
        if mu is None:
            mu = opts.step_init * abs(trace)
        mu = max(mu, floor)
        stepped = False
        for _ in range(80):
            try:
                np.linalg.cholesky(H + mu * eye)
            except np.linalg.LinAlgError:
                mu = max(mu * 10.0, floor, 1e-12 * abs(trace))
                continue
            delta = np.linalg.solve(H + mu * eye, -g)
            slope = float(g @ delta)
            alpha = 1.0
            while alpha > 1e-12:
                rn = _residual(chi, (x + alpha * delta).reshape(q, 2))
                if float(rn @ rn) <= f + 1e-4 * alpha * slope:
                    break
                alpha *= 0.5
            if alpha > 1e-12:
                x = x + alpha * delta
                mu = max(mu * 0.25, floor) if alpha == 1.0 else mu * 4.0
                stepped = True
                break
            mu *= 10.0
            if mu > 1e15 * max(abs(trace), 1.0):
                break
        if not stepped:
            break
    params = ProductParams.from_flat(x)
    if converged and opts.gauge_fix:
        params = gauge_fix(params)
        r, J = _residual_jacobian(chi, params.pairs)
        f = float(r @ r)
        grad_norm = float(np.max(np.abs(2.0 * (J.T @ r))))
    return Extremum(params=params, dsq=f, grad_norm=grad_norm, iters=iters, converged=converged)


def default_seed_list(n_starts: int, base: int = 42) -> list[int]:
    """Consecutive seeds starting at `base`: one per multistart run."""
    return [base + k for k in range(n_starts)]


def _random_init(q: int, seed: int) -> ProductParams:
    rng = np.random.default_rng(seed)
    pairs = rng.uniform(-1.0, 1.0, (q, 2))
    for t in range(q):
        while np.hypot(pairs[t, 0], pairs[t, 1]) < MIN_INIT_PAIR_NORM:
            pairs[t] = rng.uniform(-1.0, 1.0, 2)
    return ProductParams(q, pairs)


def multistart(target: TargetState, n_starts: int, opts: OptimOptions) -> Extremum:
    """Best converged `minimize` result over n_starts random initializations.

    Pairs are drawn uniformly from [-1, 1]^2 (near-zero pairs resampled to
    stay off the degenerate zero-product surface).  The result is
    deterministic given opts.seed_list, and ties in dsq resolve to the
    earliest seed.
    """
    if n_starts < 1:
        raise DomainError(f"n_starts must be >= 1, got {n_starts}")
    if len(opts.seed_list) < n_starts:
        raise DomainError(
            f"seed_list supplies {len(opts.seed_list)} seeds, need {n_starts}"
        )
    best = None
    for k in range(n_starts):
        try:
            res = minimize(target, _random_init(target.q, opts.seed_list[k]), opts)
        except NumericalError:
            continue
        if res.converged and (best is None or res.dsq < best.dsq):
            best = res
    if best is None:
        raise MultistartError(f"none of {n_starts} starts converged")
    return best
