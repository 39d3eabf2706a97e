"""Squared distance between a target state and an unnormalized product state.

The functional is D^2 = sum_ijk... (a_i b_j c_k ... - chi_ijk...)^2,
evaluated as 1 - 2<psi|phi> + <phi|phi> with the product-state norm taken
from the per-qubit norms, so no difference tensor is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError
from .states import ProductParams, TargetState, contract_all_but, overlap

DEFAULT_GRAD_TOL = 1e-9


@dataclass(frozen=True)
class DistanceReport:
    """Distance value with its building blocks.

    dsq == 1 - 2*overlap + prod_norm exactly as computed.
    """

    dsq: float
    grad: np.ndarray
    overlap: float
    prod_norm: float


def _check_dims(target: TargetState, params: ProductParams):
    if target.q != params.q:
        raise DimensionMismatch(f"target has q={target.q}, params q={params.q}")


def _leave_one_out_products(norms: np.ndarray) -> np.ndarray:
    """prod_{s != t} norms[s] for every t, without dividing (zeros allowed)."""
    q = len(norms)
    pre = np.ones(q + 1)
    suf = np.ones(q + 1)
    for t in range(q):
        pre[t + 1] = pre[t] * norms[t]
    for t in range(q - 1, -1, -1):
        suf[t] = suf[t + 1] * norms[t]
    return pre[:q] * suf[1:]


def gradient(target: TargetState, params: ProductParams) -> np.ndarray:
    """Analytic gradient of D^2, ordered (a0, a1, b0, b1, ...).

    The component for coefficient i of qubit t is
    2 * (x_ti * prod_{s != t} N_s  -  <chi contracted on all other qubits>_i).
    """
    _check_dims(target, params)
    norms = params.norms
    loo = _leave_one_out_products(norms)
    g = np.empty((params.q, 2))
    for t in range(params.q):
        partial = contract_all_but(target.tensor, params.pairs, keep=(t,))
        g[t] = 2.0 * (params.pairs[t] * loo[t] - partial)
    return g.ravel()


def distance_sq(target: TargetState, params: ProductParams) -> DistanceReport:
    """Evaluate D^2 together with its gradient, overlap and product norm.

    Zero coefficient pairs are tolerated here (phi is then the zero state
    and dsq = <psi|psi> = 1); only the all-zero parameter vector is
    rejected as degenerate.
    """
    _check_dims(target, params)
    if not np.any(params.pairs):
        raise DomainError("all coefficient pairs are zero")
    ov = overlap(target, params)
    pn = params.prod_norm
    dsq = 1.0 - 2.0 * ov + pn
    return DistanceReport(dsq=dsq, grad=gradient(target, params), overlap=ov, prod_norm=pn)


@dataclass(frozen=True)
class CriticalIdentities:
    """Identities that hold at stationary points of D^2.

    cd_residual : |D^2 - (1 - prod N_t)|, vanishes at extrema.
    cos_theta_c : overlap / sqrt(prod-state norm), the angle cosine between
        the target and the product state (target is unit norm).
    d_n_sq      : distance to the closest normalized product state, obtained
        from the unnormalized measure as 2 * D^2.
    stationary  : False flags that the supplied params failed the gradient
        tolerance, in which case the identities need not hold.
    """

    cd_residual: float
    cos_theta_c: float
    d_n_sq: float
    stationary: bool


def critical_identities(
    target: TargetState,
    params: ProductParams,
    grad_tol: float = DEFAULT_GRAD_TOL,
) -> CriticalIdentities:
    """Evaluate the extremum identities at (approximately) stationary params."""
    params.require_positive_norms()
    rep = distance_sq(target, params)
    stationary = bool(np.max(np.abs(rep.grad)) <= grad_tol)
    return CriticalIdentities(
        cd_residual=abs(rep.dsq - (1.0 - rep.prod_norm)),
        cos_theta_c=rep.overlap / np.sqrt(rep.prod_norm),
        d_n_sq=2.0 * rep.dsq,
        stationary=stationary,
    )
