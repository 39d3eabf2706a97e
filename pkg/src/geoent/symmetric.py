"""Closed-form stationary points: Dicke-type targets and the ring state.

Both solvers return the permutation-symmetric stationary point of the
distance functional together with the eigenvalues of the uniform-block
Hessian built from its symmetric blocks (one scaling mode q*tau, q-1
gauge zeros, q-1 paired rotation modes, one global rotation mode).

For Dicke targets the uniform-block form IS the exact Hessian, so these
eigenvalues are the true spectrum.  The ring target couples adjacent and
non-adjacent qubit pairs differently, so there the block eigenvalues are
the uniform-coupling surrogate only; see `solve_ring`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .errors import DomainError, NumericalError
from .states import ProductParams, SymmetricParams, embed_symmetric


def _spectrum(q: int, diag: float, coupling01: float, alpha0: float, alpha1: float):
    """Block-Hessian eigenvalues (e1, 0, e3, e4) at a symmetric stationary point."""
    pair = coupling01 * (alpha0 / alpha1 + alpha1 / alpha0)
    return (q * diag, 0.0, pair, q * diag - (q - 1) * pair)


@dataclass(frozen=True)
class DickeSolution:
    """Closest symmetric product state to a Dicke target, in closed form.

    prod_norm is N**q, the squared norm of the product state at the
    extremum (equally: cos^2 of the critical angle); dc_squared is the
    geometric entanglement 1 - N**q.  eigenvalues holds (e1, e2, e3, e4)
    with multiplicities (1, q-1, q-1, 1); these are exact for Dicke
    targets and all positive apart from the gauge zeros.
    """

    q: int
    p: int
    alpha0: float
    alpha1: float
    pair_norm: float
    prod_norm: float
    dc_squared: float
    ratio: float
    diag: float
    coupling01: float
    exponents: tuple[float, float, float, float]
    eigenvalues: tuple[float, float, float, float]
    multiplicities: tuple[int, int, int, int]

    def symmetric_params(self) -> SymmetricParams:
        return SymmetricParams(self.q, self.alpha0, self.alpha1)

    def product_params(self) -> ProductParams:
        return embed_symmetric(self.symmetric_params())

    def spectrum_list(self) -> np.ndarray:
        """All 2q eigenvalues, ascending."""
        out = np.repeat(self.eigenvalues, self.multiplicities)
        return np.sort(out)


def solve_dicke(q: int, p: int) -> DickeSolution:
    """Closed-form symmetric extremum for the q-qubit, p-excitation Dicke target.

    Requires q >= 3 (at q = 2 the paired rotation eigenvalue degenerates to
    zero) and 1 <= p <= q-1.  The solution is computed from the stable pair
    {component ratio, norm from prod_norm**(1/q)}; the equivalent power-form
    expressions are then asserted as a post-check.
    """
    if q < 3:
        raise DomainError(f"need q >= 3, got {q}")
    if not 1 <= p <= q - 1:
        raise DomainError(f"excitation count p={p} out of range 1..{q - 1}")
    prod_norm = comb(q, p) * (p / q) ** p * ((q - p) / q) ** (q - p)
    pair_norm = prod_norm ** (1.0 / q)
    # Positive-sign gauge; only ratios and squares are fixed by stationarity.
    alpha0 = sqrt(pair_norm * (q - p) / q)
    alpha1 = sqrt(pair_norm * p / q)
    ratio = sqrt((q - p) / p)

    ex = (2.0 + 2.0 / (q - 2), (p - q) / (q - 2), (p - 1) / (q - 2), 1.0 / (2 - q))
    a0_sq = (
        pair_norm ** ex[0]
        * ((q - p) / q) ** (ex[1] + 1.0)
        * (q / p) ** ex[2]
        * comb(q - 1, p - 1) ** ex[3]
    )
    a1_sq = (
        pair_norm ** ex[0]
        * ((q - p) / q) ** ex[1]
        * (q / p) ** (ex[2] - 1.0)
        * comb(q - 1, p - 1) ** ex[3]
    )
    if abs(a0_sq - alpha0 ** 2) > 1e-12 * a0_sq or abs(a1_sq - alpha1 ** 2) > 1e-12 * a1_sq:
        raise NumericalError(
            f"power-form cross-check failed for q={q}, p={p}: "
            f"{a0_sq!r} vs {alpha0 ** 2!r}, {a1_sq!r} vs {alpha1 ** 2!r}"
        )

    diag = 2.0 * pair_norm ** (q - 1)
    coupling01 = 4.0 * alpha0 * alpha1 * pair_norm ** (q - 2) - 2.0 * (
        sqrt((q - p) * p) / (q - 1)
    ) * pair_norm ** (q - 1)
    return DickeSolution(
        q=q,
        p=p,
        alpha0=alpha0,
        alpha1=alpha1,
        pair_norm=pair_norm,
        prod_norm=prod_norm,
        dc_squared=1.0 - prod_norm,
        ratio=ratio,
        diag=diag,
        coupling01=coupling01,
        exponents=ex,
        eigenvalues=_spectrum(q, diag, coupling01, alpha0, alpha1),
        multiplicities=(1, q - 1, q - 1, 1),
    )


@dataclass(frozen=True)
class RingSolution:
    """Symmetric stationary point for the cyclic two-excitation ring target.

    dc_squared = 1 - N**q is the stationary value of D^2, not necessarily
    the minimum.  eigenvalues are the uniform-coupling block values; they
    equal the exact Hessian spectrum only at q = 3 (where every qubit pair
    is adjacent).  For q >= 4 the exact spectrum splits into cyclic
    momentum branches: the point is degenerate at q = 4 and a saddle for
    q >= 5, so the block value e4 understates how early the symmetric
    ansatz stops being a minimum.
    """

    q: int
    alpha0: float
    alpha1: float
    pair_norm: float
    prod_norm: float
    dc_squared: float
    diag: float
    coupling01: float
    eigenvalues: tuple[float, float, float, float]
    multiplicities: tuple[int, int, int, int]

    def symmetric_params(self) -> SymmetricParams:
        return SymmetricParams(self.q, self.alpha0, self.alpha1)

    def product_params(self) -> ProductParams:
        return embed_symmetric(self.symmetric_params())

    def spectrum_list(self) -> np.ndarray:
        out = np.repeat(self.eigenvalues, self.multiplicities)
        return np.sort(out)


def solve_ring(q: int) -> RingSolution:
    """Closed-form symmetric stationary point for the ring target.

    The stationarity system reduces to N**(q/2) = (2/sqrt(q)) * ((q-2)/q)**((q-2)/2),
    solved via logarithms; the residual of the original equations is
    asserted to be at relative 1e-12.
    """
    if q < 3:
        raise DomainError(f"need q >= 3, got {q}")
    log_pair_norm = (2.0 / q) * (
        np.log(2.0) - 0.5 * np.log(q) + 0.5 * (q - 2) * (np.log(q - 2) - np.log(q))
    )
    pair_norm = float(np.exp(log_pair_norm))
    prod_norm = pair_norm ** q
    alpha0 = sqrt(pair_norm * (q - 2) / q)
    alpha1 = sqrt(2.0 * pair_norm / q)

    lhs = pair_norm ** (q - 1)
    res1 = abs(lhs - ((q - 2) / sqrt(q)) * alpha1 ** 2 * alpha0 ** (q - 4))
    res2 = abs(lhs - (2.0 / sqrt(q)) * alpha0 ** (q - 2))
    if max(res1, res2) > 1e-12 * lhs:
        raise NumericalError(f"ring stationarity residual too large at q={q}")

    diag = 2.0 * pair_norm ** (q - 1)
    coupling01 = (
        4.0 * alpha0 * alpha1 * pair_norm ** (q - 2)
        - sqrt(2.0 / (q - 2)) * pair_norm ** (q - 1)
    )
    return RingSolution(
        q=q,
        alpha0=alpha0,
        alpha1=alpha1,
        pair_norm=pair_norm,
        prod_norm=prod_norm,
        dc_squared=1.0 - prod_norm,
        diag=diag,
        coupling01=coupling01,
        eigenvalues=_spectrum(q, diag, coupling01, alpha0, alpha1),
        multiplicities=(1, q - 1, q - 1, 1),
    )
