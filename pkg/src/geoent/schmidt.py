"""Product-state Schmidt factors and the polar form of the distance.

Every unnormalized product state factors through per-qubit 2x2 rotations
into a tensor with a single nonzero entry sigma = sqrt(prod N_t) in the
first slot.  Expressing the target in the same rotated basis turns the
distance into D^2 = 1 + sigma^2 - 2*sigma*Sigma_first, with Sigma_first
the first entry of the rotated target tensor; minimizing over sigma gives
sigma_c = Sigma_first and D_c^2 = 1 - sigma_c^2.

The polar Hessian here treats the squared radial coordinate (prod_norm)
plus the q rotation angles as coordinates; the gauge zero modes of the
Cartesian picture are absent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan, comb, sqrt

import numpy as np

from .errors import DimensionMismatch, DomainError
from .states import ProductParams, TargetState, contract_all_but
from .symmetric import solve_dicke

SINGLE_ENTRY_CHECK_LIMIT = 8  # full 2**q verification is cheap up to here


def reduced_density(params: ProductParams, t: int) -> np.ndarray:
    """2x2 reduced density matrix of the product state, tracing all but qubit t.

    Always rank one: the nonzero eigenvalue is the full product-state norm,
    along the direction of qubit t's coefficient pair.
    """
    if not 0 <= t < params.q:
        raise DomainError(f"qubit index {t} out of range 0..{params.q - 1}")
    norms = params.norms
    rest = float(np.prod(np.delete(norms, t)))
    x = params.pairs[t]
    return rest * np.outer(x, x)


@dataclass(frozen=True)
class SchmidtFactors:
    """Per-qubit rotations and the single singular value of a product state."""

    rotations: np.ndarray  # (q, 2, 2), orthogonal
    sigma: float


def svd_factors(params: ProductParams) -> SchmidtFactors:
    """Rotation factors that compress the product tensor to one entry.

    Column one of each rotation is the normalized coefficient pair, column
    two its perpendicular; applying the inverse rotations to the product
    tensor leaves the single entry sigma = sqrt(prod N_t) in the all-first
    slot.  That structure is verified by full contraction for small q.
    """
    params.require_positive_norms()
    q = params.q
    rot = np.empty((q, 2, 2))
    for t in range(q):
        x0, x1 = params.pairs[t]
        r = sqrt(x0 * x0 + x1 * x1)
        rot[t] = [[x0 / r, -x1 / r], [x1 / r, x0 / r]]
    sigma = sqrt(params.prod_norm)
    factors = SchmidtFactors(rotations=rot, sigma=sigma)
    if q <= SINGLE_ENTRY_CHECK_LIMIT:
        compressed = _rotate_tensor(_product_tensor(params), rot, inverse=True)
        if abs(compressed.flat[0] - sigma) > 1e-12 * max(sigma, 1.0):
            raise DomainError("rotated product tensor has wrong leading entry")
        compressed.flat[0] = 0.0
        if np.max(np.abs(compressed)) > 1e-12 * max(sigma, 1.0):
            raise DomainError("rotated product tensor is not single-entry")
    return factors


def _product_tensor(params: ProductParams) -> np.ndarray:
    out = np.array([1.0])
    for t in range(params.q):
        out = np.kron(out, params.pairs[t])
    return out.reshape((2,) * params.q)


def _rotate_tensor(tensor: np.ndarray, rotations: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Apply one 2x2 rotation per axis (the inverse is the transpose)."""
    out = tensor
    q = tensor.ndim
    for t in range(q):
        r = rotations[t].T if inverse else rotations[t]
        # contract axis t with the matrix's second index, restoring axis order
        out = np.tensordot(r, out, axes=([1], [t]))
        out = np.moveaxis(out, 0, t)
    return out


def target_in_rotated_basis(target: TargetState, thetas) -> np.ndarray:
    """Full target tensor in the basis of per-qubit rotations by `thetas`."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (target.q,):
        raise DimensionMismatch(f"need {target.q} angles, got shape {thetas.shape}")
    rot = np.empty((target.q, 2, 2))
    for t in range(target.q):
        c, s = np.cos(thetas[t]), np.sin(thetas[t])
        rot[t] = [[c, -s], [s, c]]
    return _rotate_tensor(target.tensor, rot, inverse=True)


def sigma_entry(target: TargetState, thetas) -> float:
    """First entry of the rotated target tensor.

    Equals the overlap of the target with the normalized product state at
    angles `thetas`; by construction it does not depend on the radial
    coordinate sigma.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (target.q,):
        raise DimensionMismatch(f"need {target.q} angles, got shape {thetas.shape}")
    vecs = np.column_stack([np.cos(thetas), np.sin(thetas)])
    return float(contract_all_but(target.tensor, vecs, keep=()))


def polar_distance(sigma: float, sigma_entry_value: float) -> float:
    """D^2 as a function of the radial coordinate and the rotated-target entry."""
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    return 1.0 + sigma * sigma - 2.0 * sigma * sigma_entry_value


@dataclass(frozen=True)
class PolarPoint:
    """Polar coordinates of a product state: radial sigma plus q angles.

    The Cartesian embedding uses the equal-norm gauge: every qubit gets
    radius sigma**(1/q).
    """

    sigma: float
    thetas: np.ndarray

    def __post_init__(self):
        thetas = np.array(self.thetas, dtype=float)
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)
        if self.sigma < 0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma}")

    def to_product_params(self) -> ProductParams:
        if self.sigma == 0:
            raise DomainError("sigma = 0 maps to the degenerate zero product state")
        q = len(self.thetas)
        r = self.sigma ** (1.0 / q)
        pairs = r * np.column_stack([np.cos(self.thetas), np.sin(self.thetas)])
        return ProductParams(q, pairs)


def single_excitation_polar_dsq(q: int, sigma: float, thetas) -> float:
    """Explicit polar D^2 for the single-excitation symmetric target.

    The rotated-target entry for that family is a single-sine sum,
    (1/sqrt(q)) * sum_x sin(theta_x) prod_{j != x} cos(theta_j), which at
    equal angles carries the sqrt(q) weight sqrt(q)*sin(theta)*cos(theta)**(q-1).
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (q,):
        raise DimensionMismatch(f"need {q} angles, got shape {thetas.shape}")
    sines = np.sin(thetas)
    cosines = np.cos(thetas)
    total = 0.0
    for x in range(q):
        term = sines[x]
        for j in range(q):
            if j != x:
                term *= cosines[j]
        total += term
    return polar_distance(sigma, total / sqrt(q))


@dataclass(frozen=True)
class SchmidtCritical:
    """Critical angle and squared critical overlap for a Dicke-type target."""

    q: int
    p: int
    theta_c: float
    tan_sq_theta_c: float
    sigma_c_sq: float


def schmidt_critical(q: int, p: int) -> SchmidtCritical:
    """Angles extremizing the rotated-target entry for Dicke targets.

    tan^2(theta_c) = p/(q-p) with theta_c in (0, pi/2); the resulting
    sigma_c^2 equals the closed-form product-state norm N**q.
    """
    if q < 3:
        raise DomainError(f"need q >= 3, got {q}")
    if not 1 <= p <= q - 1:
        raise DomainError(f"excitation count p={p} out of range 1..{q - 1}")
    tan_sq = p / (q - p)
    sigma_c_sq = comb(q, p) * (p / q) ** p * ((q - p) / q) ** (q - p)
    return SchmidtCritical(
        q=q, p=p, theta_c=atan(sqrt(tan_sq)), tan_sq_theta_c=tan_sq, sigma_c_sq=sigma_c_sq
    )


@dataclass(frozen=True)
class PolarHessian:
    """Polar-coordinate Hessian of D^2 at the single-excitation critical point.

    Coordinates are (prod_norm, theta_1 ... theta_q).  radial is the
    second derivative in prod_norm, angle_diag/angle_cross the diagonal
    and off-diagonal angle entries, mixed the (prod_norm, angle) entry
    (exactly zero on shell).  eigenvalues lists the q+1 values
    (radial, (angle_diag - angle_cross) x (q-1), angle_diag + (q-1)*angle_cross);
    all are strictly positive, and none are zero: the Cartesian gauge modes
    have no polar counterpart.
    """

    q: int
    prod_norm: float
    radial: float
    mixed: float
    angle_diag: float
    angle_cross: float
    eigenvalues: tuple

    def eigenvalue_list(self) -> np.ndarray:
        low = self.angle_diag - self.angle_cross
        high = self.angle_diag + (self.q - 1) * self.angle_cross
        return np.sort(np.array([self.radial] + [low] * (self.q - 1) + [high]))


def polar_hessian(q: int) -> PolarHessian:
    """Closed-form polar Hessian for the single-excitation Dicke target.

    The entries follow from differentiating D^2(prod_norm, thetas) at the
    critical point; the radial entry is cross-checked against the chain
    rule through the Cartesian symmetric blocks before returning.
    """
    if q < 3:
        raise DomainError(f"need q >= 3, got {q}")
    nn = ((q - 1) / q) ** (q - 1)
    radial = 1.0 / (2.0 * nn)
    angle_diag = 2.0 * nn
    angle_cross = (2.0 * nn / q) * (2.0 - (q - 2) / (q - 1))
    result = PolarHessian(
        q=q,
        prod_norm=nn,
        radial=radial,
        mixed=0.0,
        angle_diag=angle_diag,
        angle_cross=angle_cross,
        eigenvalues=(
            radial,
            angle_diag - angle_cross,
            angle_diag + (q - 1) * angle_cross,
        ),
    )
    _check_radial_chain_rule(q, result)
    return result


def _check_radial_chain_rule(q: int, ph: PolarHessian, tol: float = 1e-10):
    """Radial entry re-derived through the Cartesian blocks must match.

    The symmetric point depends on prod_norm through (alpha0, alpha1); at
    stationarity d^2 D^2 / d prod_norm^2 equals the quadratic form of the
    Cartesian block Hessian with the derivative vector replicated across
    qubits.
    """
    sol = solve_dicke(q, 1)
    d_alpha1 = 0.5 * q ** -1.5 * ph.prod_norm ** (0.5 / q - 1.0)
    d_alpha0 = sqrt(q - 1.0) * d_alpha1
    g01 = sol.coupling01
    g00 = sol.diag - (sol.alpha1 / sol.alpha0) * g01
    g11 = sol.diag - (sol.alpha0 / sol.alpha1) * g01
    val = q * (
        d_alpha0 * (d_alpha0 * (q - 1) * g00 + d_alpha1 * (q - 1) * g01 + d_alpha0 * sol.diag)
        + d_alpha1 * (d_alpha0 * (q - 1) * g01 + d_alpha1 * (q - 1) * g11 + d_alpha1 * sol.diag)
    )
    if abs(val - ph.radial) > tol:
        raise DomainError(
            f"chain-rule radial entry {val!r} disagrees with closed form {ph.radial!r}"
        )
