"""Exact Hessian of the distance functional and its eigen-analysis.

The Hessian over the 2q product-state parameters has 2x2 blocks: diagonal
blocks are multiples of the identity (the mixed second derivative within
one qubit vanishes identically), and the block coupling qubits s and t is

    4 * outer(x_s, x_t) * prod_{u not in {s,t}} N_u  -  2 * C_st

with C_st the target tensor contracted on all qubits except s and t.

For permutation-invariant targets at a symmetric stationary point the
whole matrix is generated by four scalars (diagonal entry and three
coupling entries), and its eigensystem is known in closed form; both are
provided here alongside a dependency-free cyclic Jacobi eigensolver used
to cross-check them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .distance import DEFAULT_GRAD_TOL, _leave_one_out_products, gradient
from .errors import DimensionMismatch, DomainError, NumericalError, SymmetryError
from .states import ProductParams, SymmetricParams, TargetState, contract_all_but, embed_symmetric

LOCAL_MINIMUM = "local-minimum"
SADDLE = "saddle"
DEGENERATE = "degenerate-needs-higher-order"

DEFAULT_ZERO_TOL = 1e-8
GAUGE_ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class HessianMatrix:
    """Symmetric 2q x 2q matrix of second derivatives of D^2."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"Hessian must be square, got shape {m.shape}")
        scale = np.max(np.abs(m))
        if scale > 0 and np.max(np.abs(m - m.T)) > 1e-13 * scale:
            raise DomainError("Hessian is not symmetric")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def build_hessian(target: TargetState, params: ProductParams) -> HessianMatrix:
    """Assemble the exact Hessian of D^2 at the given parameters."""
    if target.q != params.q:
        raise DimensionMismatch(f"target has q={target.q}, params q={params.q}")
    q = params.q
    norms = params.norms
    loo = _leave_one_out_products(norms)
    H = np.zeros((2 * q, 2 * q))
    for t in range(q):
        H[2 * t, 2 * t] = H[2 * t + 1, 2 * t + 1] = 2.0 * loo[t]
    mask = np.ones(q, dtype=bool)
    for s in range(q):
        for t in range(s + 1, q):
            mask[s] = mask[t] = False
            pn = float(np.prod(norms[mask]))
            mask[s] = mask[t] = True
            C = contract_all_but(target.tensor, params.pairs, keep=(s, t))
            blk = 4.0 * np.outer(params.pairs[s], params.pairs[t]) * pn - 2.0 * C
            H[2 * s:2 * s + 2, 2 * t:2 * t + 2] = blk
            H[2 * t:2 * t + 2, 2 * s:2 * s + 2] = blk.T
    return HessianMatrix(H)


@dataclass(frozen=True)
class SymmetricBlocks:
    """Scalars generating the Hessian of a symmetric point of a symmetric target.

    diag is the common diagonal entry 2 N**(q-1); coupling00/01/11 fill the
    (identical) off-diagonal 2x2 blocks.  scale_ratio and rotation_ratio are
    the derived component ratios of the scaling-type and rotation-type
    eigenvectors; on a stationary point they equal alpha0/alpha1 and
    -alpha1/alpha0, so their product is -1.
    """

    diag: float
    coupling00: float
    coupling01: float
    coupling11: float
    scale_ratio: float
    rotation_ratio: float
    stationary: bool

    @property
    def on_shell_residual(self) -> float:
        return abs(self.scale_ratio * self.rotation_ratio + 1.0)


def symmetric_blocks(
    target: TargetState,
    s: SymmetricParams,
    grad_tol: float = DEFAULT_GRAD_TOL,
) -> SymmetricBlocks:
    """Compute the symmetric-ansatz Hessian blocks for a symmetric target.

    Raises SymmetryError for targets that are not permutation invariant
    (the single-block description is ill-defined there).  A non-stationary
    symmetric point is allowed but flagged: the ratio identities only hold
    on shell.
    """
    if target.q != s.q:
        raise DimensionMismatch(f"target has q={target.q}, params q={s.q}")
    if not target.is_permutation_invariant():
        raise SymmetryError("target is not invariant under qubit transpositions")
    params = embed_symmetric(s)
    q, N = s.q, s.norm
    diag = 2.0 * N ** (q - 1)
    C = contract_all_but(target.tensor, params.pairs, keep=(0, 1))
    pair = np.array([s.alpha0, s.alpha1])
    couplings = 4.0 * np.outer(pair, pair) * N ** (q - 2) - 2.0 * C
    g01 = couplings[0, 1]
    if g01 == 0.0:
        raise DomainError("degenerate blocks: zero off-diagonal coupling")
    stationary = bool(np.max(np.abs(gradient(target, params))) <= grad_tol)
    return SymmetricBlocks(
        diag=diag,
        coupling00=couplings[0, 0],
        coupling01=g01,
        coupling11=couplings[1, 1],
        scale_ratio=(diag - couplings[1, 1]) / g01,
        rotation_ratio=(couplings[0, 0] - diag) / g01,
        stationary=stationary,
    )


def block_hessian(q: int, blocks: SymmetricBlocks) -> HessianMatrix:
    """Assemble the full 2q x 2q matrix from symmetric blocks."""
    T = blocks.diag * np.eye(2)
    G = np.array(
        [
            [blocks.coupling00, blocks.coupling01],
            [blocks.coupling01, blocks.coupling11],
        ]
    )
    H = np.zeros((2 * q, 2 * q))
    for a in range(q):
        for b in range(q):
            H[2 * a:2 * a + 2, 2 * b:2 * b + 2] = T if a == b else G
    return HessianMatrix(H)


def _orthonormalized_family(vectors):
    """Gram-Schmidt within one degenerate family, keeping the first direction."""
    out = []
    for v in vectors:
        w = v.astype(float).copy()
        for u in out:
            w -= (u @ w) * u
        nrm = np.linalg.norm(w)
        if nrm < 1e-12:
            raise NumericalError("degenerate family collapsed during orthogonalization")
        out.append(w / nrm)
    return out


def analytic_eigenpairs(q: int, blocks: SymmetricBlocks):
    """Closed-form eigenpairs of the symmetric block Hessian.

    Returns 2q (eigenvalue, unit eigenvector) pairs in the order: the
    all-qubit scaling mode (eigenvalue q*diag), q-1 gauge scaling modes
    (eigenvalue 0), q-1 paired rotation modes, and the all-qubit rotation
    mode.  Vectors within each degenerate family are orthonormalized.
    """
    if q < 2:
        raise DomainError(f"need q >= 2, got {q}")
    if blocks.on_shell_residual > 1e-8:
        raise DomainError(
            "blocks are off shell: scale_ratio * rotation_ratio = "
            f"{blocks.scale_ratio * blocks.rotation_ratio!r} (expected -1)"
        )
    v1, v2 = blocks.scale_ratio, blocks.rotation_ratio
    e_pair = blocks.coupling01 * (v1 - v2)
    e_all_scale = q * blocks.diag
    e_all_rot = q * blocks.diag - (q - 1) * e_pair

    def family(ratio):
        vecs = []
        for m in range(1, q):
            v = np.zeros(2 * q)
            v[0:2] = (-ratio, -1.0)
            v[2 * m:2 * m + 2] = (ratio, 1.0)
            vecs.append(v)
        return _orthonormalized_family(vecs)

    pairs = []
    v = np.tile([v1, 1.0], q)
    pairs.append((e_all_scale, v / np.linalg.norm(v)))
    pairs.extend((0.0, w) for w in family(v1))
    pairs.extend((e_pair, w) for w in family(v2))
    v = np.tile([v2, 1.0], q)
    pairs.append((e_all_rot, v / np.linalg.norm(v)))
    return pairs


def jacobi_eigh(matrix, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps rotate away every off-diagonal element above a shrinking
    threshold; convergence requires the largest off-diagonal magnitude to
    fall below 1e-14 times the Frobenius norm.  Returns eigenvalues in
    ascending order and the matching orthonormal eigenvector columns.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n), v
    conv_tol = 1e-14 * fro
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            m = np.max(np.abs(a[i, i + 1:]))
            off = max(off, m)
        if off < conv_tol:
            break
        # Skip tiny elements early on; final sweeps rotate everything.
        thresh = 0.2 * off if sweep < 3 else 0.0
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= max(thresh, conv_tol * 1e-2):
                    continue
                diff = a[r, r] - a[p, p]
                if abs(apr) < 1e-36 * abs(diff):
                    t = apr / diff
                else:
                    phi = diff / (2.0 * apr)
                    t = 1.0 / (abs(phi) + np.sqrt(phi * phi + 1.0))
                    if phi < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                rot_p = c * a[:, p] - sn * a[:, r]
                rot_r = sn * a[:, p] + c * a[:, r]
                a[:, p], a[:, r] = rot_p, rot_r
                rot_p = c * a[p, :] - sn * a[r, :]
                rot_r = sn * a[p, :] + c * a[r, :]
                a[p, :], a[r, :] = rot_p, rot_r
                rot_p = c * v[:, p] - sn * v[:, r]
                rot_r = sn * v[:, p] + c * v[:, r]
                v[:, p], v[:, r] = rot_p, rot_r
    else:
        raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def gauge_directions(params: ProductParams) -> np.ndarray:
    """Tangent directions of the compensating two-qubit rescalings.

    Row m is the derivative of scaling qubit 0 down and qubit m up; the
    q-1 rows span the flat directions of D^2 at the given parameters.
    """
    q = params.q
    out = np.zeros((q - 1, 2 * q))
    for m in range(1, q):
        out[m - 1, 0:2] = -params.pairs[0]
        out[m - 1, 2 * m:2 * m + 2] = params.pairs[m]
    return out


@dataclass(frozen=True)
class SpectrumReport:
    """Full eigen-decomposition of a Hessian plus extremum classification."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_modes: int
    classification: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "eigenvalues": self.eigenvalues.tolist(),
                "zeroModes": self.zero_modes,
                "classification": self.classification,
            }
        )


def _classify(w, vecs, zero_band, params):
    outside = ~zero_band
    if np.any(w[outside] < 0.0):
        return SADDLE
    if not np.any(zero_band):
        return LOCAL_MINIMUM
    if params is None:
        return DEGENERATE
    basis = gauge_directions(params)
    qmat, _ = np.linalg.qr(basis.T)
    for v in vecs.T[zero_band]:
        resid = v - qmat @ (qmat.T @ v)
        if np.linalg.norm(resid) > GAUGE_ANGLE_TOL:
            return DEGENERATE
    return LOCAL_MINIMUM


def eig_symmetric(
    H,
    zero_tol: float = DEFAULT_ZERO_TOL,
    params: ProductParams | None = None,
) -> SpectrumReport:
    """Diagonalize a Hessian and classify the extremum it was built at.

    Eigenvalues with |lambda| < zero_tol * max|lambda| form the zero band.
    The point is a local minimum only if everything outside the band is
    positive and every zero-band eigenvector lies in the span of the gauge
    rescaling directions (which requires `params`); otherwise zero modes of
    unknown origin yield the degenerate classification rather than a guess.
    """
    m = H.entries if isinstance(H, HessianMatrix) else HessianMatrix(H).entries
    w, vecs = jacobi_eigh(m)
    scale = np.max(np.abs(w))
    zero_band = np.abs(w) < (zero_tol * scale if scale > 0 else zero_tol)
    return SpectrumReport(
        eigenvalues=w,
        eigenvectors=vecs,
        zero_modes=int(np.count_nonzero(zero_band)),
        classification=_classify(w, vecs, zero_band, params),
    )
