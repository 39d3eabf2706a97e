"""Target states, product-state parameters, and dense tensor contractions.

A q-qubit state is stored as a dense vector of 2**q real coefficients.
The flattened index encodes qubit t in bit (q-1-t), i.e. the first qubit
is the most significant bit, matching left-to-right ket notation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DimensionMismatch, DomainError

# Dense storage of 2**q reals gets silly well before this; all supported
# analyses are desk-scale.
SOFT_QUBIT_LIMIT = 20

NORM_TOL = 1e-12


def _check_qubit_count(q, minimum=2):
    if not isinstance(q, (int, np.integer)):
        raise DomainError(f"qubit count must be an integer, got {q!r}")
    if q < minimum:
        raise DomainError(f"qubit count must be >= {minimum}, got {q}")
    if q > SOFT_QUBIT_LIMIT:
        raise DomainError(
            f"qubit count {q} exceeds the soft limit {SOFT_QUBIT_LIMIT} "
            "(dense storage of 2**q coefficients)"
        )


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TargetState:
    """Normalized q-qubit target state with real coefficients.

    Attributes
    ----------
    q : int
        Number of qubits, 2 <= q <= SOFT_QUBIT_LIMIT.
    coeffs : np.ndarray
        Flat vector of 2**q real coefficients with unit Euclidean norm
        (MSB-first qubit ordering, read-only).
    """

    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_qubit_count(self.q)
        coeffs = _frozen(self.coeffs)
        if coeffs.shape != (2 ** self.q,):
            raise DomainError(
                f"expected {2 ** self.q} coefficients for q={self.q}, "
                f"got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        nrm = float(np.sum(coeffs ** 2))
        if abs(nrm - 1.0) > NORM_TOL:
            raise DomainError(f"state norm^2 = {nrm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def tensor(self) -> np.ndarray:
        """Coefficients reshaped to a (2,)*q tensor, one axis per qubit."""
        return self.coeffs.reshape((2,) * self.q)

    def is_permutation_invariant(self, tol: float = 1e-12) -> bool:
        """True if the coefficient tensor is invariant under every qubit swap.

        Adjacent transpositions generate the full symmetric group, so only
        those are checked.
        """
        t = self.tensor
        for a in range(self.q - 1):
            if np.max(np.abs(t - np.swapaxes(t, a, a + 1))) > tol:
                return False
        return True

    def to_json(self) -> str:
        return json.dumps({"q": self.q, "coeffs": self.coeffs.tolist()})


@dataclass(frozen=True)
class ProductParams:
    """Unnormalized product state: one real coefficient pair per qubit.

    The per-qubit squared norms must be positive for most operations; the
    distance functional itself tolerates zero pairs (the product state is
    then identically zero), so positivity is enforced by the operations
    that need it, via :meth:`require_positive_norms`, not at construction.
    """

    q: int
    pairs: np.ndarray

    def __post_init__(self):
        _check_qubit_count(self.q)
        pairs = _frozen(self.pairs)
        if pairs.shape != (self.q, 2):
            raise DomainError(f"expected pairs of shape ({self.q}, 2), got {pairs.shape}")
        if not np.all(np.isfinite(pairs)):
            raise DomainError("pair coefficients must be finite")
        object.__setattr__(self, "pairs", pairs)

    @property
    def norms(self) -> np.ndarray:
        """Per-qubit squared norms x0**2 + x1**2."""
        return np.sum(self.pairs ** 2, axis=1)

    @property
    def prod_norm(self) -> float:
        """Squared norm of the product state: the product of per-qubit norms."""
        return float(np.prod(self.norms))

    def require_positive_norms(self):
        norms = self.norms
        if np.any(norms <= 0.0):
            bad = int(np.argmin(norms))
            raise DomainError(f"qubit {bad} has zero coefficient pair")

    def flat(self) -> np.ndarray:
        """Parameters as a writable vector (a0, a1, b0, b1, ...)."""
        return self.pairs.ravel().copy()

    @staticmethod
    def from_flat(x) -> "ProductParams":
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size % 2:
            raise DomainError(f"flat parameter vector must have even length, got {x.shape}")
        return ProductParams(x.size // 2, x.reshape(-1, 2))


@dataclass(frozen=True)
class SymmetricParams:
    """Product state replicating one coefficient pair across all qubits."""

    q: int
    alpha0: float
    alpha1: float

    def __post_init__(self):
        _check_qubit_count(self.q)
        if not (np.isfinite(self.alpha0) and np.isfinite(self.alpha1)):
            raise DomainError("alpha0, alpha1 must be finite")
        if self.norm <= 0.0:
            raise DomainError("alpha0**2 + alpha1**2 must be positive")

    @property
    def norm(self) -> float:
        return self.alpha0 ** 2 + self.alpha1 ** 2


@dataclass(frozen=True)
class DickeSpec:
    """Permutation-invariant target with exactly p excited qubits out of q."""

    q: int
    p: int

    def __post_init__(self):
        _check_qubit_count(self.q)
        if not 0 <= self.p <= self.q:
            raise DomainError(f"excitation count p={self.p} out of range 0..{self.q}")

    @property
    def n_terms(self) -> int:
        return comb(self.q, self.p)

    @property
    def norm_factor(self) -> float:
        """Coefficient shared by all nonzero entries, 1/sqrt(C(q, p))."""
        return 1.0 / np.sqrt(self.n_terms)


def make_dicke(q: int, p: int) -> TargetState:
    """Uniform superposition of all basis states with exactly p ones.

    p = 0 and p = q are allowed and give (unentangled) basis product states.
    """
    spec = DickeSpec(q, p)
    coeffs = np.zeros(2 ** q)
    for idx in range(2 ** q):
        if idx.bit_count() == p:
            coeffs[idx] = spec.norm_factor
    return TargetState(q, coeffs)


def make_ring(q: int) -> TargetState:
    """Uniform superposition of the q cyclically-adjacent two-excitation states.

    The nonzero patterns are 1100...0 and its cyclic shifts (the last one
    wraps around: 10...01), each with coefficient 1/sqrt(q).
    """
    _check_qubit_count(q, minimum=3)
    coeffs = np.zeros(2 ** q)
    for t in range(q):
        idx = (1 << (q - 1 - t)) | (1 << (q - 1 - (t + 1) % q))
        coeffs[idx] = 1.0 / np.sqrt(q)
    return TargetState(q, coeffs)


def embed_symmetric(s: SymmetricParams) -> ProductParams:
    """Replicate the symmetric pair (alpha0, alpha1) across all q qubits."""
    return ProductParams(s.q, np.tile([s.alpha0, s.alpha1], (s.q, 1)))


def product_coeffs(params: ProductParams) -> np.ndarray:
    """Dense coefficient vector of the product state (Kronecker chain)."""
    out = np.array([1.0])
    for t in range(params.q):
        out = np.kron(out, params.pairs[t])
    return out


def contract_all_but(tensor: np.ndarray, pairs: np.ndarray, keep) -> np.ndarray:
    """Contract per-qubit 2-vectors onto every tensor axis not in `keep`.

    Returns a tensor whose remaining axes are the kept qubits in increasing
    qubit order.  Contraction runs from the last axis down so that axis
    indices of pending qubits stay valid.
    """
    keep = set(keep)
    out = tensor
    for t in reversed(range(tensor.ndim)):
        if t in keep:
            continue
        out = np.tensordot(out, pairs[t], axes=([t], [0]))
    return out


def overlap(target: TargetState, params: ProductParams) -> float:
    """Inner product of the target state with the product state."""
    if target.q != params.q:
        raise DimensionMismatch(f"target has q={target.q}, params q={params.q}")
    return float(contract_all_but(target.tensor, params.pairs, keep=()))


def save_state(state: TargetState, path) -> None:
    """Write a target state as JSON: {"q": ..., "coeffs": [...]}."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state.to_json())
        fh.write("\n")


def load_state(path, norm_tol: float = 1e-9) -> TargetState:
    """Load a target state from a JSON file.

    Rejects wrong coefficient counts and norms deviating from 1 by more
    than `norm_tol`; accepted coefficients are rescaled to exact unit norm.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed state file {path}: {exc}") from exc
    if not isinstance(data, dict) or "q" not in data or "coeffs" not in data:
        raise DomainError(f"state file {path} must be an object with 'q' and 'coeffs'")
    q = data["q"]
    _check_qubit_count(q)
    coeffs = np.asarray(data["coeffs"], dtype=float)
    if coeffs.shape != (2 ** q,):
        raise DomainError(
            f"state file {path}: expected {2 ** q} coefficients, got {coeffs.size}"
        )
    nrm = float(np.linalg.norm(coeffs))
    if abs(nrm - 1.0) > norm_tol:
        raise DomainError(
            f"state file {path}: norm {nrm!r} deviates from 1 beyond tolerance {norm_tol}"
        )
    return TargetState(q, coeffs / nrm)
