"""Dense complex linear algebra with explicit, relative tolerances.

Every rank decision in the package goes through :func:`kernel_basis` or
:func:`hermitian_inertia`, so the thresholds live in one place.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, PreconditionError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SubspaceBasis",
    "as_cmatrix",
    "kernel_basis",
    "numerical_rank",
    "hermitian_inertia",
    "inertia_with_threshold",
    "congruence",
    "subspace_sum",
    "orthogonal_complement",
    "principal_angles",
    "rel_residual",
    "is_hermitian",
]


@dataclass(frozen=True)
class Tolerances:
    """Relative thresholds.

    ``residual_rel`` bounds identity residuals (relations, compatibility,
    hermiticity). ``rank_rel`` decides when a singular value or eigenvalue
    counts as zero.
    """

    residual_rel: float = 1e-9
    rank_rel: float = 1e-10

    def __post_init__(self):
        for name in ("residual_rel", "rank_rel"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidInputError(f"{name} must be a positive finite number, got {v!r}")


DEFAULT_TOL = Tolerances()


def as_cmatrix(a, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Validate ``a`` as a finite complex 2-d array and return a complex copy."""
    try:
        m = np.array(a, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}: not a numeric array ({exc})") from None
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidInputError(f"{name}: expected a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name}: contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name}: expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis of a subspace of C^ambient, stored as columns.

    A zero-dimensional subspace has a ``(ambient, 0)`` basis array.
    """

    basis: np.ndarray
    ambient: int = field(default=-1)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise InvalidInputError("subspace basis must be 2-d")
        ambient = b.shape[0] if self.ambient < 0 else self.ambient
        if b.shape[0] != ambient:
            raise InvalidInputError("subspace basis rows must equal the ambient dimension")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "ambient", ambient)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient: int) -> "SubspaceBasis":
        return cls(np.zeros((ambient, 0), dtype=complex), ambient)

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def _zero_singular_mask(sv: np.ndarray, shape: tuple[int, int], tol: Tolerances) -> np.ndarray:
    smax = sv.max() if sv.size else 0.0
    return sv <= tol.rank_rel * smax * max(shape)


def numerical_rank(m, tol: Tolerances = DEFAULT_TOL) -> int:
    m = as_cmatrix(m)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv.max() == 0.0:
        return 0
    return int(np.count_nonzero(~_zero_singular_mask(sv, m.shape, tol)))


def kernel_basis(m, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the numerical null space of ``m``.

    A singular value counts as zero when it is at most
    ``rank_rel * sigma_max * max(rows, cols)``.
    """
    m = as_cmatrix(m)
    _, sv, vh = np.linalg.svd(m, full_matrices=True)
    if sv.size == 0 or sv.max() == 0.0:
        return SubspaceBasis(np.eye(m.shape[1], dtype=complex))
    rank = int(np.count_nonzero(~_zero_singular_mask(sv, m.shape, tol)))
    return SubspaceBasis(vh[rank:].conj().T.copy(), m.shape[1])


def rel_residual(a, b, scale=None) -> float:
    """``||a - b||_F / scale`` with ``scale`` defaulting to ``max(||a||_F, ||b||_F)``."""
    a = np.asarray(a)
    b = np.asarray(b)
    diff = np.linalg.norm(a - b)
    if scale is None:
        scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0.0:
        return float(diff)
    return float(diff / scale)


def is_hermitian(h, tol: Tolerances = DEFAULT_TOL) -> bool:
    h = np.asarray(h)
    return rel_residual(h, h.conj().T, scale=max(np.linalg.norm(h), np.finfo(float).tiny)) <= tol.residual_rel


def inertia_with_threshold(h: np.ndarray, tau: float) -> tuple[int, int, int]:
    """Counts of eigenvalues above ``tau``, below ``-tau`` and in between."""
    if h.size == 0:
        return 0, 0, 0
    w = np.linalg.eigvalsh(h)
    p = int(np.count_nonzero(w > tau))
    q = int(np.count_nonzero(w < -tau))
    return p, q, h.shape[0] - p - q


def hermitian_inertia(h, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int, int]:
    """Return ``(p, q, z)``: positive, negative and zero eigenvalue counts.

    An eigenvalue is zero when ``|w| <= rank_rel * max|w|``. Matrices that
    are not Hermitian within ``residual_rel`` are rejected.
    """
    h = as_cmatrix(h, "hermitian matrix", square=True)
    if not is_hermitian(h, tol):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    h = (h + h.conj().T) / 2
    w = np.linalg.eigvalsh(h)
    scale = np.abs(w).max()
    return inertia_with_threshold(h, tol.rank_rel * scale)


def congruence(h, x) -> np.ndarray:
    """``x^dagger h x``."""
    h = as_cmatrix(h, "h", square=True)
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != h.shape[0]:
        raise InvalidInputError(f"congruence: x has shape {x.shape}, expected ({h.shape[0]}, k)")
    return x.conj().T @ h @ x


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis, tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of ``a + b``."""
    if a.ambient != b.ambient:
        raise InvalidInputError("subspace_sum: ambient dimensions differ")
    stacked = np.hstack([a.basis, b.basis])
    if stacked.shape[1] == 0:
        return SubspaceBasis.zero(a.ambient)
    u, sv, _ = np.linalg.svd(stacked, full_matrices=False)
    if sv.max() == 0.0:
        return SubspaceBasis.zero(a.ambient)
    rank = int(np.count_nonzero(~_zero_singular_mask(sv, stacked.shape, tol)))
    return SubspaceBasis(u[:, :rank].copy(), a.ambient)


def orthogonal_complement(w: SubspaceBasis) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of ``w``."""
    if w.dim == 0:
        return SubspaceBasis(np.eye(w.ambient, dtype=complex))
    u, _, _ = np.linalg.svd(w.basis, full_matrices=True)
    return SubspaceBasis(u[:, w.dim:].copy(), w.ambient)


def principal_angles(a: SubspaceBasis, b: SubspaceBasis) -> np.ndarray:
    """Principal angles in radians, largest first; empty if either side is zero."""
    if a.ambient != b.ambient:
        raise InvalidInputError("principal_angles: ambient dimensions differ")
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    return scipy.linalg.subspace_angles(a.basis, b.basis)
