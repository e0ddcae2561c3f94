"""Invariant Hermitian forms for the twisted Long-Moody construction and
a block-recursive signature algorithm.
"""
from __future__ import annotations

import cmath
import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import InvalidInputError, PreconditionError
from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerances,
    as_cmatrix,
    congruence,
    hermitian_inertia,
    inertia_with_threshold,
    is_hermitian,
    kernel_basis,
    principal_angles,
)

if TYPE_CHECKING:
    from .klm import QuotientData

__all__ = [
    "HermitianForm",
    "SignatureReport",
    "SignatureStep",
    "KernelComparison",
    "build_h_tilde",
    "check_unitary",
    "annihilation_check",
    "kernel_equals_kl",
    "quotient_form",
    "signature_recursive",
    "signature_oracle",
]


@dataclass(frozen=True)
class HermitianForm:
    matrix: np.ndarray
    hermiticity_residual: float
    checked: bool = True

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _matrix_of(h) -> np.ndarray:
    if isinstance(h, HermitianForm):
        return h.matrix
    return as_cmatrix(h, "form", square=True)


def _hermiticity(h: np.ndarray) -> float:
    scale = np.linalg.norm(h)
    return float(np.linalg.norm(h - h.conj().T) / scale) if scale else 0.0


def _half_powers(lam: complex) -> tuple[complex, complex]:
    """(lam^-1/2, lam^1/2) on the principal branch."""
    root = cmath.sqrt(lam)
    return 1 / root, root


def build_h_tilde(g: Sequence[np.ndarray], H, lam: complex, *, tol: Tolerances = DEFAULT_TOL) -> HermitianForm:
    """Form on C^{Nn} with block (j, k) = c_jk H (g_j^-1 - l_jk)(g_k - 1).

    c_jk = lam^-1/2 for j <= k and lam^1/2 for j > k (principal branch);
    l_jk = lam on the diagonal and 1 elsewhere.  For |lam| != 1 the matrix is
    still returned, flagged unchecked, with a warning.
    """
    lam = complex(lam)
    if lam == 0 or not np.isfinite(lam):
        raise InvalidInputError("lambda must be finite and nonzero")
    H = as_cmatrix(H, "H", square=True)
    g = [as_cmatrix(m, f"g_{j}", square=True) for j, m in enumerate(g, start=1)]
    N = H.shape[0]
    if any(m.shape[0] != N for m in g):
        raise InvalidInputError("H and the g_j must have the same size")
    if not is_hermitian(H, tol):
        raise PreconditionError("H is not Hermitian")
    checked = abs(abs(lam) - 1) <= 1e-9
    if not checked:
        warnings.warn("|lambda| != 1: the form is built but not expected to be Hermitian or invariant",
                      stacklevel=2)
    n = len(g)
    eye = np.eye(N)
    inv = [np.linalg.inv(m) for m in g]
    lo, hi = _half_powers(lam)
    out = np.zeros((N * n, N * n), dtype=complex)
    for j in range(n):
        for k in range(n):
            c = lo if j <= k else hi
            shift = lam if j == k else 1.0
            out[j * N:(j + 1) * N, k * N:(k + 1) * N] = c * H @ (inv[j] - shift * eye) @ (g[k] - eye)
    return HermitianForm(out, _hermiticity(out), checked)


def check_unitary(mats: Sequence[np.ndarray], H) -> float:
    """Largest ``||m^dagger H m - H||_F / ||H||_F`` over ``mats``."""
    H = _matrix_of(H)
    scale = np.linalg.norm(H)
    if scale == 0:
        raise PreconditionError("the form is zero")
    return max((float(np.linalg.norm(congruence(H, m) - H) / scale) for m in mats), default=0.0)


def annihilation_check(H, K: SubspaceBasis, L: SubspaceBasis) -> tuple[float, float]:
    """``(||H K||, ||H L||)`` relative to ``||H||`` (spectral norms)."""
    H = _matrix_of(H)
    scale = np.linalg.norm(H, 2)
    if scale == 0:
        return 0.0, 0.0

    def rel(b: SubspaceBasis) -> float:
        return float(np.linalg.norm(H @ b.basis, 2) / scale) if b.dim else 0.0

    return rel(K), rel(L)


@dataclass(frozen=True)
class KernelComparison:
    kernel_dim: int
    subspace_dim: int
    max_angle: float
    passed: bool


def kernel_equals_kl(H, W: SubspaceBasis, tol: Tolerances = DEFAULT_TOL,
                     angle_tol: float = 1e-6) -> KernelComparison:
    """Compare ker(H) with W = K + L: equal dimensions and principal angles
    at most ``angle_tol``.
    """
    H = _matrix_of(H)
    ker = kernel_basis(H, tol)
    angles = principal_angles(ker, W)
    max_angle = float(angles.max()) if angles.size else 0.0
    passed = ker.dim == W.dim and max_angle <= angle_tol
    return KernelComparison(ker.dim, W.dim, max_angle, passed)


def quotient_form(H, qd: "QuotientData", *, annihilation_tol: float = 1e-8) -> HermitianForm:
    """Induced form Q^dagger H Q on the quotient.

    Requires H to annihilate W = K + L.
    """
    H = _matrix_of(H)
    scale = np.linalg.norm(H, 2)
    if qd.W.dim and scale and np.linalg.norm(H @ qd.W.basis, 2) > annihilation_tol * scale:
        raise PreconditionError("the form does not annihilate K + L; the quotient form is not defined")
    if qd.Q.dim == 0:
        raise PreconditionError("the quotient is zero-dimensional")
    hq = congruence(H, qd.Q.basis)
    return HermitianForm(hq, _hermiticity(hq))


@dataclass(frozen=True)
class SignatureStep:
    block_size: int
    nonzero: int
    pivot_p: int
    pivot_q: int
    kernel_cross: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SignatureReport:
    """Inertia from the recursive algorithm, with the oracle's answer alongside."""

    p: int
    q: int
    z: int
    steps: tuple[SignatureStep, ...] = ()
    fallback_used: bool = False
    fallback_reason: str = ""
    oracle: tuple[int, int, int] | None = None

    @property
    def matches_oracle(self) -> bool | None:
        return None if self.oracle is None else (self.p, self.q, self.z) == tuple(self.oracle)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "z": self.z,
            "steps": [s.as_dict() for s in self.steps],
            "fallback_used": self.fallback_used,
            "fallback_reason": self.fallback_reason,
            "oracle": None if self.oracle is None else list(self.oracle),
            "match": self.matches_oracle,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def signature_oracle(H, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int, int]:
    """Inertia by full eigendecomposition."""
    return hermitian_inertia(_matrix_of(H), tol)


def signature_recursive(H, block_size: int, tol: Tolerances = DEFAULT_TOL,
                        pivot_floor: float = 1e-6) -> SignatureReport:
    """Inertia by eliminating one leading block of ``block_size`` at a time.

    Each leading block is diagonalised; its nonzero part is the pivot of a
    Schur complement and its zero part adds to z.  The zero part may only be
    split off when its coupling to the rest vanishes (within
    ``residual_rel * ||H||``).  When it does not, or when a pivot eigenvalue
    is below ``pivot_floor * ||H||``, the remaining matrix goes to the
    eigenvalue oracle and the report says so.

    The zero threshold is ``rank_rel * ||H||_2`` throughout, the same one the
    oracle uses, so both count the same eigenvalues as zero.
    """
    A = _matrix_of(H)
    if not is_hermitian(A, tol):
        raise PreconditionError("matrix is not Hermitian within tolerance")
    if not isinstance(block_size, (int, np.integer)) or block_size < 1:
        raise InvalidInputError(f"block size must be a positive integer, got {block_size!r}")
    if A.shape[0] % block_size:
        raise InvalidInputError(f"size {A.shape[0]} is not a multiple of the block size {block_size}")
    A = (A + A.conj().T) / 2
    total = A.shape[0]
    scale = float(np.abs(np.linalg.eigvalsh(A)).max())
    tau = tol.rank_rel * scale
    oracle = inertia_with_threshold(A, tau)

    p = q = 0
    steps: list[SignatureStep] = []
    reason = ""
    cur = A
    while cur.shape[0]:
        b = min(block_size, cur.shape[0])
        lead, cross = cur[:b, :b], cur[:b, b:]
        w, u = np.linalg.eigh(lead)
        nz = np.abs(w) > tau
        u_nz, u_zero = u[:, nz], u[:, ~nz]
        coupling = float(np.linalg.norm(u_zero.conj().T @ cross, 2)) if u_zero.shape[1] and cross.size else 0.0
        coupling_rel = coupling / scale if scale else 0.0
        if coupling_rel > tol.residual_rel:
            reason = f"kernel of a leading block couples to the rest (relative {coupling_rel:.2e})"
        elif nz.any() and np.abs(w[nz]).min() < pivot_floor * scale:
            reason = f"ill-conditioned pivot (smallest |eigenvalue| {np.abs(w[nz]).min() / scale:.2e} relative)"
        if reason:
            dp, dq, _ = inertia_with_threshold(cur, tau)
            p += dp
            q += dq
            break
        wp = w[nz]
        pp, pq = int(np.count_nonzero(wp > 0)), int(np.count_nonzero(wp < 0))
        p += pp
        q += pq
        steps.append(SignatureStep(b, int(nz.sum()), pp, pq, coupling_rel))
        c = u_nz.conj().T @ cross
        rest = cur[b:, b:]
        if c.size:
            rest = rest - c.conj().T @ (c / wp[:, None])
            rest = (rest + rest.conj().T) / 2
        cur = rest
    return SignatureReport(p, q, total - p - q, tuple(steps), bool(reason), reason, oracle)
