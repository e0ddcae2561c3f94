"""The K + L quotient of the twisted construction and iterated towers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .convolutions import dr_matrix, twisted_lm
from .errors import InvalidInputError, PreconditionError, ResourceGuardError
from .hermitian import quotient_form
from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    Tolerances,
    as_cmatrix,
    kernel_basis,
    orthogonal_complement,
    subspace_sum,
)
from .reps import SemidirectRep, check_braid_relations, check_semidirect_compat, commutant_dimension

__all__ = [
    "QuotientData",
    "TowerLevel",
    "subspace_k",
    "subspace_l",
    "l_fixed_residual",
    "invariance_residual",
    "quotient_action",
    "quotient_data",
    "klm",
    "tower",
    "DEFAULT_MAX_DIM",
]

DEFAULT_MAX_DIM = 4096
INVARIANCE_LIMIT = 1e-6


@dataclass(frozen=True)
class QuotientData:
    """W = K + L, an orthonormal basis Q of its complement, and dimensions."""

    W: SubspaceBasis
    Q: SubspaceBasis
    dim_k: int
    dim_l: int
    l_fixed_residual: float = 0.0

    @property
    def dim_w(self) -> int:
        return self.W.dim

    @property
    def dim_quotient(self) -> int:
        return self.Q.dim

    def as_dict(self) -> dict:
        return {"dim_K": self.dim_k, "dim_L": self.dim_l, "dim_W": self.dim_w,
                "dim_quotient": self.dim_quotient, "L_fixed_residual": self.l_fixed_residual}


def subspace_k(g: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """K = ker(g_1 - 1) + ... + ker(g_n - 1), one summand per block."""
    g = [as_cmatrix(m, f"g_{j}", square=True) for j, m in enumerate(g, start=1)]
    N = g[0].shape[0]
    n = len(g)
    cols = []
    for j, m in enumerate(g):
        kb = kernel_basis(m - np.eye(N), tol).basis
        block = np.zeros((N * n, kb.shape[1]), dtype=complex)
        block[j * N:(j + 1) * N] = kb
        cols.append(block)
    return SubspaceBasis(np.hstack(cols), N * n)


def subspace_l(G: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> SubspaceBasis:
    """L = ker(G_1 G_2 ... G_n - 1) for the DR matrices G_j."""
    G = [as_cmatrix(m, f"G_{j}", square=True) for j, m in enumerate(G, start=1)]
    prod = np.eye(G[0].shape[0], dtype=complex)
    for m in G:
        prod = prod @ m
    return kernel_basis(prod - np.eye(prod.shape[0]), tol)


def l_fixed_residual(G: Sequence[np.ndarray], L: SubspaceBasis) -> float:
    """Largest ``||(G_j - 1) L||_2``; reported, not enforced."""
    if L.dim == 0:
        return 0.0
    return max(float(np.linalg.norm(m @ L.basis - L.basis, 2)) for m in G)


def invariance_residual(m: np.ndarray, W: SubspaceBasis) -> float:
    """``||(1 - W W^dagger) m W||_F / max(||m W||_F, eps)``."""
    if W.dim == 0:
        return 0.0
    mw = as_cmatrix(m, square=True) @ W.basis
    leak = mw - W.basis @ (W.basis.conj().T @ mw)
    return float(np.linalg.norm(leak) / max(np.linalg.norm(mw), np.finfo(float).eps))


def quotient_action(mats: Sequence[np.ndarray], qd: QuotientData,
                    limit: float = INVARIANCE_LIMIT) -> list[np.ndarray]:
    """Matrices ``Q^dagger m Q`` of the induced action on C^{Nn} / W."""
    out = []
    for idx, m in enumerate(mats):
        res = invariance_residual(m, qd.W)
        if res > limit:
            raise PreconditionError(f"generator {idx} does not preserve K + L (residual {res:.2e})")
        out.append(qd.Q.basis.conj().T @ m @ qd.Q.basis)
    return out


def quotient_data(g: Sequence[np.ndarray], lam: complex, tol: Tolerances = DEFAULT_TOL) -> QuotientData:
    G = [dr_matrix(g, lam, j) for j in range(1, len(g) + 1)]
    K = subspace_k(g, tol)
    L = subspace_l(G, tol)
    W = subspace_sum(K, L, tol)
    return QuotientData(W, orthogonal_complement(W), K.dim, L.dim, l_fixed_residual(G, L))


def klm(rep: SemidirectRep, lam: complex, tol: Tolerances = DEFAULT_TOL,
        check: bool = True) -> tuple[SemidirectRep | None, QuotientData]:
    """Twisted construction followed by the quotient by K + L.

    Returns ``(None, data)`` when the quotient is zero-dimensional.  When the
    input carries H and |lam| = 1 the quotient carries the induced form.
    """
    full = twisted_lm(rep, lam, check=check, tol=tol)
    qd = quotient_data(rep.g, lam, tol)
    if qd.dim_quotient == 0:
        return None, qd
    g_q = quotient_action(full.g, qd)
    s_items = sorted(full.s.items())
    s_q = quotient_action([m for _, m in s_items], qd)
    h_q = quotient_form(full.H, qd).matrix if full.H is not None else None
    out = SemidirectRep(rep.n, qd.dim_quotient, tuple(g_q), {i: m for (i, _), m in zip(s_items, s_q)}, H=h_q)
    return out, qd


@dataclass
class TowerLevel:
    """One level of a tower: the representation and its diagnostics."""

    level: int
    lam: complex | None
    rep: SemidirectRep | None
    dim: int
    compat_residual: float | None = None
    braid_residual: float | None = None
    commutant_dim: int | None = None
    quotient: dict | None = field(default=None)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "lambda": None if self.lam is None else [self.lam.real, self.lam.imag],
            "dim": self.dim,
            "compat_residual": self.compat_residual,
            "braid_residual": self.braid_residual,
            "commutant_dim": self.commutant_dim,
            "quotient": self.quotient,
        }


def _diagnose(level: int, lam, rep: SemidirectRep, quotient: dict | None, tol: Tolerances) -> TowerLevel:
    braid = check_braid_relations(rep) if rep.has_full_braid_action else None
    return TowerLevel(level, lam, rep, rep.N, check_semidirect_compat(rep), braid,
                      commutant_dimension(rep, tol), quotient)


def tower(seed: SemidirectRep, lambdas: Sequence[complex], depth: int, *, quotient: bool = True,
          max_dim: int = DEFAULT_MAX_DIM, tol: Tolerances = DEFAULT_TOL) -> list[TowerLevel]:
    """Iterate the construction ``depth`` times, level k using ``lambdas[k-1]``.

    With ``quotient`` set each step is :func:`klm`, otherwise the plain
    twisted construction.  Level 0 is the seed.  The tower stops early at a
    zero-dimensional quotient.  A step whose output would exceed ``max_dim``
    raises :class:`ResourceGuardError` before any work is done.
    """
    if not isinstance(depth, int) or depth < 0:
        raise InvalidInputError("depth must be a non-negative integer")
    if len(lambdas) < depth:
        raise InvalidInputError(f"need {depth} lambda values, got {len(lambdas)}")
    levels = [_diagnose(0, None, seed, None, tol)]
    rep = seed
    for k in range(1, depth + 1):
        lam = complex(lambdas[k - 1])
        if rep.N * rep.n > max_dim:
            raise ResourceGuardError(
                f"level {k} would have dimension {rep.N * rep.n}, above the limit {max_dim}")
        if quotient:
            nxt, qd = klm(rep, lam, tol)
            if nxt is None:
                levels.append(TowerLevel(k, lam, None, 0, quotient=qd.as_dict()))
                break
            levels.append(_diagnose(k, lam, nxt, qd.as_dict(), tol))
        else:
            nxt = twisted_lm(rep, lam, tol=tol)
            levels.append(_diagnose(k, lam, nxt, None, tol))
        rep = nxt
    return levels
