"""Long-Moody type constructions and Haraoka's multiplicative convolution.

All outputs act on C^{N n}, split into n blocks of size N.  Block indices
are 1-based in the public API, matching generator indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .braidwords import pure_letters
from .errors import InvalidInputError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerances, as_cmatrix, numerical_rank
from .reps import PureBraidAntiRep, SemidirectRep, check_semidirect_compat

__all__ = [
    "HaraokaReadings",
    "DEFAULT_READINGS",
    "lm_sigma",
    "dr_matrix",
    "twisted_lm",
    "wada_lm",
    "haraoka_n0j",
    "haraoka_nij",
    "haraoka_convolution",
    "additive_b0j",
    "basis_matrix_p",
    "basis_change",
]


@dataclass(frozen=True)
class HaraokaReadings:
    """Which index variant to use at three places of the convolution formulas.

    ``pivot``: the block carrying the lambda-scaled M_0 in row j of N_0j,
    either ``"j"`` or ``"j-1"``.
    ``x_inverse``: the inverted matrix in the X_k blocks, ``"0i"`` (M_0i^-1)
    or ``"1i"`` (M_1i^-1, with M_11 read as the identity).
    ``middle``: the right factor of the diagonal blocks strictly between i and
    j, ``"0i"`` (M_0i^-1 M_ij M_0i) or ``"0j"`` (M_0i^-1 M_ij M_0j).

    The defaults are the combination under which the convolution matches the
    twisted Long-Moody images on noncommuting inputs.
    """

    pivot: str = "j"
    x_inverse: str = "0i"
    middle: str = "0i"

    def __post_init__(self):
        if self.pivot not in ("j", "j-1"):
            raise InvalidInputError(f"pivot reading must be 'j' or 'j-1', got {self.pivot!r}")
        if self.x_inverse not in ("0i", "1i"):
            raise InvalidInputError(f"x_inverse reading must be '0i' or '1i', got {self.x_inverse!r}")
        if self.middle not in ("0i", "0j"):
            raise InvalidInputError(f"middle reading must be '0i' or '0j', got {self.middle!r}")

    def label(self) -> str:
        return f"pivot={self.pivot},x_inverse={self.x_inverse},middle={self.middle}"


DEFAULT_READINGS = HaraokaReadings()


def _blocks(mats: Sequence[np.ndarray]) -> tuple[list[np.ndarray], int]:
    mats = [as_cmatrix(m, f"block {k}", square=True) for k, m in enumerate(mats, start=1)]
    if not mats:
        raise InvalidInputError("need at least one matrix")
    N = mats[0].shape[0]
    if any(m.shape[0] != N for m in mats):
        raise InvalidInputError("all matrices must share one size")
    return mats, N


def _set(out: np.ndarray, N: int, r: int, c: int, block: np.ndarray) -> None:
    out[(r - 1) * N:r * N, (c - 1) * N:c * N] = block


def _block_row_operator(mats: Sequence[np.ndarray], lam: complex, row: int, pivot: int) -> np.ndarray:
    """Identity except block row ``row``:
    lam (m_k - 1) for k < pivot, lam m_pivot at k = pivot, m_k - 1 for k > pivot.
    """
    mats, N = _blocks(mats)
    n = len(mats)
    eye = np.eye(N)
    out = np.eye(N * n, dtype=complex)
    for k, m in enumerate(mats, start=1):
        if k < pivot:
            blk = lam * (m - eye)
        elif k == pivot:
            blk = lam * m
        else:
            blk = m - eye
        _set(out, N, row, k, blk)
    return out


def _check_index(i: int, lo: int, hi: int, name: str) -> None:
    if not isinstance(i, (int, np.integer)) or not lo <= i <= hi:
        raise InvalidInputError(f"{name} = {i!r} outside {lo}..{hi}")


def _lm_from(g: Sequence[np.ndarray], si: np.ndarray, i: int) -> np.ndarray:
    g, N = _blocks(g)
    n = len(g)
    eye = np.eye(N)
    r = np.zeros((N * n, N * n), dtype=complex)
    r[:] = np.eye(N * n)
    _set(r, N, i, i, np.zeros((N, N)))
    _set(r, N, i, i + 1, g[i - 1])
    _set(r, N, i + 1, i, eye)
    _set(r, N, i + 1, i + 1, eye - g[i])
    return np.kron(np.eye(n), si) @ r


def lm_sigma(rep: SemidirectRep, i: int) -> np.ndarray:
    """Long-Moody image of sigma_i: (s_i on every block) times R_i,
    where R_i = [[0, g_i], [I, I - g_{i+1}]] sits on blocks i, i+1.
    """
    _check_index(i, 1, rep.n - 1, "sigma index")
    if i not in rep.s:
        raise PreconditionError(f"s_{i} is not defined")
    return _lm_from(rep.g, rep.s[i], i)


def dr_matrix(g: Sequence[np.ndarray], lam: complex, j: int) -> np.ndarray:
    """Dettweiler-Reiter image of x_j: identity except block row j, which is
    (lam(g_1-1), .., lam(g_{j-1}-1), lam g_j, g_{j+1}-1, .., g_n-1).
    """
    _check_index(j, 1, len(g), "generator index")
    return _block_row_operator(g, complex(lam), j, j)


def _lam(lam) -> complex:
    lam = complex(lam)
    if lam == 0 or not np.isfinite(lam):
        raise InvalidInputError("lambda must be finite and nonzero")
    return lam


def _require_compatible(rep: SemidirectRep, tol: Tolerances) -> None:
    res = check_semidirect_compat(rep)
    if res > tol.residual_rel:
        raise PreconditionError(f"input fails the semidirect compatibility check (residual {res:.2e})")


def twisted_lm(rep: SemidirectRep, lam: complex, *, check: bool = True,
               tol: Tolerances = DEFAULT_TOL) -> SemidirectRep:
    """Twisted Long-Moody representation of F_n x| B_n on C^{Nn}.

    g'_j is the DR image of x_j and s'_i the LM image of sigma_i, for every
    i on which the input defines s_i (none for a free-group representation).  When the
    input carries an invariant form H, the output carries H-tilde.
    """
    from .hermitian import build_h_tilde

    lam = _lam(lam)
    if rep.anti:
        raise PreconditionError("twisted_lm expects a homomorphism")
    if rep.action_exponent != 1 or rep.x_power != 1:
        raise PreconditionError("twisted_lm needs the Artin action; use wada_lm for k != 1")
    if check:
        _require_compatible(rep, tol)
    g_new = tuple(dr_matrix(rep.g, lam, j) for j in range(1, rep.n + 1))
    s_new = {i: _lm_from(rep.g, si, i) for i, si in rep.s.items()}
    h_new = None
    if rep.H is not None and abs(abs(lam) - 1) <= 1e-9:
        h_new = build_h_tilde(rep.g, rep.H, lam).matrix
    return SemidirectRep(rep.n, rep.N * rep.n, g_new, s_new, H=h_new)


def wada_lm(rep: SemidirectRep, lam: complex, k: int, *, check: bool = True,
            tol: Tolerances = DEFAULT_TOL) -> SemidirectRep:
    """Wada-twisted variant: every g_j is replaced by g_j**k in both factors.

    The output's g_j are images of x_j**k (``x_power = k``) and it is
    compatible with the Wada action of exponent k.  For k = 1 this is exactly
    :func:`twisted_lm`.
    """
    if not isinstance(k, int) or k == 0:
        raise InvalidInputError("Wada exponent k must be a nonzero integer")
    if k == 1:
        return twisted_lm(rep, lam, check=check, tol=tol)
    from .hermitian import build_h_tilde

    lam = _lam(lam)
    if rep.anti or rep.action_exponent != 1 or rep.x_power != 1:
        raise PreconditionError("wada_lm expects an Artin-compatible homomorphism with g_j = rho(x_j)")
    if check:
        _require_compatible(rep, tol)
    gk = [np.linalg.matrix_power(m, k) for m in rep.g]
    g_new = tuple(dr_matrix(gk, lam, j) for j in range(1, rep.n + 1))
    s_new = {i: _lm_from(gk, si, i) for i, si in rep.s.items()}
    h_new = None
    if rep.H is not None and abs(abs(lam) - 1) <= 1e-9:
        h_new = build_h_tilde(gk, rep.H, lam).matrix
    return SemidirectRep(rep.n, rep.N * rep.n, g_new, s_new, action_exponent=k, x_power=k, H=h_new)


def _m0(M: Mapping[tuple[int, int], np.ndarray], n: int) -> list[np.ndarray]:
    return [M[(0, k)] for k in range(1, n + 1)]


def haraoka_n0j(M0: Sequence[np.ndarray], lam: complex, j: int,
                readings: HaraokaReadings = DEFAULT_READINGS) -> np.ndarray:
    """N_0j: identity except block row j.

    With the default pivot reading this is the same matrix as
    ``dr_matrix(M0, lam, j)``.  The ``"j-1"`` reading moves the lambda M_0
    block one column left (for j = 1 no block carries it).
    """
    _check_index(j, 1, len(M0), "generator index")
    pivot = j if readings.pivot == "j" else j - 1
    return _block_row_operator(M0, complex(lam), j, pivot)


def haraoka_nij(M: Mapping[tuple[int, int], np.ndarray], lam: complex, i: int, j: int,
                readings: HaraokaReadings = DEFAULT_READINGS) -> np.ndarray:
    """N_ij for 1 <= i < j <= n.

    Outside blocks i..j the matrix is M_ij on the diagonal.  Rows i and j
    mix blocks i, j and every k strictly between them; those k rows carry the
    conjugated M_ij on the diagonal.  ``lam`` does not enter.
    """
    n = max(b for _, b in M)
    _check_index(j, 2, n, "j")
    _check_index(i, 1, j - 1, "i")
    mij, m0i, m0j = M[(i, j)], M[(0, i)], M[(0, j)]
    N = mij.shape[0]
    eye = np.eye(N)
    m0i_inv = np.linalg.inv(m0i)
    if readings.x_inverse == "0i":
        x_inv = m0i_inv
    else:
        x_inv = eye if i == 1 else np.linalg.inv(M[(1, i)])
    middle = m0i_inv @ mij @ (m0i if readings.middle == "0i" else m0j)

    out = np.zeros((N * n, N * n), dtype=complex)
    for k in range(1, n + 1):
        if k < i or k > j:
            _set(out, N, k, k, mij)
    _set(out, N, i, i, m0j @ mij)
    _set(out, N, i, j, m0j @ mij @ (eye - m0j))
    _set(out, N, j, i, mij @ (eye - m0i))
    _set(out, N, j, j, mij - mij @ m0j + m0j @ mij @ m0i)
    for k in range(i + 1, j):
        one_minus = eye - M[(0, k)]
        _set(out, N, k, k, middle)
        _set(out, N, i, k, (m0j @ mij - x_inv @ mij @ m0i) @ one_minus
             if readings.middle == "0i" else (m0j @ mij - x_inv @ mij @ m0j) @ one_minus)
        _set(out, N, j, k, mij @ (eye - m0i) @ one_minus)
    return out


def haraoka_convolution(rep: PureBraidAntiRep, lam: complex,
                        readings: HaraokaReadings = DEFAULT_READINGS) -> PureBraidAntiRep:
    """All N_ij for 0 <= i < j <= n, as an anti representation on C^{Nn}."""
    lam = _lam(lam)
    n = rep.n
    M0 = _m0(rep.M, n)
    out = {(0, j): haraoka_n0j(M0, lam, j, readings) for j in range(1, n + 1)}
    for i, j in pure_letters(n):
        if i:
            out[(i, j)] = haraoka_nij(rep.M, lam, i, j, readings)
    try:
        return PureBraidAntiRep(n, rep.N * n, out, anti=rep.anti)
    except InvalidInputError as exc:
        raise PreconditionError(f"convolution produced a singular matrix under readings {readings.label()}: {exc}")


def additive_b0j(A0: Sequence[np.ndarray], lam: complex, j: int) -> np.ndarray:
    """Additive convolution block matrix: zero except block row j, which is
    (A_01, .., A_0j + lam I, .., A_0n).
    """
    A0, N = _blocks(A0)
    _check_index(j, 1, len(A0), "j")
    n = len(A0)
    out = np.zeros((N * n, N * n), dtype=complex)
    for k, a in enumerate(A0, start=1):
        _set(out, N, j, k, a + complex(lam) * np.eye(N) if k == j else a)
    return out


def basis_matrix_p(M0: Sequence[np.ndarray], lam: complex,
                   tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, bool]:
    """Block upper-triangular P with P[m, k] = (1 - lam)(1 - M_0k) for m <= k.

    Returns ``(P, singular)``; a singular P is reported rather than raised.
    """
    M0, N = _blocks(M0)
    n = len(M0)
    eye = np.eye(N)
    p = np.zeros((N * n, N * n), dtype=complex)
    for k, m in enumerate(M0, start=1):
        blk = (1 - complex(lam)) * (eye - m)
        for r in range(1, k + 1):
            _set(p, N, r, k, blk)
    return p, numerical_rank(p, tol) < N * n


def basis_change(mat: np.ndarray, P: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``P mat P^-1``; raises if P is numerically singular."""
    mat = as_cmatrix(mat, "matrix", square=True)
    P = as_cmatrix(P, "P", square=True)
    if P.shape != mat.shape:
        raise InvalidInputError("P and the matrix must have the same size")
    if numerical_rank(P, tol) < P.shape[0]:
        raise PreconditionError("basis matrix P is singular")
    # X P = P mat  <=>  P^T X^T = (P mat)^T
    return np.linalg.solve(P.T, (P @ mat).T).T
