"""Matrix representations of F_n x| B_n and anti-representations of pure braid letters."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .braidwords import (
    FreeWord,
    MixedWord,
    invert,
    pure_braid_generator,
    pure_letters,
    tilde_pure_braid_generator,
    wada_act,
)
from .errors import InvalidInputError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerances, as_cmatrix, kernel_basis, numerical_rank, rel_residual

__all__ = [
    "SemidirectRep",
    "PureBraidAntiRep",
    "evaluate",
    "evaluate_anti",
    "check_semidirect_compat",
    "check_braid_relations",
    "restrict_to_pure",
    "op_transform",
    "commutant_dimension",
    "scalar_seed",
    "random_unitary_free_rep",
    "haar_unitary",
    "pure_word",
    "generator_images",
]


def _invertible(m: np.ndarray, name: str, tol: Tolerances) -> np.ndarray:
    if numerical_rank(m, tol) < m.shape[0]:
        raise InvalidInputError(f"{name} is numerically singular")
    return m


@dataclass(frozen=True)
class SemidirectRep:
    """Invertible matrices g_j = rho(x_j**x_power) and s_i = rho(sigma_i).

    ``s`` may be defined on a subset of 1..n-1 (a free-group representation has
    no s at all).  ``action_exponent`` is the Wada exponent k of the action
    the representation is compatible with; k = 1 is the Artin action.
    ``x_power`` is 1 except for Wada-twisted outputs, whose g_j are images of
    x_j**k.  ``anti`` marks an anti-homomorphism (words evaluate right to left).
    """

    n: int
    N: int
    g: tuple[np.ndarray, ...]
    s: Mapping[int, np.ndarray] = field(default_factory=dict)
    action_exponent: int = 1
    x_power: int = 1
    H: np.ndarray | None = None
    anti: bool = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidInputError(f"N must be a positive integer, got {self.N!r}")
        if len(self.g) != self.n:
            raise InvalidInputError(f"expected {self.n} free generator images, got {len(self.g)}")
        if not isinstance(self.action_exponent, int) or self.action_exponent == 0:
            raise InvalidInputError("action_exponent must be a nonzero integer")
        if not isinstance(self.x_power, int) or self.x_power == 0:
            raise InvalidInputError("x_power must be a nonzero integer")
        g = tuple(self._matrix(m, f"g_{j}") for j, m in enumerate(self.g, start=1))
        s = {}
        for i, m in sorted(dict(self.s).items()):
            if not isinstance(i, (int, np.integer)) or not 1 <= i <= self.n - 1:
                raise InvalidInputError(f"s index {i!r} outside 1..{self.n - 1}")
            s[int(i)] = self._matrix(m, f"s_{i}")
        h = None
        if self.H is not None:
            h = as_cmatrix(self.H, "H", square=True)
            if h.shape[0] != self.N:
                raise InvalidInputError(f"H has size {h.shape[0]}, expected {self.N}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "H", h)

    def _matrix(self, m, name: str) -> np.ndarray:
        m = as_cmatrix(m, name, square=True)
        if m.shape[0] != self.N:
            raise InvalidInputError(f"{name} has size {m.shape[0]}, expected {self.N}")
        return _invertible(m, name, DEFAULT_TOL)

    @property
    def has_full_braid_action(self) -> bool:
        return set(self.s) == set(range(1, self.n))


@dataclass(frozen=True)
class PureBraidAntiRep:
    """Matrices M[(i, j)] for 0 <= i < j <= n.

    With ``anti`` set, a letter sequence l_1 .. l_m evaluates to
    M(l_m) .. M(l_1).
    """

    n: int
    N: int
    M: Mapping[tuple[int, int], np.ndarray]
    anti: bool = True

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidInputError(f"N must be a positive integer, got {self.N!r}")
        expected = set(pure_letters(self.n))
        got = {tuple(k) for k in self.M}
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise InvalidInputError(f"pure letter keys mismatch (missing {missing}, unexpected {extra})")
        mats = {}
        for key in pure_letters(self.n):
            m = as_cmatrix(self.M[key], f"M{key}", square=True)
            if m.shape[0] != self.N:
                raise InvalidInputError(f"M{key} has size {m.shape[0]}, expected {self.N}")
            mats[key] = _invertible(m, f"M{key}", DEFAULT_TOL)
        object.__setattr__(self, "M", mats)


def _power(m: np.ndarray, e: int) -> np.ndarray:
    return np.linalg.matrix_power(m, e)


def evaluate(rep: SemidirectRep, w: MixedWord) -> np.ndarray:
    """Matrix of a mixed word; anti representations multiply in reverse order."""
    if w.n != rep.n:
        raise InvalidInputError(f"word is over n={w.n}, representation over n={rep.n}")
    factors = []
    for kind, idx, exp in w.tokens:
        if kind == "x":
            if exp % rep.x_power:
                raise PreconditionError(
                    f"x_{idx}^{exp} is not a power of x_{idx}^{rep.x_power}, the stored generator image"
                )
            factors.append(_power(rep.g[idx - 1], exp // rep.x_power))
        else:
            if idx not in rep.s:
                raise PreconditionError(f"s_{idx} is not in the representation's domain")
            factors.append(_power(rep.s[idx], exp))
    if rep.anti:
        factors.reverse()
    out = np.eye(rep.N, dtype=complex)
    for f in factors:
        out = out @ f
    return out


def evaluate_anti(rep: PureBraidAntiRep, letters: Iterable[tuple[tuple[int, int], int]]) -> np.ndarray:
    """Evaluate a word ``[((i, j), e), ...]`` in the pure letters."""
    factors = []
    for key, exp in letters:
        key = tuple(key)
        if key not in rep.M:
            raise InvalidInputError(f"unknown pure letter {key}")
        factors.append(_power(rep.M[key], exp))
    if rep.anti:
        factors.reverse()
    out = np.eye(rep.N, dtype=complex)
    for f in factors:
        out = out @ f
    return out


def check_semidirect_compat(rep: SemidirectRep) -> float:
    """Largest ``||s_i g_j s_i^-1 - rho(phi(sigma_i)(x_j))||_F / ||g_j||_F``.

    The action is Wada's with exponent ``rep.action_exponent``; for
    ``x_power = p`` the compared element is the image of x_j**p.
    """
    if rep.anti:
        rep = op_transform(rep)
    worst = 0.0
    p = rep.x_power
    for i, si in rep.s.items():
        si_inv = np.linalg.inv(si)
        for j in range(1, rep.n + 1):
            gj = rep.g[j - 1]
            lhs = si @ gj @ si_inv
            image = wada_act(rep.action_exponent, i, 1, FreeWord.generator(rep.n, j, p))
            rhs = evaluate(rep, MixedWord.from_free(image))
            worst = max(worst, rel_residual(lhs, rhs, scale=np.linalg.norm(gj)))
    return worst


def check_braid_relations(rep: SemidirectRep) -> float:
    """Largest relative residual of the braid relations among the s_i."""
    if not rep.has_full_braid_action:
        raise PreconditionError("braid relations need s_1..s_{n-1} all defined")
    s = rep.s
    worst = 0.0
    for i in range(1, rep.n):
        for j in range(i + 2, rep.n):
            worst = max(worst, rel_residual(s[i] @ s[j], s[j] @ s[i]))
        if i + 1 < rep.n:
            a = s[i] @ s[i + 1] @ s[i]
            b = s[i + 1] @ s[i] @ s[i + 1]
            worst = max(worst, rel_residual(a, b))
    return worst


def pure_word(i: int, j: int, n: int, convention: str = "B") -> MixedWord:
    """Braid word whose image defines M_ij under the chosen convention.

    Convention ``"A"`` uses sigma_ij itself; ``"B"`` uses the inverse of the
    tilde generator.  See :func:`restrict_to_pure`.
    """
    if convention == "A":
        return MixedWord.from_braid(pure_braid_generator(i, j, n))
    if convention == "B":
        return MixedWord.from_braid(invert(tilde_pure_braid_generator(i, j, n)))
    raise InvalidInputError(f"convention must be 'A' or 'B', got {convention!r}")


def restrict_to_pure(rep: SemidirectRep, convention: str = "B") -> PureBraidAntiRep:
    """M_0j = g_j and M_ij = image of the convention's word for (i, j).

    Convention B (the default) makes the Haraoka convolution of the result
    agree with the twisted Long-Moody images; convention A is kept for
    adjudication.
    """
    if rep.anti:
        raise PreconditionError("restrict_to_pure expects a homomorphism, not an anti representation")
    if rep.x_power != 1:
        raise PreconditionError("restrict_to_pure needs g_j = rho(x_j) (x_power 1)")
    if not rep.has_full_braid_action:
        raise PreconditionError("restrict_to_pure needs s_1..s_{n-1} all defined")
    mats = {(0, j): rep.g[j - 1] for j in range(1, rep.n + 1)}
    for i in range(1, rep.n + 1):
        for j in range(i + 1, rep.n + 1):
            mats[(i, j)] = evaluate(rep, pure_word(i, j, rep.n, convention))
    return PureBraidAntiRep(rep.n, rep.N, mats, anti=True)


def op_transform(rep):
    """Swap homomorphism and anti-homomorphism by inverting every generator."""
    if isinstance(rep, SemidirectRep):
        return replace(
            rep,
            g=tuple(np.linalg.inv(m) for m in rep.g),
            s={i: np.linalg.inv(m) for i, m in rep.s.items()},
            anti=not rep.anti,
        )
    if isinstance(rep, PureBraidAntiRep):
        return PureBraidAntiRep(rep.n, rep.N, {k: np.linalg.inv(m) for k, m in rep.M.items()}, anti=not rep.anti)
    raise InvalidInputError(f"op_transform: unsupported type {type(rep).__name__}")


def generator_images(rep) -> list[np.ndarray]:
    """All generator matrices of a representation, in a fixed order."""
    if isinstance(rep, SemidirectRep):
        return list(rep.g) + [rep.s[i] for i in sorted(rep.s)]
    if isinstance(rep, PureBraidAntiRep):
        return [rep.M[k] for k in pure_letters(rep.n)]
    return [as_cmatrix(m, square=True) for m in rep]


def commutant_dimension(mats: Sequence[np.ndarray] | SemidirectRep | PureBraidAntiRep,
                        tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of {X : X M = M X for every M}, via the stacked linear map."""
    mats = generator_images(mats)
    if not mats:
        raise InvalidInputError("commutant_dimension needs at least one matrix")
    d = mats[0].shape[0]
    eye = np.eye(d)
    # vec(M X - X M) = (I kron M - M^T kron I) vec(X) for column-major vec
    blocks = [np.kron(eye, m) - np.kron(m.T, eye) for m in mats]
    return kernel_basis(np.vstack(blocks), tol).dim


def scalar_seed(n: int, t: complex, s: complex, require_unit: bool = True) -> SemidirectRep:
    """One-dimensional representation x_j -> t, sigma_i -> s, with H = [[1]].

    Unit-modulus parameters are expected; pass ``require_unit=False`` to
    accept others with a warning.
    """
    t = complex(t)
    s = complex(s)
    if t == 0 or s == 0 or not (np.isfinite(t) and np.isfinite(s)):
        raise InvalidInputError("scalar seed parameters must be finite and nonzero")
    off = max(abs(abs(t) - 1), abs(abs(s) - 1))
    if off > 1e-12:
        if require_unit:
            raise InvalidInputError(f"scalar seed parameters must have modulus 1 (off by {off:.2e})")
        warnings.warn(f"scalar seed parameters are not unit modulus (off by {off:.2e}); H = [[1]] is not invariant",
                      stacklevel=2)
    one = lambda z: np.array([[z]], dtype=complex)  # noqa: E731
    return SemidirectRep(n, 1, tuple(one(t) for _ in range(n)), {i: one(s) for i in range(1, n)},
                         H=np.eye(1, dtype=complex))


def haar_unitary(rng: np.random.Generator, N: int) -> np.ndarray:
    z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_unitary_free_rep(n: int, N: int, seed: int | np.random.Generator) -> SemidirectRep:
    """Haar-random unitary g_1..g_n, no braid generators, H = I."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return SemidirectRep(n, N, tuple(haar_unitary(rng, N) for _ in range(n)), {},
                         H=np.eye(N, dtype=complex))
