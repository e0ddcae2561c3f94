"""Deterministic families of test instances shared by the verifier, the CLI
and the test-suite.

Every generator takes an integer seed and produces the same instances on
every run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .convolutions import twisted_lm
from .reps import SemidirectRep, haar_unitary, random_unitary_free_rep, scalar_seed

__all__ = [
    "Case",
    "unit",
    "generic_lambda",
    "scalar_suite",
    "tower_suite",
    "random_free_suite",
    "engineered_l_rep",
    "engineered_k_rep",
    "reference_rep",
    "structured_hermitian",
]


@dataclass(frozen=True)
class Case:
    """A representation together with the lambda to test it at."""

    label: str
    rep: SemidirectRep
    lam: complex


def unit(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def generic_lambda(rng: np.random.Generator, margin: float = 0.2) -> complex:
    """A unit complex number kept ``margin`` away from 1."""
    while True:
        lam = unit(rng)
        if abs(lam - 1) > margin:
            return lam


def scalar_suite(count: int = 20, ns: Sequence[int] = (2, 3, 4, 5), seed: int = 0) -> list[Case]:
    """``count`` scalar seeds with unit t, s and lambda, cycling through ``ns``."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = ns[k % len(ns)]
        t, s = generic_lambda(rng), unit(rng)
        out.append(Case(f"scalar[{k}] n={n}", scalar_seed(n, t, s), generic_lambda(rng)))
    return out


def tower_suite(count: int = 20, ns: Sequence[int] = (2, 3, 4), seed: int = 1, depth: int = 1) -> list[Case]:
    """Scalar seeds lifted ``depth`` times by the twisted construction.

    For depth >= 1 the generators are N x N with N = n**depth and do not
    commute.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = ns[k % len(ns)]
        rep = scalar_seed(n, generic_lambda(rng), unit(rng))
        for _ in range(depth):
            rep = twisted_lm(rep, generic_lambda(rng))
        out.append(Case(f"tower{depth}[{k}] n={n}", rep, generic_lambda(rng)))
    return out


def engineered_k_rep(n: int, N: int, rng: np.random.Generator) -> SemidirectRep:
    """Random unitary free representation whose g_1 has eigenvalue 1."""
    base = random_unitary_free_rep(n, N, rng)
    u = haar_unitary(rng, N)
    phases = np.exp(2j * np.pi * rng.random(N))
    phases[0] = 1.0
    g1 = u @ np.diag(phases) @ u.conj().T
    return SemidirectRep(n, N, (g1,) + base.g[1:], {}, H=np.eye(N, dtype=complex))


def engineered_l_rep(n: int, N: int, lam: complex, rng: np.random.Generator) -> SemidirectRep:
    """Random unitary free representation with lam * g_1 ... g_n having eigenvalue 1.

    That eigenvalue makes L = ker(G_1 ... G_n - 1) nonzero.
    """
    base = random_unitary_free_rep(n, N, rng)
    head = np.eye(N, dtype=complex)
    for m in base.g[:-1]:
        head = head @ m
    u = haar_unitary(rng, N)
    phases = np.exp(2j * np.pi * rng.random(N))
    phases[0] = 1 / lam
    target = u @ np.diag(phases) @ u.conj().T
    gn = np.linalg.solve(head, target)
    return SemidirectRep(n, N, base.g[:-1] + (gn,), {}, H=np.eye(N, dtype=complex))


def random_free_suite(count: int = 50, seed: int = 2, max_n: int = 4, max_N: int = 3) -> list[Case]:
    """Random unitary free representations; every third has a forced
    eigenvalue 1 in g_1 (nonzero K) and every third a nonzero L.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(2, max_n + 1))
        N = int(rng.integers(1, max_N + 1))
        lam = generic_lambda(rng)
        kind = k % 3
        if kind == 0:
            rep, label = random_unitary_free_rep(n, N, rng), "plain"
        elif kind == 1:
            rep, label = engineered_k_rep(n, N, rng), "K"
        else:
            rep, label = engineered_l_rep(n, N, lam, rng), "L"
        out.append(Case(f"free-{label}[{k}] n={n} N={N}", rep, lam))
    return out


def reference_rep(n: int, depth: int = 2, seed: int = 12345) -> SemidirectRep:
    """A twisted tower over a generic scalar seed, used to certify word identities."""
    rng = np.random.default_rng(seed)
    rep = scalar_seed(n, generic_lambda(rng), unit(rng))
    for _ in range(depth):
        rep = twisted_lm(rep, generic_lambda(rng))
    return rep


def structured_hermitian(rng: np.random.Generator, blocks: int, N: int) -> tuple[np.ndarray, tuple[int, int, int]]:
    """``T^dagger D T`` with T block unit upper triangular and D block diagonal
    with rank-deficient blocks, plus its inertia.

    Congruence by T preserves inertia, so the answer is the sum of the
    inertias of the D blocks, known by construction.
    """
    d = N * blocks
    D = np.zeros((d, d), dtype=complex)
    expected = [0, 0, 0]
    for b in range(blocks):
        signs = rng.integers(-1, 2, size=N)
        u = haar_unitary(rng, N)
        D[b * N:(b + 1) * N, b * N:(b + 1) * N] = u @ np.diag(signs * (0.5 + rng.random(N))) @ u.conj().T
        expected[0] += int((signs > 0).sum())
        expected[1] += int((signs < 0).sum())
        expected[2] += int((signs == 0).sum())
    T = np.eye(d, dtype=complex)
    for b in range(blocks):
        T[b * N:(b + 1) * N, (b + 1) * N:] = rng.standard_normal((N, d - (b + 1) * N))
    h = T.conj().T @ D @ T
    return (h + h.conj().T) / 2, (expected[0], expected[1], expected[2])
