"""Numerical comparison of the twisted Long-Moody images with Haraoka's
convolution, and word-identity checks for pure-braid anti representations.

Pure letters (i, j) stand for braid-group elements: (0, j) is x_j and (i, j)
with i >= 1 is the element whose matrix defines M_ij under the chosen
convention (see :func:`braidforge.reps.pure_word`).  An anti representation
sends the letter sequence l_1 .. l_m to the product for l_m ... l_1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .braidwords import FreeWord, MixedWord, act_by_braid, pure_letters
from .convolutions import DEFAULT_READINGS, HaraokaReadings, haraoka_convolution, lm_sigma, twisted_lm
from .errors import BraidforgeError, InvalidInputError, PreconditionError
from .linalg import rel_residual
from .reps import PureBraidAntiRep, SemidirectRep, evaluate, evaluate_anti, pure_word, restrict_to_pure

__all__ = [
    "CorrespondenceReport",
    "AdjudicationResult",
    "WordCheck",
    "verify_main_theorem",
    "induction_step_residuals",
    "adjudicate_readings",
    "all_readings",
    "pure_letter_word",
    "word_pair_corpus",
    "tagged_word_pairs",
    "certify_pairs",
    "verify_antirep_words",
]

MAIN_THEOREM_TOL = 1e-9
CERTIFY_TOL = 1e-9

PureWord = list  # [((i, j), e), ...]


@dataclass(frozen=True)
class CorrespondenceReport:
    """Residuals r_ij = ||L_ij - N_ij||_F / ||N_ij||_F, keyed by (i, j)."""

    residuals: dict
    convention: str
    readings: HaraokaReadings
    tolerance: float
    error: str = ""

    @property
    def max_residual(self) -> float:
        if self.error:
            return float("inf")
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def worst_pair(self) -> tuple[int, int] | None:
        if not self.residuals:
            return None
        return max(sorted(self.residuals), key=lambda k: self.residuals[k])

    def as_dict(self) -> dict:
        return {
            "convention": self.convention,
            "readings": {"pivot": self.readings.pivot, "x_inverse": self.readings.x_inverse,
                         "middle": self.readings.middle},
            "residuals": {f"{i},{j}": r for (i, j), r in sorted(self.residuals.items())},
            "max_residual": None if self.error else self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "error": self.error,
        }


def verify_main_theorem(rep: SemidirectRep, lam: complex, convention: str = "B",
                        readings: HaraokaReadings = DEFAULT_READINGS,
                        tol: float = MAIN_THEOREM_TOL) -> CorrespondenceReport:
    """Compare the convolution of the restricted representation with the
    twisted Long-Moody images, letter by letter.
    """
    if not rep.has_full_braid_action:
        raise PreconditionError("the comparison needs s_1..s_{n-1} all defined")
    M = restrict_to_pure(rep, convention)
    full = twisted_lm(rep, lam)
    try:
        N = haraoka_convolution(M, lam, readings)
    except BraidforgeError as exc:
        return CorrespondenceReport({}, convention, readings, tol, error=str(exc))
    residuals = {}
    for i, j in pure_letters(rep.n):
        if i == 0:
            lhs = full.g[j - 1]
        else:
            lhs = evaluate(full, pure_word(i, j, rep.n, convention))
        residuals[(i, j)] = rel_residual(lhs, N.M[(i, j)], scale=np.linalg.norm(N.M[(i, j)]))
    return CorrespondenceReport(residuals, convention, readings, tol)


def induction_step_residuals(rep: SemidirectRep, lam: complex,
                             readings: HaraokaReadings = DEFAULT_READINGS) -> dict:
    """Check N_ij against S_i^-1 N_{i+1,j} S_i, with S_i the Long-Moody
    image of sigma_i, and N_{j-1,j} against S_{j-1}^2.

    These are the identities behind proving the (i, j) case from (i+1, j):
    the convention-B word for (i, j) is sigma_i^-1 (word for (i+1, j)) sigma_i.
    """
    N = haraoka_convolution(restrict_to_pure(rep, "B"), lam, readings)
    S = {i: lm_sigma(rep, i) for i in range(1, rep.n)}
    out = {}
    for i, j in pure_letters(rep.n):
        if i == 0:
            continue
        if i == j - 1:
            target = S[i] @ S[i]
        else:
            target = np.linalg.solve(S[i], N.M[(i + 1, j)] @ S[i])
        out[(i, j)] = rel_residual(N.M[(i, j)], target, scale=np.linalg.norm(N.M[(i, j)]))
    return out


def all_readings(include_middle: bool = True) -> list[HaraokaReadings]:
    middles = ("0i", "0j") if include_middle else ("0j",)
    return [HaraokaReadings(p, x, m) for p, x, m in itertools.product(("j", "j-1"), ("0i", "1i"), middles)]


@dataclass
class AdjudicationResult:
    """Worst residual per (convention, readings) over a suite of cases."""

    worst: dict = field(default_factory=dict)
    first_failure: dict = field(default_factory=dict)
    tolerance: float = MAIN_THEOREM_TOL

    @property
    def passing(self) -> list[tuple[str, HaraokaReadings]]:
        return [k for k, v in self.worst.items() if v <= self.tolerance]

    @property
    def unique(self) -> tuple[str, HaraokaReadings] | None:
        p = self.passing
        return p[0] if len(p) == 1 else None

    @property
    def verdict(self) -> str:
        p = self.passing
        if not p:
            return "none"
        return "unique" if len(p) == 1 else "multiple"

    def as_dict(self) -> dict:
        rows = []
        for (conv, rd), v in self.worst.items():
            row = {"convention": conv, "readings": rd.label(),
                   "max_residual": None if not np.isfinite(v) else v, "pass": v <= self.tolerance}
            if (conv, rd) in self.first_failure:
                row["first_failure"] = self.first_failure[(conv, rd)]
            rows.append(row)
        return {"verdict": self.verdict, "tolerance": self.tolerance, "combinations": rows}


def adjudicate_readings(cases: Sequence, conventions: Sequence[str] = ("A", "B"),
                        readings: Sequence[HaraokaReadings] | None = None,
                        tol: float = MAIN_THEOREM_TOL) -> AdjudicationResult:
    """Run :func:`verify_main_theorem` for every (convention, readings)
    combination over ``cases`` (objects with ``rep`` and ``lam``).

    Cases are visited in order of increasing (n, N), so the recorded first
    failure of a combination is a smallest failing instance.
    """
    readings = all_readings() if readings is None else list(readings)
    ordered = sorted(cases, key=lambda c: (c.rep.n, c.rep.N))
    result = AdjudicationResult(tolerance=tol)
    for conv in conventions:
        for rd in readings:
            worst = 0.0
            for case in ordered:
                rep_ = verify_main_theorem(case.rep, case.lam, conv, rd, tol)
                worst = max(worst, rep_.max_residual)
                if not rep_.passed and (conv, rd) not in result.first_failure:
                    result.first_failure[(conv, rd)] = {
                        "case": getattr(case, "label", ""),
                        "n": case.rep.n,
                        "N": case.rep.N,
                        "pair": list(rep_.worst_pair()) if rep_.worst_pair() else None,
                        "residual": None if rep_.error else rep_.max_residual,
                        "error": rep_.error,
                    }
            result.worst[(conv, rd)] = worst
    return result


# ---------------------------------------------------------------- word pairs

def pure_letter_word(letters: Iterable[tuple[tuple[int, int], int]], n: int,
                     convention: str = "B") -> MixedWord:
    """The group element an anti representation assigns to a letter sequence,
    as a mixed word (letters reversed, each replaced by its element).
    """
    out = MixedWord(n)
    for (i, j), e in reversed(list(letters)):
        if i == 0:
            piece = MixedWord(n, (("x", j, e),))
        else:
            base = pure_word(i, j, n, convention)
            piece = MixedWord(n)
            for _ in range(abs(e)):
                piece = piece * (base if e > 0 else base.inverse())
        out = out * piece
    return out


def _as_letters(elements: Sequence[tuple[tuple[int, int], int]]) -> PureWord:
    """Letters for a product of elements written left to right."""
    return list(reversed(list(elements)))


def _inv(word: PureWord) -> PureWord:
    return [(k, -e) for k, e in reversed(word)]


def word_pair_corpus(n: int, seed: int = 0, random_words: int = 6,
                     convention: str = "B") -> list[tuple[PureWord, PureWord]]:
    """Candidate identities between words in the pure letters for n.

    Candidates are not yet certified; see :func:`certify_pairs`.
    """
    return [(a, b) for _, a, b in tagged_word_pairs(n, seed, random_words, convention)]


def tagged_word_pairs(n: int, seed: int = 0, random_words: int = 6,
                      convention: str = "B") -> list[tuple[str, PureWord, PureWord]]:
    """Word pairs labelled by family.

    Families: ``trivial`` (w against w), ``inverse`` (w w^-1 against the
    empty word), ``commute`` (letters on disjoint or nested index ranges),
    ``semidirect`` (beta x_m = theta_beta(x_m) beta) and
    ``conjugation:<r,s>:<i,j>`` (pure braid conjugation relations, four
    orientations each, of which only the true ones certify).
    """
    if n < 2:
        raise InvalidInputError("word pairs need n >= 2")
    rng = np.random.default_rng(seed)
    letters = pure_letters(n)
    pairs: list[tuple[str, PureWord, PureWord]] = []

    for _ in range(random_words):
        length = int(rng.integers(1, 6))
        w = [(letters[int(rng.integers(len(letters)))], int(rng.choice([-2, -1, 1, 2]))) for _ in range(length)]
        pairs.append(("trivial", w, list(w)))
        pairs.append(("inverse", w + _inv(w), []))

    braid_letters = [(i, j) for i, j in letters if i > 0]
    for a, b in itertools.combinations(letters, 2):
        (r, s), (i, j) = a, b
        apart = s < i or j < r
        nested = (r < i and j < s) or (i < r and s < j)
        if apart or nested:
            pairs.append(("commute", [(a, 1), (b, 1)], [(b, 1), (a, 1)]))

    # semidirect relation: beta x_m beta^-1 = theta_beta(x_m)
    for k, l in braid_letters:
        beta = pure_word(k, l, n, convention)
        braid = _braid_of(beta)
        for m in range(1, n + 1):
            image = act_by_braid(braid, FreeWord.generator(n, m))
            lhs = _as_letters([((k, l), 1), ((0, m), 1)])
            rhs = _as_letters([((0, y), e) for y, e in image.letters] + [((k, l), 1)])
            pairs.append(("semidirect", lhs, rhs))

    # conjugation relations among pure braid generators (strands 0..n), in
    # both orientations; certification keeps the ones that hold
    for (r, s), (i, j) in itertools.product(letters, letters):
        if s == i:
            conj = [((r, j), 1)]
        elif r == i and s < j:
            conj = [((r, j), 1), ((s, j), 1)]
        elif r < i < s < j:
            conj = [((r, j), 1), ((s, j), 1), ((r, j), -1), ((s, j), -1)]
        else:
            continue
        for sign in (1, -1):
            lhs = [((r, s), -sign), ((i, j), 1), ((r, s), sign)]
            for c in (conj, _inv(conj)):
                pairs.append((f"conjugation:{r},{s}:{i},{j}", _as_letters(lhs),
                              _as_letters(c + [((i, j), 1)] + _inv(c))))
    return pairs


def _braid_of(word: MixedWord):
    from .braidwords import BraidWord

    return BraidWord(word.n, tuple((i, e) for kind, i, e in word.tokens if kind == "s"))


def _pair_residual(a: np.ndarray, b: np.ndarray) -> float:
    return rel_residual(a, b)


def certify_pairs(pairs: Sequence[tuple[PureWord, PureWord]], reference: SemidirectRep,
                  convention: str = "B", tol: float = CERTIFY_TOL) -> list[bool]:
    """Whether each pair evaluates equally under the reference representation."""
    out = []
    for w1, w2 in pairs:
        a = evaluate(reference, pure_letter_word(w1, reference.n, convention))
        b = evaluate(reference, pure_letter_word(w2, reference.n, convention))
        out.append(_pair_residual(a, b) <= tol)
    return out


@dataclass(frozen=True)
class WordCheck:
    max_residual: float
    residuals: tuple[float, ...]
    pairs: int


def verify_antirep_words(M: PureBraidAntiRep, word_pairs: Sequence[tuple[PureWord, PureWord]],
                         reference: SemidirectRep | None = None, convention: str = "B") -> WordCheck:
    """Largest relative residual between the two sides of each pair under ``M``.

    With a ``reference`` representation every pair is first certified as a
    group identity; an uncertified pair raises :class:`PreconditionError`.
    """
    if reference is not None:
        if reference.n != M.n:
            raise InvalidInputError("reference representation has a different n")
        ok = certify_pairs(word_pairs, reference, convention)
        bad = [k for k, good in enumerate(ok) if not good]
        if bad:
            raise PreconditionError(f"word pairs {bad} are not identities under the reference representation")
    res = tuple(_pair_residual(evaluate_anti(M, w1), evaluate_anti(M, w2)) for w1, w2 in word_pairs)
    return WordCheck(max(res, default=0.0), res, len(res))
