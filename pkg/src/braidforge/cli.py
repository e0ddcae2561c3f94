"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 invalid input or violated
precondition, 3 unreadable input, 4 size guard.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from . import repfile, suites
from .convolutions import (
    HaraokaReadings,
    additive_b0j,
    basis_matrix_p,
    dr_matrix,
    haraoka_convolution,
    lm_sigma,
    twisted_lm,
    wada_lm,
)
from .correspond import verify_main_theorem
from .errors import BraidforgeError, InvalidInputError, ParseError, PreconditionError, ResourceGuardError
from .hermitian import (
    annihilation_check,
    build_h_tilde,
    check_unitary,
    kernel_equals_kl,
    signature_oracle,
    signature_recursive,
)
from .klm import DEFAULT_MAX_DIM, klm, quotient_data, subspace_k, subspace_l, tower
from .linalg import Tolerances, as_cmatrix
from .reps import PureBraidAntiRep, SemidirectRep, check_braid_relations, check_semidirect_compat, restrict_to_pure

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_PARSE, EXIT_GUARD = 0, 1, 2, 3, 4
TOL_ENV = "BRAIDFORGE_TOL"
UNITARY_TOL = 1e-8
ANNIHILATION_TOL = 1e-8


def tolerances_from_env() -> Tolerances:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return Tolerances()
    try:
        return Tolerances(residual_rel=float(raw))
    except (ValueError, InvalidInputError):
        raise ParseError(f"{TOL_ENV} must be a positive number, got {raw!r}") from None


def parse_complex(text: str) -> complex:
    """Parse ``"re,im"`` (or a bare real number)."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ParseError(f"expected a complex number as 're,im', got {text!r}")


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(p) for p in text.split(";") if p.strip()]


def _need_lambda(args) -> complex:
    if args.lam is None:
        raise InvalidInputError(f"construction {args.construction!r} needs --lambda")
    return parse_complex(args.lam)


def _need_semidirect(obj, what: str) -> SemidirectRep:
    if not isinstance(obj, SemidirectRep):
        raise InvalidInputError(f"{what} needs a semidirect representation file")
    return obj


# ------------------------------------------------------------------ build

def cmd_build(args) -> int:
    tol = tolerances_from_env()
    obj, _ = repfile.read(args.input)
    c = args.construction
    meta = {"construction": c}
    if args.lam is not None:
        lam = parse_complex(args.lam)
        meta["lambda"] = [lam.real, lam.imag]
    if c == "lm":
        rep = _need_semidirect(obj, c)
        out = repfile.MatrixBundle({f"S{i}": lm_sigma(rep, i) for i in sorted(rep.s)})
    elif c == "dr":
        rep = _need_semidirect(obj, c)
        lam = _need_lambda(args)
        out = repfile.MatrixBundle({f"G{j}": dr_matrix(rep.g, lam, j) for j in range(1, rep.n + 1)})
    elif c == "tlm":
        out = twisted_lm(_need_semidirect(obj, c), _need_lambda(args), tol=tol)
    elif c == "wada":
        out = wada_lm(_need_semidirect(obj, c), _need_lambda(args), args.k, tol=tol)
        meta["k"] = args.k
    elif c == "klm":
        rep, qd = klm(_need_semidirect(obj, c), _need_lambda(args), tol)
        meta["quotient"] = qd.as_dict()
        if rep is None:
            print("warning: the quotient is zero-dimensional; writing an empty bundle", file=sys.stderr)
            meta["degenerate"] = True
            out = repfile.MatrixBundle()
        else:
            out = rep
    elif c == "haraoka":
        lam = _need_lambda(args)
        pure = obj if isinstance(obj, PureBraidAntiRep) else restrict_to_pure(_need_semidirect(obj, c))
        readings = HaraokaReadings(args.pivot, args.x_inverse, args.middle)
        meta["readings"] = readings.label()
        out = haraoka_convolution(pure, lam, readings)
    elif c == "b0j":
        lam = _need_lambda(args)
        if not isinstance(obj, repfile.MatrixBundle):
            raise InvalidInputError("b0j needs a matrices file with A1..An (the A_0j)")
        n = len(obj)
        try:
            A0 = [obj[f"A{j}"] for j in range(1, n + 1)]
        except KeyError as exc:
            raise InvalidInputError(f"b0j input is missing matrix {exc.args[0]}") from None
        out = repfile.MatrixBundle({f"B{j}": additive_b0j(A0, lam, j) for j in range(1, n + 1)})
    elif c == "basisP":
        lam = _need_lambda(args)
        if isinstance(obj, PureBraidAntiRep):
            M0 = [obj.M[(0, j)] for j in range(1, obj.n + 1)]
        else:
            M0 = list(_need_semidirect(obj, c).g)
        P, singular = basis_matrix_p(M0, lam, tol)
        meta["singular"] = singular
        if singular:
            print("warning: the basis matrix P is singular", file=sys.stderr)
        out = repfile.MatrixBundle({"P": P})
    else:  # argparse restricts the choices
        raise InvalidInputError(f"unknown construction {c!r}")
    repfile.write(args.out, out, meta)
    return EXIT_OK


# ------------------------------------------------------------------ verify

class _Checks:
    def __init__(self):
        self.rows: list[dict] = []

    def add(self, case: str, check: str, value, tol, passed: bool | None, note: str = ""):
        status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
        self.rows.append({"case": case, "check": check, "value": value, "tolerance": tol,
                          "status": status, "note": note})

    @property
    def ok(self) -> bool:
        return all(r["status"] != "FAIL" for r in self.rows)


def _relations(case: suites.Case, checks: _Checks, tol: Tolerances) -> None:
    lim = tol.residual_rel
    r = check_semidirect_compat(case.rep)
    checks.add(case.label, "compatibility", r, lim, r <= lim)
    if case.rep.has_full_braid_action:
        r = check_braid_relations(case.rep)
        checks.add(case.label, "braid relations", r, lim, r <= lim)
    else:
        checks.add(case.label, "braid relations", None, lim, None, "s not defined on all of 1..n-1")
    up = twisted_lm(case.rep, case.lam, tol=tol)
    r = check_semidirect_compat(up)
    checks.add(case.label, "twisted compatibility", r, lim, r <= lim)
    if up.has_full_braid_action:
        r = check_braid_relations(up)
        checks.add(case.label, "twisted braid relations", r, lim, r <= lim)


def _correspondence(case: suites.Case, checks: _Checks, tol: Tolerances) -> None:
    if not case.rep.has_full_braid_action:
        checks.add(case.label, "convolution = twisted images", None, tol.residual_rel, None,
                   "s not defined on all of 1..n-1")
        return
    rep = verify_main_theorem(case.rep, case.lam, tol=tol.residual_rel)
    checks.add(case.label, "convolution = twisted images", None if rep.error else rep.max_residual,
               tol.residual_rel, rep.passed, rep.error)


def _unitarity(case: suites.Case, checks: _Checks, tol: Tolerances) -> None:
    if case.rep.H is None or abs(abs(case.lam) - 1) > 1e-9:
        checks.add(case.label, "invariant form", None, None, None, "needs H and |lambda| = 1")
        return
    ht = build_h_tilde(case.rep.g, case.rep.H, case.lam, tol=tol)
    checks.add(case.label, "form hermiticity", ht.hermiticity_residual, tol.residual_rel,
               ht.hermiticity_residual <= tol.residual_rel)
    up = twisted_lm(case.rep, case.lam, tol=tol)
    u = check_unitary(list(up.g) + list(up.s.values()), ht)
    checks.add(case.label, "generators unitary", u, UNITARY_TOL, u <= UNITARY_TOL)
    K, L = subspace_k(case.rep.g, tol), subspace_l(up.g, tol)
    a, b = annihilation_check(ht, K, L)
    checks.add(case.label, "form kills K", a, ANNIHILATION_TOL, a <= ANNIHILATION_TOL)
    checks.add(case.label, "form kills L", b, ANNIHILATION_TOL, b <= ANNIHILATION_TOL)
    cmp_ = kernel_equals_kl(ht, quotient_data(case.rep.g, case.lam, tol).W, tol)
    checks.add(case.label, "kernel = K + L", cmp_.max_angle, 1e-6, cmp_.passed,
               f"dim ker {cmp_.kernel_dim}, dim K+L {cmp_.subspace_dim}")


def _signature(case: suites.Case, checks: _Checks, tol: Tolerances) -> int:
    if case.rep.H is None:
        checks.add(case.label, "signature", None, None, None, "needs H")
        return 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ht = build_h_tilde(case.rep.g, case.rep.H, case.lam, tol=tol)
    rep = signature_recursive(ht, case.rep.N, tol)
    note = f"p={rep.p} q={rep.q} z={rep.z}" + (f"; fallback: {rep.fallback_reason}" if rep.fallback_used else "")
    checks.add(case.label, "recursive = oracle", None, None, bool(rep.matches_oracle), note)
    return int(rep.fallback_used)


def _verify_cases(args) -> list[suites.Case]:
    if args.input:
        obj, _ = repfile.read(args.input)
        rep = _need_semidirect(obj, "verify")
        if args.lam is not None:
            lam = parse_complex(args.lam)
        else:
            lam = suites.generic_lambda(np.random.default_rng(args.seed))
        return [suites.Case(str(args.input), rep, lam)]
    if args.generate == "scalar":
        return suites.scalar_suite(args.count, seed=args.seed)
    if args.generate == "tower":
        return suites.tower_suite(args.count, seed=args.seed)
    return suites.random_free_suite(args.count, seed=args.seed)


def _format_value(v) -> str:
    if v is None:
        return "-"
    return f"{v:.3e}" if isinstance(v, float) else str(v)


def _print_table(rows: list[dict]) -> None:
    headers = ("case", "check", "value", "tolerance", "status", "note")
    cells = [[r["case"], r["check"], _format_value(r["value"]), _format_value(r["tolerance"]), r["status"], r["note"]]
             for r in rows]
    widths = [max(len(h), *(len(c[k]) for c in cells)) if cells else len(h) for k, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for c in cells:
        print("  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip())


def cmd_verify(args) -> int:
    tol = tolerances_from_env()
    cases = _verify_cases(args)
    names = ["relations", "correspondence", "unitarity", "signature"] if args.suite == "all" else [args.suite]
    checks = _Checks()
    fallbacks = 0
    for case in cases:
        for name in names:
            if name == "relations":
                _relations(case, checks, tol)
            elif name == "correspondence":
                _correspondence(case, checks, tol)
            elif name == "unitarity":
                _unitarity(case, checks, tol)
            else:
                fallbacks += _signature(case, checks, tol)
    if args.json:
        report = {"suite": args.suite, "seed": args.seed, "cases": len(cases), "checks": checks.rows,
                  "signature_fallbacks": fallbacks, "pass": checks.ok}
        print(json.dumps(report, indent=1, sort_keys=True))
    else:
        _print_table(checks.rows)
        if "signature" in names:
            print(f"signature fallbacks: {fallbacks}")
        print("PASS" if checks.ok else "FAIL")
    return EXIT_OK if checks.ok else EXIT_FAIL


# ------------------------------------------------------------------ signature

def cmd_signature(args) -> int:
    tol = tolerances_from_env()
    obj, meta = repfile.read(args.input)
    if isinstance(obj, SemidirectRep):
        if args.lam is None:
            raise InvalidInputError("a representation file needs --lambda to build the form")
        if obj.H is None:
            raise InvalidInputError("the representation carries no invariant form H")
        form = build_h_tilde(obj.g, obj.H, parse_complex(args.lam), tol=tol).matrix
        block = args.block_size or obj.N
    elif isinstance(obj, repfile.MatrixBundle):
        if "H" in obj:
            form = obj["H"]
        elif len(obj) == 1:
            form = next(iter(obj.values()))
        else:
            raise InvalidInputError("matrices file must contain a matrix named 'H'")
        form = as_cmatrix(form, "H", square=True)
        block = args.block_size or int(meta.get("block_size", 1))
    else:
        raise InvalidInputError("signature needs a matrices file or a semidirect representation")
    code = EXIT_OK
    if args.algorithm in ("recursive", "both"):
        rep = signature_recursive(form, block, tol)
        line = f"p={rep.p} q={rep.q} z={rep.z}"
        if args.algorithm == "both":
            line = "recursive: " + line
        print(line)
        if rep.fallback_used:
            print(f"fallback: {rep.fallback_reason}")
        if args.algorithm == "both":
            op, oq, oz = rep.oracle
            print(f"oracle: p={op} q={oq} z={oz}")
            print("MATCH" if rep.matches_oracle else "MISMATCH")
            code = EXIT_OK if rep.matches_oracle else EXIT_FAIL
    else:
        p, q, z = signature_oracle(form, tol)
        print(f"p={p} q={q} z={z}")
    return code


# ------------------------------------------------------------------ tower

def cmd_tower(args) -> int:
    tol = tolerances_from_env()
    if args.depth < 1:
        raise InvalidInputError("--depth must be at least 1")
    lams = parse_complex_list(args.lambdas)
    if len(lams) == 1:
        lams = lams * args.depth
    if len(lams) != args.depth:
        raise InvalidInputError(f"--lambdas gives {len(lams)} values for depth {args.depth}")
    if args.seed_rep:
        obj, _ = repfile.read(args.seed_rep)
        seed = _need_semidirect(obj, "tower")
    else:
        from .reps import scalar_seed

        seed = scalar_seed(args.n, parse_complex(args.t), parse_complex(args.s))
    levels = tower(seed, lams, args.depth, quotient=args.mode == "klm", max_dim=args.max_dim, tol=tol)
    summary = []
    for lv in levels:
        row = lv.as_dict()
        if lv.rep is not None and lv.rep.H is not None:
            row["signature"] = list(signature_oracle(lv.rep.H, tol))
        summary.append(row)
    degenerate = levels[-1].rep is None
    if degenerate:
        print(f"warning: level {levels[-1].level} has a zero-dimensional quotient; the tower stops there",
              file=sys.stderr)
    if args.emit_levels:
        out = Path(args.emit_levels)
        out.mkdir(parents=True, exist_ok=True)
        for lv in levels:
            if lv.rep is not None:
                repfile.write(out / f"level_{lv.level}.json", lv.rep, {"level": lv.level})
        (out / "summary.json").write_text(json.dumps({"levels": summary}, indent=1, sort_keys=True) + "\n")
    print(json.dumps({"levels": summary, "degenerate": degenerate}, indent=1, sort_keys=True))
    return EXIT_OK


# ------------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braidforge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="apply one construction to a representation file")
    b.add_argument("--construction", required=True,
                   choices=["lm", "dr", "tlm", "wada", "klm", "haraoka", "b0j", "basisP"])
    b.add_argument("--input", required=True)
    b.add_argument("--lambda", dest="lam", metavar="RE,IM")
    b.add_argument("--k", type=int, default=1, help="Wada exponent (wada only)")
    b.add_argument("--out", required=True)
    b.add_argument("--pivot", default="j", choices=["j", "j-1"])
    b.add_argument("--x-inverse", default="0i", choices=["0i", "1i"])
    b.add_argument("--middle", default="0i", choices=["0i", "0j"])
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run a residual suite")
    v.add_argument("--suite", default="all", choices=["relations", "correspondence", "unitarity", "signature", "all"])
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--generate", choices=["scalar", "tower", "random"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=6, help="number of generated cases")
    v.add_argument("--lambda", dest="lam", metavar="RE,IM", help="lambda for --input (default: drawn from --seed)")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("signature", help="inertia of a Hermitian form")
    s.add_argument("--input", required=True)
    s.add_argument("--algorithm", default="both", choices=["recursive", "oracle", "both"])
    s.add_argument("--lambda", dest="lam", metavar="RE,IM")
    s.add_argument("--block-size", type=int, default=0)
    s.set_defaults(func=cmd_signature)

    t = sub.add_parser("tower", help="iterate the construction")
    t.add_argument("--depth", type=int, required=True)
    t.add_argument("--lambdas", required=True, metavar="RE,IM[;RE,IM...]")
    t.add_argument("--seed-rep")
    t.add_argument("--n", type=int, default=3, help="scalar seed: number of strands")
    t.add_argument("--t", default="0.5,0.8660254037844386", help="scalar seed: image of x_j")
    t.add_argument("--s", default="1,0", help="scalar seed: image of sigma_i")
    t.add_argument("--mode", default="klm", choices=["klm", "tlm"])
    t.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    t.add_argument("--emit-levels", metavar="DIR")
    t.set_defaults(func=cmd_tower)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InvalidInputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BraidforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
