"""Command-line runner: one subcommand per pipeline, one JSON manifest per run.

Exit codes: 0 success, 1 usage error, 2 invariant violation, 3 numeric
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from itertools import product

import mpmath

from . import __version__
from .chern import alpha_record, build_cutoff, cutoff_independence, localized_integral
from .errors import ConvergenceError, NoKEMetricError
from .exact_core import (
    ModelParams,
    NoKEMetricWarning,
    PiValue,
    check_decomposition,
    eval_chern_integral_general,
    eval_chern_integral_tube,
    eval_renvol_formula,
    eval_total_qprime,
)
from .profile import (
    MIN_PRECISION,
    build_profile,
    eps_max,
    positivity_scan,
    profile_ode_residual,
    tail_coefficients,
)
from .series import constant_term_residue, constant_term_reversion
from .volume import (
    DEFAULT_EPS_GRID,
    VOLUME_CONVENTION,
    exact_constant_residue,
    expansion_exact,
    fit_expansion,
    formula_comparison,
    sample_volumes,
)

SCHEMA = "renvol.manifest/1"
EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_PRECISION = 256
PRECISION_ENV = "RENVOL_PRECISION_BITS"

AUDIT_BETAS = ("-3", "-1", "-1/2", "0", "1/3", "1/2", "9/10")
AUDIT_VOLLS = ("1", "2", "7")
GRID_HEADER = ["n", "beta", "volL", "V_exact_coeff", "V_exact_pipow", "V_decimal", "ratios"]

_RATIONAL = re.compile(r"[+-]?\d+(/[1-9]\d*)?")


class UsageError(Exception):
    pass


# -- parsing -----------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Accept ``p/q``, ``-p/q`` and integers; reject decimals and exponents."""
    text = text.strip()
    if not _RATIONAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} (use p/q)")
    return Fraction(text)


def parse_rational_list(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-2/3" as an option flag; glue such values to their option.
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt is not None
                and re.fullmatch(r"-\d[\d/,+\-]*", nxt)):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="renvol", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"renvol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, params=True, beta=True, volL=True):
        sp = sub.add_parser(name, help=help_)
        if params:
            sp.add_argument("--n", type=int, required=True, help="complex dimension of the base")
            if beta:
                sp.add_argument("--beta", type=parse_rational, required=True, help="Einstein constant, p/q")
            if volL:
                sp.add_argument("--volL", type=parse_rational, required=True, help="Vol(L), positive p/q")
        sp.add_argument("--precision", type=int, default=None, help="working precision in bits")
        sp.add_argument("--out", default=None, help="manifest path ('-' for stdout)")
        sp.add_argument("--no-manifest", action="store_true", help="skip writing the manifest")
        return sp

    cmd("formula", "closed-form renormalized volume")
    cmd("qprime", "total Q-prime curvature of the boundary")
    sp = cmd("chern", "localized top Chern number (exact)")
    sp.add_argument("--chern-number", type=parse_rational, default=None,
                    help="self-intersection of the normal bundle; default: tube value (-1)^n volL")
    cmd("decompose", "residual of the Q-prime/Chern decomposition")
    sp = cmd("profile", "momentum profile of the KE metric", volL=False)
    sp.add_argument("--samples", type=int, default=1000)
    sp = cmd("expand", "exact eps-expansion of the volume")
    sp.add_argument("--order", type=int, default=None, help="highest positive power (default n+4)")
    sp = cmd("renvol-fit", "numeric volume samples and Laurent fit")
    sp.add_argument("--points", type=int, default=len(DEFAULT_EPS_GRID))
    sp.add_argument("--eps-hi-exp", type=int, default=-2, help="largest eps is 10^this")
    sp.add_argument("--eps-lo-exp", type=int, default=-7, help="smallest eps is 10^this")
    sp = cmd("localize", "cutoff realization of the localized Chern number")
    sp.add_argument("--t1", type=parse_rational, default=Fraction(-2))
    sp.add_argument("--t2", type=parse_rational, default=Fraction(-1))
    sp.add_argument("--degree", type=int, default=3)
    sp.add_argument("--shape", default="smoothstep", choices=["smoothstep", "exp"])
    sp = cmd("audit", "run every cross-check", params=False)
    sp.add_argument("--nmax", type=int, default=6)
    sp = cmd("grid", "sweep (n, beta, volL) and write CSV", params=False)
    sp.add_argument("--nmax", type=int, default=4)
    sp.add_argument("--betas", type=parse_rational_list, default=parse_rational_list(",".join(AUDIT_BETAS)))
    sp.add_argument("--volLs", type=parse_rational_list, default=parse_rational_list(",".join(AUDIT_VOLLS)))
    sp.add_argument("--csv", default=None, help="CSV path ('-' or omitted: stdout)")
    sp.add_argument("--workers", type=int, default=4)
    return parser


# -- serialization -----------------------------------------------------------

def exact(q) -> str:
    return str(Fraction(q))


def pi_json(v: PiValue, digits: int = 30) -> dict:
    return {"coeff": exact(v.coeff), "pi_power": v.pi_power, "text": str(v),
            "decimal": decimal_json(v.to_mpf(digits * 4 + 16), digits)}


def decimal_json(x, digits: int = 30, precision_bits: int | None = None) -> dict:
    bits = precision_bits or int(digits * 3.33) + 16
    with mpmath.workprec(bits):
        return {"decimal": mpmath.nstr(mpmath.mpf(x), digits), "digits": digits, "precision_bits": bits}


def _digits(precision: int) -> int:
    return max(15, min(60, int(precision * 0.30103) - 5))


def params_json(p: ModelParams) -> dict:
    return {"n": p.n, "beta": exact(p.beta), "volL": exact(p.volL), "ke_exists": p.ke_exists}


@dataclass
class Outcome:
    lines: list
    results: dict
    status: int = EXIT_OK
    parameters: dict | None = None
    truncation_order: int | None = None


# -- commands ----------------------------------------------------------------

def _params(args) -> ModelParams:
    try:
        return ModelParams(args.n, args.beta, args.volL if hasattr(args, "volL") else 1)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _no_metric_note(p: ModelParams) -> list:
    return [] if p.ke_exists else [f"warning: beta = {p.beta} >= 1, no complete KE metric (algebraic value only)"]


def cmd_formula(args, precision):
    p = _params(args)
    V = eval_renvol_formula(p)
    d = _digits(precision)
    lines = [f"V = {V}", f"  ≈ {decimal_json(V.to_mpf(precision), d, precision)['decimal']}"]
    return Outcome(lines + _no_metric_note(p), {"V": pi_json(V, d)}, parameters=params_json(p))


def cmd_qprime(args, precision):
    p = _params(args)
    Q = eval_total_qprime(p)
    return Outcome([f"total Q' = {Q}"], {"Qprime_total": pi_json(Q, _digits(precision))},
                   parameters=params_json(p))


def cmd_chern(args, precision):
    p = _params(args)
    if args.chern_number is None:
        val, mode = eval_chern_integral_tube(p), "tube"
    else:
        val, mode = eval_chern_integral_general(p.n, p.beta, args.chern_number), "general"
    return Outcome([f"int c1~(K)^(n+1) = {val}  ({mode})"],
                   {"chern_integral": exact(val), "mode": mode, "negative": val < 0},
                   parameters=params_json(p))


def cmd_decompose(args, precision):
    p = _params(args)
    r = check_decomposition(p)
    status = EXIT_OK if r.is_zero() else EXIT_INVARIANT
    return Outcome([f"residual {exact(r.coeff)}" + ("" if r.is_zero() else f"·π^{r.pi_power}  VIOLATION")],
                   {"residual": pi_json(r), "V": pi_json(eval_renvol_formula(p))},
                   status, parameters=params_json(p))


def cmd_profile(args, precision):
    try:
        prof = build_profile(args.n, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    taus = [prof.tau0 + Fraction(1, 3), Fraction(3), Fraction(7, 5) + prof.tau0, Fraction(100)]
    residuals = [profile_ode_residual(prof, t) for t in taus]
    scan = positivity_scan(prof, args.samples)
    cap = (prof.V(prof.tau0), prof.dV(prof.tau0))
    tails = tail_coefficients(prof, prof.n + 2)
    ok = all(r == 0 for r in residuals) and cap == (0, 1) and scan.ok
    lines = [f"tau0 = {prof.tau0}", f"C = {prof.capC}",
             f"V(tau0) = {cap[0]}, V'(tau0) = {cap[1]}",
             f"ODE residuals: {', '.join(exact(r) for r in residuals)}",
             f"positivity scan ({args.samples} samples): {'ok' if scan.ok else f'FAIL at tau = {scan.witness}'}"]
    results = {
        "tau0": exact(prof.tau0), "capC": exact(prof.capC),
        "V_tau0": exact(cap[0]), "dV_tau0": exact(cap[1]),
        "ode_residuals": {exact(t): exact(r) for t, r in zip(taus, residuals)},
        "positivity": {"ok": scan.ok, "witness": None if scan.witness is None else exact(scan.witness)},
        "tail_coefficients": [exact(a) for a in tails],
        "eps_max": decimal_json(eps_max(prof, precision), _digits(precision), precision),
    }
    return Outcome(lines, results, EXIT_OK if ok else EXIT_INVARIANT,
                   parameters={"n": prof.n, "beta": exact(prof.beta)})


def cmd_expand(args, precision):
    p = _params(args)
    order = args.order if args.order is not None else p.n + 4
    try:
        e = expansion_exact(p, order)
    except (NoKEMetricError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    residue = exact_constant_residue(p)
    agree = residue == e.constant
    terms = [f"({exact(e.laurent[k])})·eps^{k}" for k in sorted(e.laurent)]
    lines = [f"Vol(eps) = {e.scale} × [ " + " + ".join(terms) + f" + ({exact(e.constant)}) + O(eps) ]",
             f"V = {e.renormalized_volume}",
             f"reversion vs residue: {'agree' if agree else 'DISAGREE'}",
             f"convention: {VOLUME_CONVENTION}"]
    results = {
        "scale": pi_json(e.scale), "laurent": {str(k): exact(v) for k, v in sorted(e.laurent.items())},
        "constant": exact(e.constant), "constant_residue": exact(residue),
        "positive_tail": [exact(c) for c in e.positive_tail],
        "V": pi_json(e.renormalized_volume), "convention": VOLUME_CONVENTION,
    }
    return Outcome(lines, results, EXIT_OK if agree else EXIT_INVARIANT,
                   parameters=params_json(p), truncation_order=order)


def _eps_grid(hi_exp: int, lo_exp: int, points: int) -> list:
    return [10.0 ** (hi_exp + (lo_exp - hi_exp) * i / (points - 1)) for i in range(points)]


def _relative_gap(fit_value, exact_value: PiValue, scale: PiValue, precision: int):
    with mpmath.workprec(precision):
        ref = exact_value.to_mpf(precision) if not exact_value.is_zero() else scale.to_mpf(precision)
        return abs(fit_value - exact_value.to_mpf(precision)) / abs(ref)


def cmd_renvol_fit(args, precision):
    p = _params(args)
    if args.points < p.n + 4:
        raise UsageError(f"need at least {p.n + 4} eps points")
    grid = _eps_grid(args.eps_hi_exp, args.eps_lo_exp, args.points)
    try:
        e = expansion_exact(p, 2)
    except NoKEMetricError as exc:
        raise UsageError(str(exc)) from None
    samples = sample_volumes(p, grid, precision)
    fit = fit_expansion(samples, p.n, precision)
    gap = _relative_gap(fit.constant, e.renormalized_volume, e.scale, precision)
    d = _digits(precision)
    ok = gap <= mpmath.mpf("1e-6")
    lines = [f"fitted eps^0 coefficient ≈ {mpmath.nstr(fit.constant, d)}",
             f"exact V = {e.renormalized_volume} ≈ {e.renormalized_volume.decimal(d)}",
             f"relative gap {mpmath.nstr(gap, 5)} (tolerance 1e-6): {'ok' if ok else 'FAIL'}",
             f"condition {mpmath.nstr(fit.condition, 5)}, weighted residual {mpmath.nstr(fit.residual_norm, 5)}"]
    results = {
        "eps_grid": [decimal_json(x, 17, 64) for x in grid],
        "fit": {str(k): decimal_json(v, d, precision) for k, v in fit.coefficients.items()},
        "residual_norm": decimal_json(fit.residual_norm, 10, precision),
        "condition": decimal_json(fit.condition, 10, precision),
        "exact_V": pi_json(e.renormalized_volume, d),
        "relative_gap": decimal_json(gap, 10, precision),
    }
    return Outcome(lines, results, EXIT_OK if ok else EXIT_INVARIANT, parameters=params_json(p))


def _default_cutoffs():
    return [build_cutoff(-2, -1, 2), build_cutoff(-3, Fraction(-1, 2), 4),
            build_cutoff(-4, -2, 2, "exp")]


def cmd_localize(args, precision):
    p = _params(args)
    try:
        c = build_cutoff(args.t1, args.t2, args.degree, args.shape)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    target = eval_chern_integral_tube(p)
    value = localized_integral(p, c, precision)
    report = cutoff_independence(p, [c] + _default_cutoffs(), precision)
    with mpmath.workprec(precision):
        tq = mpmath.mpf(target.numerator) / target.denominator
        gap = abs(value - tq) / abs(tq) if target else abs(value)
    ok = gap < mpmath.mpf("1e-8") and report.ok
    alpha = alpha_record(p)
    d = _digits(precision)
    lines = [f"localized integral ≈ {mpmath.nstr(value, d)}", f"exact tube value = {target}",
             f"relative gap {mpmath.nstr(gap, 5)}; cutoff spread {mpmath.nstr(report.relative_deviation, 5)}",
             f"2 pi alpha = {alpha.two_pi_alpha}"]
    results = {
        "cutoff": {"t1": exact(c.t1), "t2": exact(c.t2), "degree": c.degree, "shape": c.shape},
        "value": decimal_json(value, d, precision), "exact": exact(target),
        "relative_gap": decimal_json(gap, 10, precision),
        "cutoff_spread": decimal_json(report.relative_deviation, 10, precision),
        "two_pi_alpha": exact(alpha.two_pi_alpha),
    }
    return Outcome(lines, results, EXIT_OK if ok else EXIT_INVARIANT, parameters=params_json(p))


# -- audit -------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    status: str  # PASS, FAIL or RATIO
    detail: str

    def as_json(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


def run_audit(nmax: int, precision: int = DEFAULT_PRECISION) -> list[SuiteResult]:
    betas = [Fraction(b) for b in AUDIT_BETAS]
    volLs = [Fraction(v) for v in AUDIT_VOLLS]
    out = []

    bad = [(n, b, v) for n, b, v in product(range(nmax + 1), betas, volLs)
           if not check_decomposition(ModelParams(n, b, v)).is_zero()]
    out.append(SuiteResult("decomposition", "FAIL" if bad else "PASS",
                           f"{len(bad)} nonzero residuals" if bad else "all residuals exactly 0"))

    bad = []
    for n, b in product(range(nmax + 1), betas):
        m = n + 1
        tail = tail_coefficients(build_profile(n, b), m + 2)
        want = (-b / m) ** m
        if not (constant_term_reversion(tail, m) == constant_term_residue(tail[m - 1], m) == want):
            bad.append((n, b))
    out.append(SuiteResult("reversion_vs_residue", "FAIL" if bad else "PASS",
                           f"mismatch at {bad}" if bad else "exact agreement"))

    worst = mpmath.mpf(0)
    for n, b in product(range(min(nmax, 4) + 1), [Fraction(-1), Fraction(0), Fraction(1, 2)]):
        p = ModelParams(n, b, 1)
        e = expansion_exact(p, 2)
        fit = fit_expansion(sample_volumes(p, DEFAULT_EPS_GRID, precision), n, precision)
        worst = max(worst, _relative_gap(fit.constant, e.renormalized_volume, e.scale, precision))
    out.append(SuiteResult("numeric_vs_exact", "PASS" if worst <= mpmath.mpf("1e-6") else "FAIL",
                           f"worst relative gap {mpmath.nstr(worst, 3)} (tol 1e-6)"))

    worst, spread_ok = mpmath.mpf(0), True
    for n, b in product(range(min(nmax, 3) + 1), [Fraction(-1), Fraction(0), Fraction(1, 2)]):
        p = ModelParams(n, b, 1)
        rep = cutoff_independence(p, _default_cutoffs(), precision)
        target = eval_chern_integral_tube(p)
        tq = mpmath.mpf(target.numerator) / target.denominator
        worst = max(worst, max(abs(v - tq) / abs(tq) for v in rep.values))
        spread_ok = spread_ok and rep.max_deviation < mpmath.mpf("1e-10")
    ok = worst < mpmath.mpf("1e-8") and spread_ok
    out.append(SuiteResult("cutoff_independence", "PASS" if ok else "FAIL",
                           f"worst relative gap {mpmath.nstr(worst, 3)}; spread ok: {spread_ok}"))

    failures, ratios = [], {}
    for n in range(nmax + 1):
        cap, bnd = set(), set()
        for b, v in product([b for b in betas if b < 1], volLs):
            r = formula_comparison(ModelParams(n, b, v))
            cap.add(r.cap_ratio)
            if r.boundary_ratio is not None:
                bnd.add(r.boundary_ratio)
        if cap != {1} or len(bnd) != 1 or (n == 0 and bnd != {1}):
            failures.append(n)
        ratios[n] = (cap, bnd)
    if failures:
        out.append(SuiteResult("formula_comparison", "FAIL", f"ratios vary or wrong at n = {failures}"))
    else:
        shown = ", ".join(f"n={n}: {next(iter(bd))}" for n, (_, bd) in ratios.items())
        status = "RATIO" if any(bd != {1} for _, bd in ratios.values()) else "PASS"
        out.append(SuiteResult("formula_comparison", status,
                               f"cap ratio 1 for all n; boundary ratio (computed/printed) {shown}"))
    return out


def cmd_audit(args, precision):
    suites = run_audit(args.nmax, precision)
    lines = [f"[{s.status:5}] {s.name}: {s.detail}" for s in suites]
    status = EXIT_INVARIANT if any(s.status == "FAIL" for s in suites) else EXIT_OK
    return Outcome(lines, {"suites": [s.as_json() for s in suites]}, status,
                   parameters={"nmax": args.nmax})


# -- grid --------------------------------------------------------------------

def grid_row(n: int, beta: Fraction, volL: Fraction) -> dict:
    p = ModelParams(n, beta, volL)
    V = eval_renvol_formula(p)
    ratios = ""
    if p.ke_exists:
        r = formula_comparison(p)
        bnd = "na" if r.boundary_ratio is None else exact(r.boundary_ratio)
        ratios = f"cap={exact(r.cap_ratio)};boundary={bnd}"
    return {"n": n, "beta": exact(beta), "volL": exact(volL), "V_exact_coeff": exact(V.coeff),
            "V_exact_pipow": V.pi_power, "V_decimal": V.decimal(20), "ratios": ratios}


def cmd_grid(args, precision):
    points = list(product(range(args.nmax + 1), args.betas, args.volLs))
    if any(v <= 0 for _, _, v in points):
        raise UsageError("volL values must be positive")
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        rows = list(pool.map(lambda t: grid_row(*t), points))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=GRID_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    lines = [f"{len(rows)} grid points"]
    if args.csv in (None, "-"):
        lines.append(text.rstrip("\n"))
    else:
        with open(args.csv, "w", newline="") as fh:
            fh.write(text)
        lines.append(f"CSV written to {args.csv}")
    return Outcome(lines, {"rows": rows, "csv": args.csv}, parameters={
        "nmax": args.nmax, "betas": [exact(b) for b in args.betas], "volLs": [exact(v) for v in args.volLs]})


COMMANDS = {
    "formula": cmd_formula,
    "qprime": cmd_qprime,
    "chern": cmd_chern,
    "decompose": cmd_decompose,
    "profile": cmd_profile,
    "expand": cmd_expand,
    "renvol-fit": cmd_renvol_fit,
    "localize": cmd_localize,
    "audit": cmd_audit,
    "grid": cmd_grid,
}


# -- manifest ----------------------------------------------------------------

def build_manifest(command: str, argv: list, precision: int, outcome: Outcome) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "renvol",
        "version": __version__,
        "command": command,
        "argv": argv,
        "parameters": outcome.parameters or {},
        "precision_bits": precision,
        "truncation_order": outcome.truncation_order,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "exit_status": outcome.status,
        "results": outcome.results,
    }


def _strip_output_flags(argv: list) -> list:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out=") or tok == "--no-manifest":
            continue
        out.append(tok)
    return out


def execute(argv: list) -> tuple[int, dict | None, list]:
    """Run a command; returns ``(exit status, manifest, summary lines)``."""
    argv = _join_negative_values(list(argv))
    args = build_parser().parse_args(argv)
    precision = args.precision if args.precision is not None else _default_precision()
    if precision < MIN_PRECISION:
        raise UsageError(f"precision must be at least {MIN_PRECISION} bits")
    with warnings.catch_warnings():
        # Commands report beta >= 1 themselves through ke_exists.
        warnings.simplefilter("ignore", NoKEMetricWarning)
        outcome = COMMANDS[args.command](args, precision)
    manifest = build_manifest(args.command, _strip_output_flags(argv), precision, outcome)
    return outcome.status, manifest, outcome.lines


def replay_manifest(manifest: dict) -> dict:
    """Re-execute the command a manifest records and return the fresh manifest."""
    if manifest.get("schema") != SCHEMA:
        raise ValueError(f"unsupported manifest schema {manifest.get('schema')!r}")
    argv = list(manifest["argv"])
    if "--precision" not in " ".join(argv):
        argv += ["--precision", str(manifest["precision_bits"])]
    _, fresh, _ = execute(argv)
    return fresh


def run_command(argv: list | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        status, manifest, lines = execute(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    for line in lines:
        print(line, file=stdout)
    args = _join_negative_values(argv)
    if "--no-manifest" not in args:
        out = None
        for i, tok in enumerate(args):
            if tok == "--out" and i + 1 < len(args):
                out = args[i + 1]
            elif tok.startswith("--out="):
                out = tok.split("=", 1)[1]
        text = json.dumps(manifest, indent=2, sort_keys=True)
        if out == "-":
            print(text, file=stdout)
        else:
            path = out or f"renvol-{manifest['command']}.json"
            with open(path, "w") as fh:
                fh.write(text + "\n")
    return status


def main() -> int:
    return run_command()
