"""Batch command line front end: JSON problem files in, JSON/CSV artifacts out.

Commands
  solve               extend the prefix to the cutoff; solution.json + terms.csv
  analyze             linearization, growth order s, splitting conditions; analysis.json
  verify              solve, normalize, fit growth envelope; gevrey.json + gevrey.csv
  reduce              normal form of the equation past a prefix; reduced.json
  iota                multivariate image of the solution tail; mseries.json
  check-norms         seeded randomized norm-estimate harness; normcheck.json
  suggest-generators  heuristic semigroup generator candidates; generators.json

Exit codes
  0  success
  1  a randomized norm check failed (implementation regression)
  2  structural hypothesis violated by the problem data (non-constant leading
     derivative coefficient, vanishing top-order derivative, dependent or
     nonpositive generators, gap outside the declared semigroup, inconsistent
     prefix, undefined growth order)
  3  resonance: the coefficient recursion hit a root of the characteristic
     polynomial and a prefix term must be prescribed there
  4  undecidable comparison at maximum precision (exponent ordering or a
     characteristic root too close to a splitting boundary)
  5  malformed problem file or flag

Determinism: identical inputs and seed produce byte-identical artifacts.
JSON artifacts are UTF-8, sorted keys, two-space indent, trailing newline;
CSV artifacts are RFC 4180 with CRLF line ends.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .errors import (
    AllDerivativesVanish,
    DependentGenerators,
    DerivativeYnZeroWarning,
    DulacError,
    ExactValueRequired,
    ExponentOutsideSemigroup,
    HypothesisViolation,
    IndeterminateRoot,
    LinearDataDrift,
    NonpositiveRealPart,
    NonpositiveValuation,
    NonProgressingResidual,
    PreconditionViolated,
    Resonance,
    SchemaError,
    SlopeUndetermined,
    UndecidableComparison,
)
from .exponents import DEFAULT_PRECISION, MAX_PRECISION, Exponent, ExponentBasis
from .gevrey import classify, slope
from .mseries import MSeries, NormParams, check_lemma5, check_lemma6, fit_degree_K, iota as iota_map, iota_inv, majorant_bound
from .ode import ODESpec
from .scalars import ExactScalar
from .semigroup import Generators, choose_R, exponent_gaps, suggest_generators, validate_generators
from .series import DulacSeries, INF
from .solver import check_conditions, extend, extract_linearization, reduce_equation
from .tpoly import TPoly

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_HYPOTHESIS = 2
EXIT_RESONANCE = 3
EXIT_UNDECIDABLE = 4
EXIT_SCHEMA = 5

_HYPOTHESIS_ERRORS = (
    HypothesisViolation,
    AllDerivativesVanish,
    SlopeUndetermined,
    NonProgressingResidual,
    LinearDataDrift,
    NonpositiveValuation,
    DependentGenerators,
    NonpositiveRealPart,
    ExponentOutsideSemigroup,
    PreconditionViolated,
)
_UNDECIDABLE_ERRORS = (UndecidableComparison, IndeterminateRoot, ExactValueRequired)

_PROBLEM_KEYS = {
    "ode", "basis", "prefix", "generators", "cutoff", "R", "s_override",
    "precision", "tolerance",
}


def _rational(value, what: str) -> Fraction:
    """Exact rational from a JSON number; decimal floats read at face value."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"problem file: {what} must be a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise SchemaError(f"problem file: {what} must be finite, got {value!r}")
    return Fraction(repr(value))


class Problem:
    """Hand-validated problem file plus flag overrides."""

    def __init__(self, data: dict, args):
        if not isinstance(data, dict):
            raise SchemaError("problem file: top level must be a JSON object")
        unknown = set(data) - _PROBLEM_KEYS
        if unknown:
            raise SchemaError(f"problem file: unknown keys {sorted(unknown)}")

        precision = data.get("precision", DEFAULT_PRECISION)
        if args.precision is not None:
            precision = args.precision
        if not isinstance(precision, int) or isinstance(precision, bool) or not 64 <= precision <= MAX_PRECISION:
            raise SchemaError(
                f"problem file: precision must be an integer in [64, {MAX_PRECISION}], got {precision!r}"
            )
        self.precision = precision

        entries = data.get("basis")
        if not isinstance(entries, list) or not entries or not all(isinstance(e, str) for e in entries):
            raise SchemaError("problem file: basis must be a nonempty list of entry strings")
        try:
            self.basis = ExponentBasis(entries, precision)
        except ValueError as exc:
            raise SchemaError(f"problem file: basis ({exc})") from exc

        if "ode" not in data:
            raise SchemaError("problem file: missing required key 'ode'")
        self.ode = ODESpec.from_json(data["ode"])

        self.prefix = self._parse_prefix(data.get("prefix"))
        self.generator_exponents = self._parse_generators(data.get("generators"))

        if "cutoff" not in data and args.cutoff is None:
            raise SchemaError("problem file: missing required key 'cutoff' (and no --cutoff flag)")
        cutoff = args.cutoff if args.cutoff is not None else data["cutoff"]
        self.cutoff = _rational(cutoff, "cutoff")
        if self.cutoff <= 0:
            raise SchemaError(f"problem file: cutoff must be positive, got {cutoff!r}")

        R = args.R if args.R is not None else data.get("R")
        self.R = None if R is None else _rational(R, "R")
        if self.R is not None and self.R <= 1:
            raise SchemaError(f"problem file: R must exceed 1, got {R!r}")

        s = data.get("s_override")
        if s is None:
            self.s_override = None
        elif s == "inf":
            self.s_override = INF
        else:
            self.s_override = _rational(s, "s_override")
            if self.s_override <= 0:
                raise SchemaError(f"problem file: s_override must be positive, got {s!r}")

        tol = data.get("tolerance", 1e-12)
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not 0 < tol <= 1e-3:
            raise SchemaError(f"problem file: tolerance must be in (0, 1e-3], got {tol!r}")
        self.tolerance = float(tol)

    def _parse_prefix(self, raw) -> DulacSeries:
        if raw is None:
            return DulacSeries.zero(self.basis)
        if not isinstance(raw, list):
            raise SchemaError("problem file: prefix must be a list of {exp, poly} objects")
        terms = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict) or set(item) != {"exp", "poly"}:
                raise SchemaError(f"problem file: prefix[{i}] must have exactly the keys exp and poly")
            try:
                e = self.basis.parse_exponent(item["exp"])
                c = TPoly.parse(item["poly"])
            except (ValueError, TypeError) as exc:
                raise SchemaError(f"problem file: prefix[{i}] ({exc})") from exc
            terms.append((e, c))
        return DulacSeries(self.basis, tuple(terms), INF)

    def _parse_generators(self, raw):
        if raw is None:
            return None
        if not isinstance(raw, list) or not raw:
            raise SchemaError("problem file: generators must be a nonempty list of coordinate vectors")
        out = []
        for i, coords in enumerate(raw):
            if not isinstance(coords, list):
                raise SchemaError(f"problem file: generators[{i}] must be a coordinate vector")
            try:
                out.append(self.basis.parse_exponent(coords))
            except (ValueError, TypeError) as exc:
                raise SchemaError(f"problem file: generators[{i}] ({exc})") from exc
        return out

    def gens(self) -> Generators:
        if self.generator_exponents is None:
            raise SchemaError("problem file: this command requires the 'generators' key")
        return validate_generators(self.generator_exponents)

    def default_gens(self) -> Generators:
        """Declared generators, or {1} when none are declared."""
        if self.generator_exponents is not None:
            return validate_generators(self.generator_exponents)
        return validate_generators([self.basis.rational(Fraction(1))])


def _load_problem(path: str, args) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"problem file: cannot read {path} ({exc})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"problem file: invalid JSON in {path} ({exc})") from exc
    return Problem(data, args)


def _serialize_s(s) -> str:
    return "inf" if s == INF else str(Fraction(s))


def _write_text(directory: Path, name: str, content: str) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(content)
    return path


def _json_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(args, payload: dict, json_name: str, csv_text: str | None, csv_name: str | None, text_lines) -> None:
    outdir = Path(args.output_dir)
    _write_text(outdir, json_name, _json_text(payload))
    if csv_text is not None and csv_name is not None:
        _write_text(outdir, csv_name, csv_text)
    if args.format == "json":
        sys.stdout.write(_json_text(payload))
    elif args.format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        for line in text_lines:
            print(line)


def _terms_csv(series: DulacSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["k", "exp", "re_lambda", "im_lambda", "deg_c", "poly"])
    for k, (e, c) in enumerate(series.terms, start=1):
        w.writerow([
            k,
            ";".join(e.serialize()),
            str(e.re_mid),
            str(e.im_mid),
            0 if c.degree == float("-inf") else c.degree,
            ";".join(c.serialize()),
        ])
    return buf.getvalue()


# -- commands ------------------------------------------------------------------


def _cmd_solve(problem: Problem, args) -> int:
    state = extend(problem.ode, problem.prefix, problem.cutoff)
    payload = {"command": "solve", **state.to_json()}
    text = [
        f"solve: {len(state.solution.terms)} terms below cutoff {float(problem.cutoff)}",
        f"residual valuation: {'inf' if state.residual.is_zero() else float(state.residual.val())}",
    ]
    _emit(args, payload, "solution.json", _terms_csv(state.solution), "terms.csv", text)
    return EXIT_OK


def _cmd_analyze(problem: Problem, args) -> int:
    lin = extract_linearization(problem.ode, problem.prefix)
    s = problem.s_override if problem.s_override is not None else slope(lin)
    conditions = None
    if problem.prefix.terms:
        report = check_conditions(lin, [e for e, _ in problem.prefix.terms], s=s)
        conditions = report.to_json()
    payload = {
        "command": "analyze",
        "linearization": lin.to_json(),
        "s": _serialize_s(s),
        "conditions": conditions,
    }
    text = [
        f"nu: {';'.join(lin.nu.serialize())} (Re = {float(lin.nu.re_mid)})",
        f"A: [{', '.join(str(a) for a in lin.A)}]",
        f"ell: {lin.ell}",
        f"s: {_serialize_s(s)}",
    ]
    if conditions is not None:
        text.append(
            f"conditions at m={len(problem.prefix.terms)}: roots_ok={conditions['roots_ok']} "
            f"gap_ok={conditions['gap_ok']} minimal_m={conditions['minimal_m']}"
        )
    _emit(args, payload, "analysis.json", None, None, text)
    return EXIT_OK


def _cmd_verify(problem: Problem, args) -> int:
    state = extend(problem.ode, problem.prefix, problem.cutoff)
    s = problem.s_override if problem.s_override is not None else state.lin.slope()
    R = problem.R if problem.R is not None else Fraction(2)
    report = classify(state, s, R, problem.tolerance)
    payload = {"command": "verify", **report.to_json()}
    text = [
        f"s: {_serialize_s(s)}",
        f"verdict: {report.verdict}",
        f"rows: {len(report.rows)}",
        f"C_fit: {report.C_fit}",
        f"A_fit: {report.A_fit}",
    ]
    if report.radius_estimate is not None:
        text.append(f"radius_estimate: {report.radius_estimate}")
    _emit(args, payload, "gevrey.json", report.to_csv(), "gevrey.csv", text)
    return EXIT_OK


def _cmd_reduce(problem: Problem, args) -> int:
    if problem.prefix.terms:
        phi, m = problem.prefix, len(problem.prefix.terms)
    else:
        state = extend(problem.ode, problem.prefix, problem.cutoff)
        if not state.solution.terms:
            raise PreconditionViolated("reduce: no prefix given and the solved solution is empty")
        lin = state.lin
        report = check_conditions(lin, [e for e, _ in state.solution.terms])
        phi = state.solution
        m = report.minimal_m if report.minimal_m is not None else 1
    red = reduce_equation(problem.ode, phi, m, s=problem.s_override)
    payload = {"command": "reduce", "m": m, **red.to_json()}
    text = [
        f"m: {m}",
        f"lambda_m: {';'.join(red.lambda_m.serialize())}",
        f"tau (Re): {float(red.tau.re_mid)}",
        f"nonlinear terms: {len(red.N)}",
        f"violations: {'; '.join(red.violations) if red.violations else 'none'}",
    ]
    _emit(args, payload, "reduced.json", None, None, text)
    return EXIT_OK


def _cmd_iota(problem: Problem, args) -> int:
    gens = problem.gens()
    state = extend(problem.ode, problem.prefix, problem.cutoff)
    m = len(problem.prefix.terms) if problem.prefix.terms else 1
    if len(state.solution.terms) < m:
        raise PreconditionViolated(
            f"iota: solution has {len(state.solution.terms)} terms, fewer than the base index m = {m}"
        )
    lam_m = state.solution.terms[m - 1][0]
    gaps = exponent_gaps(state.solution.terms, gens, m)
    for k, gap, decomp in gaps:
        if decomp is None:
            raise ExponentOutsideSemigroup(
                f"iota: gap lambda_{k} - lambda_{m} = {gap} does not decompose over the "
                "declared generators; they do not generate the solution's exponent steps"
            )
    tail_terms = tuple((e - lam_m, c) for e, c in state.solution.terms[m:])
    cutoff = state.solution.cutoff
    if cutoff != INF:
        cutoff = cutoff - lam_m.re_mid
    tail = DulacSeries(problem.basis, tail_terms, cutoff)
    image = iota_map(tail, gens, lam_m)
    round_trip = iota_inv(image)
    exact = round_trip.terms == tail.terms and round_trip.cutoff == tail.cutoff
    K_fit = fit_degree_K(image)
    payload = {
        "command": "iota",
        "m": m,
        "lambda_base": lam_m.serialize(),
        "gaps": [
            {"k": k, "gap": gap.serialize(), "m": list(decomp)} for k, gap, decomp in gaps
        ],
        "mseries": image.to_json(),
        "round_trip_exact": exact,
        "K_fit": str(K_fit),
    }
    text = [
        f"m: {m}  (lambda_base {';'.join(lam_m.serialize())})",
        f"kappa: {gens.kappa}",
        f"tail terms transported: {len(image.terms)}",
        f"round_trip_exact: {exact}",
        f"K_fit: {K_fit}",
    ]
    _emit(args, payload, "mseries.json", None, None, text)
    return EXIT_OK


def _random_scalar(rng) -> ExactScalar:
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
    return ExactScalar(re, im)


def _random_poly(rng, max_deg: int) -> TPoly:
    deg = rng.randint(0, max_deg)
    coeffs = [_random_scalar(rng) for _ in range(deg + 1)]
    if coeffs[-1].is_zero():
        coeffs[-1] = ExactScalar.of(1)
    return TPoly(tuple(coeffs))


def _random_mseries(rng, gens: Generators, lambda_base: Exponent, max_deg_for=None) -> MSeries:
    kappa = gens.kappa
    terms = []
    for _ in range(rng.randint(1, 4)):
        m = tuple(rng.randint(0, 3) for _ in range(kappa))
        if not any(m):
            m = tuple(1 if i == rng.randrange(kappa) else v for i, v in enumerate(m))
        cap = max_deg_for(m) if max_deg_for is not None else 2
        terms.append((m, _random_poly(rng, cap)))
    return MSeries(gens, lambda_base, tuple(terms), INF)


def _cmd_check_norms(problem: Problem, args) -> int:
    import random

    rng = random.Random(args.seed)
    gens = problem.default_gens()
    s = problem.s_override if problem.s_override not in (None, INF) else Fraction(1)
    Kcal = Fraction(2)
    R = problem.R if problem.R is not None else choose_R(Kcal, gens)[1]
    base = problem.basis.rational(Fraction(rng.randint(0, 3)))

    p0 = NormParams(R=R, s=s, Kcal=Fraction(0), j=0, tol=problem.tolerance)
    lemma6_fail = 0
    trials6 = 40
    for _ in range(trials6):
        g1 = _random_mseries(rng, gens, base)
        g2 = _random_mseries(rng, gens, base)
        if not check_lemma6(g1, g2, p0).passed:
            lemma6_fail += 1

    trials5, rejects5 = 25, 8
    lemma5_fail = 0
    for _ in range(trials5):
        level = rng.randint(0, 1)
        j = level + rng.randint(0, 1)
        p5 = NormParams(R=R, s=s, Kcal=Kcal, j=level, tol=problem.tolerance)
        gate = Fraction(j - level) * s
        while True:
            l = tuple(rng.randint(0, 2) for _ in range(gens.kappa))
            if any(l) and gens.m_re(l) >= gate:
                break
        a = _random_poly(rng, min(2, int(Kcal * sum(l))))
        g = _random_mseries(rng, gens, base, max_deg_for=lambda m: min(2, int(Kcal * sum(m))))
        if not check_lemma5(a, l, j, g, p5).passed:
            lemma5_fail += 1

    reject_fail = 0
    for _ in range(rejects5):
        level = rng.randint(0, 1)
        p5 = NormParams(R=R, s=s, Kcal=Kcal, j=level, tol=problem.tolerance)
        g = _random_mseries(rng, gens, base, max_deg_for=lambda m: 0)
        try:
            # l = 0 gives Re<l,r> = 0 < (j - level) s with j = level + 1
            check_lemma5(TPoly.ONE, (0,) * gens.kappa, level + 1, g, p5)
            reject_fail += 1
        except PreconditionViolated:
            pass

    majorant_fail = 0
    trials7 = 5
    e1 = tuple(1 if i == 0 else 0 for i in range(gens.kappa))
    zero_m = (0,) * gens.kappa
    coeffs = {(e1, (0,)): TPoly.ONE, (zero_m, (1,)): TPoly.ONE, (e1, (2,)): TPoly.ONE}
    for _ in range(trials7):
        lo = Fraction(rng.randint(1, 8), 8)
        hi = lo + Fraction(rng.randint(1, 8), 8)
        rho = Fraction(rng.randint(1, 4), 4)
        b_lo = majorant_bound(coeffs, rho, [lo], gens, p0)
        b_hi = majorant_bound(coeffs, rho, [hi], gens, p0)
        if not b_lo <= b_hi:
            majorant_fail += 1

    all_pass = lemma6_fail == lemma5_fail == reject_fail == majorant_fail == 0
    payload = {
        "command": "check-norms",
        "seed": args.seed,
        "R": str(R),
        "s": _serialize_s(s),
        "Kcal": str(Kcal),
        "lemma6": {"trials": trials6, "failures": lemma6_fail},
        "lemma5": {"trials": trials5, "failures": lemma5_fail},
        "lemma5_rejects": {"trials": rejects5, "failures": reject_fail},
        "majorant_monotone": {"trials": trials7, "failures": majorant_fail},
        "all_pass": all_pass,
    }
    text = [
        f"lemma6 product estimate: {trials6 - lemma6_fail}/{trials6} pass",
        f"lemma5 operator estimate: {trials5 - lemma5_fail}/{trials5} pass",
        f"lemma5 precondition gate: {rejects5 - reject_fail}/{rejects5} rejected",
        f"majorant monotonicity: {trials7 - majorant_fail}/{trials7} pass",
        f"all_pass: {all_pass}",
    ]
    _emit(args, payload, "normcheck.json", None, None, text)
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _cmd_suggest_generators(problem: Problem, args) -> int:
    result = suggest_generators(problem.ode, problem.prefix, problem.basis)
    payload = {"command": "suggest-generators", **result}
    text = [
        f"suggested: {result['suggested']}",
        f"note: {result['note']}",
    ]
    _emit(args, payload, "generators.json", None, None, text)
    return EXIT_OK


_COMMANDS = {
    "solve": _cmd_solve,
    "analyze": _cmd_analyze,
    "verify": _cmd_verify,
    "reduce": _cmd_reduce,
    "iota": _cmd_iota,
    "check-norms": _cmd_check_norms,
    "suggest-generators": _cmd_suggest_generators,
}


def _number_flag(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dulac",
        description="Dulac series solver and growth-order analysis toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("problem", help="path to the JSON problem file")
        cmd.add_argument("--cutoff", type=_number_flag, default=None,
                         help="override the problem file's cutoff on Re lambda")
        cmd.add_argument("--R", type=_number_flag, default=None,
                         help="override the coefficient-norm weight R (> 1)")
        cmd.add_argument("--precision", type=int, default=None,
                         help="override the exponent interval precision in bits")
        cmd.add_argument("--seed", type=int, default=0,
                         help="seed for the randomized harnesses")
        cmd.add_argument("--output-dir", default=".",
                         help="directory for JSON/CSV artifacts (default: .)")
        cmd.add_argument("--format", choices=["json", "csv", "text"], default="text",
                         help="stdout rendering (artifacts are always written)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", DerivativeYnZeroWarning)
            problem = _load_problem(args.problem, args)
            return _COMMANDS[args.command](problem, args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except Resonance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except _UNDECIDABLE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDECIDABLE
    except _HYPOTHESIS_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except DerivativeYnZeroWarning as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except DulacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
