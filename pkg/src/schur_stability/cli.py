"""
Command-line front end.

Coefficients are given in descending order with the leading coefficient
included (``1 1/2 0 0 -1/2 -1/2`` is x^5 + 1/2x^4 - 1/2x - 1/2) and are
normalized to monic form. Exit codes of ``check``: 0 Certified,
1 DefinitelyUnstable, 2 Inconclusive, 3 Boundary. Usage and parse errors exit
64, invalid parameters reported by the library 65, root-finding failures 70.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from .cases import CournotParams, RickerOutcome, RickerParams, cournot_verify, ricker_grid_spec, ricker_verdict
from .config import configure_logging
from .engine import AlgoConfig, Verdict, run_algorithm, stage_traces
from .errors import InvalidInput, RootFindingError
from .jury import JuryVerdict, jury_table, table_csv, table_text
from .poly import MonicPolynomial, normalize
from .regions import EMITTERS, MAPPINGS, Axis, GridSpec, get_mapping, scan_region, write_region
from .roots import classify_roots, find_roots
from .scalar import NEGATIVE_LITERAL, Backend, format_scalar, parse_scalar
from .schemas import (
    CertificateOut,
    CournotReportOut,
    JuryTableOut,
    RickerVerdictOut,
    RootSetOut,
    SurveyReportOut,
    TerminationHistogramOut,
)
from .survey import soundness_sweep, termination_histogram

logger = logging.getLogger(__name__)

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_SOFTWARE = 70

VERDICT_EXIT = {
    Verdict.CERTIFIED: 0,
    Verdict.DEFINITELY_UNSTABLE: 1,
    Verdict.INCONCLUSIVE: 2,
    Verdict.BOUNDARY: 3,
}

RICKER_EXIT = {
    RickerOutcome.STABLE_SUFFICIENT: 0,
    RickerOutcome.UNSTABLE_NECESSARY: 1,
    RickerOutcome.UNKNOWN: 2,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _shield_negatives(argv: Sequence[str]) -> list:
    # argparse reads "-1/2" as an option; a leading space makes it positional
    return [f" {arg}" if NEGATIVE_LITERAL.match(arg) else arg for arg in argv]


# ---------- input ----------

def _parse_polynomial(tokens: Sequence[str], backend: Backend, ascending: bool) -> MonicPolynomial:
    values = [parse_scalar(t, backend) for t in tokens]
    if ascending:
        values.reverse()
    return normalize(values, backend)


def read_polynomials(args) -> list:
    """Inline coefficients, or one polynomial per line of --file (# starts a comment)."""
    backend = Backend(args.backend)
    try:
        if args.file:
            polys = []
            for number, raw in enumerate(Path(args.file).read_text().splitlines(), start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    polys.append(_parse_polynomial(line.split(), backend, args.ascending))
                except InvalidInput as e:
                    raise UsageError(f"{args.file}:{number}: {e}")
            if not polys:
                raise UsageError(f"{args.file} holds no polynomial")
            return polys
        if not args.coeffs:
            raise UsageError("give coefficients or --file")
        return [_parse_polynomial(args.coeffs, backend, args.ascending)]
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e}")
    except InvalidInput as e:
        raise UsageError(str(e))


def _parse_exact_or_float(text: str, backend: Backend, name: str):
    try:
        return parse_scalar(text, backend)
    except InvalidInput as e:
        raise UsageError(f"--{name}: {e}")


def _parse_params(pairs: Optional[Sequence[str]]) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        params[key.strip()] = _parse_exact_or_float(value, Backend.EXACT, "param")
    return params


def _axis(args, which: str, default: Axis) -> Axis:
    lo, hi, steps = (getattr(args, f"{which}_{part}") for part in ("min", "max", "steps"))
    if lo is None and hi is None and steps is None:
        return default
    return Axis(
        default.name,
        default.min if lo is None else _parse_exact_or_float(lo, Backend.EXACT, f"{which}-min"),
        default.max if hi is None else _parse_exact_or_float(hi, Backend.EXACT, f"{which}-max"),
        default.steps if steps is None else steps,
    )


# ---------- output ----------

def _emit(payload, out: Optional[str]) -> None:
    data = payload if isinstance(payload, bytes) else payload.encode()
    if out:
        Path(out).write_bytes(data)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _json(value) -> str:
    return json.dumps(value, indent=2) + "\n"


def _one_or_many(items: list):
    return items[0] if len(items) == 1 else items


def trace_frame(trace: Sequence, certified_stage: Optional[int]) -> pd.DataFrame:
    """Step, stage polynomial and its l1 norm written as 1 + tail sum."""
    rows = []
    for t in trace:
        norm = f"1 + {format_scalar(t.tail_sum)}"
        if t.stage == certified_stage:
            norm += " < 2"
        rows.append((t.stage + 1, str(t.polynomial()), norm))
    return pd.DataFrame(rows, columns=["Step", "Polynomial", "l1 norm"])


# ---------- commands ----------

def cmd_check(args) -> int:
    cfg = AlgoConfig.from_settings(max_stages=args.max_stages)
    certificates = [run_algorithm(p, cfg) for p in read_polynomials(args)]
    documents = [CertificateOut.from_certificate(c).model_dump(mode="json") for c in certificates]
    _emit(_json(_one_or_many(documents)), args.out)
    return max(VERDICT_EXIT[c.verdict] for c in certificates)


def cmd_trace(args) -> int:
    cfg = AlgoConfig.from_settings(max_stages=args.max_stages)
    chunks, documents, codes = [], [], []
    for p in read_polynomials(args):
        certificate = run_algorithm(p, cfg)
        codes.append(VERDICT_EXIT[certificate.verdict])
        trace = stage_traces(p, args.stages) if args.stages is not None else certificate.trace
        certified = certificate.deciding_stage if certificate.verdict is Verdict.CERTIFIED else None
        frame = trace_frame(trace, certified)
        if args.format == "json":
            documents.append(CertificateOut.from_certificate(certificate).model_dump(mode="json"))
        elif args.format == "csv":
            chunks.append(frame.to_csv(index=False, lineterminator="\n"))
        else:
            chunks.append(f"{p}\n{frame.to_string(index=False)}\nverdict: {certificate.verdict.value}\n")
    _emit(_json(_one_or_many(documents)) if args.format == "json" else "\n".join(chunks), args.out)
    return max(codes)


def cmd_jury(args) -> int:
    tables = [jury_table(p) for p in read_polynomials(args)]
    if args.format == "json":
        text = _json(_one_or_many([JuryTableOut.from_table(t).model_dump(mode="json") for t in tables]))
    elif args.format == "csv":
        text = "\n".join(table_csv(t) for t in tables)
    else:
        text = "\n".join(table_text(t) for t in tables)
    _emit(text, args.out)
    return 0 if all(t.verdict is JuryVerdict.STABLE for t in tables) else 1


def cmd_roots(args) -> int:
    documents = []
    for p in read_polynomials(args):
        roots = find_roots(p, seed=args.seed)
        schur_class = classify_roots(roots, margin=args.margin)
        documents.append(RootSetOut.from_root_set(p, roots, schur_class).model_dump(mode="json"))
    _emit(_json(_one_or_many(documents)), args.out)
    return 0


def _region_output(grid, args) -> int:
    fmt = args.format or (Path(args.out).suffix.lstrip(".").lower() if args.out else "json")
    if fmt not in EMITTERS:
        raise UsageError(f"unknown region format {fmt!r}; choose one of {', '.join(EMITTERS)}")
    if args.out:
        write_region(grid, args.out, fmt)
    elif fmt in ("pgm", "ppm"):
        raise UsageError(f"{fmt} output needs --out")
    else:
        _emit(EMITTERS[fmt](grid), None)
    return 0 if not grid.soundness_violations() else EXIT_SOFTWARE


def cmd_region(args) -> int:
    mapping = get_mapping(args.map)
    spec = GridSpec(
        args.map,
        x_axis=_axis(args, "x", mapping.x_axis),
        y_axis=_axis(args, "y", mapping.y_axis),
        backend=Backend(args.backend),
        max_stages=args.max_stages if args.max_stages is not None else 3,
        params=_parse_params(args.param),
    )
    return _region_output(scan_region(spec, workers=args.workers, progress=None), args)


def cmd_cournot(args) -> int:
    lam = _parse_exact_or_float(args.lam, Backend.EXACT, "lam")
    report = cournot_verify(CournotParams(lam=lam, k=args.k, N=args.N), AlgoConfig.from_settings(args.max_stages))
    _emit(CournotReportOut.from_report(report).model_dump_json(indent=2) + "\n", args.out)
    return 0 if report.all_certified else 2


def cmd_ricker(args) -> int:
    backend = Backend(args.backend)
    r = _parse_exact_or_float(args.r, backend, "r")
    if args.scan_ba:
        mapping = MAPPINGS["ricker-ba"]
        spec = ricker_grid_spec(
            _parse_exact_or_float(args.r, Backend.EXACT, "r"),
            max_stages=args.max_stages if args.max_stages is not None else 1,
            x_axis=_axis(args, "x", mapping.x_axis),
            y_axis=_axis(args, "y", mapping.y_axis),
            backend=backend,
        )
        return _region_output(scan_region(spec, workers=args.workers, progress=None), args)
    if args.a is None or args.b is None:
        raise UsageError("ricker needs --a and --b (or --scan-ba)")
    params = RickerParams(r=r, a=_parse_exact_or_float(args.a, backend, "a"), b=_parse_exact_or_float(args.b, backend, "b"))
    verdict = ricker_verdict(params, AlgoConfig.from_settings(args.max_stages))
    _emit(RickerVerdictOut.from_verdict(params, verdict).model_dump_json(indent=2) + "\n", args.out)
    return RICKER_EXIT[verdict.outcome]


def cmd_survey(args) -> int:
    degrees = (args.min_degree, args.max_degree)
    if not 1 <= args.min_degree <= args.max_degree:
        raise UsageError("need 1 <= --min-degree <= --max-degree")
    if args.kind == "termination":
        stages = 64 if args.max_stages is None else args.max_stages
        histogram = termination_histogram(args.samples, seed=args.seed, max_stages=stages, degrees=degrees, progress=None)
        _emit(TerminationHistogramOut.model_validate(histogram).model_dump_json(indent=2) + "\n", args.out)
        return 0
    stages = 16 if args.max_stages is None else args.max_stages
    report = soundness_sweep(args.samples, seed=args.seed, max_stages=stages, degrees=degrees, progress=None)
    _emit(SurveyReportOut.model_validate(report).model_dump_json(indent=2) + "\n", args.out)
    return 0 if report.sound else 1


# ---------- parser ----------

def _add_polynomial_args(parser, formats=None, default_format=None):
    parser.add_argument("coeffs", nargs="*", help="coefficients, descending, leading coefficient included")
    parser.add_argument("--file", help="one polynomial per line, '#' comments")
    parser.add_argument("--ascending", action="store_true", help="coefficients are given constant term first")
    parser.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.EXACT.value)
    parser.add_argument("--max-stages", dest="max_stages", type=int, help="stage budget")
    parser.add_argument("--out", help="output path (default stdout)")
    if formats:
        parser.add_argument("--format", choices=formats, default=default_format)


def _add_axis_args(parser):
    for which in ("x", "y"):
        parser.add_argument(f"--{which}-min")
        parser.add_argument(f"--{which}-max")
        parser.add_argument(f"--{which}-steps", type=int, help="node count (>= 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schur-stability", description="Schur stability via the iterated l1 test")
    parser.add_argument("--log-level", help="overrides SCHUR_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the staged l1 test, print the certificate")
    _add_polynomial_args(check, ["json"], "json")
    check.set_defaults(handler=cmd_check)

    trace = sub.add_parser("trace", help="stage polynomials and their l1 norms")
    _add_polynomial_args(trace, ["table", "csv", "json"], "table")
    trace.add_argument("--stages", type=int, help="print exactly stages 0..N instead of stopping at the certificate")
    trace.set_defaults(handler=cmd_trace)

    jury = sub.add_parser("jury", help="Jury table and verdict")
    _add_polynomial_args(jury, ["table", "csv", "json"], "table")
    jury.set_defaults(handler=cmd_jury)

    roots = sub.add_parser("roots", help="numerical roots and unit-disk class")
    _add_polynomial_args(roots, ["json"], "json")
    roots.add_argument("--seed", type=int, default=0, help="rotation of the initial guesses")
    roots.add_argument("--margin", type=float, help="NearCircle band half-width (default SCHUR_ORACLE_MARGIN)")
    roots.set_defaults(handler=cmd_roots)

    region = sub.add_parser("region", help="stage-classified parameter-plane scan")
    region.add_argument("--map", required=True, choices=list(MAPPINGS))
    region.add_argument("--stages", "--max-stages", dest="max_stages", type=int, help="stage budget (default 3)")
    region.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.EXACT.value)
    region.add_argument("--param", action="append", help="mapping parameter key=value, e.g. r=1")
    region.add_argument("--workers", type=int, help="worker processes (default SCHUR_WORKERS)")
    region.add_argument("--format", choices=list(EMITTERS), help="default: from the --out suffix")
    region.add_argument("--out")
    _add_axis_args(region)
    region.set_defaults(handler=cmd_region)

    cournot = sub.add_parser("cournot", help="Cournot oligopoly with delay")
    cournot.add_argument("--lam", required=True, help="adjustment speed in (0, 1), rational")
    cournot.add_argument("--k", type=int, required=True, help="delay")
    cournot.add_argument("--N", type=int, choices=[2, 3], default=3)
    cournot.add_argument("--stages", "--max-stages", dest="max_stages", type=int)
    cournot.add_argument("--out")
    cournot.set_defaults(handler=cmd_cournot)

    ricker = sub.add_parser("ricker", help="Ricker competition model, quadratic factor")
    ricker.add_argument("--r", required=True)
    ricker.add_argument("--a")
    ricker.add_argument("--b")
    ricker.add_argument("--scan-ba", action="store_true", help="scan the (b, a) plane instead")
    ricker.add_argument("--stages", "--max-stages", dest="max_stages", type=int)
    ricker.add_argument("--backend", choices=[b.value for b in Backend], default=Backend.EXACT.value)
    ricker.add_argument("--workers", type=int)
    ricker.add_argument("--format", choices=list(EMITTERS))
    ricker.add_argument("--out")
    _add_axis_args(ricker)
    ricker.set_defaults(handler=cmd_ricker)

    survey = sub.add_parser("survey", help="random soundness sweep or termination histogram")
    survey.add_argument("--kind", choices=["soundness", "termination"], default="soundness")
    survey.add_argument("--samples", type=int, default=1000)
    survey.add_argument("--seed", type=int, default=0)
    survey.add_argument("--stages", "--max-stages", dest="max_stages", type=int)
    survey.add_argument("--min-degree", type=int, default=2)
    survey.add_argument("--max-degree", type=int, default=8)
    survey.add_argument("--out")
    survey.set_defaults(handler=cmd_survey)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_shield_negatives(argv))
        configure_logging(args.log_level)
        return args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInput as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_DATA
    except RootFindingError as e:
        logger.error(f"Root finding failed: {e}")
        return EXIT_SOFTWARE
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    raise SystemExit(main())
