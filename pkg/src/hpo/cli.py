"""Command-line front end: ``hpo classify | verify | matrix | report``.

Exit codes: 0 success, 1 internal error or failed checks, 2 invalid input,
3 unknown suite, 4 file write failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np
import yaml

from . import __version__
from . import spectral as sm
from .classify import ClassificationReport, classify_operator, cross_validate
from .errors import HPOError, UnboundedSymbol, UnknownSuite
from .kernels import ConjugationSpec
from .lfmap import LFSymbol
from .linalg import hermitian_min_eig
from .verify import SCALES, SUITES, SuiteResult, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SUITE, EXIT_WRITE = 0, 1, 2, 3, 4
SIG_DIGITS = 12


class ConfigError(HPOError, ValueError):
    """Malformed report configuration; the message names the field."""


def _round(x: float) -> float:
    return float(f"{x:.{SIG_DIGITS}g}")


def _jsonable(obj: Any) -> Any:
    """Recursively round floats to 12 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(doc: Any) -> str:
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def _default_seed() -> int:
    raw = os.environ.get("HPO_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"HPO_SEED must be an integer, got {raw!r}") from None


# -- serialization ------------------------------------------------------------

def report_to_dict(rep: ClassificationReport, checks: Optional[dict] = None) -> dict:
    d = {
        "symbol": {"a": rep.symbol.a, "b_re": rep.symbol.b.real, "b_im": rep.symbol.b.imag},
        "symbol_class": rep.symbol_class.value,
        "normal": rep.normal,
        "self_adjoint": rep.self_adjoint,
        "unitary": rep.unitary,
        "complex_symmetric": rep.complex_symmetric,
        "cohyponormal": rep.cohyponormal,
        "certificate": None if rep.certificate is None else str(rep.certificate),
        "residuals": dict(rep.residuals),
        "notes": list(rep.notes),
    }
    if checks is not None:
        d["cross_validation"] = {k: {"expected": c.expected, "residual": c.residual, "passed": c.passed}
                                 for k, c in checks.items()}
        d["failures"] = sum(not c.passed for c in checks.values())
    return d


def suite_to_dict(res: SuiteResult) -> dict:
    return {
        "suite_name": res.suite_name,
        "seed": res.seed,
        "scale": res.scale,
        "passed": res.passed,
        "cases": [{"label": c.label, "measured": c.measured, "threshold": c.threshold,
                   "direction": c.direction, "pass": c.passed, "expected_fail": c.expected_fail}
                  for c in res.cases],
    }


def format_report_text(rep: ClassificationReport) -> str:
    b = rep.symbol.b
    lines = [f"symbol             w -> {rep.symbol.a:g} w + ({b.real:g}{b.imag:+g}i)",
             f"class              {rep.symbol_class.value}"]
    for flag in ("normal", "self_adjoint", "unitary", "complex_symmetric", "cohyponormal"):
        lines.append(f"{flag:<19}{getattr(rep, flag)}")
    lines.append(f"certificate        {rep.certificate if rep.certificate is not None else 'none'}")
    for k, v in rep.residuals.items():
        lines.append(f"  {k:<22}{v:.3e}")
    lines.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(lines) + "\n"


def format_suite_text(res: SuiteResult) -> str:
    out = [f"== {res.suite_name} (seed={res.seed}, scale={res.scale}) "
           f"{'PASS' if res.passed else 'FAIL'} [{res.elapsed:.2f}s]"]
    for c in res.cases:
        op = "<" if c.direction == "below" else ">"
        tag = " (expected-fail)" if c.expected_fail else ""
        out.append(f"  [{'ok' if c.passed else 'XX'}] {c.label}: {c.measured:.3e} {op} {c.threshold:g}{tag}")
    return "\n".join(out) + "\n"


def _write(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)


# -- subcommands --------------------------------------------------------------

def _symbol_from_args(args) -> LFSymbol:
    return LFSymbol(args.a, complex(args.b_re, args.b_im))


def cmd_classify(args) -> int:
    try:
        phi = _symbol_from_args(args)
    except UnboundedSymbol as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep = classify_operator(phi, seed=args.seed)
    if args.format == "json":
        text = dump_json(report_to_dict(rep))
    else:
        text = format_report_text(rep)
    try:
        _write(text, args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_WRITE
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        try:
            res = run_suite(name, args.seed, args.scale)
        except UnknownSuite as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SUITE
        sys.stdout.write(format_suite_text(res))
        ok &= res.passed
    print("all suites passed" if ok else "some suites FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def _conjugation_from_args(args) -> ConjugationSpec:
    tag = args.conjugation
    if tag == "Jr":
        return ConjugationSpec.Jr(args.r)
    if tag == "Wc":
        return ConjugationSpec.Wc(args.c)
    return ConjugationSpec(tag)


def matrix_csv(entries: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "n", "re", "im"])
    for m in range(entries.shape[0]):
        for n in range(entries.shape[1]):
            z = entries[m, n]
            w.writerow([m, n, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def cmd_matrix(args) -> int:
    try:
        if args.conjugation is not None:
            C = _conjugation_from_args(args)
            A = sm.conjugation_matrix(C, args.order, args.fft, args.radius)
            sym, uni = sm.conjugation_matrix_checks(A)
            summary = [f"{C} conjugation matrix, N={args.order}",
                       f"symmetry defect  {sym:.3e}", f"unitarity defect {uni:.3e}"]
        else:
            phi = _symbol_from_args(args)
            A = sm.composition_matrix(phi, args.order, args.fft, args.radius)
            k = max(1, args.order // 2)
            H = sm.commutator_block(phi, k, args.fft)
            summary = [f"composition matrix for {phi}, N={args.order}",
                       f"||TT* - T*T|| (leading {k}) {np.max(np.abs(H)):.3e}",
                       f"min eig of TT* - T*T     {hermitian_min_eig(0.5 * (H + H.conj().T)):.3e}"]
    except (HPOError, ValueError, NotImplementedError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    E = A.entries
    summary.insert(1, f"[0,0]={E[0, 0].real:.6f}" + (f"{E[0, 0].imag:+.6f}i" if abs(E[0, 0].imag) > 5e-7 else ""))
    if args.emit is not None:
        try:
            Path(args.emit).write_text(matrix_csv(E))
        except OSError as exc:
            print(f"error: cannot write {args.emit}: {exc}", file=sys.stderr)
            return EXIT_WRITE
        summary.append(f"wrote {E.size} entries to {args.emit}")
    print("\n".join(summary))
    return EXIT_OK


# -- report -------------------------------------------------------------------

def _parse_symbol(entry, i: int) -> LFSymbol:
    where = f"symbols[{i}]"
    if isinstance(entry, dict):
        unknown = set(entry) - {"a", "b_re", "b_im"}
        if unknown or "a" not in entry:
            raise ConfigError(f"{where}: expected keys a, b_re, b_im")
        vals = (entry["a"], entry.get("b_re", 0.0), entry.get("b_im", 0.0))
    elif isinstance(entry, (list, tuple)) and len(entry) in (1, 2, 3):
        vals = tuple(entry) + (0.0,) * (3 - len(entry))
    else:
        raise ConfigError(f"{where}: expected [a, b_re, b_im] or a mapping")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
        raise ConfigError(f"{where}: entries must be numbers")
    try:
        return LFSymbol(float(vals[0]), complex(float(vals[1]), float(vals[2])))
    except UnboundedSymbol as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(raw: Any) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a mapping")
    allowed = {"symbols", "suites", "seed", "scale", "output_path", "format"}
    extra = sorted(set(raw) - allowed)
    if extra:
        raise ConfigError(f"{extra[0]}: unknown field")
    symbols = raw.get("symbols", [])
    if not isinstance(symbols, list):
        raise ConfigError("symbols: must be a list")
    suites = raw.get("suites", [])
    if not isinstance(suites, list):
        raise ConfigError("suites: must be a list")
    for i, s in enumerate(suites):
        if s not in SUITES:
            raise ConfigError(f"suites[{i}]: unknown suite {s!r}")
    seed = raw.get("seed", None)
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ConfigError("seed: must be an integer")
    scale = raw.get("scale", "quick")
    if scale not in SCALES:
        raise ConfigError(f"scale: must be one of {', '.join(SCALES)}")
    fmt = raw.get("format", "json")
    if fmt not in ("json", "csv", "text"):
        raise ConfigError("format: must be json, csv or text")
    out = raw.get("output_path", None)
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_path: must be a string")
    return {
        "symbols": [_parse_symbol(e, i) for i, e in enumerate(symbols)],
        "suites": suites, "seed": seed, "scale": scale, "format": fmt, "output_path": out,
    }


def build_report(cfg: dict, seed: int) -> tuple[dict, bool]:
    classifications = []
    ok = True
    for phi in cfg["symbols"]:
        rep = classify_operator(phi, seed=seed)
        checks = cross_validate(phi, seed=seed)
        ok &= all(c.passed for c in checks.values())
        classifications.append(report_to_dict(rep, checks))
    suites = []
    for name in cfg["suites"]:
        res = run_suite(name, seed, cfg["scale"])
        ok &= res.passed
        suites.append(suite_to_dict(res))
    meta = {
        "seed": seed,
        "scale": cfg["scale"],
        "passed": ok,
        "versions": {"hpo": __version__, "numpy": np.__version__, "python": platform.python_version()},
    }
    return {"meta": meta, "classifications": classifications, "suites": suites}, ok


def report_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "name", "check", "measured", "pass"])
    for c in doc["classifications"]:
        s = c["symbol"]
        name = f"({s['a']:g},{s['b_re']:g},{s['b_im']:g})"
        for key, chk in c.get("cross_validation", {}).items():
            w.writerow(["classification", name, key, f"{chk['residual']:.{SIG_DIGITS}g}", chk["passed"]])
    for s in doc["suites"]:
        for case in s["cases"]:
            w.writerow(["suite", s["suite_name"], case["label"], f"{case['measured']:.{SIG_DIGITS}g}", case["pass"]])
    return buf.getvalue()


def report_text(doc: dict) -> str:
    m = doc["meta"]
    out = [f"report seed={m['seed']} scale={m['scale']} {'PASS' if m['passed'] else 'FAIL'}"]
    for c in doc["classifications"]:
        s = c["symbol"]
        out.append(f"  ({s['a']:g}, {s['b_re']:g}{s['b_im']:+g}i) {c['symbol_class']} "
                   f"cert={c['certificate']} failures={c.get('failures', 0)}")
    for s in doc["suites"]:
        out.append(f"  suite {s['suite_name']}: {'pass' if s['passed'] else 'FAIL'} ({len(s['cases'])} cases)")
    return "\n".join(out) + "\n"


def load_config(path: str) -> Any:
    text = Path(path).read_text()
    if path.endswith((".yaml", ".yml")):
        return yaml.safe_load(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return yaml.safe_load(text)


def cmd_report(args) -> int:
    try:
        raw = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except yaml.YAMLError as exc:
        print(f"error: config is neither JSON nor YAML: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        cfg = parse_config(raw)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    seed = args.seed if args.seed is not None else cfg["seed"] if cfg["seed"] is not None else _default_seed()
    doc, ok = build_report(cfg, seed)
    fmt = args.format or cfg["format"]
    text = {"json": dump_json, "csv": report_csv, "text": report_text}[fmt](doc)
    out = args.output or cfg["output_path"]
    try:
        _write(text, out)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_WRITE
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def _add_symbol_flags(p, a_default=None):
    p.add_argument("--a", type=float, required=a_default is None, default=a_default, help="dilation a > 0")
    p.add_argument("--b-re", type=float, default=0.0, help="Re(b) >= 0")
    p.add_argument("--b-im", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify C_phi for phi(w) = a w + b")
    _add_symbol_flags(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)} or 'all'")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scale", choices=tuple(SCALES), default="quick")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("matrix", help="truncated matrix in the basis e_n = V z^n")
    _add_symbol_flags(p, a_default=1.0)
    p.add_argument("--order", type=int, default=sm.DEFAULT_ORDER)
    p.add_argument("--radius", type=float, default=sm.DEFAULT_RADIUS)
    p.add_argument("--fft", type=int, default=sm.DEFAULT_FFT)
    p.add_argument("--conjugation", choices=("J", "W0", "Jr", "Wc"), default=None)
    p.add_argument("--r", type=float, default=0.0, help="shift for Jr")
    p.add_argument("--c", type=float, default=0.0, help="parameter for Wc, in (-1, 1)")
    p.add_argument("--emit", default=None, help="write CSV m,n,re,im")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("report", help="classifications and suites from a JSON/YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None and args.command != "report":
        args.seed = _default_seed()
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
