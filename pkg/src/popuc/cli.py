"""Command-line front end.

Exit codes: 0 every check passed, 1 a verification failed, 2 bad input,
3 internal or convergence error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from popuc.campaign import SUITES, JobSpec, run_campaign
from popuc.circle import CircularPointSet
from popuc.cmv import ParameterArray, build_cmv
from popuc.demo import run_demo
from popuc.errors import ConvergenceError, DomainError, InputError, PopucError
from popuc.formats import complex_to_json, dump_json, parse_input, zeros_csv, zeros_dict
from popuc.engine import zeros
from popuc.interlace import (corollary_verify, interlace_check, rotate_tail, theorem_i_verify,
                             theorem_ii_verify)
from popuc.rank_one import (UnitaryPair, lemma_ag_refined_check, lemma_ideafinal_check,
                            thompson_mcenteggert_check)
from popuc.structure import direct_sum_instance
from popuc.svg import render_svg
from popuc.tolerances import DEFAULT, Tolerances

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("build", "zeros", "interlace", "theorem1", "theorem2", "corollary", "lemmas",
            "demo", "campaign")
FORMATS = ("json", "csv", "svg")


def _complex_arg(text: str) -> complex:
    try:
        re_, im_ = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    return complex(re_, im_)


def _formats_arg(text: str) -> tuple[str, ...]:
    out = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in out if f not in FORMATS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"formats must be drawn from {', '.join(FORMATS)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="popuc", description=(
        "CMV matrices, zeros of paraorthogonal polynomials and interlacing checks."))
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("suite", nargs="?", choices=SUITES,
                    help="campaign suite (campaign command only)")
    ap.add_argument("--input", type=Path, help="JSON parameter file")
    ap.add_argument("--m", type=int, default=None, help="truncation / rotation index")
    ap.add_argument("--beta", type=_complex_arg, default=None, help="unimodular RE,IM")
    ap.add_argument("--bm", type=_complex_arg, default=None, help="unimodular RE,IM for b_m")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--n-min", type=int, default=1)
    ap.add_argument("--n-max", type=int, default=16)
    ap.add_argument("--alpha-radius", type=float, default=0.95)
    ap.add_argument("--resonant", type=float, default=0.0,
                    help="fraction of theorem2/corollary trials with a built-in common eigenvalue")
    ap.add_argument("--out", type=Path, default=None, help="output directory")
    ap.add_argument("--format", type=_formats_arg, default=("json",))
    ap.add_argument("--tol", action="append", default=[], metavar="KEY=VAL")
    ap.add_argument("--strict", choices=("yes", "no"), default="yes",
                    help="interlace command: strict (open arcs) or weak (closed arcs)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _tolerances(pairs: list[str]) -> Tolerances:
    changes = {}
    for item in pairs:
        key, sep, val = item.partition("=")
        if not sep:
            raise InputError(f"--tol expects KEY=VAL, got {item!r}")
        try:
            changes[key.strip()] = float(val)
        except ValueError:
            raise InputError(f"--tol {key}: not a number: {val!r}") from None
    try:
        return DEFAULT.override(**changes)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None


def _single(args, tol: Tolerances) -> ParameterArray:
    if args.input is None:
        raise InputError(f"{args.command} needs --input")
    p = parse_input(args.input, tol.eps_unit)
    if isinstance(p, list):
        if len(p) != 1:
            raise InputError(f"{args.command} takes one parameter array, file has {len(p)}")
        p = p[0]
    return p


def _need(value, flag: str, command: str):
    if value is None:
        raise InputError(f"{command} needs {flag}")
    return value


class _Output:
    """Collects artifacts and writes them to --out (or JSON/CSV to stdout)."""

    def __init__(self, args):
        self.out = args.out
        self.formats = args.format
        self.name = args.command
        if "svg" in self.formats and self.out is None:
            raise InputError("--format svg needs --out")

    def emit(self, data: dict, csv_text: str | None = None, svg_text: str | None = None) -> None:
        if self.out is not None:
            self.out.mkdir(parents=True, exist_ok=True)
        for fmt in self.formats:
            text = {"json": dump_json(data), "csv": csv_text, "svg": svg_text}[fmt]
            if text is None:
                logging.getLogger("popuc").info("%s output not available for %s", fmt, self.name)
                continue
            if self.out is None:
                sys.stdout.write(text)
            else:
                (self.out / f"{self.name}.{fmt}").write_text(text)


def _cmd_build(args, tol, out):
    p = _single(args, tol)
    c = build_cmv(p)
    out.emit({"n": p.n, "matrix": complex_to_json(c.entries),
              "unitarity_defect": c.unitarity_defect()})
    return c.unitarity_defect() <= tol.eps_unitary


def _cmd_zeros(args, tol, out):
    if args.input is None:
        raise InputError("zeros needs --input")
    ps = parse_input(args.input, tol.eps_unit)
    ps = ps if isinstance(ps, list) else [ps]
    specs = [zeros(p, tol) for p in ps]
    data = [zeros_dict(s) for s in specs]
    csv_text = zeros_csv(specs[0] if len(specs) == 1 else specs)
    svg = render_svg([s.point_set(f"zeros of case {i}") for i, s in enumerate(specs)],
                     common=CircularPointSet(np.zeros(0)), title="zeros")
    out.emit(data[0] if len(data) == 1 else {"cases": data}, csv_text, svg)
    return all(np.all(s.residuals <= tol.eps_eig) for s in specs)


def _cmd_interlace(args, tol, out):
    if args.input is None:
        raise InputError("interlace needs --input with 'small' and 'large' angle lists")
    try:
        obj = json.loads(args.input.read_text())
        small = CircularPointSet.from_angles([float(t) for t in obj["small"]], "small", tol.eps_match)
        large = CircularPointSet.from_angles([float(t) for t in obj["large"]], "large", tol.eps_match)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"bad interlace input: {exc}") from None
    v = interlace_check(small, large, args.strict == "yes", tol.eps_match)
    svg = render_svg([large, small], padding=CircularPointSet(v.padding, "padding"),
                     title=f"verdict {v.verdict.value}")
    out.emit({"strict": args.strict == "yes", **v.to_dict(), "holds": v.holds}, None, svg)
    return v.holds


def _cmd_theorem1(args, tol, out):
    p = _single(args, tol)
    m = _need(args.m, "--m", "theorem1")
    beta = _need(args.beta, "--beta", "theorem1")
    v = theorem_i_verify(p, m, beta, tol)
    rot = rotate_tail(p, m, beta, tol)
    svg = render_svg([zeros(p, tol, vectors=False).point_set("sigma(C)"),
                      zeros(rot, tol, vectors=False).point_set("sigma(rotated)")],
                     title=f"rotated tail from m={m}: {v.verdict.value}")
    out.emit({"m": m, "beta": [beta.real, beta.imag], **v.to_dict()}, None, svg)
    return v.holds


def _cmd_theorem2(args, tol, out):
    p = _single(args, tol)
    m = _need(args.m, "--m", "theorem2")
    b_m = _need(args.bm, "--bm", "theorem2")
    r = theorem_ii_verify(p, m, b_m, tol)
    svg = render_svg([r.spectrum_n, r.spectrum_m, r.setB], common=r.setA,
                     title=f"m={m}, |A|={len(r.setA)}: {r.interlace.verdict.value}")
    out.emit(r.to_dict(), None, svg)
    return r.ok


def _cmd_corollary(args, tol, out):
    p = _single(args, tol)
    b_prev = _need(args.bm, "--bm", "corollary")
    c = corollary_verify(p, b_prev, tol)
    star = CircularPointSet(np.array([c.zeta_star]), "zeta*")
    svg = render_svg([zeros(p, tol, vectors=False).point_set("sigma(C_n)"),
                      zeros(p.head(p.n - 1, b_prev), tol, vectors=False).point_set("sigma(C_n-1)"),
                      star], common=c.common, title=f"branch {c.branch}")
    out.emit(c.to_dict(), None, svg)
    return c.ok


def _cmd_lemmas(args, tol, out):
    p = _single(args, tol)
    u = build_cmv(p).entries
    k = args.m if args.m is not None else 0
    beta = args.beta if args.beta is not None else -1.0 + 0j
    if not 0 <= k <= p.n:
        raise InputError(f"--m {k} out of range [0, {p.n}]")
    tm = [thompson_mcenteggert_check(u, j, tol) for j in range(p.size)]
    idf = lemma_ideafinal_check(u, k, beta, tol)
    data = {"k": k, "beta": [beta.real, beta.imag], "tm_residuals": tm,
            "phase_value_residuals": idf.residuals.tolist(), "phase_value_gap": idf.gap,
            "phase_interlace": idf.interlace.to_dict(), "phase_violations": list(idf.violations)}
    ok = max(tm) <= 1e-8 and idf.ok(tol)
    if p.n >= 1 and k < p.n:
        b_m = args.bm if args.bm is not None else 1.0 + 0j
        U, S, split = direct_sum_instance(p, k, b_m, tol)
        ag = lemma_ag_refined_check(UnitaryPair(U, S), split, tol)
        data["direct_sum"] = {"claim": ag.claim_ok, "weak": ag.weak.to_dict(),
                              "refined": ag.interlace.to_dict(), "equal_residual": ag.equal_residual,
                              "equal_gap": ag.equal_gap, "violations": list(ag.violations)}
        ok = ok and ag.ok(tol)
    data["ok"] = bool(ok)
    out.emit(data)
    return ok


def _cmd_demo(args, tol, out):
    res = run_demo(args.out, tol)
    sys.stdout.write(res.report)
    return res.ok


def _cmd_campaign(args, tol, out):
    if args.suite is None:
        raise InputError(f"campaign needs a suite: {', '.join(SUITES)}")
    try:
        spec = JobSpec(args.suite, args.seed, args.trials, args.n_min, args.n_max,
                       args.alpha_radius, tol, None if args.out is None else str(args.out),
                       args.resonant)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    summary = run_campaign(spec)
    sys.stdout.write(dump_json(summary.to_dict()))
    return summary.ok


HANDLERS = {
    "build": _cmd_build, "zeros": _cmd_zeros, "interlace": _cmd_interlace,
    "theorem1": _cmd_theorem1, "theorem2": _cmd_theorem2, "corollary": _cmd_corollary,
    "lemmas": _cmd_lemmas, "demo": _cmd_demo, "campaign": _cmd_campaign,
}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--beta -1,0`` through; argparse would read ``-1,0`` as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--beta", "--bm"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.suite is not None and args.command != "campaign":
            raise InputError("a suite name is only accepted by the campaign command")
        tol = _tolerances(args.tol)
        out = _Output(args) if args.command not in ("demo", "campaign") else None
        ok = HANDLERS[args.command](args, tol, out)
    except (InputError, DomainError, IndexError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PopucError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - report, don't traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
