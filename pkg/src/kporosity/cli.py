"""Command-line front end: ``kporosity <command> [--flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Every flag may also come from ``--config FILE`` (``key=value`` lines, keys
spelled like the flags without the leading dashes); explicit flags win.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, kpgrid
from .covering import Ball, CoverParams, Polytope, covering_construction, decompose_boundary, write_svg
from .dimension import box_count_ladder, dim_estimate, max_level
from .porosity import PorosityParams, survey_porosity
from .setgen import CantorSpec, gen_cantor, gen_full, gen_ifs, gen_kplane, gen_product, gen_singleton
from .sharpness import SharpnessConfig, config_dict, run_sharpness
from .suites import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """17 significant digits, JSON spelling for non-finite values."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps_json(obj, indent: int = 2, level: int = 0) -> str:
    """Deterministic JSON with floats written to 17 significant digits."""
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps_json(v, indent, level + 1) for v in obj) + "]"
        items = [inner + dumps_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    return json.dumps(str(obj))


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _document(args, payload: dict) -> str:
    doc = {"version": __version__, "config": resolved_config(args)}
    doc.update(payload)
    return dumps_json(doc) + "\n"


def resolved_config(args) -> dict:
    skip = {"func", "config", "threads", "out", "svg"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _default_threads() -> int:
    return os.cpu_count() or 1


# generate

def cmd_generate(args) -> int:
    kind = args.set
    if kind == "cantor":
        grid = gen_cantor(CantorSpec(args.lam, args.depth), args.resolution)
        if args.n != 1:
            grid = gen_product([grid] * args.n)
    elif kind == "product":
        if not args.factors:
            raise ValueError("--factors is required for --set product")
        grid = gen_product([kpgrid.read(p) for p in args.factors.split(",")])
    elif kind == "kplane":
        grid = gen_kplane(args.n, args.m, args.resolution)
    elif kind == "full":
        grid = gen_full(args.n, args.resolution)
    elif kind == "singleton":
        cell = _ints(args.cell) if args.cell else [args.resolution // 2] * args.n
        grid = gen_singleton(args.n, args.resolution, cell)
    elif kind == "ifs":
        if not args.maps:
            raise ValueError("--maps is required for --set ifs")
        spec = json.loads(Path(args.maps).read_text())
        maps = [(float(m["ratio"]), np.asarray(m["offset"], dtype=float)) for m in spec]
        grid = gen_ifs(maps, args.n, args.depth, args.resolution)
    else:
        raise ValueError(f"unknown set {kind}")
    if not args.out:
        raise ValueError("--out is required")
    kpgrid.write(grid, args.out)
    print(f"{len(grid)} occupied cells, n={grid.n}, R={grid.R}; {grid.metadata}")
    return EXIT_OK


# porosity

def porosity_csv(survey, k: int) -> str:
    buf = io.StringIO()
    buf.write("x_cell_index,r,k,rho_hat,error_bound,frame_id,truncated\n")
    for prof in survey.profiles:
        cell = ":".join(str(c) for c in prof.cell)
        for r, est in zip(prof.scales, prof.estimates):
            buf.write(f"{cell},{fmt(r)},{k},{fmt(est.rho_hat)},{fmt(est.error_bound)},{est.frame_id},"
                      f"{int(prof.truncated)}\n")
    buf.write(f"summary,,{k},{fmt(survey.value)},,,{int(any(p.truncated for p in survey.profiles))}\n")
    return buf.getvalue()


def cmd_porosity(args) -> int:
    A = kpgrid.read(args.input)
    if len(A) == 0:
        raise ValueError("porosity of an empty set is undefined")
    params = PorosityParams(frame_resolution=args.frame_resolution, t_steps=args.t_steps,
                            r_max=args.r_max, r_min=args.r_min, scale_count=args.scale_count,
                            seed=args.seed)
    survey = survey_porosity(A, args.k, args.samples, args.seed, params, args.threads)
    _emit(porosity_csv(survey, args.k), args.out)
    return EXIT_OK


# dimension

def cmd_dimension(args) -> int:
    A = kpgrid.read(args.input)
    top = max_level(A.R, args.delta)
    if top < 2:
        raise ValueError(f"delta^-i must divide R={A.R} for levels up to at least 2")
    window = tuple(_ints(args.window)) if args.window else (2, top)
    if len(window) != 2:
        raise ValueError("--window takes lo,hi")
    if window[1] > top:
        raise ValueError(f"level {window[1]} needs delta^-i to divide R={A.R}")
    fit = dim_estimate(box_count_ladder(A, args.delta, range(0, window[1] + 1)), window)
    _emit(_document(args, {"result": fit.to_json(A.metadata)}), args.out)
    return EXIT_OK


# sharpness

def cmd_sharpness(args) -> int:
    cfg = SharpnessConfig(n=args.n, k=args.k, lambdas=tuple(_floats(args.lambdas)),
                          porosity_resolution=args.porosity_resolution, dim_floor=args.dim_floor,
                          window_width=args.window_width, sample_points=args.samples,
                          frame_resolution=args.frame_resolution, seed=args.seed)
    report = run_sharpness(cfg, threads=args.threads)
    payload = {"experiment": config_dict(cfg), "result": report.to_json()}
    _emit(_document(args, payload), args.out)
    return EXIT_OK


# decompose

def _body(args):
    if args.body == "square":
        return Polytope.box([0.0, 0.0], [1.0, 1.0])
    if args.body == "hexagon":
        a = 2 * math.pi * np.arange(6) / 6
        return Polytope.from_vertices(np.column_stack([np.cos(a), np.sin(a)]))
    if args.body == "disk":
        return Ball(np.zeros(2), 1.0)
    if args.body == "ball":
        return Ball(np.zeros(3), 1.0)
    if args.body == "cube":
        return Polytope.box([0.0] * 3, [1.0] * 3)
    if args.body == "vertices":
        if not args.vertices:
            raise ValueError("--vertices FILE is required for --body vertices")
        return Polytope.from_vertices(np.loadtxt(args.vertices, delimiter=",", ndmin=2))
    raise ValueError(f"unknown body {args.body}")


def cmd_decompose(args) -> int:
    pieces = decompose_boundary(_body(args), args.alpha, samples=args.samples)
    rows = [{"cap": p.cap, "samples": len(p.points), "planar": p.check(),
             "subspace": [[float(v) for v in row] for row in p.V.basis]} for p in pieces]
    ok = all(r["planar"] for r in rows)
    _emit(_document(args, {"result": {"pieces": rows, "piece_count": len(rows), "all_planar": ok}}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# cover

def cmd_cover(args) -> int:
    A = kpgrid.read(args.input)
    if args.x:
        x = np.asarray(_floats(args.x))
    elif args.x_cell:
        x = (np.asarray(_ints(args.x_cell)) + 0.5) / A.R
    else:
        x = A.centers()[len(A) // 2]
    if x.shape != (A.n,):
        raise ValueError("working centre has the wrong dimension")
    params = CoverParams(delta=args.delta, frame_resolution=args.frame_resolution,
                         spacing_factor=args.spacing_factor, seed=args.seed)
    res = covering_construction(A, x, args.r, args.rho, args.k, args.alpha, params)
    if args.svg:
        write_svg(res, A, x, args.r, args.svg)
    payload = res.to_json()
    payload["certificate_valid"] = res.verify()
    _emit(_document(args, {"result": payload}), args.out)
    return EXIT_OK if payload["certificate_valid"] else EXIT_FAIL


# verify

def cmd_verify(args) -> int:
    results = run_suites(args.suite, args.trials, args.seed)
    payload = {"suites": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    _emit(_document(args, payload), args.out)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kporosity", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--config", help="key=value file supplying default flag values")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=_default_threads())
        sp.add_argument("--out", help="output path (stdout when omitted)")
        return sp

    g = command("generate", cmd_generate, "write a .kpgrid test set")
    g.add_argument("--set", required=True, choices=["cantor", "product", "kplane", "full", "singleton", "ifs"])
    g.add_argument("--lambda", dest="lam", type=float, default=1 / 3)
    g.add_argument("--depth", type=int, default=4)
    g.add_argument("--resolution", type=int, default=81)
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--factors", help="comma-separated .kpgrid inputs")
    g.add_argument("--cell", help="comma-separated cell index for --set singleton")
    g.add_argument("--maps", help="JSON list of {ratio, offset} similarity maps for --set ifs")

    q = command("porosity", cmd_porosity, "sampled k-porosity profile as CSV")
    q.add_argument("--input", required=True)
    q.add_argument("--k", type=int, default=1)
    q.add_argument("--samples", type=int, default=64)
    q.add_argument("--r-max", type=float, default=0.25)
    q.add_argument("--r-min", type=float, default=0.0)
    q.add_argument("--scale-count", type=int, default=6)
    q.add_argument("--frame-resolution", type=int, default=16)
    q.add_argument("--t-steps", type=int, default=64)

    d = command("dimension", cmd_dimension, "box-counting dimension estimate as JSON")
    d.add_argument("--input", required=True)
    d.add_argument("--delta", type=float, default=0.5)
    d.add_argument("--window", help="lo,hi level window (default 2..deepest divisible level)")

    s = command("sharpness", cmd_sharpness, "dimension/porosity product on C_lambda^k x [0,1]^(n-k)")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--lambdas", default="0.3,0.2,0.1")
    s.add_argument("--porosity-resolution", type=int, default=2048)
    s.add_argument("--dim-floor", type=float, default=1e-10)
    s.add_argument("--window-width", type=int, default=2)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--frame-resolution", type=int, default=16)

    b = command("decompose", cmd_decompose, "planar boundary pieces of a convex body")
    b.add_argument("--body", default="square", choices=["square", "hexagon", "disk", "ball", "cube", "vertices"])
    b.add_argument("--vertices", help="CSV of vertex coordinates for --body vertices")
    b.add_argument("--alpha", type=float, default=0.3)
    b.add_argument("--samples", type=int, default=2000)

    c = command("cover", cmd_cover, "run the covering construction in one working ball")
    c.add_argument("--input", required=True)
    c.add_argument("--x", help="comma-separated working centre (an occupied cell centre)")
    c.add_argument("--x-cell", help="comma-separated cell index of the working centre")
    c.add_argument("--r", type=float, default=0.25)
    c.add_argument("--rho", type=float, default=0.45)
    c.add_argument("--k", type=int, default=1)
    c.add_argument("--alpha", type=float, default=0.3)
    c.add_argument("--delta", type=float, help="override the offset factor (default: from rho)")
    c.add_argument("--frame-resolution", type=int)
    c.add_argument("--spacing-factor", type=float, default=0.5)
    c.add_argument("--svg", help="also write a 2-d SVG scene")

    v = command("verify", cmd_verify, "run the self-check suites")
    v.add_argument("--suite", action="append", choices=sorted(SUITES), help="repeatable; default all")
    v.add_argument("--trials", type=int, help="override each suite's trial count")
    return p


def _config_defaults(path: str, sp: argparse.ArgumentParser) -> dict:
    known = {a.dest: a for a in sp._actions}
    by_flag = {}
    for a in sp._actions:
        for opt in a.option_strings:
            by_flag[opt.lstrip("-")] = a
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        action = by_flag.get(key) or by_flag.get(key.replace("_", "-")) or known.get(key)
        if action is None or action.dest in ("config", "help"):
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        conv = action.type or str
        out[action.dest] = [conv(v) for v in value.split(",")] if isinstance(action, argparse._AppendAction) \
            else conv(value)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        command = next((a for a in argv if not a.startswith("-")), None)
        subparsers = parser._subparsers._group_actions[0].choices
        if known.config and command in subparsers:
            sp = subparsers[command]
            values = _config_defaults(known.config, sp)
            for a in sp._actions:
                if a.dest in values:
                    a.required = False
            sp.set_defaults(**values)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"kporosity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    except (ValueError, OSError, MemoryError, json.JSONDecodeError) as exc:
        print(f"kporosity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
