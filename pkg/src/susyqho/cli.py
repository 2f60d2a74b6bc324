"""Command-line entry point ``artifact``.

Curve data is written as CSV with ``#`` metadata lines; verification
results as JSON. Exit codes: 0 success, 1 a check or root search failed,
2 bad usage or parameters outside their domain.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .bec import BracketError, TrapSpec, critical_temperature
from .model import (
    PartnerParams,
    eigenstate,
    normalization_integral,
    partner_potential,
    seed_solution,
)
from .oracle import Check, default_grid, quadrature, verify_family

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# Parameter sweeps of the published figures. Skewed panels list the plotted
# skew labels; see _figure_family for the orientation.
FIGURES = {
    1: {"p": [0.5, 1.0, 2.0, 4.0], "s_hat": [0.0]},
    2: {"p": [-0.3, -0.5, -0.7, -0.9], "s_hat": [0.0]},
    3: {"p": [4.0], "s_hat": [0.0, 0.9, 0.99, 0.999]},
    4: {"p": [-0.9], "s_hat": [0.0, 0.9, 0.99, 0.999]},
}
FIG5_N = 10**5
FIG5_P = np.linspace(0.0, 300.0, 101)
FIG_X = (-6.0, 6.0, 1201)
PANELS = {"potential": None, "ground": -1, "first": 0, "second": 1}


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    return f"{value:.17g}"


def _metadata(command: str, fields: dict) -> list[str]:
    lines = [f"# artifact {__version__}", f"# command: {command}"]
    for key, val in fields.items():
        if isinstance(val, (list, tuple, np.ndarray)):
            val = ",".join(fmt(v) if isinstance(v, float) else str(v) for v in val)
        elif isinstance(val, float):
            val = fmt(val)
        lines.append(f"# {key}: {val}")
    return lines


def _csv(header: list[str], columns: list[str], rows) -> str:
    lines = list(header)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_output(text: str, out: str | None) -> None:
    """Write ``text`` to ``out`` atomically (temp file + rename), or stdout."""
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _params(args) -> PartnerParams:
    return PartnerParams(args.p, args.s)


def _param_fields(params: PartnerParams) -> dict:
    return {"p": float(params.p), "s_hat": float(params.s_hat),
            "s_raw": params.s_raw, "s_max": params.s_max}


def _xgrid(xmin: float, xmax: float, points: int) -> np.ndarray:
    if points < 2 or not xmax > xmin:
        raise UsageError("need --points >= 2 and --xmax > --xmin")
    return np.linspace(xmin, xmax, points)


def cmd_potential(args) -> int:
    params = _params(args)
    x = _xgrid(args.xmin, args.xmax, args.points)
    v = partner_potential(params, x)
    header = _metadata("potential", {**_param_fields(params), "xmin": args.xmin,
                                     "xmax": args.xmax, "points": args.points})
    write_output(_csv(header, ["x", "V"], zip(x, v)), args.out)
    return EXIT_OK


def _parse_levels(text: str) -> list[int]:
    try:
        levels = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--k expects a comma-separated list of integers, got {text!r}") from None
    if not levels or any(k < -1 or k > 10 for k in levels):
        raise UsageError("--k levels must lie in -1..10")
    return levels


def cmd_eigenstates(args) -> int:
    params = _params(args)
    levels = _parse_levels(args.k)
    x = _xgrid(args.xmin, args.xmax, args.points)
    cols = [x] + [eigenstate(k, params, x) for k in levels]
    header = _metadata("eigenstates", {**_param_fields(params), "k": levels, "xmin": args.xmin,
                                       "xmax": args.xmax, "points": args.points})
    names = ["x"] + [f"psi_{k}" for k in levels]
    write_output(_csv(header, names, zip(*cols)), args.out)
    return EXIT_OK


def _report_text(payload: dict, checks: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps(payload, indent=2) + "\n"
    header = _metadata(payload["command"], payload["params"])
    lines = header + ["name,measured,tolerance,pass"]
    lines += [f"{c['name']},{fmt(c['measured'])},{fmt(c['tolerance'])},{int(c['pass'])}" for c in checks]
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    params = _params(args)
    if not 1 <= args.levels <= 10:
        raise UsageError("--levels must lie in 1..10")
    report = verify_family(params, args.levels, half_width=args.grid_L, n_points=args.grid_n)
    payload = report.to_dict()
    write_output(_report_text(payload, payload["checks"], args.format), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_norm_check(args) -> int:
    params = _params(args)
    x = np.linspace(-args.grid_L, args.grid_L, 2 * (args.grid_n // 2) + 1)
    inv_sq = np.exp(-2 * seed_solution(params, x).log_abs)
    numeric = quadrature(inv_sq, x[1] - x[0])
    closed = normalization_integral(params)
    check = Check("normalization", abs(numeric / closed - 1), 1e-8)
    payload = {"version": __version__, "command": "norm-check",
               "params": {**_param_fields(params), "grid_L": args.grid_L, "grid_n": x.size},
               "quadrature": numeric, "closed_form": closed,
               "checks": [check.to_dict()], "pass": check.passed}
    write_output(_report_text(payload, payload["checks"], args.format), args.out)
    return EXIT_OK if check.passed else EXIT_FAIL


def _bec_rows(n_atoms: int, p_values, method: str):
    t0 = critical_temperature(TrapSpec(n_atoms, 0.0), method)
    for p in p_values:
        tc = critical_temperature(TrapSpec(n_atoms, float(p)), method)
        yield p, tc, tc / t0


def cmd_bec(args) -> int:
    if args.p_max is not None:
        if args.p_step <= 0 or args.p_max < 0:
            raise UsageError("need --p-max >= 0 and --p-step > 0")
        count = int(np.floor(args.p_max / args.p_step + 1e-9)) + 1
        p_values = args.p_step * np.arange(count)
    else:
        p_values = [args.p]
    TrapSpec(args.N, float(max(p_values)))  # validates N and p before any solving
    TrapSpec(args.N, float(min(p_values)))
    rows = list(_bec_rows(args.N, p_values, args.method))
    header = _metadata("bec", {"N": args.N, "method": args.method, "p_values": list(map(float, p_values)),
                               "units": "Tc in hbar*omega/k_B"})
    write_output(_csv(header, ["p", "Tc", "Tc_ratio"], rows), args.out)
    return EXIT_OK


def _figure_family(which: int, p: float, label: float) -> PartnerParams:
    """Family member drawn for a given panel label.

    A positive skew in the seed formula pushes the dimple toward negative x;
    the published plots show it moving to +x, so skewed panels use the
    mirror member ``-label`` (V(p, s, x) = V(p, -s, -x)).
    """
    return PartnerParams(p, -label if which in (3, 4) and label else label)


def figure_files(which: int, override: list[float] | None = None) -> dict[str, str]:
    """CSV text for every panel of one figure, keyed by file name."""
    suffix = "_custom" if override else ""
    if which == 5:
        p_values = np.array(override, dtype=float) if override else FIG5_P
        rows = list(_bec_rows(FIG5_N, p_values, "closedform"))
        header = _metadata("figures", {"figure": 5, "N": FIG5_N, "method": "closedform",
                                       "p_values": list(map(float, p_values))})
        return {f"fig5_tc{suffix}.csv": _csv(header, ["p", "Tc", "Tc_ratio"], rows)}
    if which not in FIGURES:
        raise UsageError(f"unknown figure {which}; choose 1..5")

    sweep = dict(FIGURES[which])
    swept = "p" if which in (1, 2) else "s_hat"
    if override:
        sweep[swept] = list(override)
    xmin, xmax, n = FIG_X
    x = (np.arange(n) - (n - 1) / 2) * ((xmax - xmin) / (n - 1))
    members = [(p, s) for p in sweep["p"] for s in sweep["s_hat"]]
    family = [_figure_family(which, p, s) for p, s in members]
    labels = [f"{swept}={p if swept == 'p' else s:g}" for p, s in members]

    files = {}
    for panel, k in PANELS.items():
        if k is None:
            cols = [partner_potential(fp, x) for fp in family]
        else:
            cols = [eigenstate(k, fp, x) for fp in family]
        meta = {"figure": which, "panel": panel, "p": sweep["p"], "s_hat_labels": sweep["s_hat"],
                "s_hat_family": [fp.s_hat for fp in family], "xmin": xmin, "xmax": xmax, "points": n}
        if k is not None:
            meta["level"] = k
        if which in (3, 4):
            meta["orientation"] = "mirrored: label s is family member -s, dimple moves to +x"
        files[f"fig{which}_{panel}{suffix}.csv"] = _csv(_metadata("figures", meta), ["x"] + labels,
                                                          zip(x, *cols))
    return files


def cmd_figures(args) -> int:
    override = None
    if args.params:
        try:
            override = [float(tok) for tok in args.params.split(",") if tok.strip()]
        except ValueError:
            raise UsageError("--params expects a comma-separated list of numbers") from None
    targets = range(1, 6) if args.which == "all" else [int(args.which)]
    outdir = Path(args.outdir)
    for which in targets:
        for name, text in figure_files(which, override).items():
            write_output(text, str(outdir / name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def family(p):
        p.add_argument("--p", type=float, default=0.0, help="depth parameter, p > -1")
        p.add_argument("--s", type=float, default=0.0, help="rescaled skew s_hat, |s| < 1")

    def xrange(p):
        p.add_argument("--xmin", type=float, default=-6.0)
        p.add_argument("--xmax", type=float, default=6.0)
        p.add_argument("--points", type=int, default=1201)

    def grid(p):
        env_l, env_n = default_grid()
        p.add_argument("--grid-L", dest="grid_L", type=float, default=env_l)
        p.add_argument("--grid-n", dest="grid_n", type=int, default=env_n)

    def output(p, formats=("csv",), default="csv"):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=formats, default=default)

    sp = sub.add_parser("potential", help="sample V(x)")
    family(sp), xrange(sp), output(sp)
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("eigenstates", help="sample normalized eigenfunctions")
    family(sp), xrange(sp), output(sp)
    sp.add_argument("--k", default="-1,0,1", help="comma-separated levels, -1 is the ground state")
    sp.set_defaults(func=cmd_eigenstates)

    sp = sub.add_parser("verify", help="cross-check closed forms against the grid oracle")
    family(sp), grid(sp), output(sp, ("json", "csv"), "json")
    sp.add_argument("--levels", type=int, default=4)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("norm-check", help="quadrature of 1/phi^2 against the closed form")
    family(sp), grid(sp), output(sp, ("json", "csv"), "json")
    sp.set_defaults(func=cmd_norm_check)

    sp = sub.add_parser("bec", help="critical temperature in the dimple trap")
    sp.add_argument("--N", type=int, default=FIG5_N)
    sp.add_argument("--p", type=float, default=0.0)
    sp.add_argument("--p-max", dest="p_max", type=float, default=None)
    sp.add_argument("--p-step", dest="p_step", type=float, default=3.0)
    sp.add_argument("--method", choices=("sum", "closedform"), default="closedform")
    output(sp)
    sp.set_defaults(func=cmd_bec)

    sp = sub.add_parser("figures", help="regenerate the data behind the published figures")
    sp.add_argument("which", choices=["1", "2", "3", "4", "5", "all"])
    sp.add_argument("--outdir", default=".")
    sp.add_argument("--params", default=None,
                    help="comma list replacing the swept parameter; files get a _custom suffix")
    sp.set_defaults(func=cmd_figures)
    return parser


# list-valued flags whose values may start with "-" (e.g. --k -1,0)
_LIST_FLAGS = ("--k", "--params")


def _attach_list_values(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_list_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except BracketError as exc:
        print(f"artifact {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError) as exc:
        print(f"artifact {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
