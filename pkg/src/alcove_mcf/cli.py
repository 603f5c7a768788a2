"""Command line interface: ``alcove-mcf <command> [options]``.

Exit status is 0 on success, 2 for bad input, 3 for numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .alcove import AlcoveError, alcove_of
from .curvature import cot_identity_closed, cot_identity_partial, cot_identity_tail
from .dynamics import (
    FlowError,
    FlowOptions,
    NumericalFailure,
    basin_map,
    find_minimal,
    find_minimal_on_stratum,
    integrate,
    stratum_to_dict,
)
from .flowfield import FieldError, full_system
from .rootdata import PRESETS, RootDataError, load_custom, preset
from .singularity import SingularityError, type_I_estimate
from .svgplot import basin_portrait, fmt, phase_portrait

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

_ROOT_COUNTS = {
    "sp-isotropy": "n(n-1)/2",
    "so2n-on-su2n": "n(n-1)/2",
    "supq-isotropy": "p^2+p",
    "supp-isotropy": "p^2",
    "sopq-hermann": "p^2+p",
    "so2p-hermann": "p^2",
}


class InputError(ValueError):
    pass


def _round(obj: Any) -> Any:
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else str(obj)
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    return obj


def _vec(x) -> str:
    return "(" + ", ".join(fmt(c) for c in x) + ")"


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _write_json(path: str | None, doc: dict[str, Any]) -> None:
    if path:
        _write_text(path, json.dumps(_round(doc), indent=2) + "\n")


def _write_csv(path: str | None, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    if not path:
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    _write_text(path, buf.getvalue())


def _load(args) -> Any:
    if args.preset and args.custom:
        raise InputError("give exactly one of --preset and --custom")
    if args.custom:
        try:
            text = Path(args.custom).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {args.custom}: {exc}") from None
        return load_custom(text)
    if not args.preset:
        raise InputError("give exactly one of --preset and --custom")
    params = {k: getattr(args, k) for k in ("n", "p", "q") if getattr(args, k) is not None}
    return preset(args.preset, params)


def _start(args, dim: int) -> np.ndarray:
    if not args.start:
        raise InputError("--start is required")
    try:
        x = np.array([float(c) for c in args.start.split(",")])
    except ValueError:
        raise InputError(f"cannot parse --start {args.start!r}") from None
    if len(x) != dim:
        raise InputError(f"--start needs {dim} coordinates")
    return x


def _opts(args, **extra) -> FlowOptions:
    kw = {}
    if args.eps_wall is not None:
        kw["eps_wall"] = args.eps_wall
    kw.update(extra)
    return FlowOptions(**kw)


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--custom", metavar="FILE", help="JSON document describing a custom root system")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--start", metavar="CSV", help="comma separated start point")
    p.add_argument("--grid", type=int)
    p.add_argument("--tol", type=_positive, default=1e-10)
    p.add_argument("--eps-wall", type=_positive, dest="eps_wall")
    p.add_argument("--out", metavar="FILE", help="JSON report path")
    p.add_argument("--svg", metavar="FILE")
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--seed", type=int, default=0)
    return p


# -- commands --------------------------------------------------------------------


def cmd_catalog(args) -> int:
    rows = []
    for name, (_, desc, params, rank) in PRESETS.items():
        rows.append((name, desc, ",".join(params), f"rank {rank}", f"roots {_ROOT_COUNTS[name]}"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    _write_csv(args.csv, ["name", "action", "params", "rank", "roots"], rows)
    return EXIT_OK


def cmd_flow(args) -> int:
    data = _load(args)
    x0 = _start(args, data.ambient_dim)
    A = alcove_of(data)
    if not A.classify(x0).interior:
        raise FlowError("start point not in alcove interior")
    res = integrate(data, x0, _opts(args))
    print(f"status {res.status}")
    print(f"terminal {_vec(res.terminal)}")
    if res.terminal_stratum is not None:
        print(f"stratum {res.terminal_stratum.describe(A)} (dim {res.terminal_stratum.dim})")
        print(f"hit_time {fmt(res.hit_time)}")
    doc = res.to_dict(A)
    doc["seed"] = args.seed
    _write_json(args.out, doc)
    _write_csv(args.csv, ["t"] + [f"x{i + 1}" for i in range(data.ambient_dim)],
               [[t, *x] for t, x in res.samples])
    if args.svg:
        _write_text(args.svg, phase_portrait(A, full_system(data), [res.points], [res.terminal]))
    return EXIT_OK


def cmd_minimal(args) -> int:
    data = _load(args)
    A = alcove_of(data)
    zeros = find_minimal(data, args.grid or 8, args.tol)
    for z in zeros:
        print(f"{_vec(z.point)}  residual {fmt(z.residual)}  div {fmt(z.jacobian_divergence)}")
    if not zeros:
        print("no interior zero found")
    _write_json(args.out, {"zeros": [z.to_dict(A) for z in zeros]})
    _write_csv(args.csv, [f"x{i + 1}" for i in range(data.ambient_dim)] + ["residual", "divergence"],
               [[*z.point, z.residual, z.jacobian_divergence] for z in zeros])
    if args.svg and A.rank == 2:
        _write_text(args.svg, phase_portrait(A, full_system(data), [], [z.point for z in zeros]))
    return EXIT_OK


def cmd_strata(args) -> int:
    data = _load(args)
    A = alcove_of(data)
    dim = A.rank - 1 if args.dim is None else args.dim
    if not 0 <= dim < A.rank:
        raise InputError(f"--dim must be in [0, {A.rank})")
    docs, rows = [], []
    for sigma in A.strata(dim):
        doc = stratum_to_dict(A, sigma)
        line = f"{sigma.describe(A)}  dim {sigma.dim}  rep {_vec(sigma.representative)}"
        if args.minimal and dim > 0:
            zeros = find_minimal_on_stratum(data, sigma, args.tol, args.grid or 16)
            doc["minimal"] = [z.to_dict(A) for z in zeros]
            for z in zeros:
                line += f"\n    minimal {_vec(z.point)}  residual {fmt(z.residual)}"
                rows.append([sigma.describe(A), sigma.dim, *z.point, z.residual])
        else:
            rows.append([sigma.describe(A), sigma.dim, *sigma.representative, ""])
        docs.append(doc)
        print(line)
    _write_json(args.out, {"strata": docs})
    _write_csv(args.csv, ["walls", "dim"] + [f"x{i + 1}" for i in range(data.ambient_dim)]
               + ["residual"], rows)
    return EXIT_OK


def cmd_singularity(args) -> int:
    data = _load(args)
    x0 = _start(args, data.ambient_dim)
    if not alcove_of(data).classify(x0).interior:
        raise FlowError("start point not in alcove interior")
    rep = type_I_estimate(data, x0, opts=_opts(args))
    print(f"dominant family {rep.dominant_label} (multiplicity {rep.m_e_dominant})")
    print(f"predicted {fmt(rep.predicted_limit)}  estimated {fmt(rep.estimated_limit)}  "
          f"relative error {fmt(rep.relative_error)}")
    print(f"T_est {fmt(rep.T_est)}  integrated hit time {fmt(rep.hit_time)}  "
          f"sensitivity {fmt(rep.sensitivity)}")
    doc = rep.to_dict()
    doc["seed"] = args.seed
    _write_json(args.out, doc)
    _write_csv(args.csv, ["t", "Q", "slack"], [[t, q, s] for (t, q), s in zip(rep.samples, rep.slacks)])
    return EXIT_OK


def cmd_basin(args) -> int:
    data = _load(args)
    A = alcove_of(data)
    grid = args.grid or 16
    entries = basin_map(data, grid, _opts(args, keep_samples=False))
    labels = [e.stratum.describe(A) if e.stratum is not None else "interior" for e in entries]
    counts: dict[str, int] = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    for lab in sorted(counts):
        print(f"{counts[lab]:5d}  {lab}")
    hits = [e.hit_time for e in entries if e.hit_time is not None]
    if hits:
        print(f"max hit_time {fmt(max(hits))}")
    _write_json(args.out, {"grid": grid, "seeds": [
        {"seed": e.seed, "status": e.status, "terminal": e.terminal,
         "stratum": stratum_to_dict(A, e.stratum), "hit_time": e.hit_time} for e in entries]})
    _write_csv(args.csv, [f"x{i + 1}" for i in range(data.ambient_dim)] + ["status", "stratum", "hit_time"],
               [[*e.seed, e.status, lab, "" if e.hit_time is None else e.hit_time]
                for e, lab in zip(entries, labels)])
    if args.svg and A.rank == 2:
        _write_text(args.svg, basin_portrait(A, [e.seed for e in entries], labels))
    return EXIT_OK


def cmd_identity_check(args) -> int:
    if args.theta:
        thetas = [float(t) for t in args.theta.split(",")]
    else:
        thetas = list(np.linspace(0.1, math.pi - 0.1, 20))
    if any(not 0 < t < 2 * math.pi for t in thetas):
        raise InputError("theta must lie in (0, 2 pi)")
    N = args.terms
    rows = []
    for th in thetas:
        closed = cot_identity_closed(th)
        part = cot_identity_partial(th, N)
        corr = part + cot_identity_tail(th, N)
        rows.append([th, closed, part, abs(part - closed), corr, abs(corr - closed)])
        print(f"theta {fmt(th)}  closed {fmt(closed)}  partial {fmt(part)} (err {fmt(abs(part - closed))})"
              f"  corrected {fmt(corr)} (err {fmt(abs(corr - closed))})")
    header = ["theta", "closed", "partial", "partial_error", "corrected", "corrected_error"]
    _write_json(args.out, {"terms": N, "rows": [dict(zip(header, r)) for r in rows]})
    _write_csv(args.csv, header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="alcove-mcf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list preset actions").set_defaults(func=cmd_catalog)
    sub.add_parser("flow", parents=[common], help="integrate from --start").set_defaults(func=cmd_flow)
    sub.add_parser("minimal", parents=[common], help="interior zeros of X").set_defaults(func=cmd_minimal)
    st = sub.add_parser("strata", parents=[common], help="boundary strata and their minima")
    st.add_argument("--dim", type=int)
    st.add_argument("--minimal", action="store_true")
    st.set_defaults(func=cmd_strata)
    sub.add_parser("singularity", parents=[common], help="type-I limit along a flow").set_defaults(
        func=cmd_singularity)
    sub.add_parser("basin", parents=[common], help="terminal strata over a grid").set_defaults(func=cmd_basin)
    ic = sub.add_parser("identity-check", parents=[common], help="paired cotangent series check")
    ic.add_argument("--theta", help="comma separated angles (default: 20 points in (0, pi))")
    ic.add_argument("--terms", type=int, default=100_000)
    ic.set_defaults(func=cmd_identity_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, RootDataError, AlcoveError, FlowError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, SingularityError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
