"""Command-line front end: reproducible CSV/text artifacts for every engine.

Subcommands
-----------
rates     six mutual informations and the quantizer noise for one realization
sweep     Monte Carlo outage estimates over an SNR grid
exponent  diversity orders per outage event (lp / cases / grid solver)
tables    per-branch case-minima report for the exponent optimization
dmt       closed-form and computed diversity curves over an r grid

Every randomized command takes an explicit --seed; there is no implicit
entropy, and --workers never changes output bytes.  With --out the CSV is
written to disk together with a JSON manifest (arguments, version, sha256 of
the output) whose re-run reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .channel import ChannelRealization, FadingParams
from .curves import dmt_closed_form, dmt_computed
from .exponent import (
    NAMES,
    case_table,
    constraint_by_name,
    solve_by_cases,
    solve_by_grid,
    solve_lp,
)
from .outage import EVENTS, sweep_outage
from .rates import SchemeConfig, instantaneous_rates

__all__ = ["RunManifest", "main", "build_parser"]

_CONSTRAINT_FLAGS = tuple(n.lower() for n in NAMES)  # r1, r1u, ...


@dataclass(frozen=True)
class RunManifest:
    """Record of one CLI run, sufficient to reproduce its output."""

    subcommand: str
    argv: list[str]
    parameters: dict
    version: str
    output_sha256: str


def _csv(rows) -> str:
    return "\n".join(",".join(cells) for cells in rows) + "\n"


def _sig6(x: float) -> str:
    return f"{x:.6g}"


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def _config_from(args) -> SchemeConfig:
    if args.r is not None or args.r_u is not None:
        if args.rate1 is not None or args.rate2 is not None or args.rate_u is not None:
            raise ValueError("give either --r/--r-u or --rate1/--rate2/--rate-u")
        return SchemeConfig(snr=args.snr, beta=args.beta, r=args.r, r_u=args.r_u)
    return SchemeConfig(
        snr=args.snr,
        beta=args.beta,
        rate1=args.rate1,
        rate2=args.rate2,
        rate_u=args.rate_u,
    )


def _cmd_rates(args) -> str:
    h = ChannelRealization(args.h1d, args.h2d, args.h1r, args.h2r, args.hrd)
    cfg = SchemeConfig(
        snr=10.0 ** (args.snr_db / 10.0),
        beta=args.beta,
        rate1=0.0,
        rate2=0.0,
        rate_u=args.rate_u,
    )
    rv = instantaneous_rates(h, cfg)
    header = ["i_r1", "i_r1u", "i_r2", "i_r2u", "i_r12", "i_r12u", "sigma_q2"]
    row = [f"{v:.12g}" for v in rv.as_array()] + [f"{rv.sigma_q2:.12g}"]
    return _csv([header, row])


def _cmd_sweep(args) -> str:
    args.snr = 10.0 ** (args.snr_db[0] / 10.0)  # placeholder; replaced per point
    cfg = _config_from(args)
    params = FadingParams()
    estimates = sweep_outage(
        cfg, params, args.snr_db, args.samples, args.seed, workers=args.workers
    )
    rows = [
        [
            "snr_db",
            "samples",
            "p_r1",
            "p_r1u",
            "p_r2",
            "p_r2u",
            "p_r12",
            "p_r12u",
            "p_union",
            "ci_halfwidth",
        ]
    ]
    for est in estimates:
        rows.append(
            [f"{est.snr_db:g}", str(est.samples)]
            + [_sig6(est.p_hat(e)) for e in EVENTS]
            + [_sig6(est.p_union), _sig6(est.wilson_ci_halfwidth)]
        )
    return _csv(rows)


def _cmd_exponent(args) -> str:
    names = list(NAMES) if args.constraint == "all" else [NAMES[_CONSTRAINT_FLAGS.index(args.constraint)]]
    rows = [["constraint", "method", "value", "a11", "a21", "a1r", "a2r", "ard", "active_case"]]
    for name in names:
        c = constraint_by_name(name, beta=args.beta, r=args.r, r_u=args.r_u)
        if args.method == "lp":
            res = solve_lp(c)
        elif args.method == "cases":
            res = solve_by_cases(c)[0]
        else:
            res = solve_by_grid(c, step=args.step, box=args.box)
        rows.append(
            [name, res.method, f"{res.value:.12g}"]
            + [f"{v:.12g}" for v in res.argmin]
            + [res.active_case or ""]
        )
    return _csv(rows)


def _cmd_tables(args) -> str:
    lines = []
    for name in NAMES:
        fits = case_table(name, beta=args.beta, r_u=args.r_u)
        lines.append(f"== constraint {name}: branch case minima ==")
        lines.append("case_id        branch pieces                              feasible  min_exponent(r)")
        for fit in fits:
            pieces = ", ".join(fit.outcomes)
            expr = fit.expression() if fit.feasible else "-"
            note = "" if fit.affine or not fit.feasible else "  [kinked: small-r line shown]"
            lines.append(
                f"{fit.case_id:<14} {pieces:<42} {'yes' if fit.feasible else 'no':<9} {expr}{note}"
            )
        lines.append("")
    return "\n".join(lines) + "\n"


def _cmd_dmt(args) -> str:
    grid = np.linspace(0.0, 1.0, args.points)
    computed = dmt_computed(grid, beta=args.beta, r_u=args.r_u).values()
    rows = [["r", "d_gqf", "d_gqf_computed", "d_cf", "d_upper"]]
    for r, dc in zip(grid, computed):
        rows.append(
            [
                f"{r:.12g}",
                f"{dmt_closed_form('gqf', r):.12g}",
                f"{dc:.12g}",
                f"{dmt_closed_form('cf', r):.12g}",
                f"{dmt_closed_form('upper', r):.12g}",
            ]
        )
    return _csv(rows)


def _add_point_flags(p, need_rates: bool):
    p.add_argument("--beta", type=float, default=0.5, help="slot-1 fraction of the block")
    if need_rates:
        p.add_argument("--r", type=float, default=None, help="total multiplexing exponent")
        p.add_argument("--r-u", dest="r_u", type=float, default=None, help="index multiplexing exponent")
        p.add_argument("--rate1", type=float, default=None, help="absolute source-1 rate (bits/use)")
        p.add_argument("--rate2", type=float, default=None, help="absolute source-2 rate (bits/use)")
        p.add_argument("--rate-u", dest="rate_u", type=float, default=None, help="absolute index rate (bits/use)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gqfmarc",
        description="Outage and diversity analysis of quantize-and-forward relaying "
        "over the half-duplex multiple-access relay channel.",
    )
    parser.add_argument("--out", default=None, help="write output to this path (plus .manifest.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", help="six mutual informations for one realization")
    for link in ("h1d", "h2d", "h1r", "h2r", "hrd"):
        p.add_argument(f"--{link}", type=complex, required=True, help=f"coefficient {link}")
    p.add_argument("--snr-db", dest="snr_db", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--rate-u", dest="rate_u", type=float, required=True, help="index rate (bits/use)")
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("sweep", help="Monte Carlo outage estimates over an SNR grid")
    p.add_argument("--snr-db", dest="snr_db", type=_parse_grid, required=True, help="comma-separated dB grid")
    _add_point_flags(p, need_rates=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("exponent", help="diversity order per outage event")
    p.add_argument("--constraint", choices=_CONSTRAINT_FLAGS + ("all",), default="all")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--r-u", dest="r_u", type=float, default=0.5)
    p.add_argument("--method", choices=("lp", "cases", "grid"), default="lp")
    p.add_argument("--step", type=float, default=0.05, help="grid method lattice step")
    p.add_argument("--box", type=float, default=2.0, help="grid method search box")
    p.set_defaults(func=_cmd_exponent)

    p = sub.add_parser("tables", help="per-branch case minima for each constraint")
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--r-u", dest="r_u", type=float, default=0.5)
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("dmt", help="diversity curves over an r grid")
    p.add_argument("--points", type=int, default=101, help="grid size over [0, 1]")
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--r-u", dest="r_u", type=float, default=0.5)
    p.set_defaults(func=_cmd_dmt)

    return parser


def _manifest_parameters(args) -> dict:
    skip = {"func", "out", "command"}
    out = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, complex):
            value = str(value)
        out[key] = value
    return out


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    data = text.encode("utf-8")
    if args.out:
        path = Path(args.out)
        path.write_bytes(data)
        manifest = RunManifest(
            subcommand=args.command,
            argv=argv,
            parameters=_manifest_parameters(args),
            version=__version__,
            output_sha256=hashlib.sha256(data).hexdigest(),
        )
        Path(str(path) + ".manifest.json").write_text(
            json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
