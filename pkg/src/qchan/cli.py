"""Command line interface: ``qchan <command> ...``.

Every number is printed with six decimal places so output can be diffed
against golden files.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import channels as chn
from .channels import ChannelFileError, ChannelKind
from .holevo import (
    CapacityResult,
    Method,
    capacity_amplitude_scan,
    capacity_closed_form,
    capacity_splaying_scan,
)
from .optimizer import OptimizerConfig, audit_channel, optimize_ensemble
from .qlinalg import ValidationError, angles_from_bloch, density_to_bloch

METHOD_NAMES = {"closed": Method.CLOSED_FORM, "scan": Method.RESTRICTED_SCAN, "optimize": Method.GENERAL_OPTIMIZER}
SCAN_KINDS = (ChannelKind.AMPLITUDE_DAMPING, ChannelKind.SPLAYING)
CSV_FIELDS = ("eta", "method", "capacity_bits", "psi", "tau")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def default_seed() -> int:
    raw = os.environ.get("QCHAN_SEED")
    if raw is None:
        return OptimizerConfig().seed
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QCHAN_SEED must be an integer, got {raw!r}") from None


def _kind(name: str) -> ChannelKind:
    try:
        return ChannelKind.parse(name)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _eta_for(kind: ChannelKind, eta: float | None) -> float:
    if kind is ChannelKind.SPLAYING:
        if eta is not None:
            print("warning: eta is ignored for the splaying channel", file=sys.stderr)
        return 0.0
    if eta is None:
        raise UsageError(f"--eta is required for {kind.value}")
    if not 0.0 <= eta <= 1.0:
        raise UsageError(f"--eta must lie in [0, 1], got {eta}")
    return eta


def _default_method(kind: ChannelKind) -> Method:
    return Method.RESTRICTED_SCAN if kind is ChannelKind.SPLAYING else Method.CLOSED_FORM


def compute(kind: ChannelKind, eta: float, method: Method, cfg: OptimizerConfig, states: int = 2) -> CapacityResult:
    if method is Method.CLOSED_FORM:
        if kind is ChannelKind.SPLAYING:
            raise UsageError("splaying has no closed form; use --method scan")
        return capacity_closed_form(kind, eta)
    if method is Method.RESTRICTED_SCAN:
        if kind is ChannelKind.AMPLITUDE_DAMPING:
            return capacity_amplitude_scan(eta)
        if kind is ChannelKind.SPLAYING:
            return capacity_splaying_scan()
        raise UsageError(f"no restricted scan for {kind.value}; use closed or optimize")
    return optimize_ensemble(chn.make_channel(kind, eta), states, cfg)


def _print_result(res: CapacityResult, kind: ChannelKind, out=None):
    out = out or sys.stdout
    head = fmt(res.value_bits)
    if res.method is Method.RESTRICTED_SCAN:
        if kind is ChannelKind.SPLAYING:
            head += f" at psi'={fmt(res.params.psi)}"
        else:
            head += f" at psi={fmt(res.params.psi)} tau={fmt(res.params.tau)}"
    print(head, file=out)
    print(f"method: {res.method.value}", file=out)
    for i, (p, rho) in enumerate(res.ensemble.entries, 1):
        th, ph = angles_from_bloch(density_to_bloch(rho))
        print(f"state {i}: theta={fmt(th)} phi={fmt(ph)} prior={fmt(p)}", file=out)
    if "orthogonal_value" in res.details:
        print(f"orthogonal psi'={fmt(res.details['orthogonal_psi'])}: {fmt(res.details['orthogonal_value'])}",
              file=out)
    for flag in res.flags:
        print(f"flag: {flag}", file=out)


def _config(args) -> OptimizerConfig:
    base = OptimizerConfig()
    seed = args.seed if getattr(args, "seed", None) is not None else default_seed()
    restarts = getattr(args, "restarts", None) or base.restarts
    return OptimizerConfig(restarts=restarts, max_iters=base.max_iters, tol=base.tol, seed=seed)


def cmd_capacity(args) -> int:
    eta = _eta_for(args.kind, args.eta)
    method = METHOD_NAMES[args.method] if args.method else _default_method(args.kind)
    _print_result(compute(args.kind, eta, method, _config(args)), args.kind)
    return 0


def cmd_optimize(args) -> int:
    eta = _eta_for(args.kind, args.eta)
    if not 2 <= args.states <= 4:
        raise UsageError("--states must be between 2 and 4")
    _print_result(compute(args.kind, eta, Method.GENERAL_OPTIMIZER, _config(args), args.states), args.kind)
    return 0


def _parse_methods(raw: list[str] | None, kind: ChannelKind) -> list[Method]:
    if not raw:
        return [_default_method(kind)]
    chosen = set()
    for item in raw:
        for name in item.split(","):
            name = name.strip()
            if name not in METHOD_NAMES:
                raise UsageError(f"unknown method {name!r} (choose from {', '.join(METHOD_NAMES)})")
            chosen.add(METHOD_NAMES[name])
    return [m for m in Method if m in chosen]


def sweep_rows(kind: ChannelKind, eta_min: float, eta_max: float, steps: int, methods, cfg: OptimizerConfig):
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if not 0.0 <= eta_min <= eta_max <= 1.0:
        raise UsageError("need 0 <= eta-min <= eta-max <= 1")
    rows = []
    for eta in np.linspace(eta_min, eta_max, steps):
        eta = float(eta)
        for method in methods:
            res = compute(kind, eta, method, cfg)
            scan = method is Method.RESTRICTED_SCAN
            rows.append({
                "eta": eta,
                "method": method.value,
                "capacity_bits": res.value_bits,
                "psi": res.params.psi if scan else None,
                "tau": res.params.tau if scan else None,
            })
    return rows


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_FIELDS)]
    for r in rows:
        lines.append(",".join(
            r[k] if isinstance(r[k], str) else ("" if r[k] is None else fmt(r[k])) for k in CSV_FIELDS
        ))
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    def val(v):
        if v is None:
            return "null"
        if isinstance(v, str):
            return f'"{v}"'
        return fmt(v)

    objs = ["  {" + ", ".join(f'"{k}": {val(r[k])}' for k in CSV_FIELDS) + "}" for r in rows]
    return "[\n" + ",\n".join(objs) + "\n]\n"


def cmd_sweep(args) -> int:
    if args.kind is ChannelKind.SPLAYING:
        print("warning: eta is ignored for the splaying channel", file=sys.stderr)
    methods = _parse_methods(args.method, args.kind)
    rows = sweep_rows(args.kind, args.eta_min, args.eta_max, args.steps, methods, _config(args))
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows)
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


def _fmt_complex(z: complex) -> str:
    return f"{fmt(z.real)}{'-' if fmt(z.imag).startswith('-') else '+'}{fmt(abs(z.imag))}j"


def describe_lines(kind: ChannelKind, eta: float) -> list[str]:
    ch = chn.make_channel(kind, eta)
    lines = [
        f"channel: {ch.label}",
        f"eta: {fmt(ch.eta)}",
        f"dim_in: {ch.dim_in}",
        f"dim_out: {ch.dim_out}",
        f"kraus_count: {len(ch.kraus)}",
    ]
    for k, op in enumerate(ch.kraus):
        rows = "; ".join(" ".join(_fmt_complex(z) for z in row) for row in op)
        lines.append(f"kraus[{k}]: [{rows}]")
    if ch.dim_out != ch.dim_in:
        lines += ["T: none (output leaves the qubit space)", "t: none", "unitality: undefined"]
        return lines
    aff = chn.affine_representation(ch)
    for i in range(3):
        lines.append(f"T[{i}]: ({', '.join(fmt(x) for x in aff.T[i])})")
    lines.append(f"chi: ({', '.join(fmt(x) for x in np.diag(aff.T))})")
    lines.append(f"t: ({', '.join(fmt(x) for x in aff.t)})")
    lines.append(f"unitality: {'unital' if chn.is_unital(ch) else 'non-unital'}")
    return lines


def cmd_describe(args) -> int:
    eta = _eta_for(args.kind, args.eta) if args.eta is not None or args.kind is ChannelKind.SPLAYING else 0.0
    print("\n".join(describe_lines(args.kind, eta)))
    return 0


def cmd_validate(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 2
    try:
        _, report = chn.load_channel_text(text)
    except (ChannelFileError, ValidationError) as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 2
    if report.ok:
        print("ok")
        return 0
    print(f"rejected: max deviation {fmt(report.max_deviation)}")
    return 1


def _parse_grid(raw: str) -> list[float]:
    try:
        vals = [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --grid value {raw!r}") from None
    if not vals or any(not 0.0 <= v <= 1.0 for v in vals):
        raise UsageError("--grid needs comma-separated values in [0, 1]")
    return vals


def cmd_audit(args) -> int:
    if args.kind is ChannelKind.SPLAYING and args.grid:
        print("warning: eta is ignored for the splaying channel", file=sys.stderr)
    grid = _parse_grid(args.grid) if args.grid else [0.2, 0.5, 0.8]
    report = audit_channel(args.kind, grid, _config(args))
    print(f"channel: {args.kind.value}")
    print("eta,reference_method,reference,optimizer_n2,optimizer_n3,gap_n2,gap_n3,status")
    for r in report.rows:
        status = "exceeds" if r.exceeds else ("below" if r.falls_short else "match")
        print(",".join([fmt(r.eta), r.reference_method.value, fmt(r.reference_value), fmt(r.optimizer_n2),
                        fmt(r.optimizer_n3), fmt(r.gap_n2), fmt(r.gap_n3), status]))
        if r.orthogonal_value is not None:
            print(f"orthogonal_reference,{fmt(r.orthogonal_value)}")
    print(f"exceedances: {len(report.exceedances)}")
    print(f"shortfalls: {len(report.shortfalls)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchan", description="Product-state classical capacities of qubit channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="capacity of one channel")
    p.add_argument("kind", type=_kind)
    p.add_argument("--eta", type=float)
    p.add_argument("--method", choices=sorted(METHOD_NAMES))
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", help="capacity over an eta grid, as CSV or JSON")
    p.add_argument("kind", type=_kind)
    p.add_argument("--eta-min", type=float, required=True)
    p.add_argument("--eta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--method", action="append", help="closed, scan, optimize (repeat or comma-separate)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="general ensemble optimizer")
    p.add_argument("kind", type=_kind)
    p.add_argument("--eta", type=float)
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("describe", help="Kraus operators, affine map and unitality")
    p.add_argument("kind", type=_kind)
    p.add_argument("--eta", type=float)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("validate", help="check a channel definition file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("audit", help="optimizer vs closed-form/scan capacities")
    p.add_argument("kind", type=_kind)
    p.add_argument("--grid")
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
