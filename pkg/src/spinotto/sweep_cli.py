"""Command line front end and deterministic sweep engine.

Subcommands: `spectrum` (labeled levels at one parameter point), `cycle`,
`local` and `coop` (single-point results), `sweep` (a grid over J, B2 or T2
for a list of partner spins) and `plot-script` (a gnuplot companion file for
a sweep CSV).

Every command emits UTF-8 CSV with a single header line, to stdout or to
--out. Scalars carry 17 significant digits so parsing the file reproduces
the binary values exactly; undefined values print as nan, infinite ones as
inf/-inf. Sweep rows are grouped by spin in input order with the grid
ascending inside each group, and the bytes are independent of --workers.
Options can also come from a flat `key = value` config file (# comments);
explicit flags win over the file.

Exit codes: 0 success, 2 bad arguments or config, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .coop_work import GeneralizedConfig, run_generalized_cycle
from .local_thermo import effective_temperature, local_analysis
from .otto_cycle import EngineConfig, cycle_from_energies, run_cycle
from .spin_algebra import (
    DiagonalizationError,
    Spin,
    build_hamiltonian,
    diagonalize,
    level_energies,
    level_labels,
    match_levels,
)
from .thermal import equilibrium, gibbs_state, partial_trace

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "rows_to_csv", "emit_plot_script", "main"]

SWEEP_PARAMS = ("J", "B2", "T2")
FIGURE_KINDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")

# sweep columns after the two leading ones (s and the swept parameter)
SWEEP_TAIL = (
    "W", "Q1", "Q2", "eta", "eta_bound", "mode", "wA", "wB",
    "q1A", "q2A", "q1B", "q2B", "Ps", "TA_hot", "TA_cold",
    "B_thermal_flag", "w_coop", "ratio",
)

BOUNDARY_WIDTH = 1e-6  # bisection width for positive-work boundaries


class UsageError(Exception):
    """Bad arguments or config file contents; maps to exit code 2."""


def format_scalar(x) -> str:
    """17 significant digits: enough for exact binary64 round trips."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class SweepRow:
    """One flattened grid point of a sweep."""

    s: float
    param: float
    W: float
    Q1: float
    Q2: float
    eta: float
    eta_bound: float
    mode: str
    wA: float
    wB: float
    q1A: float
    q2A: float
    q1B: float
    q2B: float
    Ps: float
    TA_hot: float
    TA_cold: float
    B_thermal_flag: int
    w_coop: float
    ratio: float


@dataclass(frozen=True)
class SweepSpec:
    """A sweep: one parameter over [lo, hi] with `steps` points, evaluated
    for each partner spin; the remaining cycle parameters stay fixed."""

    param: str
    lo: float
    hi: float
    steps: int
    spins: tuple[Spin, ...]
    J: float
    B1: float
    B2: float
    T1: float
    T2: float
    workers: int = 1
    refine: bool = False

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise UsageError(f"sweep parameter must be one of {SWEEP_PARAMS}, got {self.param!r}")
        if not self.spins:
            raise UsageError("sweep needs at least one spin")
        if self.steps < 2:
            raise UsageError(f"sweep needs at least 2 steps, got {self.steps}")
        if not self.lo < self.hi:
            raise UsageError(f"sweep range needs min < max, got [{self.lo}, {self.hi}]")
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")
        # the endpoint configs already enforce every fixed-field invariant
        self.config_at(self.spins[0], self.lo)
        self.config_at(self.spins[0], self.hi)

    def config_at(self, spin: Spin, value: float) -> EngineConfig:
        kw = dict(J=self.J, B1=self.B1, B2=self.B2, T1=self.T1, T2=self.T2)
        kw[self.param] = float(value)
        return EngineConfig(spin, **kw)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def _sweep_row(spin: Spin, param: str, cfg: EngineConfig) -> SweepRow:
    """Everything one grid point reports, from a single pair of spectra."""
    h_hot = build_hamiltonian(spin, cfg.J, cfg.B1)
    h_cold = build_hamiltonian(spin, cfg.J, cfg.B2)
    spec_hot, spec_cold = diagonalize(h_hot), diagonalize(h_cold)
    hot, cold = gibbs_state(spec_hot, cfg.T1), gibbs_state(spec_cold, cfg.T2)
    cyc = cycle_from_energies(
        cfg, match_levels(h_hot, spec_hot), match_levels(h_cold, spec_cold)
    )
    loc = local_analysis(cfg, states=(hot, cold))
    gen = run_generalized_cycle(
        GeneralizedConfig(spin, cfg.J, cfg.J, cfg.B1, cfg.B2, cfg.T1, cfg.T2),
        states=(hot, cold),
    )
    temp_a_hot = effective_temperature(partial_trace(hot.rho, spin, "A"), cfg.B1)
    temp_a_cold = effective_temperature(partial_trace(cold.rho, spin, "A"), cfg.B2)
    temp_b_hot = effective_temperature(partial_trace(hot.rho, spin, "B"), cfg.B1)
    temp_b_cold = effective_temperature(partial_trace(cold.rho, spin, "B"), cfg.B2)
    return SweepRow(
        s=spin.s,
        param=getattr(cfg, param),
        W=cyc.W, Q1=cyc.Q1, Q2=cyc.Q2, eta=cyc.eta, eta_bound=cyc.eta_bound,
        mode=cyc.mode,
        wA=loc.wA, wB=loc.wB,
        q1A=loc.q1A, q2A=loc.q2A, q1B=loc.q1B, q2B=loc.q2B,
        Ps=loc.Ps,
        TA_hot=temp_a_hot.temperature, TA_cold=temp_a_cold.temperature,
        B_thermal_flag=int(temp_b_hot.is_thermal and temp_b_cold.is_thermal),
        w_coop=gen.w_coop, ratio=gen.ratio,
    )


def _boundary_rows(spec: SweepSpec, rows: list[SweepRow]) -> list[SweepRow]:
    """Bisect every sign change of W along the grid and evaluate a full row
    at each boundary (mode tagged pwc_boundary)."""
    grid = spec.grid
    out = []
    for k, spin in enumerate(spec.spins):
        chunk = rows[k * len(grid):(k + 1) * len(grid)]
        for i in range(len(chunk) - 1):
            if (chunk[i].W > 0) == (chunk[i + 1].W > 0):
                continue
            lo, hi = float(grid[i]), float(grid[i + 1])
            positive_low = chunk[i].W > 0
            while hi - lo > BOUNDARY_WIDTH:
                mid = 0.5 * (lo + hi)
                w_mid = run_cycle(spec.config_at(spin, mid), levels="analytic").W
                if (w_mid > 0) == positive_low:
                    lo = mid
                else:
                    hi = mid
            boundary = 0.5 * (lo + hi)
            row = _sweep_row(spin, spec.param, spec.config_at(spin, boundary))
            out.append(replace(row, mode="pwc_boundary"))
    return out


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the grid (concurrently if spec.workers > 1) in a fixed
    order: spins as given, parameter ascending within each spin."""
    points = [(spin, value) for spin in spec.spins for value in spec.grid]

    def job(point):
        spin, value = point
        return _sweep_row(spin, spec.param, spec.config_at(spin, value))

    if spec.workers == 1:
        rows = [job(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(job, points))
    if spec.refine:
        rows += _boundary_rows(spec, rows)
    return rows


def rows_to_csv(rows: list[SweepRow], param_name: str) -> str:
    lines = [",".join(("s", param_name) + SWEEP_TAIL)]
    for r in rows:
        lines.append(",".join((
            format_scalar(r.s), format_scalar(r.param),
            format_scalar(r.W), format_scalar(r.Q1), format_scalar(r.Q2),
            format_scalar(r.eta), format_scalar(r.eta_bound), r.mode,
            format_scalar(r.wA), format_scalar(r.wB),
            format_scalar(r.q1A), format_scalar(r.q2A),
            format_scalar(r.q1B), format_scalar(r.q2B),
            format_scalar(r.Ps),
            format_scalar(r.TA_hot), format_scalar(r.TA_cold),
            str(r.B_thermal_flag),
            format_scalar(r.w_coop), format_scalar(r.ratio),
        )))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- plotting

def _read_csv_summary(csv_path: str):
    """Header, distinct spin strings in order of first appearance, and the
    first row's parameter string of a sweep CSV."""
    try:
        with open(csv_path, encoding="utf-8") as fh:
            header = fh.readline().strip().split(",")
            spins, first_param = [], None
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) < 2:
                    continue
                if first_param is None:
                    first_param = parts[1]
                if parts[0] not in spins:
                    spins.append(parts[0])
    except OSError as exc:
        raise UsageError(f"cannot read {csv_path}: {exc}") from exc
    if len(header) != len(SWEEP_TAIL) + 2 or tuple(header[2:]) != SWEEP_TAIL:
        raise UsageError(f"{csv_path} does not carry the sweep CSV header")
    if first_param is None:
        raise UsageError(f"{csv_path} has no data rows")
    return header, spins, first_param


def _curve(csv_path, s_str, ycol, title, style="with lines"):
    cond = f"strcol(1) eq '{s_str}' && strcol(8) ne 'pwc_boundary'"
    return (f"  '{csv_path}' using 2:({cond} ? column({ycol}) : 1/0) "
            f"{style} title '{title}'")


def emit_plot_script(csv_path: str, figure_kind: str) -> str:
    """Plain gnuplot text reproducing one of the standard figures from a
    sweep CSV. The script is data; nothing here executes it."""
    if figure_kind not in FIGURE_KINDS:
        raise UsageError(f"figure kind must be one of {FIGURE_KINDS}, got {figure_kind!r}")
    header, spins, first_param = _read_csv_summary(csv_path)
    param = header[1]
    lines = [
        f"# {figure_kind}: generated from {csv_path}",
        "set datafile separator ','",
        "set key outside right",
    ]
    if figure_kind in ("fig1", "fig3"):
        lines += [
            f"set xlabel '{param}'",
            "set multiplot layout 2,1",
            "set ylabel 'W'",
            "plot \\",
            ", \\\n".join(_curve(csv_path, s, 3, f"s = {s}") for s in spins),
            "set ylabel 'efficiency'",
            "plot \\",
            ", \\\n".join(
                [_curve(csv_path, s, 6, f"s = {s}") for s in spins]
                + [_curve(csv_path, spins[0], 7, "bound",
                          style="with lines dashtype 2")]
            ),
            "unset multiplot",
        ]
    elif figure_kind == "fig2":
        body = []
        for s in spins:
            cond = f"strcol(1) eq '{s}' && strcol(8) ne 'pwc_boundary'"
            body.append(f"  '{csv_path}' using ({cond} ? column(3) : 1/0):(column(6)) "
                        f"with lines title 's = {s}'")
        lines += [
            "set xlabel 'W'",
            "set ylabel 'efficiency'",
            "plot \\",
            ", \\\n".join(body),
        ]
    elif figure_kind in ("fig4", "fig5"):
        lines += [
            f"set xlabel '{param}'",
            "set multiplot layout 2,1",
            "set ylabel 'wA'",
            "plot \\",
            ", \\\n".join(_curve(csv_path, s, 9, f"s = {s}") for s in spins),
            "set ylabel 'wB'",
            "plot \\",
            ", \\\n".join(_curve(csv_path, s, 10, f"s = {s}") for s in spins),
            "unset multiplot",
        ]
    else:  # fig6
        lines += [
            "# endpoint temperatures of the spin-1/2 against partner spin size",
            f"# edit param_at to pick a different grid value of {param}",
            f"param_at = '{first_param}'",
            "set xlabel 's'",
            "set ylabel 'T_A'",
            "plot \\",
            f"  '{csv_path}' using 1:(strcol(2) eq param_at ? column(16) : 1/0) "
            "with linespoints title 'hot endpoint', \\",
            f"  '{csv_path}' using 1:(strcol(2) eq param_at ? column(17) : 1/0) "
            "with linespoints title 'cold endpoint'",
        ]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ CLI plumbing

def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _parse_spin_list(text: str) -> tuple[Spin, ...]:
    try:
        return tuple(Spin.coerce(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def read_config_file(path: str) -> dict[str, str]:
    """Flat `key = value` file with # comments."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for number, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, eq, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if not eq or not key or not value:
                    raise UsageError(f"{path}:{number}: expected 'key = value'")
                values[key] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


class _Options:
    """Flag values merged over config-file values, parsed on access."""

    def __init__(self, args: argparse.Namespace, allowed: tuple[str, ...]):
        self.args = args
        self.config = read_config_file(args.config) if args.config else {}
        unknown = set(self.config) - set(allowed)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def get(self, name: str, parse, default=None, required=False):
        value = getattr(self.args, name, None)
        if value is None and name in self.config:
            try:
                value = parse(self.config[name])
            except (ValueError, TypeError) as exc:
                raise UsageError(f"config key {name}: {exc}") from exc
        if value is None:
            value = default
        if value is None and required:
            raise UsageError(f"missing required option --{name.replace('_', '-')}")
        return value


def _point_csv(header: tuple[str, ...], cells: tuple[str, ...]) -> str:
    return ",".join(header) + "\n" + ",".join(cells) + "\n"


def _cmd_spectrum(opts: _Options) -> str:
    s = opts.get("s", Spin.coerce, required=True)
    J = opts.get("J", float, required=True)
    B = opts.get("B", float, required=True)
    h = build_hamiltonian(s, J, B)
    if opts.get("dump_matrix", _parse_bool, default=False):
        head = tuple(f"c{i}" for i in range(s.pair_dim))
        body = "\n".join(
            ",".join(format_scalar(x) for x in row) for row in h.matrix
        )
        return ",".join(head) + "\n" + body + "\n"
    numeric = match_levels(h, diagonalize(h))
    exact = level_energies(s, J, B)
    lines = ["index,j,m,energy,energy_numeric"]
    for i, (j, m) in enumerate(level_labels(s)):
        lines.append(",".join((
            str(i), format_scalar(j), format_scalar(m),
            format_scalar(exact[i]), format_scalar(numeric[i]),
        )))
    return "\n".join(lines) + "\n"


def _engine_config(opts: _Options) -> EngineConfig:
    return EngineConfig(
        spin=opts.get("s", Spin.coerce, required=True),
        J=opts.get("J", float, required=True),
        B1=opts.get("B1", float, required=True),
        B2=opts.get("B2", float, required=True),
        T1=opts.get("T1", float, required=True),
        T2=opts.get("T2", float, required=True),
    )


def _cmd_cycle(opts: _Options) -> str:
    cfg = _engine_config(opts)
    r = run_cycle(cfg)
    header = ("s", "J", "B1", "B2", "T1", "T2", "W", "Q1", "Q2",
              "eta", "eta_carnot", "eta_bound", "eta_uncoupled", "mode")
    cells = tuple(format_scalar(v) for v in (
        cfg.spin.s, cfg.J, cfg.B1, cfg.B2, cfg.T1, cfg.T2,
        r.W, r.Q1, r.Q2, r.eta, r.eta_carnot, r.eta_bound, r.eta_uncoupled,
    )) + (r.mode,)
    return _point_csv(header, cells)


def _cmd_local(opts: _Options) -> str:
    cfg = _engine_config(opts)
    _, hot = equilibrium(cfg.spin, cfg.J, cfg.B1, cfg.T1)
    _, cold = equilibrium(cfg.spin, cfg.J, cfg.B2, cfg.T2)
    loc = local_analysis(cfg, states=(hot, cold))
    ta_hot = effective_temperature(partial_trace(hot.rho, cfg.spin, "A"), cfg.B1)
    ta_cold = effective_temperature(partial_trace(cold.rho, cfg.spin, "A"), cfg.B2)
    tb_hot = effective_temperature(partial_trace(hot.rho, cfg.spin, "B"), cfg.B1)
    tb_cold = effective_temperature(partial_trace(cold.rho, cfg.spin, "B"), cfg.B2)
    header = ("s", "J", "B1", "B2", "T1", "T2",
              "q1A", "q2A", "q1B", "q2B", "wA", "wB", "Ps",
              "mode_A", "mode_B", "etaA", "etaB", "copA",
              "TA_hot", "TA_cold", "B_thermal_flag")
    cells = tuple(format_scalar(v) for v in (
        cfg.spin.s, cfg.J, cfg.B1, cfg.B2, cfg.T1, cfg.T2,
        loc.q1A, loc.q2A, loc.q1B, loc.q2B, loc.wA, loc.wB, loc.Ps,
    )) + (loc.mode_A, loc.mode_B) + tuple(format_scalar(v) for v in (
        loc.etaA, loc.etaB, loc.copA,
        ta_hot.temperature, ta_cold.temperature,
    )) + (str(int(tb_hot.is_thermal and tb_cold.is_thermal)),)
    return _point_csv(header, cells)


def _cmd_coop(opts: _Options) -> str:
    cfg = GeneralizedConfig(
        spin=opts.get("s", Spin.coerce, required=True),
        J1=opts.get("J1", float, required=True),
        J2=opts.get("J2", float, required=True),
        B1=opts.get("B1", float, required=True),
        B2=opts.get("B2", float, required=True),
        T1=opts.get("T1", float, required=True),
        T2=opts.get("T2", float, required=True),
    )
    r = run_generalized_cycle(cfg)
    header = ("s", "J1", "J2", "B1", "B2", "T1", "T2",
              "W", "wA_simple", "wB_simple", "Ps", "residual",
              "wA_mf", "wB_mf", "w_coop", "cov1", "cov2", "ratio")
    cells = tuple(format_scalar(v) for v in (
        cfg.spin.s, cfg.J1, cfg.J2, cfg.B1, cfg.B2, cfg.T1, cfg.T2,
        r.W, r.wA_simple, r.wB_simple, r.Ps, r.residual,
        r.wA_mf, r.wB_mf, r.w_coop, r.cov1, r.cov2, r.ratio,
    ))
    return _point_csv(header, cells)


def _cmd_sweep(opts: _Options) -> str:
    param = opts.get("param", str, required=True)
    spins = opts.get("s_list", _parse_spin_list)
    if spins is None:
        single = opts.get("s", Spin.coerce)
        if single is None:
            raise UsageError("sweep needs --s-list (or --s)")
        spins = (single,)
    fixed = {}
    for name in ("J", "B1", "B2", "T1", "T2"):
        required = name != param
        value = opts.get(name, float, required=required)
        fixed[name] = float("nan") if value is None else value
    spec = SweepSpec(
        param=param,
        lo=opts.get("min", float, required=True),
        hi=opts.get("max", float, required=True),
        steps=opts.get("steps", int, default=200),
        spins=spins,
        workers=opts.get("workers", int, default=os.cpu_count() or 1),
        refine=opts.get("refine_pwc", _parse_bool, default=False),
        **fixed,
    )
    return rows_to_csv(run_sweep(spec), spec.param)


def _cmd_plot_script(opts: _Options) -> str:
    csv_path = opts.get("csv", str, required=True)
    figure = opts.get("figure", str, required=True)
    return emit_plot_script(csv_path, figure)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinotto",
        description="Otto engine with a spin-1/2 exchange-coupled to a spin s",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key = value options file")
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("spectrum", help="labeled level energies at one point")
    p.add_argument("--s", type=Spin.coerce, help="partner spin, e.g. 3/2 or 1.5")
    p.add_argument("--J", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--dump-matrix", dest="dump_matrix", action="store_true",
                   default=None, help="emit the Hamiltonian matrix instead")
    add_common(p)

    for name, help_text in (("cycle", "global work, heats, efficiency, mode"),
                            ("local", "per-spin heats, works and temperatures")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--s", type=Spin.coerce)
        for flag in ("--J", "--B1", "--B2", "--T1", "--T2"):
            p.add_argument(flag, type=float)
        add_common(p)

    p = sub.add_parser("coop", help="generalized cycle and cooperative split")
    p.add_argument("--s", type=Spin.coerce)
    for flag in ("--J1", "--J2", "--B1", "--B2", "--T1", "--T2"):
        p.add_argument(flag, type=float)
    add_common(p)

    p = sub.add_parser("sweep", help="grid over J, B2 or T2 for several spins")
    p.add_argument("--param", choices=SWEEP_PARAMS)
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--s-list", dest="s_list", type=_parse_spin_list,
                   help="comma separated spins, e.g. 1/2,1,3/2")
    p.add_argument("--s", type=Spin.coerce, help="single spin alternative to --s-list")
    for flag in ("--J", "--B1", "--B2", "--T1", "--T2"):
        p.add_argument(flag, type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--refine-pwc", dest="refine_pwc", action="store_true",
                   default=None, help="bisect and append positive-work boundaries")
    add_common(p)

    p = sub.add_parser("plot-script", help="gnuplot companion for a sweep CSV")
    p.add_argument("--csv")
    p.add_argument("--figure", choices=FIGURE_KINDS)
    add_common(p)
    return parser


_COMMANDS = {
    "spectrum": (_cmd_spectrum, ("s", "J", "B", "dump_matrix", "out")),
    "cycle": (_cmd_cycle, ("s", "J", "B1", "B2", "T1", "T2", "out")),
    "local": (_cmd_local, ("s", "J", "B1", "B2", "T1", "T2", "out")),
    "coop": (_cmd_coop, ("s", "J1", "J2", "B1", "B2", "T1", "T2", "out")),
    "sweep": (_cmd_sweep, ("param", "min", "max", "steps", "s_list", "s",
                           "J", "B1", "B2", "T1", "T2", "workers",
                           "refine_pwc", "out")),
    "plot-script": (_cmd_plot_script, ("csv", "figure", "out")),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, allowed = _COMMANDS[args.command]
    try:
        opts = _Options(args, allowed)
        text = handler(opts)
        out_path = opts.get("out", str)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiagonalizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
