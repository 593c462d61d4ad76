"""Command-line front end.

Every subcommand writes one CSV (stdout unless `--out`). Parameters come
from, in increasing priority: the preset or defaults, `--config`, the
`HYBRID_COOLING_<KEY>` environment, and `--set key=value` flags.
"""

from __future__ import annotations

import argparse
import math
import sys
from functools import partial
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from . import amplitudes, config, cooling, detunings, fock_oracle, moments, presets
from . import spectrum
from .csv_output import write_csv
from .errors import HybridCoolingError, ParameterError, RegimeError, exit_code_for
from .log import LogLevel, log, set_logger
from .params import CONFIG_KEYS, ModelParams, cooperativity, mechanical_quality, validate
from .sweep import SweepSpec, parse_axis, run_sweep, theory_row

PROG = "hybrid-cooling"
DRIVE_KEYS: tuple[str, ...] = tuple(amplitudes.DriveParams.model_fields)
ORACLE_TOLERANCE = 1e-2
ORACLE_FLOOR = 1e-6


def _parse_sets(items: Sequence[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParameterError(
                f"Malformed --set {item!r}", violations=["--set expects key=value"]
            )
        out[key.strip()] = value.strip()
    return out


def _range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise ParameterError(
            f"Malformed range {text!r}", violations=["range is min:max:count"]
        ) from None
    if n < 2:
        raise ParameterError("range needs at least 2 points", violations=["count >= 2"])
    return lo, hi, n


class Context:
    """Parsed global options shared by the subcommands."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out = args.out
        self.threads = max(1, args.threads)
        self.entries: dict[str, Any] = {}
        self.entries.update(config.read_entries(args.config))
        self.sets = _parse_sets(args.set or [])

    def comments(self, extra: Iterable[str] = ()) -> list[str]:
        lines = [f"{PROG} {self.args.command}"]
        preset = getattr(self.args, "preset", None)
        if preset:
            lines.append(f"preset={preset}")
        for key, value in sorted(self.overrides().items()):
            lines.append(f"override {key}={value}")
        lines.extend(extra)
        return lines

    def overrides(self, keys: tuple[str, ...] = CONFIG_KEYS) -> dict[str, Any]:
        merged = dict(self.entries)
        merged.update(config.env_overrides(keys))
        merged.update(self.sets)
        return merged

    def params(self, preset: presets.FigurePreset | None = None) -> ModelParams:
        base = preset.params if preset is not None else None
        p = config.load_params(base=base, overrides=self.overrides(), env={})
        report = validate(p)
        if not report.ok:
            raise ParameterError(
                "Parameters are not admissible",
                {"violations": report.violations},
                violations=report.violations,
            )
        return p

    def write(
        self,
        fieldnames: Sequence[str],
        rows: Iterable[Mapping[str, Any]],
        extra: Iterable[str] = (),
    ) -> None:
        write_csv(self.out, fieldnames, rows, self.comments(extra))


def _preset(args: argparse.Namespace, allowed: Sequence[str]) -> presets.FigurePreset | None:
    tag = getattr(args, "preset", None)
    if tag is None:
        return None
    if tag not in allowed:
        raise ParameterError(
            f"Preset {tag!r} does not apply to '{args.command}'",
            violations=[f"preset must be one of {', '.join(allowed)}"],
        )
    return presets.get_preset(tag)


def _prepared(
    ctx: Context, preset: presets.FigurePreset | None, solve: bool, policy: str = "nearest"
) -> ModelParams:
    p = ctx.params(preset)
    if preset is not None:
        return presets.resolve(preset, p)
    if solve:
        return presets.solved(p, policy)  # type: ignore[arg-type]
    return p


def _variants(
    preset: presets.FigurePreset | None, p: ModelParams
) -> list[tuple[dict[str, float], ModelParams]]:
    """Parameter sets for each curve of a preset (one set without one)."""
    if preset is None or not preset.variants:
        return [({}, p)]
    ((name, values),) = preset.variants.items()
    return [({name: v}, p.with_updates(**{name: v})) for v in values]


# ---------- subcommands ----------
def run_spectrum(ctx: Context) -> None:
    preset = _preset(ctx.args, ("fig6a", "fig6b"))
    p = _prepared(ctx, preset, ctx.args.solve, ctx.args.branch)
    lo, hi, n = preset.x_range if preset and preset.x_range else _range(ctx.args.omega)
    curves = spectrum.spectrum_curves(np.linspace(lo, hi, n), p)
    fields = ["omega", "s", "s_gamma0", "s_upper"]
    rows = [
        {k: float(curves[k][i]) for k in fields} for i in range(curves["omega"].size)
    ]
    ctx.write(
        fields,
        rows,
        [f"delta_g={p.delta_g!r} delta_gr={p.delta_gr!r} delta_c={p.delta_c!r}"],
    )


def run_solve(ctx: Context) -> None:
    p = ctx.params()
    if ctx.args.eta is not None:
        p = p.with_updates(eta=ctx.args.eta)
    fields = [
        "branch", "delta_g", "delta_gr", "delta_c", "eta", "eta_prime", "r24", "r28", "r_m",
    ]  # fmt: skip
    rows = []
    for sol in detunings.solve(p):
        rows.append(
            {
                "branch": sol.branch,
                "delta_g": sol.delta_g,
                "delta_gr": sol.delta_gr,
                "delta_c": sol.delta_c,
                "eta": sol.eta,
                "eta_prime": sol.eta_prime,
                **sol.residuals.model_dump(),
            }
        )
    ctx.write(fields, rows)


def _coeffs_fig2a(ctx: Context, preset: presets.FigurePreset) -> None:
    p = ctx.params(preset)
    lo, hi, n = preset.x_range or (-2e4, 2e4, 401)
    g_values = preset.variants["g_n"]
    fields = ["im_chi1"] + [f"a_plus_upper_g_n_{g:g}" for g in g_values]
    rows = []
    for x in np.linspace(lo, hi, n):
        row: dict[str, float] = {"im_chi1": float(x)}
        for g, name in zip(g_values, fields[1:]):
            row[name] = spectrum.a_plus_upper_of_im(float(x), p.with_updates(g_n=g))
        rows.append(row)
    ctx.write(fields, rows)


def _coeffs_fig2b(ctx: Context, preset: presets.FigurePreset) -> None:
    p = ctx.params(preset)
    lo, hi, n = preset.x_range or (-100.0, 100.0, 401)
    etas = preset.variants["eta"]
    solved = [presets.solved(p.with_updates(eta=eta)) for eta in etas]
    critical = [detunings.delta_c_critical(q) for q in solved]
    fields = ["delta_c_offset"] + [f"a_minus_eta_{eta:g}" for eta in etas]
    rows = []
    for x in np.linspace(lo, hi, n):
        row: dict[str, float] = {"delta_c_offset": float(x)}
        for q, dc, name in zip(solved, critical, fields[1:]):
            row[name] = spectrum.cooling_coefficient(q.with_updates(delta_c=dc + x))
        rows.append(row)
    ctx.write(fields, rows, [f"delta_c_cri eta={e:g}: {dc!r}" for e, dc in zip(etas, critical)])


def run_coeffs(ctx: Context) -> None:
    preset = _preset(ctx.args, ("fig2a", "fig2b"))
    if preset is not None and preset.tag == "fig2a":
        return _coeffs_fig2a(ctx, preset)
    if preset is not None:
        return _coeffs_fig2b(ctx, preset)
    p = _prepared(ctx, None, ctx.args.solve)
    r = cooling.report(p)
    limits = spectrum.coefficient_limits(p)
    fields = [
        "a_plus", "a_minus", "w", "n_ss", "stable", "limit", "a_plus_optimal",
        "a_sup", "cooperativity", "q_m",
    ]  # fmt: skip
    row = {
        **r.model_dump(),
        "limit": math.nan if r.limit is None else r.limit,
        "a_plus_optimal": cooling.a_plus_optimal(p),
        "a_sup": limits.a_sup,
        "cooperativity": cooperativity(p),
        "q_m": mechanical_quality(p),
    }
    ctx.write(fields, [row])


def _trajectory(
    p: ModelParams, t_end: float, samples: int, method: str, dt: float | None, stride: int
) -> moments.Trajectory:
    gen = moments.build_generator(p)
    s0 = moments.thermal_initial(p)
    if method == "rk4":
        if dt is None:
            raise ParameterError("rk4 needs --dt", violations=["--dt is required for rk4"])
        # the end time comes from 1/W and is snapped onto the step grid
        t_end = dt * max(1, round(t_end / dt))
        return moments.evolve_rk4(gen, s0, dt, t_end, stride)
    return moments.evolve_exact(gen, s0, np.linspace(0.0, t_end, samples))


def run_evolve(ctx: Context) -> None:
    args = ctx.args
    preset = _preset(args, ("fig5a", "fig5b", "fig5c"))
    if preset is not None and preset.stiff and args.method == "rk4" and not args.force:
        raise ParameterError(
            f"{preset.tag} is stiff; rk4 there needs --force",
            violations=["use --method exact or pass --force"],
        )
    p = _prepared(ctx, preset, args.solve, args.branch)
    fields = ["t", "gamma_m", "n_numeric", "n_theory", "n_steady"]
    if args.moments:
        for name in moments.MOMENT_NAMES:
            fields += [f"re_{name}", f"im_{name}"]
    rows: list[dict[str, float]] = []
    for _, q in _variants(preset, p):
        r = cooling.report(q)
        if args.t_end is not None:
            t_end = args.t_end
        else:
            t_end = (preset.t_end_in_rates if preset and preset.t_end_in_rates else 10.0) / r.w
        traj = _trajectory(q, t_end, args.samples, args.method, args.dt, args.stride)
        theory = cooling.evolution(q, traj.times)
        try:
            steady = moments.steady_state(moments.build_generator(q)).phonon
        except HybridCoolingError:
            steady = math.nan
        for state, n_theory in zip(traj.states, theory):
            row = {
                "t": state.time,
                "gamma_m": q.gamma_m,
                "n_numeric": state.phonon,
                "n_theory": float(n_theory),
                "n_steady": steady,
            }
            if args.moments:
                for k, name in enumerate(moments.MOMENT_NAMES):
                    row[f"re_{name}"] = float(state.values[k].real)
                    row[f"im_{name}"] = float(state.values[k].imag)
            rows.append(row)
    ctx.write(fields, rows)


def run_steady(ctx: Context) -> None:
    preset = _preset(ctx.args, ("fig4", "fig5a", "fig5b", "fig5c", "fig7"))
    p = _prepared(ctx, preset, ctx.args.solve, ctx.args.branch)
    fields = [
        "gamma_m", "n_th", "w", "n_ss_theory", "n_ss_numeric", "n_th_max", "gamma_m_max", "q_m",
    ]  # fmt: skip
    rows = []
    for _, q in _variants(preset, p):
        row = {"gamma_m": q.gamma_m, "n_th": q.n_th}
        row.update(theory_row(q, numeric=True))
        try:
            req = cooling.ground_state_requirements(q)
            row.update(n_th_max=req.n_th_max, gamma_m_max=req.gamma_m_max)
        except RegimeError:
            row.update(n_th_max=math.nan, gamma_m_max=math.nan)
        row["q_m"] = mechanical_quality(q)
        rows.append(row)
    ctx.write(fields, rows)


def run_sweep_cmd(ctx: Context) -> None:
    args = ctx.args
    preset = _preset(args, ("fig3", "fig4", "fig7"))
    p = ctx.params(preset)
    extra: list[str] = []
    if preset is not None:
        sweep_spec = preset.sweep
        assert sweep_spec is not None
        if preset.tag == "fig3":
            prepare = presets.delta_g_for_eta
            loci = presets.condition_loci(p)
            extra += [f"locus saturation delta_c={v!r}" for v in loci["delta_c"]]
            extra += [f"locus heating_minimum delta_gr={v!r}" for v in loci["delta_gr"]]
        else:
            prepare = presets.preparer(preset)
    else:
        if not args.axis:
            raise ParameterError("sweep needs --preset or --axis", violations=["--axis"])
        axes = [parse_axis(a) for a in args.axis[:2]]
        sweep_spec = SweepSpec(axis1=axes[0], axis2=axes[1] if len(axes) > 1 else None)
        prepare = partial(presets.solved, policy=args.branch) if args.solve else None

    numeric = args.numeric or (preset is not None and preset.tag == "fig7")
    fields = [sweep_spec.axis1.name]
    if sweep_spec.axis2 is not None:
        fields.append(sweep_spec.axis2.name)
    rows: list[dict[str, float]] = []
    variants = _variants(preset, p)
    if len(variants) > 1:
        fields.append(next(iter(variants[0][0])))
    fields += ["w", "n_ss_theory"] + (["n_ss_numeric"] if numeric else [])
    for tag, q in variants:
        for row in run_sweep(q, sweep_spec, prepare=prepare, numeric=numeric, threads=ctx.threads):
            rows.append({**tag, **row})
    ctx.write(fields, rows, extra)


def run_feasibility(ctx: Context) -> None:
    entries = ctx.overrides(DRIVE_KEYS)
    drive = config.build_record(amplitudes.DriveParams, DRIVE_KEYS, entries)
    if ctx.args.eta is not None:
        base = ModelParams(
            kappa=drive.kappa,
            gamma=drive.gamma,
            g_n=drive.g_n,
            omega_r=drive.omega_r,
            eta=ctx.args.eta,
        )
        sol = detunings.solve_default(base)
        drive = drive.model_copy(
            update={"delta_g": sol.delta_g, "delta_gr": sol.delta_gr}
        )
    amps = amplitudes.steady_amplitudes(drive)
    rep = amplitudes.feasibility(drive, amps)
    fields = [
        "n_atoms", "g_n", "abs_a_bar", "abs_e_bar", "abs_r_bar", "delta_c_eff",
        *amplitudes.FeasibilityReport.model_fields, "feasible",
    ]  # fmt: skip
    row = {
        "n_atoms": drive.n_atoms,
        "g_n": drive.g_n,
        "abs_a_bar": abs(amps.a_bar),
        "abs_e_bar": abs(amps.e_bar),
        "abs_r_bar": abs(amps.r_bar),
        "delta_c_eff": amps.delta_c_eff,
        **rep.model_dump(),
        "feasible": rep.feasible,
    }
    ctx.write(fields, [row])


def run_oracle_check(ctx: Context) -> int:
    p = presets.ORACLE_PARAMS
    cfg = fock_oracle.FockConfig(t_end=ctx.args.t_end)
    run = fock_oracle.evolve(p, cfg)
    vac = moments.MomentState(time=0.0, values=np.zeros(moments.N_MOMENTS))
    engine = moments.evolve_exact(
        moments.build_generator(p), vac, [s.time for s in run.states]
    )
    fields = ["moment", "max_abs_deviation", "max_reference", "ok"]
    rows = []
    failed = False
    for k, name in enumerate(moments.MOMENT_NAMES):
        ref = np.array([s.values[k] for s in run.states])
        got = np.array([s.values[k] for s in engine.states])
        dev = np.abs(got - ref)
        ok = bool(np.all(dev <= ORACLE_TOLERANCE * np.abs(ref) + ORACLE_FLOOR))
        failed |= not ok
        rows.append(
            {
                "moment": name,
                "max_abs_deviation": float(dev.max()),
                "max_reference": float(np.abs(ref).max()),
                "ok": ok,
            }
        )
    ctx.write(fields, rows, [f"max truncation indicator {max(run.truncation)!r}"])
    return 2 if failed else 0


# ---------- argument parsing ----------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Cooling theory and moment simulation for a hybrid optomechanical cavity.",
    )
    parser.add_argument("--config", help="key = value parameter file")
    parser.add_argument("--out", help="CSV destination (stdout when omitted)")
    parser.add_argument("--threads", type=int, default=1, help="sweep worker threads")
    parser.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override one parameter"
    )
    parser.add_argument(
        "--log-level", choices=[lv.name for lv in LogLevel], default=LogLevel.WARN.name
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="noise spectrum and its bounds over omega")
    p_spec.add_argument("--preset", choices=["fig6a", "fig6b"])
    p_spec.add_argument("--omega", default="-2:2:401", help="min:max:count")
    p_spec.add_argument("--solve", action="store_true", help="solve detunings from eta")
    p_spec.add_argument("--branch", choices=["nearest", "farthest"], default="nearest")

    p_solve = sub.add_parser("solve", help="all roots of the optimal detuning conditions")
    p_solve.add_argument("--eta", type=float)

    p_coeffs = sub.add_parser("coeffs", help="heating/cooling coefficients and rates")
    p_coeffs.add_argument("--preset", choices=["fig2a", "fig2b"])
    p_coeffs.add_argument("--solve", action="store_true")

    p_evolve = sub.add_parser("evolve", help="phonon-number time evolution")
    p_evolve.add_argument("--preset", choices=["fig5a", "fig5b", "fig5c"])
    p_evolve.add_argument("--t-end", type=float)
    p_evolve.add_argument("--samples", type=int, default=201)
    p_evolve.add_argument("--method", choices=["exact", "rk4"], default="exact")
    p_evolve.add_argument("--dt", type=float)
    p_evolve.add_argument("--stride", type=int, default=1)
    p_evolve.add_argument("--force", action="store_true", help="allow rk4 on stiff presets")
    p_evolve.add_argument("--moments", action="store_true", help="emit all 20 moments")
    p_evolve.add_argument("--solve", action="store_true")
    p_evolve.add_argument("--branch", choices=["nearest", "farthest"], default="farthest")

    p_steady = sub.add_parser("steady", help="steady phonon number and ground-state bounds")
    p_steady.add_argument("--preset", choices=["fig4", "fig5a", "fig5b", "fig5c", "fig7"])
    p_steady.add_argument("--solve", action="store_true")
    p_steady.add_argument("--branch", choices=["nearest", "farthest"], default="farthest")

    p_sweep = sub.add_parser("sweep", help="n_ss over a one- or two-parameter grid")
    p_sweep.add_argument("--preset", choices=["fig3", "fig4", "fig7"])
    p_sweep.add_argument("--axis", action="append", help="name:min:max:count[:log]")
    p_sweep.add_argument("--numeric", action="store_true", help="add moment steady state")
    p_sweep.add_argument("--solve", action="store_true")
    p_sweep.add_argument("--branch", choices=["nearest", "farthest"], default="farthest")

    p_feas = sub.add_parser("feasibility", help="weak-excitation and atom-number checks")
    p_feas.add_argument("--eta", type=float, help="solve delta_g, delta_gr first")

    p_oracle = sub.add_parser("oracle-check", help="moment engine vs truncated Fock space")
    p_oracle.add_argument("--t-end", type=float, default=10.0)
    return parser


_COMMANDS = {
    "spectrum": run_spectrum,
    "solve": run_solve,
    "coeffs": run_coeffs,
    "evolve": run_evolve,
    "steady": run_steady,
    "sweep": run_sweep_cmd,
    "feasibility": run_feasibility,
    "oracle-check": run_oracle_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    set_logger(level=LogLevel[args.log_level])
    try:
        ctx = Context(args)
        status = _COMMANDS[args.command](ctx)
        return int(status or 0)
    except ValidationError as e:
        error: HybridCoolingError = ParameterError(
            f"Invalid input: {e.error_count()} error(s)",
            violations=[err["msg"] for err in e.errors()],
        )
    except HybridCoolingError as e:
        error = e
    extra: dict[str, Any] = dict(error.details)
    if isinstance(error, ParameterError) and error.violations:
        extra["violations"] = error.violations
    log(LogLevel.ERROR, f"{error.name}: {error}", extra)
    return exit_code_for(error)


if __name__ == "__main__":
    sys.exit(main())
