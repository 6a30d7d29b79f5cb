"""Command-line front end.

Subcommands:
  simulate       run a phase-noise ensemble and export its dispersion series
  dispersion     pure walk + noisy ensemble + classical baseline, with fits
  transition     dispersion growth versus Gaussian phase-noise width
  classical      exact classical walk distributions and dispersions
  oracle-check   cross-validate every independent computation route

Exit codes: 0 success, 1 check failure, 2 usage error, 3 resource guard.
Outputs are deterministic: every file embeds the full configuration and
seed, and re-running the same command reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import analytics as an
from . import classical as cl
from . import coins as cn
from . import pathsum as ps
from . import state as st
from .errors import GuardError
from .evolution import (
    PhaseDistribution,
    StepConfig,
    run_ensemble,
    run_trajectory,
)
from .kernels import kernel_name

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_GUARD = 3

PRESETS = {
    # figure-style reproduction presets: 50-trajectory ensembles, Grover coin
    "fig1": {"dim": 2, "steps": 80, "coin": "grover", "phases": "uniform", "trajectories": 50},
    "fig2": {"dim": 3, "steps": 60, "coin": "grover", "phases": "uniform", "trajectories": 50},
    "fig3": {"dim": 4, "steps": 40, "coin": "grover", "phases": "uniform", "trajectories": 50},
    "fig4": {"dims": [2, 3, 4], "coin": "grover", "phases": "uniform", "trajectories": 50},
    "fig5": {"dim": 2, "steps": 60, "coin": "grover", "trajectories": 50,
             "sigmas": [0.0, 0.2, 0.5, 1.0, 3.0]},
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_phases(spec: str) -> PhaseDistribution:
    if spec == "none":
        return PhaseDistribution("none")
    if spec == "uniform":
        return PhaseDistribution("uniform")
    if spec.startswith("gaussian:"):
        return PhaseDistribution("gaussian", float(spec.split(":", 1)[1]))
    raise ValueError(f"unknown phase spec {spec!r}; expected none, uniform, or gaussian:<sigma>")


def _parse_fit_range(spec: str | None, n: int) -> tuple[int, int]:
    if spec is None:
        return an.default_fit_range(n)
    lo, hi = spec.split(":")
    return int(lo), int(hi)


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit(out_path: str | None, text: str) -> None:
    handle, close = _open_out(out_path)
    try:
        handle.write(text)
    finally:
        if close:
            handle.close()


def _csv_header(command: str, config: dict) -> str:
    lines = [
        f"# phasewalk {__version__}",
        f"# command: {command}",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]
    return "\n".join(lines) + "\n"


def _series_csv(command: str, config: dict, result) -> str:
    rows = ["step,dispersion_mean,dispersion_stderr"]
    for k in range(result.steps + 1):
        rows.append(
            f"{k},{_fmt(result.dispersion_mean[k])},{_fmt(result.dispersion_stderr[k])}"
        )
    return _csv_header(command, config) + "\n".join(rows) + "\n"


def _result_json(command: str, config: dict, result, include_distributions: bool) -> str:
    payload = {
        "tool": f"phasewalk {__version__}",
        "command": command,
        "config": config,
        "n": result.steps,
        "M": result.trajectories,
        "master_seed": result.master_seed,
        "rng_name": result.rng_name,
        "series": [
            {
                "step": k,
                "dispersion_mean": result.dispersion_mean[k],
                "dispersion_stderr": result.dispersion_stderr[k],
            }
            for k in range(result.steps + 1)
        ],
    }
    if include_distributions and result.mean_distributions is not None:
        payload["distributions"] = {
            str(k): [{"position": list(x), "p": p} for x, p in sorted(d.mass.items())]
            for k, d in sorted(result.mean_distributions.items())
        }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _distribution_csv(command: str, config: dict, dist: st.Distribution) -> str:
    cols = [f"x_{j + 1}" for j in range(dist.dim)]
    rows = [",".join(cols) + ",probability"]
    for x in dist.support():
        rows.append(",".join(str(c) for c in x) + "," + _fmt(dist.mass[x]))
    return _csv_header(command, config) + "\n".join(rows) + "\n"


def _build_config(args) -> tuple[StepConfig, dict]:
    size = 2 * args.dim
    coin = cn.coin_from_spec(args.coin, size)
    phase_dist = _parse_phases(args.phases)
    config = StepConfig(args.dim, coin, phase_dist)
    echo = {
        "dim": args.dim,
        "steps": args.steps,
        "coin": args.coin,
        "phases": args.phases,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "stride": args.stride,
        "kernel": kernel_name(),
    }
    return config, echo


def cmd_simulate(args) -> int:
    config, echo = _build_config(args)
    result = run_ensemble(
        config,
        args.steps,
        args.trajectories,
        args.seed,
        record_stride=args.stride,
        record_distributions=args.format == "json",
        threads=args.threads,
        config_echo=echo,
    )
    if args.format == "csv":
        _emit(args.out, _series_csv("simulate", echo, result))
    else:
        _emit(args.out, _result_json("simulate", echo, result, include_distributions=True))
    return EXIT_OK


def _dispersion_report(dim, steps, coin_spec, phases, trajectories, seed, fit_range, threads):
    size = 2 * dim
    coin = cn.coin_from_spec(coin_spec, size)
    lo, hi = fit_range

    pure = run_trajectory(
        StepConfig(dim, coin), steps, seed, record_distributions=False
    )
    pure_series = an.DispersionSeries(
        np.arange(steps + 1), [r.dispersion for r in pure], provenance="pure-walk"
    )

    noisy = run_ensemble(
        StepConfig(dim, coin, _parse_phases(phases)),
        steps,
        trajectories,
        seed,
        record_distributions=False,
        threads=threads,
    )
    noisy_series = an.ensemble_series(noisy)

    classical_series = an.DispersionSeries(
        np.arange(steps + 1),
        [cl.crw_dispersion(dim, k) for k in range(steps + 1)],
        provenance="classical-exact",
    )

    fits = {
        "noisy_slope": an.fit_slope(noisy_series, lo, hi)[0],
        "pure_exponent": an.fit_growth_exponent(pure_series, max(lo, 2), hi),
        "classical_slope": 1.0,
    }
    params = cn.coin_params_from_spec(coin_spec, size)
    if params is not None:
        fits["predicted_slope"] = an.asymptotic_slope(params.r, params.t)
    return pure_series, noisy_series, classical_series, fits


def cmd_dispersion(args) -> int:
    dims = PRESETS["fig4"]["dims"] if args.preset == "fig4" else [args.dim]
    blocks = []
    config_echo = {
        "coin": args.coin,
        "phases": args.phases,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "preset": args.preset,
        "kernel": kernel_name(),
    }
    all_fits = {}
    for dim in dims:
        steps = args.steps if args.preset != "fig4" else PRESETS[f"fig{dim - 1}"]["steps"]
        fit_range = _parse_fit_range(args.fit_range, steps)
        pure_s, noisy_s, cl_s, fits = _dispersion_report(
            dim, steps, args.coin, args.phases, args.trajectories, args.seed,
            fit_range, args.threads,
        )
        all_fits[dim] = fits
        for label, series in (
            ("pure-qw", pure_s),
            ("qw-rps", noisy_s),
            ("classical", cl_s),
        ):
            for k, v in zip(series.steps, series.values):
                blocks.append(f"{dim},{label},{k},{_fmt(v)}")
    config_echo["fits"] = {str(d): f for d, f in all_fits.items()}
    text = (
        _csv_header("dispersion", config_echo)
        + "dim,series,step,dispersion\n"
        + "\n".join(blocks)
        + "\n"
    )
    if args.format == "json":
        payload = {
            "tool": f"phasewalk {__version__}",
            "command": "dispersion",
            "config": {k: v for k, v in config_echo.items() if k != "fits"},
            "fits": {str(d): f for d, f in all_fits.items()},
            "rows": [
                dict(zip(("dim", "series", "step", "dispersion"), row.split(",")))
                for row in blocks
            ],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _emit(args.out, text)
    for dim, fits in all_fits.items():
        print(
            f"dim {dim}: fitted slope {fits['noisy_slope']:.4f}"
            + (f" (predicted {fits['predicted_slope']:.4f})" if "predicted_slope" in fits else "")
            + f", pure-walk exponent {fits['pure_exponent']:.3f}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_transition(args) -> int:
    sigmas = [float(s) for s in args.sigmas.split(",")]
    fit_range = _parse_fit_range(args.fit_range, args.steps)
    study = an.transition_study(
        args.dim,
        sigmas,
        args.steps,
        args.trajectories,
        args.seed,
        coin=cn.coin_from_spec(args.coin, 2 * args.dim),
        fit_range=fit_range,
    )
    config = {
        "dim": args.dim,
        "steps": args.steps,
        "coin": args.coin,
        "sigmas": sigmas,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "fit_range": list(fit_range),
        "exponents": {str(s): study[s][1] for s in sigmas},
        "kernel": kernel_name(),
    }
    if args.format == "csv":
        rows = ["sigma,step,dispersion"]
        for s in sigmas:
            series = study[s][0]
            for k, v in zip(series.steps, series.values):
                rows.append(f"{_fmt(s)},{k},{_fmt(v)}")
        text = _csv_header("transition", config) + "\n".join(rows) + "\n"
    else:
        payload = {
            "tool": f"phasewalk {__version__}",
            "command": "transition",
            "config": {k: v for k, v in config.items() if k != "exponents"},
            "exponents": {str(s): study[s][1] for s in sigmas},
            "series": {
                str(s): [
                    {"step": int(k), "dispersion": float(v)}
                    for k, v in zip(study[s][0].steps, study[s][0].values)
                ]
                for s in sigmas
            },
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _emit(args.out, text)
    for s in sigmas:
        print(f"sigma {s}: growth exponent {study[s][1]:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_classical(args) -> int:
    config = {
        "dim": args.dim,
        "steps": args.steps,
        "p_same": args.p_same,
        "kind": "crwm" if args.p_same is not None else "crw",
    }
    if args.p_same is None:
        dist = cl.crw_distribution(args.dim, args.steps)
    else:
        dist = cl.crwm_distribution(cl.CRWMParams(args.dim, args.p_same), args.steps)
    config["dispersion"] = st.second_moment(dist)
    if args.format == "csv":
        _emit(args.out, _distribution_csv("classical", config, dist))
    else:
        payload = {
            "tool": f"phasewalk {__version__}",
            "command": "classical",
            "config": config,
            "distribution": [{"position": list(x), "p": dist.mass[x]} for x in dist.support()],
        }
        _emit(args.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    """Cross-validate every independent route and print max deviations."""
    d, n = args.dim, args.steps
    size = 2 * d
    checks: list[tuple[str, float, float]] = []  # (name, deviation, tolerance)

    if args.coin.startswith("grover"):
        params = cn.coin_params_from_spec(args.coin, size)
        coin = cn.coin_from_spec(args.coin, size)

        # path sum vs direct evolution (plain Grover coin only)
        if args.coin == "grover":
            amps = ps.pure_qw_amplitudes(d, n)
            w = st.new_initial_state(d)
            cfg = StepConfig(d, coin)
            from .evolution import step as walk_step

            for _ in range(n):
                w = walk_step(w, cfg)
            keys = set(amps) | {(x, a) for x, v in w.amplitudes.items() for a in range(size)}
            dev = max(abs(amps.get(key, 0) - w.amplitude(*key)) for key in keys)
            checks.append(("path-sum vs evolution", dev, 1e-10))

            ms = ps.momentum_space_state(d, min(n, 3), coin)
            amps_small = ps.pure_qw_amplitudes(d, min(n, 3))
            dev = max(
                abs(ms.get(key, 0) - amps_small.get(key, 0))
                for key in set(ms) | set(amps_small)
            )
            checks.append(("momentum inversion vs path sum", dev, 1e-6))

        dp = ps.mean_dist_grover(d, params.r, params.t, n)
        bf = ps.mean_dist_grover_bruteforce(d, params.r, params.t, n)
        checks.append(("mean distribution DP vs brute force", st.max_mass_deviation(dp, bf), 1e-12))

        crwm = cl.crwm_distribution(cl.CRWMParams(d, abs(params.r) ** 2), n)
        checks.append(("phase-averaged walk vs memory CRW", st.max_mass_deviation(dp, crwm), 1e-12))

        rec = an.dispersion_recursion(size, params.r, params.t, max(n, 2))
        checks.append(
            ("dispersion recursion vs DP", abs(rec - st.second_moment(dp)) if n >= 2 else 0.0, 1e-9)
        )
        if abs(cn.memory_bias(params)) > 1e-9 and n > 2:
            cf = an.dispersion_closed_form(size, params.r, params.t, n)
            checks.append(("closed form vs recursion", abs(cf - rec) / abs(rec), 1e-6))

        consts = an.base_constants_comparison(size, params.r, params.t)
        print(
            "base constants (direct vs collapsed variant): "
            f"R2 {consts['R2_direct']:.6g} vs {consts['R2_collapsed']:.6g}, "
            f"D2 {consts['D2_direct']:.6g} vs {consts['D2_collapsed']:.6g}"
        )
    elif args.coin == "fourier":
        sym = ps.mean_dist_fourier(d, n, symmetrized=True)
        crw = cl.crw_distribution(d, n)
        checks.append(("symmetrized Fourier mean vs CRW", st.max_mass_deviation(sym, crw), 1e-12))
        plain = ps.mean_dist_fourier(d, n, symmetrized=False)
        checks.append(("plain Fourier normalization", abs(plain.total() - 1.0), 1e-12))
    else:
        raise ValueError(f"oracle-check supports grover and fourier coins, not {args.coin!r}")

    failed = False
    for name, dev, tol in checks:
        ok = dev < tol
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: max deviation {dev:.3e} (tol {tol:g})")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _add_common(p: argparse.ArgumentParser, steps_default=40) -> None:
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--steps", type=int, default=steps_default)
    p.add_argument("--coin", default="grover")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=max(1, os.cpu_count() or 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasewalk",
        description="Quantum walks with per-step random phase noise on Z^d",
    )
    parser.add_argument("--version", action="version", version=f"phasewalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run an ensemble, export dispersion series")
    _add_common(p)
    p.add_argument("--phases", default="uniform")
    p.add_argument("--trajectories", type=int, default=50)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--preset", choices=["fig1", "fig2", "fig3"], default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dispersion", help="pure/noisy/classical series with fits")
    _add_common(p, steps_default=80)
    p.add_argument("--phases", default="uniform")
    p.add_argument("--trajectories", type=int, default=50)
    p.add_argument("--fit-range", default=None, metavar="A:B")
    p.add_argument("--preset", choices=["fig1", "fig2", "fig3", "fig4"], default=None)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("transition", help="growth exponent versus phase-noise width")
    _add_common(p, steps_default=60)
    p.add_argument("--sigmas", default="0.0,0.2,0.5,1.0,3.0")
    p.add_argument("--trajectories", type=int, default=50)
    p.add_argument("--fit-range", default=None, metavar="A:B")
    p.add_argument("--preset", choices=["fig5"], default=None)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("classical", help="exact classical walk distribution")
    _add_common(p)
    p.add_argument("--p-same", type=float, default=None,
                   help="repeat probability for the memory walk (omit for CRW)")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("oracle-check", help="cross-validate all computation routes")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--coin", default="grover")
    p.set_defaults(func=cmd_oracle_check)

    return parser


def _apply_preset(argv: list[str]) -> list[str]:
    """Expand --preset into its defining flags (explicit flags still win
    because argparse takes the last occurrence)."""
    if "--preset" not in argv:
        return argv
    i = argv.index("--preset")
    name = argv[i + 1]
    if name not in PRESETS:
        return argv
    preset = PRESETS[name]
    extra: list[str] = []
    for key in ("dim", "steps", "trajectories"):
        if key in preset:
            extra += [f"--{key}", str(preset[key])]
    if "coin" in preset:
        extra += ["--coin", preset["coin"]]
    if "phases" in preset and name != "fig5":
        extra += ["--phases", preset["phases"]]
    if "sigmas" in preset:
        extra += ["--sigmas", ",".join(str(s) for s in preset["sigmas"])]
    return argv[:i] + extra + argv[i:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_preset(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
